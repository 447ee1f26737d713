#ifndef DDG_INT_MATRIX_HPP
#define DDG_INT_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ddg/error.hpp"

namespace ddg {

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw InputError("IntMatrix: entry count does not match shape");
        }
    }

    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw InputError("IntMatrix: ragged initializer");
            for (long long v : r) data_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix diagonal(std::span<const Integer> d) {
        IntMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Integer>& entries() const noexcept { return data_; }

    std::span<const Integer> row(std::size_t r) const {
        return std::span<const Integer>(data_).subspan(r * cols_, cols_);
    }
    std::span<Integer> row(std::size_t r) { return std::span<Integer>(data_).subspan(r * cols_, cols_); }

    IntVector column(std::size_t c) const {
        IntVector out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    /// Columns listed in `keep`, in that order.
    IntMatrix select_columns(std::span<const std::size_t> keep) const {
        IntMatrix out(rows_, keep.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < keep.size(); ++k) out(r, k) = (*this)(r, keep[k]);
        return out;
    }

    IntMatrix select_rows(std::span<const std::size_t> keep) const {
        IntMatrix out(keep.size(), cols_);
        for (std::size_t k = 0; k < keep.size(); ++k)
            for (std::size_t c = 0; c < cols_; ++c) out(k, c) = (*this)(keep[k], c);
        return out;
    }

    IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw InputError("IntMatrix::block out of range");
        IntMatrix out(nr, nc);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
        return out;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v.is_zero(); });
    }

    bool is_nonnegative() const {
        return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v >= 0; });
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw InputError("IntMatrix product: inner dimensions differ");
        IntMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend IntVector operator*(const IntMatrix& a, std::span<const Integer> v) {
        if (a.cols_ != v.size()) throw InputError("IntMatrix * vector: dimension mismatch");
        IntVector out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
        return out;
    }

    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("IntMatrix sum: shape mismatch");
        IntMatrix out = a;
        for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
        return out;
    }

    friend IntMatrix operator*(const Integer& s, const IntMatrix& a) {
        IntMatrix out = a;
        for (auto& v : out.data_) v *= s;
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
        std::size_t width = 1;
        for (const auto& v : m.data_) width = std::max(width, v.str().size());
        for (std::size_t r = 0; r < m.rows_; ++r) {
            os << '[';
            for (std::size_t c = 0; c < m.cols_; ++c) {
                std::string s = m(r, c).str();
                os << std::string(width - s.size() + (c == 0 ? 0 : 1), ' ') << s;
            }
            os << "]\n";
        }
        return os;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

/// Row vector times matrix: (v·m)_j = sum_i v_i m(i,j).
inline IntVector row_times(std::span<const Integer> v, const IntMatrix& m) {
    if (v.size() != m.rows()) throw InputError("vector * IntMatrix: dimension mismatch");
    IntVector out(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i].is_zero()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

inline IntMatrix power(const IntMatrix& m, std::size_t n) {
    if (m.rows() != m.cols()) throw InputError("matrix power needs a square matrix");
    IntMatrix result = IntMatrix::identity(m.rows());
    for (std::size_t i = 0; i < n; ++i) result = result * m;
    return result;
}

inline IntVector to_int_vector(std::span<const long long> v) { return IntVector(v.begin(), v.end()); }

inline IntVector to_int_vector(std::initializer_list<long long> v) { return IntVector(v.begin(), v.end()); }

inline Integer sum(std::span<const Integer> v) {
    Integer s = 0;
    for (const auto& x : v) s += x;
    return s;
}

}  // namespace ddg

#endif  // DDG_INT_MATRIX_HPP

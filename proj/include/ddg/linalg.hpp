#ifndef DDG_LINALG_HPP
#define DDG_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ddg/error.hpp"
#include "ddg/int_matrix.hpp"

namespace ddg {

using Rational = boost::multiprecision::cpp_rational;

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
/// Pivot: first nonzero entry of the current column, scanning rows downward.
inline std::size_t rank(const IntMatrix& m) {
    IntMatrix a = m;
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    std::size_t r = 0;
    Integer prev = 1;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a(p, c).is_zero()) ++p;
        if (p == rows) continue;
        if (p != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(p, j), a(r, j));
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                a(i, j) = (a(r, c) * a(i, j) - a(i, c) * a(r, j)) / prev;
            }
            a(i, c) = 0;
        }
        prev = a(r, c);
        ++r;
    }
    return r;
}

inline Integer determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw InputError("determinant needs a square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k).is_zero()) ++p;
        if (p == n) return 0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)) / prev;
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

struct SmithForm {
    IntMatrix left;   ///< unimodular, rows x rows
    IntMatrix diag;   ///< left * m * right
    IntMatrix right;  ///< unimodular, cols x cols
    IntMatrix right_inverse;

    std::size_t rank() const {
        std::size_t r = 0;
        const std::size_t n = std::min(diag.rows(), diag.cols());
        while (r < n && !diag(r, r).is_zero()) ++r;
        return r;
    }

    IntVector invariant_factors() const {
        IntVector d;
        for (std::size_t i = 0; i < std::min(diag.rows(), diag.cols()); ++i) d.push_back(diag(i, i));
        return d;
    }
};

/// Smith normal form with explicit unimodular transforms.
///
/// Pivot rule: the nonzero entry of least absolute value in the active
/// submatrix, ties broken by row-major position, so the output is
/// reproducible. Diagonal entries are nonnegative and d1 | d2 | ...
inline SmithForm smith_normal_form(const IntMatrix& m) {
    const std::size_t R = m.rows();
    const std::size_t C = m.cols();
    IntMatrix a = m;
    IntMatrix left = IntMatrix::identity(R);
    IntMatrix right = IntMatrix::identity(C);
    IntMatrix rinv = IntMatrix::identity(C);

    auto swap_rows = [&](std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t j = 0; j < C; ++j) std::swap(a(i, j), a(k, j));
        for (std::size_t j = 0; j < R; ++j) std::swap(left(i, j), left(k, j));
    };
    auto swap_cols = [&](std::size_t i, std::size_t k) {
        if (i == k) return;
        for (std::size_t r = 0; r < R; ++r) std::swap(a(r, i), a(r, k));
        for (std::size_t r = 0; r < C; ++r) std::swap(right(r, i), right(r, k));
        for (std::size_t j = 0; j < C; ++j) std::swap(rinv(i, j), rinv(k, j));
    };
    // row_i += q * row_k
    auto add_row = [&](std::size_t i, std::size_t k, const Integer& q) {
        for (std::size_t j = 0; j < C; ++j) a(i, j) += q * a(k, j);
        for (std::size_t j = 0; j < R; ++j) left(i, j) += q * left(k, j);
    };
    // col_i += q * col_k; the inverse picks up row_k -= q * row_i
    auto add_col = [&](std::size_t i, std::size_t k, const Integer& q) {
        for (std::size_t r = 0; r < R; ++r) a(r, i) += q * a(r, k);
        for (std::size_t r = 0; r < C; ++r) right(r, i) += q * right(r, k);
        for (std::size_t j = 0; j < C; ++j) rinv(k, j) -= q * rinv(i, j);
    };

    const std::size_t n = std::min(R, C);
    for (std::size_t t = 0; t < n; ++t) {
        bool finished = false;
        while (true) {
            std::size_t pi = R, pj = C;
            Integer best;
            for (std::size_t i = t; i < R; ++i)
                for (std::size_t j = t; j < C; ++j) {
                    if (a(i, j).is_zero()) continue;
                    Integer v = abs(a(i, j));
                    if (pi == R || v < best) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == R) {
                finished = true;
                break;
            }
            swap_rows(t, pi);
            swap_cols(t, pj);

            bool clean = true;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (a(i, t).is_zero()) continue;
                Integer q = a(i, t) / a(t, t);
                add_row(i, t, -q);
                if (!a(i, t).is_zero()) clean = false;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (a(t, j).is_zero()) continue;
                Integer q = a(t, j) / a(t, t);
                add_col(j, t, -q);
                if (!a(t, j).is_zero()) clean = false;
            }
            if (!clean) continue;

            std::size_t bad = R;
            for (std::size_t i = t + 1; i < R && bad == R; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == R) break;
            add_row(t, bad, 1);
        }
        if (finished) break;
        if (a(t, t) < 0) {
            for (std::size_t j = 0; j < C; ++j) a(t, j) = -a(t, j);
            for (std::size_t j = 0; j < R; ++j) left(t, j) = -left(t, j);
        }
    }
    return SmithForm{std::move(left), std::move(a), std::move(right), std::move(rinv)};
}

/// Columns form a lattice basis of { x in Z^cols : m x = 0 }.
inline IntMatrix integer_kernel(const IntMatrix& m) {
    SmithForm s = smith_normal_form(m);
    const std::size_t r = s.rank();
    std::vector<std::size_t> keep;
    for (std::size_t j = r; j < m.cols(); ++j) keep.push_back(j);
    return s.right.select_columns(keep);
}

/// Rows form a lattice basis of { y in Z^rows : y m = 0 }.
inline IntMatrix left_kernel(const IntMatrix& m) { return integer_kernel(m.transpose()).transpose(); }

namespace detail {

struct LpResult {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::infeasible;
    Rational value;
    std::vector<Rational> point;
};

/// maximize c.z  subject to  A z = b, z >= 0. Two-phase simplex, Bland's rule.
inline LpResult lp_maximize(std::vector<std::vector<Rational>> A, std::vector<Rational> b,
                            const std::vector<Rational>& c) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    const std::size_t N = n + m;
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0) {
            b[i] = -b[i];
            for (auto& v : A[i]) v = -v;
        }
    }
    std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(N));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) tab[i][j] = A[i][j];
        tab[i][n + i] = 1;
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    auto pivot = [&](std::size_t r, std::size_t col) {
        Rational p = tab[r][col];
        for (auto& v : tab[r]) v /= p;
        b[r] /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || tab[i][col] == 0) continue;
            Rational f = tab[i][col];
            for (std::size_t j = 0; j < N; ++j) tab[i][j] -= f * tab[r][j];
            b[i] -= f * b[r];
        }
        basis[r] = col;
    };

    // Returns false when unbounded.
    auto run = [&](const std::vector<Rational>& obj, std::size_t allowed) {
        while (true) {
            std::size_t enter = N;
            for (std::size_t j = 0; j < allowed; ++j) {
                Rational rc = obj[j];
                for (std::size_t i = 0; i < m; ++i) rc -= obj[basis[i]] * tab[i][j];
                if (rc > 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == N) return true;
            std::size_t leave = m;
            Rational best;
            for (std::size_t i = 0; i < m; ++i) {
                if (tab[i][enter] <= 0) continue;
                Rational ratio = b[i] / tab[i][enter];
                if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == m) return false;
            pivot(leave, enter);
        }
    };

    std::vector<Rational> phase1(N);
    for (std::size_t j = n; j < N; ++j) phase1[j] = -1;
    run(phase1, N);
    Rational infeas = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= n) infeas += b[i];
    LpResult res;
    if (infeas != 0) return res;

    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (tab[i][j] != 0) {
                pivot(i, j);
                break;
            }
    }
    std::vector<Rational> phase2(N);
    for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
    if (!run(phase2, n)) {
        res.status = LpResult::Status::unbounded;
        return res;
    }
    res.status = LpResult::Status::optimal;
    res.point.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.point[basis[i]] = b[i];
    res.value = 0;
    for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.point[j];
    return res;
}

inline IntVector clear_denominators(const std::vector<Rational>& v) {
    Integer l = 1;
    for (const auto& x : v) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
    IntVector out;
    Integer g = 0;
    for (const auto& x : v) {
        out.push_back(boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x)));
        g = boost::multiprecision::gcd(g, out.back());
    }
    if (g > 1)
        for (auto& x : out) x /= g;
    return out;
}

// Enumerates integer t with lo <= x0 + K t <= hi, interval propagation plus branching.
class FiberEnumerator {
public:
    FiberEnumerator(IntVector x0, IntMatrix kernel, IntVector hi)
        : x0_(std::move(x0)), K_(std::move(kernel)), hi_(std::move(hi)) {}

    std::vector<IntVector> run(IntVector tlo, IntVector thi) {
        dfs(std::move(tlo), std::move(thi));
        return std::move(found_);
    }

private:
    bool propagate(IntVector& tlo, IntVector& thi) const {
        const std::size_t n = K_.rows();
        const std::size_t d = K_.cols();
        for (int pass = 0; pass < 64; ++pass) {
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                Integer rmin = x0_[i], rmax = x0_[i];
                for (std::size_t k = 0; k < d; ++k) {
                    const Integer& c = K_(i, k);
                    if (c > 0) {
                        rmin += c * tlo[k];
                        rmax += c * thi[k];
                    } else if (c < 0) {
                        rmin += c * thi[k];
                        rmax += c * tlo[k];
                    }
                }
                if (rmax < 0 || rmin > hi_[i]) return false;
                for (std::size_t k = 0; k < d; ++k) {
                    const Integer& c = K_(i, k);
                    if (c.is_zero()) continue;
                    // bounds on the other terms
                    Integer own_min = c > 0 ? c * tlo[k] : c * thi[k];
                    Integer own_max = c > 0 ? c * thi[k] : c * tlo[k];
                    Integer rest_min = rmin - own_min;
                    Integer rest_max = rmax - own_max;
                    // 0 <= rest + c t <= hi  =>  -rest_max <= c t <= hi - rest_min
                    Integer low = -rest_max;
                    Integer high = hi_[i] - rest_min;
                    Integer nlo, nhi;
                    if (c > 0) {
                        nlo = ceil_div(low, c);
                        nhi = floor_div(high, c);
                    } else {
                        nlo = ceil_div(high, c);
                        nhi = floor_div(low, c);
                    }
                    if (nlo > tlo[k]) {
                        tlo[k] = nlo;
                        changed = true;
                    }
                    if (nhi < thi[k]) {
                        thi[k] = nhi;
                        changed = true;
                    }
                    if (tlo[k] > thi[k]) return false;
                }
            }
            if (!changed) break;
        }
        return true;
    }

    void dfs(IntVector tlo, IntVector thi) {
        if (!propagate(tlo, thi)) return;
        const std::size_t d = K_.cols();
        std::size_t k = 0;
        while (k < d && tlo[k] == thi[k]) ++k;
        if (k == d) {
            IntVector x = x0_;
            for (std::size_t i = 0; i < x.size(); ++i)
                for (std::size_t j = 0; j < d; ++j) x[i] += K_(i, j) * tlo[j];
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] < 0 || x[i] > hi_[i]) return;
            found_.push_back(std::move(x));
            return;
        }
        for (Integer v = tlo[k]; v <= thi[k]; ++v) {
            IntVector lo2 = tlo, hi2 = thi;
            lo2[k] = v;
            hi2[k] = v;
            dfs(std::move(lo2), std::move(hi2));
        }
    }

    IntVector x0_;
    IntMatrix K_;
    IntVector hi_;
    std::vector<IntVector> found_;
};

}  // namespace detail

struct NonnegSolutions {
    std::vector<IntVector> solutions;  ///< sorted lexicographically
    bool unbounded = false;            ///< solution set (if nonempty) is infinite
    IntVector unbounded_direction;     ///< nonzero d >= 0 with d.a = 0 when unbounded
};

/// All x >= 0 integral with x.a = b (x indexes the rows of a).
///
/// With `per_var_bound`, only solutions with every entry <= bound are
/// returned. Without it the solution polytope must be bounded; otherwise the
/// result is flagged unbounded with a nonnegative kernel direction.
inline NonnegSolutions solve_nonneg_integral(const IntMatrix& a, std::span<const Integer> b,
                                             std::optional<Integer> per_var_bound = std::nullopt) {
    if (b.size() != a.cols()) throw InputError("solve_nonneg_integral: b length must equal column count");
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    NonnegSolutions out;

    // Lattice part: a^T x = b.
    const IntMatrix at = a.transpose();
    SmithForm s = smith_normal_form(at);
    const std::size_t r = s.rank();
    IntVector lb = s.left * b;
    IntVector y(n);
    for (std::size_t i = 0; i < m; ++i) {
        if (i < r) {
            if (lb[i] % s.diag(i, i) != 0) return out;
            y[i] = lb[i] / s.diag(i, i);
        } else if (!lb[i].is_zero()) {
            return out;
        }
    }
    IntVector x0 = s.right * std::span<const Integer>(y);
    std::vector<std::size_t> free_cols;
    for (std::size_t j = r; j < n; ++j) free_cols.push_back(j);
    IntMatrix K = s.right.select_columns(free_cols);
    IntMatrix W = s.right_inverse.select_rows(free_cols);

    IntVector hi(n);
    if (per_var_bound) {
        if (*per_var_bound < 0) return out;
        std::fill(hi.begin(), hi.end(), *per_var_bound);
    } else {
        bool simple = a.is_nonnegative();
        for (std::size_t i = 0; i < n && simple; ++i) {
            bool positive = false;
            for (std::size_t j = 0; j < m; ++j) positive = positive || a(i, j) > 0;
            simple = positive;
        }
        if (simple) {
            for (std::size_t j = 0; j < m; ++j)
                if (b[j] < 0) return out;
            for (std::size_t i = 0; i < n; ++i) {
                std::optional<Integer> cap;
                for (std::size_t j = 0; j < m; ++j) {
                    if (a(i, j) <= 0) continue;
                    Integer c = b[j] / a(i, j);
                    if (!cap || c < *cap) cap = c;
                }
                hi[i] = *cap;
            }
        } else {
            std::vector<std::vector<Rational>> A(m + 1, std::vector<Rational>(n));
            std::vector<Rational> rhs(m + 1);
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t i = 0; i < n; ++i) A[j][i] = Rational(a(i, j));
            for (std::size_t i = 0; i < n; ++i) A[m][i] = 1;
            rhs[m] = 1;
            auto dir = detail::lp_maximize(A, rhs, std::vector<Rational>(n));
            if (dir.status != detail::LpResult::Status::infeasible) {
                out.unbounded = true;
                out.unbounded_direction = detail::clear_denominators(dir.point);
                return out;
            }
            A.pop_back();
            std::vector<Rational> brat(b.begin(), b.end());
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<Rational> c(n);
                c[i] = 1;
                auto res = detail::lp_maximize(A, brat, c);
                if (res.status == detail::LpResult::Status::infeasible) return out;
                hi[i] = floor_div(boost::multiprecision::numerator(res.value),
                                  boost::multiprecision::denominator(res.value));
            }
        }
    }

    const std::size_t d = free_cols.size();
    IntVector tlo(d), thi(d);
    for (std::size_t k = 0; k < d; ++k) {
        // t_k = W_k . x for any solution x
        for (std::size_t i = 0; i < n; ++i) {
            const Integer& w = W(k, i);
            if (w > 0) thi[k] += w * hi[i];
            if (w < 0) tlo[k] += w * hi[i];
        }
    }
    out.solutions = detail::FiberEnumerator(x0, K, hi).run(std::move(tlo), std::move(thi));
    std::sort(out.solutions.begin(), out.solutions.end());
    return out;
}

}  // namespace ddg

#endif  // DDG_LINALG_HPP

#ifndef DDG_REGULAR_HPP
#define DDG_REGULAR_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ddg/ddgroup.hpp"
#include "ddg/digraph.hpp"
#include "ddg/embeddings.hpp"
#include "ddg/error.hpp"
#include "ddg/int_matrix.hpp"
#include "ddg/linalg.hpp"

namespace ddg {

/// Matrix of [phi] -> [s o phi] on Z^{family}: entry (k,i) = sum of s_j over c(j,i) = k.
inline IntMatrix induced_regular_map(const Signature& s) {
    const ClassFamily& fam = *s.family;
    const std::size_t n = fam.size();
    IntMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (s.counts[j].is_zero()) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = fam.compose_index(j, i);
            if (k == npos)
                throw ClosureError(j, i,
                                   "induced_regular_map: class " + std::to_string(j) + " o class " + std::to_string(i) +
                                       " leaves the family");
            m(k, i) += s.counts[j];
        }
    }
    return m;
}

/// Decides membership of a tuple (one class vector per family class) in the
/// multicone: some s >= 0 with s o basis_i = tuple[i] for every i. With
/// stable = false the witness must also fit into `target` from A(H)
/// (multiscale membership).
inline std::optional<Signature> multicone_membership(const FamilyPtr& fam, const std::vector<IntVector>& tuple,
                                                     bool stable, const std::optional<HAlgebra>& target = std::nullopt) {
    const std::size_t n = fam->size();
    if (tuple.size() != n) throw InputError("multicone_membership: need one vector per family class");
    for (const auto& v : tuple) {
        if (v.size() != n) throw InputError("multicone_membership: vector length must equal family size");
        for (const auto& x : v)
            if (x < 0) return std::nullopt;
    }
    if (!stable) {
        if (!target) throw InputError("multicone_membership: multiscale test needs a target algebra");
        if (!(target->digraph == fam->digraph())) throw InputError("multicone_membership: target over another digraph");
    }
    composition_table(*fam);

    IntMatrix a(n, n * n);
    IntVector b(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) b[i * n + k] = tuple[i][k];
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) a(j, i * n + fam->compose_index(j, i)) = 1;

    const Integer mass = sum(tuple.front());
    NonnegSolutions sol = solve_nonneg_integral(a, b, mass);
    const std::vector<std::size_t> unit(fam->digraph().vertex_count(), 1);
    for (auto& x : sol.solutions) {
        Signature s(fam, std::move(x));
        if (stable) return s;
        if (!s.is_zero() && !capacity_violation(s, unit, target->multiplicities)) return s;
    }
    return std::nullopt;
}

/// A subfamily of signatures over a base family whose span is closed under
/// composition, e.g. the refinement / standard / degenerate family on T_3.
struct ReducedFamily {
    FamilyPtr base;
    std::vector<std::string> names;
    std::vector<Signature> generators;

    std::size_t size() const noexcept { return generators.size(); }

    Signature expand(std::span<const Integer> coeffs) const {
        if (coeffs.size() != generators.size()) throw InputError("ReducedFamily: wrong coefficient count");
        Signature s = Signature::zero(base);
        for (std::size_t g = 0; g < generators.size(); ++g)
            for (std::size_t k = 0; k < base->size(); ++k) s.counts[k] += coeffs[g] * generators[g].counts[k];
        return s;
    }

    /// Nonnegative coordinates of s in the generators, if s lies in their cone.
    std::optional<IntVector> coordinates(const Signature& s) const {
        const Signature t = restrict_to(s, base);
        IntMatrix gm(generators.size(), base->size());
        for (std::size_t g = 0; g < generators.size(); ++g)
            for (std::size_t k = 0; k < base->size(); ++k) gm(g, k) = generators[g].counts[k];
        NonnegSolutions sol = solve_nonneg_integral(gm, t.counts, t.mass());
        if (sol.solutions.size() != 1) return std::nullopt;
        return sol.solutions.front();
    }

    /// Column g = coordinates of expand(coeffs) o generator g.
    IntMatrix induced_matrix(std::span<const Integer> coeffs) const {
        const Signature s = expand(coeffs);
        IntMatrix m(generators.size(), generators.size());
        for (std::size_t g = 0; g < generators.size(); ++g) {
            const Signature c = compose_signatures(s, generators[g]);
            auto x = coordinates(c);
            if (!x) throw ClosureError(0, g, "ReducedFamily: composite leaves the span of the generators");
            for (std::size_t k = 0; k < generators.size(); ++k) m(k, g) = (*x)[k];
        }
        return m;
    }

    /// Coordinates of expand(outer) o expand(inner).
    IntVector compose(std::span<const Integer> outer, std::span<const Integer> inner) const {
        auto x = coordinates(compose_signatures(expand(outer), expand(inner)));
        if (!x) throw ClosureError(0, 0, "ReducedFamily: composite leaves the span of the generators");
        return *x;
    }
};

namespace detail {

inline ReducedFamily t3_family(std::vector<std::string> names, const std::vector<std::vector<VertexMap>>& gens) {
    ReducedFamily rf;
    rf.base = ClassFamily::make(chain_digraph(3), FamilyKind::all);
    rf.names = std::move(names);
    for (const auto& g : gens) {
        Signature s = Signature::zero(rf.base);
        for (const auto& b : g) s.counts[rf.base->index_of(b)] += 1;
        rf.generators.push_back(std::move(s));
    }
    return rf;
}

}  // namespace detail

/// Refinement rho = (0,1,2), standard sigma = (0,1,1), degenerate delta = (0,0,0)
/// on T_3. Coefficients {r,s,t} induce [[r,0,0],[s,r+s,0],[t,t,r+s+t]].
inline ReducedFamily reduced_family_g() {
    return detail::t3_family({"rho", "sigma", "delta"}, {{{0, 1, 2}}, {{0, 1, 1}}, {{0, 0, 0}}});
}

/// Alternative reading with sigma the sum of the three constant classes.
/// Induces [[r,0,0],[s,r+3s,s],[t,3t,r+t]] instead.
inline ReducedFamily block_picture_family() {
    return detail::t3_family({"rho", "sigma", "delta"},
                             {{{0, 1, 2}}, {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}}, {{0, 0, 0}}});
}

inline IntMatrix g_family_pattern(const Integer& r, const Integer& s, const Integer& t) {
    IntMatrix m(3, 3);
    m(0, 0) = r;
    m(1, 0) = s;
    m(1, 1) = r + s;
    m(2, 0) = t;
    m(2, 1) = t;
    m(2, 2) = r + s + t;
    return m;
}

}  // namespace ddg

#endif  // DDG_REGULAR_HPP

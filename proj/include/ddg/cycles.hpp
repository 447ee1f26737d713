#ifndef DDG_CYCLES_HPP
#define DDG_CYCLES_HPP

#include <cstddef>
#include <vector>

#include "ddg/ddgroup.hpp"
#include "ddg/digraph.hpp"
#include "ddg/embeddings.hpp"
#include "ddg/error.hpp"
#include "ddg/int_matrix.hpp"

namespace ddg {

/// Automorphism classes of the 2m-cycle, lexicographic order.
inline FamilyPtr rigid_family(std::size_t m) { return ClassFamily::make(cycle_digraph(m), FamilyKind::automorphisms); }

/// Vertex permutation matrix of a class: entry (b(v), v) = 1.
inline IntMatrix permutation_k0(const VertexMap& b) {
    IntMatrix p(b.size(), b.size());
    for (Vertex v = 0; v < b.size(); ++v) p(b[v], v) = 1;
    return p;
}

inline std::vector<IntMatrix> rigid_k0_matrices(std::size_t m) {
    auto fam = rigid_family(m);
    std::vector<IntMatrix> out;
    for (const auto& b : fam->classes()) out.push_back(permutation_k0(b));
    return out;
}

/// Half-length of the cycle a family lives on; throws unless every class is
/// an automorphism of a standard 2m-cycle.
inline std::size_t rigid_half_length(const ClassFamily& fam) {
    const Digraph& h = fam.digraph();
    const std::size_t n = h.vertex_count();
    if (n < 4 || n % 2 != 0 || !(h == cycle_digraph(n / 2))) throw InputError("expected a signature over a 2m-cycle");
    for (const auto& b : fam.classes())
        if (!is_automorphism(h, b)) throw InputError("expected rigid classes (cycle automorphisms)");
    return n / 2;
}

/// +1 if g preserves the cyclic orientation of the underlying undirected cycle
/// m, 0, m+1, 1, ..., 2m-1, m-1; -1 if it reverses it.
inline int orientation_sign(std::size_t m, const VertexMap& g) {
    const std::size_t n = 2 * m;
    std::vector<std::size_t> pos(n);
    for (std::size_t s = 0; s < m; ++s) {
        pos[m + s] = 2 * s;
        pos[s] = 2 * s + 1;
    }
    const std::size_t a = pos[g[m]], b = pos[g[0]];
    if ((a + 1) % n == b) return 1;
    if ((b + 1) % n == a) return -1;
    throw InputError("orientation_sign: map is not a cycle automorphism");
}

/// Induced map on H_1 = Z: signed total multiplicity.
inline Integer h1_of_signature(const Signature& s) {
    const std::size_t m = rigid_half_length(*s.family);
    Integer h = 0;
    for (std::size_t k = 0; k < s.family->size(); ++k) h += orientation_sign(m, (*s.family)[k]) * s.counts[k];
    return h;
}

namespace detail {

inline VertexMap inverse_map(const VertexMap& g) {
    VertexMap inv(g.size());
    for (Vertex v = 0; v < g.size(); ++v) inv[g[v]] = v;
    return inv;
}

}  // namespace detail

/// Left multiplication by sum s_g g in the left regular representation of the
/// automorphism group: entry (g,h) = s_{g h^-1}.
inline IntMatrix group_ring_left_mult_matrix(std::size_t m, std::span<const Integer> coeffs) {
    auto fam = rigid_family(m);
    const std::size_t n = fam->size();
    if (coeffs.size() != n) throw InputError("group_ring_left_mult_matrix: need one coefficient per group element");
    IntMatrix out(n, n);
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t h = 0; h < n; ++h) {
            const std::size_t k = fam->index_of(compose_classes((*fam)[g], detail::inverse_map((*fam)[h])));
            out(g, h) = coeffs[k];
        }
    return out;
}

struct GroupRingElement {
    std::size_t m = 2;
    IntVector coefficients;

    static GroupRingElement one(std::size_t m) {
        auto fam = rigid_family(m);
        GroupRingElement e{m, IntVector(fam->size())};
        e.coefficients[*fam->identity_index()] = 1;
        return e;
    }

    friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

    /// Convolution: (a b)_k = sum over g o h = k of a_g b_h.
    friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
        if (a.m != b.m) throw InputError("group ring product: different cycle lengths");
        auto fam = rigid_family(a.m);
        const std::size_t n = fam->size();
        if (a.coefficients.size() != n || b.coefficients.size() != n)
            throw InputError("group ring element has the wrong length");
        GroupRingElement out{a.m, IntVector(n)};
        for (std::size_t g = 0; g < n; ++g)
            for (std::size_t h = 0; h < n; ++h) out.coefficients[fam->compose_index(g, h)] += a.coefficients[g] * b.coefficients[h];
        return out;
    }
};

/// Block-diagonal G(phi) for a rigid 4-cycle signature: K_0 block on the
/// vertices (sources then sinks) and the group-ring block.
inline IntMatrix g_phi_matrix(const Signature& s) {
    if (rigid_half_length(*s.family) != 2) throw InputError("g_phi_matrix: defined for 4-cycle signatures");
    const IntMatrix k0 = k0_matrix(s);
    const IntMatrix gamma = group_ring_left_mult_matrix(2, s.counts);
    IntMatrix out(8, 8);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            out(i, j) = k0(i, j);
            out(4 + i, 4 + j) = gamma(i, j);
        }
    return out;
}

}  // namespace ddg

#endif  // DDG_CYCLES_HPP

#ifndef DDG_DDGROUP_HPP
#define DDG_DDGROUP_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ddg/digraph.hpp"
#include "ddg/embeddings.hpp"
#include "ddg/error.hpp"
#include "ddg/int_matrix.hpp"
#include "ddg/linalg.hpp"

namespace ddg {

/// Position of the generator (p,q) in the flat layout: loops first, then
/// proper edges in lexicographic order.
inline std::size_t dd_index(const Digraph& h, Vertex p, Vertex q) {
    if (p == q) {
        if (p >= h.vertex_count()) throw InputError("dd_index: vertex out of range");
        return p;
    }
    const auto& e = h.proper_edges();
    auto it = std::lower_bound(e.begin(), e.end(), Edge{p, q});
    if (it == e.end() || *it != Edge{p, q}) throw InputError("dd_index: not an edge of the digraph");
    return h.vertex_count() + static_cast<std::size_t>(it - e.begin());
}

inline std::size_t dd_dimension(const Digraph& h) { return h.vertex_count() + h.proper_edges().size(); }

/// Element of G(A) = Z^{reflexive edges of H}: a rank distribution.
struct DDElement {
    Digraph digraph;
    IntVector values;

    DDElement() = default;
    DDElement(Digraph h, IntVector v) : digraph(std::move(h)), values(std::move(v)) {
        if (values.size() != dd_dimension(digraph)) throw InputError("DDElement: wrong length for digraph");
    }

    static DDElement zero(const Digraph& h) { return DDElement(h, IntVector(dd_dimension(h))); }

    static DDElement indicator(const Digraph& h, Vertex p, Vertex q) {
        DDElement g = zero(h);
        g.values[dd_index(h, p, q)] = 1;
        return g;
    }

    const Integer& at(Vertex p, Vertex q) const { return values[dd_index(digraph, p, q)]; }
    Integer& at(Vertex p, Vertex q) { return values[dd_index(digraph, p, q)]; }

    friend bool operator==(const DDElement&, const DDElement&) = default;
};

/// Element of K_0 = Z^{vertices}.
struct K0Element {
    Digraph digraph;
    IntVector values;

    friend bool operator==(const K0Element&, const K0Element&) = default;
};

/// Number of target units per block position in the image of one source unit
/// for `source_edge`; all units of that edge must agree.
inline DDElement rank_distribution(const ConcreteEmbedding& e, Edge source_edge) {
    const auto [i, j] = source_edge;
    if (!e.source.digraph.has_edge(i, j)) throw InputError("rank_distribution: not a reflexive edge of the source");
    std::optional<DDElement> first;
    for (std::size_t a = 0; a < e.source.multiplicities[i]; ++a)
        for (std::size_t b = 0; b < e.source.multiplicities[j]; ++b) {
            auto it = e.images.find(MatrixUnit{i, j, a, b});
            if (it == e.images.end()) throw MalformedEmbedding("rank_distribution: missing image for a source unit");
            DDElement g = DDElement::zero(e.target.digraph);
            for (const auto& t : it->second) {
                if (!e.target.digraph.has_edge(t.p, t.q)) throw MalformedEmbedding("image unit outside the digraph");
                g.at(t.p, t.q) += 1;
            }
            if (!first) {
                first = std::move(g);
            } else if (!(*first == g)) {
                throw MalformedEmbedding("units of one edge have different rank distributions");
            }
        }
    return *first;
}

/// Matrix of the induced map on G: column (i,j) = sum_b s_b [b(i), b(j)].
inline IntMatrix induced_dd_map(const Signature& s) {
    const Digraph& h = s.digraph();
    const auto gens = h.reflexive_edges();
    IntMatrix m(gens.size(), gens.size());
    for (std::size_t k = 0; k < s.family->size(); ++k) {
        if (s.counts[k].is_zero()) continue;
        const VertexMap& b = (*s.family)[k];
        for (std::size_t c = 0; c < gens.size(); ++c) m(dd_index(h, b[gens[c].first], b[gens[c].second]), c) += s.counts[k];
    }
    return m;
}

/// Restriction of a G-map to the loop coordinates.
inline IntMatrix loop_block(const IntMatrix& dd_map, std::size_t vertex_count) {
    return dd_map.block(0, 0, vertex_count, vertex_count);
}

/// K_0 matrix of an embedding with signature s: entry (b(v), v) summed over classes.
inline IntMatrix k0_matrix(const Signature& s) {
    const std::size_t n = s.digraph().vertex_count();
    IntMatrix m(n, n);
    for (std::size_t k = 0; k < s.family->size(); ++k)
        for (Vertex v = 0; v < n; ++v) m((*s.family)[k][v], v) += s.counts[k];
    return m;
}

/// Images of the proper-edge generators, one DDElement per edge.
inline std::vector<DDElement> generator_images(const Signature& s) {
    const Digraph& h = s.digraph();
    const IntMatrix m = induced_dd_map(s);
    std::vector<DDElement> out;
    for (const auto& [i, j] : h.proper_edges()) out.emplace_back(h, m.column(dd_index(h, i, j)));
    return out;
}

inline DDElement apply(const IntMatrix& m, const DDElement& g) {
    return DDElement(g.digraph, m * std::span<const Integer>(g.values));
}

struct BoundaryPair {
    K0Element final_part;    ///< [v] -> [v v*]: row sums
    K0Element initial_part;  ///< [v] -> [v* v]: column sums
};

inline BoundaryPair boundary_maps(const DDElement& g) {
    const Digraph& h = g.digraph;
    BoundaryPair out{{h, IntVector(h.vertex_count())}, {h, IntVector(h.vertex_count())}};
    for (const auto& [p, q] : h.reflexive_edges()) {
        out.final_part.values[p] += g.at(p, q);
        out.initial_part.values[q] += g.at(p, q);
    }
    return out;
}

struct ScaleReport {
    bool member = true;
    std::optional<Vertex> vertex;      ///< violated vertex, if any
    std::optional<Edge> negative_at;   ///< negative coordinate, if any
    std::string reason;
};

/// Scale of G(A): nonnegative g whose boundary values fit inside the blocks.
inline ScaleReport scale_membership(const HAlgebra& a, const DDElement& g) {
    if (!(a.digraph == g.digraph)) throw InputError("scale_membership: element over a different digraph");
    ScaleReport rep;
    for (const auto& [p, q] : a.digraph.reflexive_edges())
        if (g.at(p, q) < 0) {
            rep.member = false;
            rep.negative_at = Edge{p, q};
            rep.reason = "negative entry at (" + std::to_string(p) + "," + std::to_string(q) + ")";
            return rep;
        }
    const BoundaryPair b = boundary_maps(g);
    for (Vertex v = 0; v < a.digraph.vertex_count(); ++v) {
        const Integer cap = a.multiplicities[v];
        if (b.final_part.values[v] > cap || b.initial_part.values[v] > cap) {
            rep.member = false;
            rep.vertex = v;
            rep.reason = "boundary at vertex " + std::to_string(v) + " exceeds block size " + cap.str();
            return rep;
        }
    }
    return rep;
}

/// Rows: classes. Columns: (proper edge, lexicographic) x (position, lexicographic,
/// loops interleaved). Entry 1 iff the class sends the edge to the position.
inline IntMatrix coefficient_matrix(const ClassFamily& fam) {
    const Digraph& h = fam.digraph();
    const auto edges = h.proper_edges();
    const auto pos = h.positions_lex();
    IntMatrix x(fam.size(), edges.size() * pos.size());
    for (std::size_t k = 0; k < fam.size(); ++k) {
        const VertexMap& b = fam[k];
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const Edge target{b[edges[e].first], b[edges[e].second]};
            auto it = std::lower_bound(pos.begin(), pos.end(), target);
            x(k, e * pos.size() + static_cast<std::size_t>(it - pos.begin())) = 1;
        }
    }
    return x;
}

struct UniquenessReport {
    bool unique = false;
    std::size_t rank = 0;
    std::size_t classes = 0;
    IntVector kernel_vector;  ///< k with k.X = 0, primitive, first nonzero positive; empty when unique
};

/// The family has the uniqueness property iff its coefficient matrix has full row rank.
inline UniquenessReport uniqueness_property(const ClassFamily& fam) {
    const IntMatrix x = coefficient_matrix(fam);
    UniquenessReport rep;
    rep.classes = fam.size();
    rep.rank = ddg::rank(x);
    rep.unique = rep.rank == rep.classes;
    if (!rep.unique) {
        const IntMatrix k = left_kernel(x);
        IntVector v(k.row(0).begin(), k.row(0).end());
        Integer g = 0;
        for (const auto& c : v) g = boost::multiprecision::gcd(g, c);
        for (auto& c : v) c /= g;
        auto nz = std::find_if(v.begin(), v.end(), [](const Integer& c) { return !c.is_zero(); });
        if (*nz < 0)
            for (auto& c : v) c = -c;
        rep.kernel_vector = std::move(v);
    }
    return rep;
}

/// Splits an integer vector into (positive part, negative part) signatures.
inline std::pair<Signature, Signature> split_kernel_vector(const FamilyPtr& fam, const IntVector& k) {
    Signature plus = Signature::zero(fam), minus = Signature::zero(fam);
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] > 0) plus.counts[i] = k[i];
        if (k[i] < 0) minus.counts[i] = -k[i];
    }
    return {plus, minus};
}

struct RecoveryResult {
    std::vector<Signature> candidates;  ///< all solutions, sorted

    bool ambiguous() const noexcept { return candidates.size() > 1; }
    const Signature& signature() const { return candidates.front(); }
};

namespace detail {

inline void check_boundary_consistency(const Digraph& h, const std::vector<DDElement>& images) {
    std::vector<std::optional<IntVector>> k0(h.vertex_count());
    auto record = [&](Vertex v, const IntVector& val) {
        if (!k0[v]) {
            k0[v] = val;
        } else if (*k0[v] != val) {
            throw NotLiftable("generator images disagree on the K0 image of vertex " + std::to_string(v));
        }
    };
    const auto& edges = h.proper_edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const BoundaryPair b = boundary_maps(images[e]);
        record(edges[e].first, b.final_part.values);
        record(edges[e].second, b.initial_part.values);
    }
}

}  // namespace detail

/// Solves r . X = (concatenated images) over nonnegative integers.
///
/// Returns the unique signature when the family has the uniqueness property,
/// otherwise every candidate (total multiplicity equals the mass of any single
/// generator image, so the search is finite). Throws NotLiftable when no
/// regular embedding realizes the data.
inline RecoveryResult recover_signature(const FamilyPtr& fam, const std::vector<DDElement>& images) {
    const Digraph& h = fam->digraph();
    const auto& edges = h.proper_edges();
    if (edges.empty()) throw InputError("recover_signature: digraph has no proper edges to read images from");
    if (images.size() != edges.size()) throw InputError("recover_signature: need one image per proper edge");
    for (const auto& g : images)
        if (!(g.digraph == h)) throw InputError("recover_signature: image over a different digraph");
    detail::check_boundary_consistency(h, images);

    const auto pos = h.positions_lex();
    IntVector b;
    b.reserve(edges.size() * pos.size());
    for (const auto& g : images)
        for (const auto& [p, q] : pos) b.push_back(g.at(p, q));
    Integer mass = sum(images.front().values);
    for (const auto& g : images)
        if (sum(g.values) != mass) throw NotLiftable("generator images have different total mass");
    if (mass < 0) throw NotLiftable("negative generator image");

    const IntMatrix x = coefficient_matrix(*fam);
    NonnegSolutions sol = solve_nonneg_integral(x, b, mass);
    if (sol.solutions.empty()) throw NotLiftable("no nonnegative signature produces these generator images");
    RecoveryResult out;
    for (auto& v : sol.solutions) out.candidates.emplace_back(fam, std::move(v));
    return out;
}

/// Witness for membership of an image tuple in the matrix unit scale of b:
/// a recovered signature that also fits into b's blocks from A(H).
inline std::optional<Signature> matrix_unit_scale_membership(const HAlgebra& b, const FamilyPtr& fam,
                                                             const std::vector<DDElement>& images) {
    if (!(fam->digraph() == b.digraph)) throw InputError("matrix_unit_scale_membership: digraphs differ");
    RecoveryResult r;
    try {
        r = recover_signature(fam, images);
    } catch (const NotLiftable&) {
        return std::nullopt;
    }
    const std::vector<std::size_t> unit(b.digraph.vertex_count(), 1);
    for (const auto& s : r.candidates) {
        if (s.is_zero()) continue;
        if (!capacity_violation(s, unit, b.multiplicities)) return s;
    }
    return std::nullopt;
}

}  // namespace ddg

#endif  // DDG_DDGROUP_HPP

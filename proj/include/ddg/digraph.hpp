#ifndef DDG_DIGRAPH_HPP
#define DDG_DIGRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddg/error.hpp"

namespace ddg {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

/// Reduced digraph H: proper edges only, loops implicit at every vertex.
///
/// The constructor does not enforce antisymmetry or transitivity; call
/// validate() for a report. Edges are stored sorted and deduplicated.
class Digraph {
public:
    Digraph() = default;

    Digraph(std::size_t vertex_count, std::vector<Edge> proper_edges)
        : n_(vertex_count), edges_(std::move(proper_edges)), adj_(vertex_count * vertex_count, 0) {
        for (const auto& [i, j] : edges_) {
            if (i >= n_ || j >= n_) throw InputError("Digraph: edge endpoint out of range");
            if (i == j) throw InputError("Digraph: loops are implicit and must not be listed");
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        for (const auto& [i, j] : edges_) adj_[i * n_ + j] = 1;
    }

    std::size_t vertex_count() const noexcept { return n_; }
    const std::vector<Edge>& proper_edges() const noexcept { return edges_; }

    bool has_proper_edge(Vertex i, Vertex j) const { return i != j && adj_[i * n_ + j] != 0; }

    /// Reflexive-closed edge relation: loops count as edges.
    bool has_edge(Vertex i, Vertex j) const { return i == j || has_proper_edge(i, j); }

    /// Loops (in vertex order) followed by proper edges (lexicographic).
    std::vector<Edge> reflexive_edges() const {
        std::vector<Edge> out;
        out.reserve(n_ + edges_.size());
        for (Vertex v = 0; v < n_; ++v) out.emplace_back(v, v);
        out.insert(out.end(), edges_.begin(), edges_.end());
        return out;
    }

    /// All reflexive-closed edges in lexicographic order, loops interleaved.
    std::vector<Edge> positions_lex() const {
        std::vector<Edge> out = reflexive_edges();
        std::sort(out.begin(), out.end());
        return out;
    }

    friend bool operator==(const Digraph& a, const Digraph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<char> adj_;
};

/// A digraph algebra up to isomorphism: reduced digraph plus block sizes.
struct HAlgebra {
    Digraph digraph;
    std::vector<std::size_t> multiplicities;

    HAlgebra() = default;
    HAlgebra(Digraph h, std::vector<std::size_t> mult) : digraph(std::move(h)), multiplicities(std::move(mult)) {
        if (multiplicities.size() != digraph.vertex_count())
            throw InputError("HAlgebra: one multiplicity per vertex required");
        for (auto m : multiplicities)
            if (m == 0) throw InputError("HAlgebra: multiplicities must be positive");
    }

    /// The algebra A(H) itself: every block of size one.
    static HAlgebra of(const Digraph& h) { return HAlgebra(h, std::vector<std::size_t>(h.vertex_count(), 1)); }

    std::size_t total_size() const { return std::accumulate(multiplicities.begin(), multiplicities.end(), std::size_t{0}); }

    friend bool operator==(const HAlgebra&, const HAlgebra&) = default;
};

/// Reflexive digraph homomorphism H -> H, images[v] = image of vertex v.
using VertexMap = std::vector<Vertex>;

struct ValidationReport {
    struct Violation {
        enum class Kind { antisymmetry, transitivity };
        Kind kind;
        Edge first;
        Edge second;
        std::optional<Edge> missing;  // transitivity only
    };
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

inline ValidationReport validate(const Digraph& g) {
    ValidationReport rep;
    for (const auto& [i, j] : g.proper_edges()) {
        if (i < j && g.has_proper_edge(j, i))
            rep.violations.push_back({ValidationReport::Violation::Kind::antisymmetry, {i, j}, {j, i}, std::nullopt});
    }
    for (const auto& [i, j] : g.proper_edges())
        for (const auto& [j2, k] : g.proper_edges()) {
            if (j2 != j || k == i) continue;
            if (!g.has_proper_edge(i, k))
                rep.violations.push_back(
                    {ValidationReport::Violation::Kind::transitivity, {i, j}, {j, k}, Edge{i, k}});
        }
    return rep;
}

/// Chain T_r: vertices 0..r-1, all edges (i,j) with i < j.
inline Digraph chain_digraph(std::size_t r) {
    if (r < 1) throw InputError("chain digraph needs r >= 1");
    std::vector<Edge> e;
    for (Vertex i = 0; i < r; ++i)
        for (Vertex j = i + 1; j < r; ++j) e.emplace_back(i, j);
    return Digraph(r, std::move(e));
}

/// 2m-cycle: sources 0..m-1, sinks m..2m-1, source s joined to sinks
/// m+s and m+((s+1) mod m).
inline Digraph cycle_digraph(std::size_t m) {
    if (m < 2) throw InputError("cycle digraph needs m >= 2 (2m >= 4 vertices)");
    std::vector<Edge> e;
    for (Vertex s = 0; s < m; ++s) {
        e.emplace_back(s, m + s);
        e.emplace_back(s, m + (s + 1) % m);
    }
    return Digraph(2 * m, std::move(e));
}

struct ReducedDigraph {
    Digraph digraph;
    std::vector<Vertex> partition;            ///< original vertex -> reduced vertex
    std::vector<std::size_t> multiplicities;  ///< class sizes

    HAlgebra algebra() const { return HAlgebra(digraph, multiplicities); }
};

/// Collapses mutually reachable vertices of a reflexive transitive relation.
/// Loops may be listed or omitted. Reduced vertices are numbered by the
/// smallest original vertex in each class.
inline ReducedDigraph reduced_digraph(std::size_t vertex_count, const std::vector<Edge>& edges) {
    const std::size_t n = vertex_count;
    std::vector<char> rel(n * n, 0);
    for (Vertex v = 0; v < n; ++v) rel[v * n + v] = 1;
    for (const auto& [i, j] : edges) {
        if (i >= n || j >= n) throw InputError("reduced_digraph: edge endpoint out of range");
        rel[i * n + j] = 1;
    }
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < n; ++j) {
            if (!rel[i * n + j]) continue;
            for (Vertex k = 0; k < n; ++k)
                if (rel[j * n + k] && !rel[i * n + k])
                    throw InputError("reduced_digraph: relation is not transitive (missing edge " + std::to_string(i) +
                                     "->" + std::to_string(k) + ")");
        }
    ReducedDigraph out;
    out.partition.assign(n, n);
    std::size_t classes = 0;
    for (Vertex v = 0; v < n; ++v) {
        if (out.partition[v] != n) continue;
        for (Vertex w = v; w < n; ++w)
            if (rel[v * n + w] && rel[w * n + v]) out.partition[w] = classes;
        out.multiplicities.push_back(0);
        ++classes;
    }
    for (Vertex v = 0; v < n; ++v) ++out.multiplicities[out.partition[v]];
    std::vector<Edge> reduced;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < n; ++j) {
            const Vertex a = out.partition[i], b = out.partition[j];
            if (rel[i * n + j] && a != b) reduced.emplace_back(a, b);
        }
    out.digraph = Digraph(classes, std::move(reduced));
    return out;
}

enum class FamilyKind { all, automorphisms, non_degenerate };

inline bool is_endomorphism(const Digraph& h, const VertexMap& images) {
    if (images.size() != h.vertex_count()) return false;
    for (Vertex v : images)
        if (v >= h.vertex_count()) return false;
    for (const auto& [i, j] : h.proper_edges())
        if (!h.has_edge(images[i], images[j])) return false;
    return true;
}

inline bool is_automorphism(const Digraph& h, const VertexMap& images) {
    std::vector<char> seen(h.vertex_count(), 0);
    for (Vertex v : images) {
        if (v >= h.vertex_count() || seen[v]) return false;
        seen[v] = 1;
    }
    for (const auto& [i, j] : h.proper_edges())
        if (!h.has_proper_edge(images[i], images[j])) return false;
    return true;
}

/// Collapses every proper edge. For connected H these are the constant maps.
inline bool is_degenerate(const Digraph& h, const VertexMap& images) {
    for (const auto& [i, j] : h.proper_edges())
        if (images[i] != images[j]) return false;
    return true;
}

/// Reflexive endomorphisms of h in lexicographic order of the image tuple.
inline std::vector<VertexMap> enumerate_endomorphisms(const Digraph& h, FamilyKind filter = FamilyKind::all) {
    const std::size_t n = h.vertex_count();
    std::vector<VertexMap> out;
    if (n == 0) return out;
    // constraints between v and earlier vertices
    std::vector<std::vector<Edge>> checks(n);
    for (const auto& e : h.proper_edges()) checks[std::max(e.first, e.second)].push_back(e);

    VertexMap cur(n, 0);
    auto rec = [&](auto&& self, Vertex v) -> void {
        if (v == n) {
            bool keep = true;
            if (filter == FamilyKind::automorphisms) keep = is_automorphism(h, cur);
            if (filter == FamilyKind::non_degenerate) keep = !is_degenerate(h, cur);
            if (keep) out.push_back(cur);
            return;
        }
        for (Vertex img = 0; img < n; ++img) {
            cur[v] = img;
            bool ok = true;
            for (const auto& [i, j] : checks[v])
                if (!h.has_edge(cur[i], cur[j])) {
                    ok = false;
                    break;
                }
            if (ok) self(self, v + 1);
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace ddg

#endif  // DDG_DIGRAPH_HPP

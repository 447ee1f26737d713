#ifndef DDG_EMBEDDINGS_HPP
#define DDG_EMBEDDINGS_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ddg/digraph.hpp"
#include "ddg/error.hpp"
#include "ddg/int_matrix.hpp"

namespace ddg {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// An ordered list of multiplicity-one classes (vertex maps) over a digraph.
///
/// The kind is `all`, `automorphisms` or `non_degenerate`, or an explicit
/// subset of the `all` enumeration given by indices. Compositions among the
/// classes are tabulated once at construction.
class ClassFamily {
public:
    static std::shared_ptr<const ClassFamily> make(const Digraph& h, FamilyKind kind) {
        auto f = std::shared_ptr<ClassFamily>(new ClassFamily());
        f->digraph_ = h;
        f->kind_ = kind;
        f->classes_ = enumerate_endomorphisms(h, kind);
        f->finish();
        return f;
    }

    static std::shared_ptr<const ClassFamily> make_explicit(const Digraph& h, std::vector<std::size_t> indices) {
        auto all = enumerate_endomorphisms(h, FamilyKind::all);
        auto f = std::shared_ptr<ClassFamily>(new ClassFamily());
        f->digraph_ = h;
        f->kind_ = FamilyKind::all;
        f->explicit_ = true;
        for (auto idx : indices) {
            if (idx >= all.size()) throw InputError("explicit family index out of range");
            f->classes_.push_back(all[idx]);
        }
        std::sort(indices.begin(), indices.end());
        if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
            throw InputError("explicit family lists an index twice");
        f->indices_ = indices;
        // canonical order follows the `all` enumeration
        std::sort(f->classes_.begin(), f->classes_.end());
        f->finish();
        return f;
    }

    const Digraph& digraph() const noexcept { return digraph_; }
    const std::vector<VertexMap>& classes() const noexcept { return classes_; }
    const VertexMap& operator[](std::size_t i) const { return classes_[i]; }
    std::size_t size() const noexcept { return classes_.size(); }
    FamilyKind kind() const noexcept { return kind_; }
    bool is_explicit() const noexcept { return explicit_; }
    /// Indices into the `all` enumeration; only for explicit families.
    const std::vector<std::size_t>& explicit_indices() const noexcept { return indices_; }

    std::size_t index_of(const VertexMap& b) const {
        auto it = lookup_.find(b);
        return it == lookup_.end() ? npos : it->second;
    }

    /// Index of classes()[outer] o classes()[inner], or npos when outside the family.
    std::size_t compose_index(std::size_t outer, std::size_t inner) const { return table_[outer * size() + inner]; }

    bool closed() const noexcept { return closed_; }

    std::optional<std::size_t> identity_index() const {
        VertexMap id(digraph_.vertex_count());
        std::iota(id.begin(), id.end(), Vertex{0});
        auto i = index_of(id);
        return i == npos ? std::nullopt : std::optional<std::size_t>(i);
    }

    friend bool operator==(const ClassFamily& a, const ClassFamily& b) {
        return a.digraph_ == b.digraph_ && a.classes_ == b.classes_;
    }

private:
    ClassFamily() = default;

    void finish() {
        for (std::size_t i = 0; i < classes_.size(); ++i) lookup_[classes_[i]] = i;
        const std::size_t n = classes_.size();
        table_.assign(n * n, npos);
        closed_ = true;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                VertexMap c(classes_[i].size());
                for (std::size_t v = 0; v < c.size(); ++v) c[v] = classes_[j][classes_[i][v]];
                table_[j * n + i] = index_of(c);
                if (table_[j * n + i] == npos) closed_ = false;
            }
    }

    Digraph digraph_;
    FamilyKind kind_ = FamilyKind::all;
    bool explicit_ = false;
    std::vector<std::size_t> indices_;
    std::vector<VertexMap> classes_;
    std::map<VertexMap, std::size_t> lookup_;
    std::vector<std::size_t> table_;
    bool closed_ = true;
};

using FamilyPtr = std::shared_ptr<const ClassFamily>;

inline bool same_family(const FamilyPtr& a, const FamilyPtr& b) { return a == b || *a == *b; }

/// Multiplicity signature: how many copies of each class a regular embedding holds.
struct Signature {
    FamilyPtr family;
    IntVector counts;

    Signature() = default;
    Signature(FamilyPtr fam, IntVector c) : family(std::move(fam)), counts(std::move(c)) {
        if (!family) throw InputError("Signature: missing family");
        if (counts.size() != family->size()) throw InputError("Signature: counts length must equal family size");
        for (const auto& v : counts)
            if (v < 0) throw InputError("Signature: counts must be nonnegative");
    }

    static Signature zero(FamilyPtr fam) {
        const std::size_t n = fam->size();
        return Signature(std::move(fam), IntVector(n));
    }

    static Signature basis(FamilyPtr fam, std::size_t k, Integer count = 1) {
        Signature s = zero(std::move(fam));
        s.counts.at(k) = count;
        return s;
    }

    /// Identity class with the given multiplicity (a refinement embedding).
    static Signature identity(FamilyPtr fam, Integer count = 1) {
        auto id = fam->identity_index();
        if (!id) throw InputError("family does not contain the identity class");
        return basis(std::move(fam), *id, std::move(count));
    }

    const Digraph& digraph() const { return family->digraph(); }
    Integer mass() const { return sum(counts); }
    bool is_zero() const {
        return std::all_of(counts.begin(), counts.end(), [](const Integer& v) { return v.is_zero(); });
    }

    friend bool operator==(const Signature& a, const Signature& b) {
        return same_family(a.family, b.family) && a.counts == b.counts;
    }

    friend Signature operator+(const Signature& a, const Signature& b) {
        if (!same_family(a.family, b.family)) throw InputError("signature sum: families differ");
        Signature out = a;
        for (std::size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += b.counts[i];
        return out;
    }
};

inline VertexMap compose_classes(const VertexMap& outer, const VertexMap& inner) {
    if (outer.size() != inner.size()) throw InputError("compose_classes: maps act on different vertex sets");
    VertexMap out(inner.size());
    for (std::size_t v = 0; v < inner.size(); ++v) {
        if (inner[v] >= outer.size()) throw InputError("compose_classes: image out of range");
        out[v] = outer[inner[v]];
    }
    return out;
}

/// c[j][i] = index of class_j o class_i. Throws ClosureError naming the first
/// offending pair in row-major order.
inline std::vector<std::vector<std::size_t>> composition_table(const ClassFamily& fam) {
    const std::size_t n = fam.size();
    std::vector<std::vector<std::size_t>> c(n, std::vector<std::size_t>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            c[j][i] = fam.compose_index(j, i);
            if (c[j][i] == npos)
                throw ClosureError(j, i,
                                   "family not closed under composition: class " + std::to_string(j) + " o class " +
                                       std::to_string(i) + " falls outside");
        }
    return c;
}

/// Bilinear extension of class composition. The result lives in the common
/// family when every produced class belongs to it, otherwise in the `all`
/// family of the digraph.
inline Signature compose_signatures(const Signature& outer, const Signature& inner) {
    if (!(outer.digraph() == inner.digraph())) throw InputError("compose_signatures: signatures over different digraphs");
    if (same_family(outer.family, inner.family)) {
        const ClassFamily& fam = *outer.family;
        Signature out = Signature::zero(outer.family);
        bool inside = true;
        for (std::size_t j = 0; j < fam.size() && inside; ++j) {
            if (outer.counts[j].is_zero()) continue;
            for (std::size_t i = 0; i < fam.size(); ++i) {
                if (inner.counts[i].is_zero()) continue;
                const std::size_t k = fam.compose_index(j, i);
                if (k == npos) {
                    inside = false;
                    break;
                }
                out.counts[k] += outer.counts[j] * inner.counts[i];
            }
        }
        if (inside) return out;
    }
    auto all = ClassFamily::make(outer.digraph(), FamilyKind::all);
    Signature out = Signature::zero(all);
    for (std::size_t j = 0; j < outer.family->size(); ++j) {
        if (outer.counts[j].is_zero()) continue;
        for (std::size_t i = 0; i < inner.family->size(); ++i) {
            if (inner.counts[i].is_zero()) continue;
            const std::size_t k = all->index_of(compose_classes((*outer.family)[j], (*inner.family)[i]));
            out.counts[k] += outer.counts[j] * inner.counts[i];
        }
    }
    return out;
}

/// Re-expresses a signature over another family over the same digraph.
inline Signature restrict_to(const Signature& s, const FamilyPtr& fam) {
    if (!(s.digraph() == fam->digraph())) throw InputError("restrict_to: digraphs differ");
    Signature out = Signature::zero(fam);
    for (std::size_t j = 0; j < s.family->size(); ++j) {
        if (s.counts[j].is_zero()) continue;
        const std::size_t k = fam->index_of((*s.family)[j]);
        if (k == npos) throw InputError("restrict_to: signature uses a class outside the target family");
        out.counts[k] = s.counts[j];
    }
    return out;
}

/// Matrix unit e_{(p,q); row, col}: block position (p,q), row < mult(p), col < mult(q).
struct MatrixUnit {
    Vertex p = 0;
    Vertex q = 0;
    std::size_t row = 0;
    std::size_t col = 0;

    friend auto operator<=>(const MatrixUnit&, const MatrixUnit&) = default;
};

/// An embedding given explicitly on matrix units: each source unit maps to a
/// sum of target units.
struct ConcreteEmbedding {
    HAlgebra source;
    HAlgebra target;
    std::map<MatrixUnit, std::vector<MatrixUnit>> images;

    friend bool operator==(const ConcreteEmbedding&, const ConcreteEmbedding&) = default;
};

inline std::vector<MatrixUnit> matrix_units(const HAlgebra& a) {
    std::vector<MatrixUnit> out;
    for (const auto& [i, j] : a.digraph.positions_lex())
        for (std::size_t r = 0; r < a.multiplicities[i]; ++r)
            for (std::size_t c = 0; c < a.multiplicities[j]; ++c) out.push_back({i, j, r, c});
    return out;
}

/// Rows of block q consumed by s when the source has the given block sizes.
inline IntVector required_capacity(const Signature& s, const std::vector<std::size_t>& source_mult) {
    const std::size_t n = s.digraph().vertex_count();
    IntVector need(n);
    for (std::size_t k = 0; k < s.family->size(); ++k) {
        if (s.counts[k].is_zero()) continue;
        for (Vertex v = 0; v < n; ++v) need[(*s.family)[k][v]] += s.counts[k] * source_mult[v];
    }
    return need;
}

inline std::optional<std::size_t> capacity_violation(const Signature& s, const std::vector<std::size_t>& source_mult,
                                                     const std::vector<std::size_t>& target_mult) {
    IntVector need = required_capacity(s, source_mult);
    for (std::size_t q = 0; q < need.size(); ++q)
        if (need[q] > target_mult[q]) return q;
    return std::nullopt;
}

/// Builds the canonical concrete embedding with signature s.
///
/// Target rows of block q go to (class, copy, source vertex, source row)
/// tuples in that lexicographic order.
inline ConcreteEmbedding realize(const Signature& s, const HAlgebra& source,
                                 const std::vector<std::size_t>& target_multiplicities) {
    const Digraph& h = s.digraph();
    if (!(source.digraph == h)) throw InputError("realize: source digraph differs from signature digraph");
    if (target_multiplicities.size() != h.vertex_count()) throw InputError("realize: one target multiplicity per vertex");
    if (s.is_zero()) throw InputError("realize: the zero signature is not an embedding");
    IntVector need = required_capacity(s, source.multiplicities);
    for (std::size_t q = 0; q < need.size(); ++q)
        if (need[q] > target_multiplicities[q]) {
            Integer deficit = need[q] - target_multiplicities[q];
            throw CapacityError(q, deficit.str(),
                                "realize: block " + std::to_string(q) + " needs " + need[q].str() + " rows, has " +
                                    std::to_string(target_multiplicities[q]) + " (deficit " + deficit.str() + ")");
        }

    ConcreteEmbedding e{source, HAlgebra(h, target_multiplicities), {}};
    const std::size_t n = h.vertex_count();
    std::vector<std::size_t> next(n, 0);
    // start[copy][v]: first target row used by that copy for source vertex v
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> copies;
    for (std::size_t k = 0; k < s.family->size(); ++k) {
        const std::size_t count = static_cast<std::size_t>(s.counts[k]);
        const VertexMap& b = (*s.family)[k];
        for (std::size_t c = 0; c < count; ++c) {
            std::vector<std::size_t> start(n);
            for (Vertex v = 0; v < n; ++v) {
                start[v] = next[b[v]];
                next[b[v]] += source.multiplicities[v];
            }
            copies.emplace_back(k, std::move(start));
        }
    }
    for (const MatrixUnit& u : matrix_units(source)) {
        std::vector<MatrixUnit> img;
        img.reserve(copies.size());
        for (const auto& [k, start] : copies) {
            const VertexMap& b = (*s.family)[k];
            img.push_back({b[u.p], b[u.q], start[u.p] + u.row, start[u.q] + u.col});
        }
        std::sort(img.begin(), img.end());
        e.images.emplace(u, std::move(img));
    }
    return e;
}

/// outer o inner on matrix units.
inline ConcreteEmbedding compose_concrete(const ConcreteEmbedding& outer, const ConcreteEmbedding& inner) {
    if (!(inner.target == outer.source)) throw InputError("compose_concrete: inner target differs from outer source");
    ConcreteEmbedding out{inner.source, outer.target, {}};
    for (const auto& [u, mid] : inner.images) {
        std::vector<MatrixUnit> img;
        for (const MatrixUnit& v : mid) {
            auto it = outer.images.find(v);
            if (it == outer.images.end()) throw MalformedEmbedding("compose_concrete: unit missing from outer embedding");
            img.insert(img.end(), it->second.begin(), it->second.end());
        }
        std::sort(img.begin(), img.end());
        out.images.emplace(u, std::move(img));
    }
    return out;
}

inline bool is_weakly_connected(const Digraph& h) {
    const std::size_t n = h.vertex_count();
    if (n == 0) return true;
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [i, j] : h.proper_edges()) parent[find(i)] = find(j);
    for (std::size_t v = 1; v < n; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

/// Decomposes a concrete embedding into multiplicity-one copies and counts
/// each copy's vertex map. Inverse of realize up to inner conjugacy.
inline Signature signature_of_concrete(const ConcreteEmbedding& e, FamilyPtr family = nullptr) {
    const Digraph& h = e.source.digraph;
    if (!(e.target.digraph == h)) throw InputError("signature_of_concrete: source and target digraphs differ");
    if (!is_weakly_connected(h)) throw InputError("signature_of_concrete: decomposition needs a connected digraph");
    if (!family) family = ClassFamily::make(h, FamilyKind::all);
    if (!(family->digraph() == h)) throw InputError("signature_of_concrete: family digraph differs");

    const std::size_t n = h.vertex_count();
    std::vector<std::size_t> offset(n + 1, 0);
    for (Vertex q = 0; q < n; ++q) offset[q + 1] = offset[q] + e.target.multiplicities[q];
    const std::size_t slots = offset[n];
    auto slot = [&](Vertex q, std::size_t r) {
        if (q >= n || r >= e.target.multiplicities[q]) throw MalformedEmbedding("image unit outside the target algebra");
        return offset[q] + r;
    };
    std::vector<std::size_t> parent(slots);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    const auto units = matrix_units(e.source);
    if (e.images.size() != units.size()) throw MalformedEmbedding("images must cover every source matrix unit exactly");
    for (const auto& u : units) {
        auto it = e.images.find(u);
        if (it == e.images.end()) throw MalformedEmbedding("missing image for a source matrix unit");
        for (const auto& t : it->second) {
            if (!h.has_edge(t.p, t.q)) throw MalformedEmbedding("image unit at a position outside the digraph");
            parent[find(slot(t.p, t.row))] = find(slot(t.q, t.col));
        }
    }

    // Each copy is one component. Diagonal unit images fix the copy's vertex
    // map and the target row carrying each source row.
    std::map<std::size_t, VertexMap> copy_map;
    std::map<std::size_t, std::vector<std::vector<std::size_t>>> copy_rows;
    for (Vertex v = 0; v < n; ++v)
        for (std::size_t a = 0; a < e.source.multiplicities[v]; ++a) {
            for (const auto& t : e.images.at(MatrixUnit{v, v, a, a})) {
                if (t.p != t.q || t.row != t.col) throw MalformedEmbedding("diagonal unit maps to an off-diagonal unit");
                const std::size_t comp = find(slot(t.p, t.row));
                auto& m = copy_map.try_emplace(comp, VertexMap(n, npos)).first->second;
                auto& rows = copy_rows.try_emplace(comp, std::vector<std::vector<std::size_t>>(n)).first->second;
                if (m[v] == npos) m[v] = t.p;
                if (m[v] != t.p) throw MalformedEmbedding("one copy sends a source block to two target blocks");
                rows[v].resize(e.source.multiplicities[v], npos);
                if (rows[v][a] != npos) throw MalformedEmbedding("copies are not disjoint: shared diagonal image");
                rows[v][a] = t.row;
            }
        }
    for (const auto& [comp, m] : copy_map) {
        const auto& rows = copy_rows.at(comp);
        for (Vertex v = 0; v < n; ++v) {
            if (m[v] == npos) throw MalformedEmbedding("a copy misses a source vertex");
            for (auto r : rows[v])
                if (r == npos) throw MalformedEmbedding("a copy misses a source row");
        }
    }

    // Each source unit must map to exactly one unit per copy, at the position the copy dictates.
    for (const auto& u : units) {
        const auto& img = e.images.at(u);
        if (img.size() != copy_map.size()) throw MalformedEmbedding("source unit image size differs from copy count");
        std::map<std::size_t, MatrixUnit> per_copy;
        for (const auto& t : img) {
            const std::size_t comp = find(slot(t.p, t.row));
            if (!copy_map.count(comp)) throw MalformedEmbedding("image unit outside every copy");
            if (!per_copy.emplace(comp, t).second) throw MalformedEmbedding("two image units in one copy");
        }
        for (const auto& [comp, t] : per_copy) {
            const auto& m = copy_map.at(comp);
            const auto& rows = copy_rows.at(comp);
            MatrixUnit expect{m[u.p], m[u.q], rows[u.p][u.row], rows[u.q][u.col]};
            if (!(t == expect)) throw MalformedEmbedding("matrix unit images are not multiplicative within a copy");
        }
    }

    Signature s = Signature::zero(family);
    for (const auto& [comp, m] : copy_map) {
        const std::size_t k = family->index_of(m);
        if (k == npos) throw MalformedEmbedding("copy's vertex map lies outside the requested family");
        s.counts[k] += 1;
    }
    return s;
}

}  // namespace ddg

#endif  // DDG_EMBEDDINGS_HPP

#ifndef DDG_IO_HPP
#define DDG_IO_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "ddg/cycles.hpp"
#include "ddg/ddgroup.hpp"
#include "ddg/digraph.hpp"
#include "ddg/embeddings.hpp"
#include "ddg/error.hpp"
#include "ddg/int_matrix.hpp"
#include "ddg/systems.hpp"

namespace ddg::io {

using nlohmann::json;

// Integers: JSON numbers when they fit in 64 bits, decimal strings otherwise.
// Both forms are accepted on input.

inline json integer_to_json(const Integer& x) {
    if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(x);
    return x.str();
}

inline Integer integer_from_json(const json& j) {
    if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
            throw InputError("not a decimal integer: \"" + s + "\"");
        return Integer(s);
    }
    throw InputError("expected an integer, got " + j.dump());
}

inline json vector_to_json(const IntVector& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(integer_to_json(x));
    return out;
}

inline IntVector vector_from_json(const json& j) {
    if (!j.is_array()) throw InputError("expected an array of integers");
    IntVector out;
    for (const auto& x : j) out.push_back(integer_from_json(x));
    return out;
}

inline std::size_t count_from_json(const json& j, const char* what) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw InputError(std::string(what) + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

// ---- matrices (decimal-string entries) --------------------------------------

inline json to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).str());
        rows.push_back(std::move(row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

inline IntMatrix matrix_from_json(const json& j) {
    const std::size_t r = count_from_json(field(j, "rows"), "rows");
    const std::size_t c = count_from_json(field(j, "cols"), "cols");
    const json& e = field(j, "entries");
    if (!e.is_array() || e.size() != r) throw InputError("matrix: entries must have one array per row");
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (!e[i].is_array() || e[i].size() != c) throw InputError("matrix: row length must equal cols");
        for (std::size_t k = 0; k < c; ++k) m(i, k) = integer_from_json(e[i][k]);
    }
    return m;
}

// ---- digraphs ---------------------------------------------------------------

inline json edge_to_json(const Edge& e) { return json::array({e.first, e.second}); }

inline Edge edge_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw InputError("edge must be a pair [i, j]");
    return {count_from_json(j[0], "vertex"), count_from_json(j[1], "vertex")};
}

inline json to_json(const Digraph& h) {
    json edges = json::array();
    for (const auto& e : h.proper_edges()) edges.push_back(edge_to_json(e));
    return {{"vertices", h.vertex_count()}, {"edges", std::move(edges)}};
}

inline Digraph digraph_from_json(const json& j) {
    const std::size_t n = count_from_json(field(j, "vertices"), "vertices");
    std::vector<Edge> edges;
    const json& e = field(j, "edges");
    if (!e.is_array()) throw InputError("edges must be an array");
    for (const auto& x : e) edges.push_back(edge_from_json(x));
    return Digraph(n, std::move(edges));
}

inline json to_json(const HAlgebra& a) {
    json j = to_json(a.digraph);
    j["multiplicities"] = a.multiplicities;
    return j;
}

inline std::vector<std::size_t> multiplicities_from_json(const json& j) {
    if (!j.is_array()) throw InputError("multiplicities must be an array");
    std::vector<std::size_t> m;
    for (const auto& x : j) m.push_back(count_from_json(x, "multiplicity"));
    return m;
}

inline HAlgebra algebra_from_json(const json& j) {
    return HAlgebra(digraph_from_json(j), multiplicities_from_json(field(j, "multiplicities")));
}

inline json to_json(const ValidationReport& rep) {
    json v = json::array();
    for (const auto& x : rep.violations) {
        json o = {{"kind", x.kind == ValidationReport::Violation::Kind::antisymmetry ? "antisymmetry" : "transitivity"},
                  {"edges", json::array({edge_to_json(x.first), edge_to_json(x.second)})}};
        if (x.missing) o["missing"] = edge_to_json(*x.missing);
        v.push_back(std::move(o));
    }
    return {{"valid", rep.ok()}, {"violations", std::move(v)}};
}

// ---- families and signatures ------------------------------------------------

inline const char* kind_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::all: return "all";
        case FamilyKind::automorphisms: return "automorphisms";
        case FamilyKind::non_degenerate: return "non_degenerate";
    }
    return "all";
}

inline json family_to_json(const ClassFamily& fam) {
    if (fam.is_explicit()) return fam.explicit_indices();
    return kind_name(fam.kind());
}

inline FamilyPtr family_from_json(const Digraph& h, const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "all") return ClassFamily::make(h, FamilyKind::all);
        if (s == "automorphisms" || s == "auto") return ClassFamily::make(h, FamilyKind::automorphisms);
        if (s == "non_degenerate" || s == "nondeg") return ClassFamily::make(h, FamilyKind::non_degenerate);
        throw InputError("unknown family \"" + s + "\"");
    }
    if (j.is_array()) {
        std::vector<std::size_t> idx;
        for (const auto& x : j) idx.push_back(count_from_json(x, "class index"));
        return ClassFamily::make_explicit(h, std::move(idx));
    }
    throw InputError("family must be a name or an index list");
}

inline json to_json(const Signature& s) {
    return {{"digraph", to_json(s.digraph())}, {"family", family_to_json(*s.family)}, {"counts", vector_to_json(s.counts)}};
}

/// `family` overrides the stored family description when the caller already has one.
inline Signature signature_from_json(const json& j, FamilyPtr family = nullptr) {
    if (!family) {
        const Digraph h = digraph_from_json(field(j, "digraph"));
        family = family_from_json(h, j.contains("family") ? j.at("family") : json("all"));
    }
    return Signature(std::move(family), vector_from_json(field(j, "counts")));
}

inline json classes_to_json(const ClassFamily& fam) {
    json out = json::array();
    for (const auto& b : fam.classes()) out.push_back(b);
    return out;
}

// ---- rank distributions -----------------------------------------------------

inline json to_json(const DDElement& g) {
    const Digraph& h = g.digraph;
    json loops = json::array(), edges = json::array();
    for (Vertex v = 0; v < h.vertex_count(); ++v) loops.push_back(integer_to_json(g.at(v, v)));
    for (const auto& e : h.proper_edges()) edges.push_back(json::array({edge_to_json(e), integer_to_json(g.at(e.first, e.second))}));
    return {{"digraph", to_json(h)}, {"loops", std::move(loops)}, {"edges", std::move(edges)}};
}

/// Edges not listed default to zero.
inline DDElement dd_from_json(const json& j, const Digraph* h_hint = nullptr) {
    const Digraph h = j.contains("digraph") ? digraph_from_json(j.at("digraph"))
                                            : (h_hint ? *h_hint : throw InputError("DDElement needs a digraph"));
    DDElement g = DDElement::zero(h);
    const IntVector loops = vector_from_json(field(j, "loops"));
    if (loops.size() != h.vertex_count()) throw InputError("DDElement: one loop value per vertex required");
    for (Vertex v = 0; v < loops.size(); ++v) g.at(v, v) = loops[v];
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw InputError("DDElement edges must be [[i,j], value] pairs");
            const Edge ed = edge_from_json(e[0]);
            if (!h.has_proper_edge(ed.first, ed.second)) throw InputError("DDElement: edge not in the digraph");
            g.at(ed.first, ed.second) = integer_from_json(e[1]);
        }
    }
    return g;
}

inline json to_json(const K0Element& k) { return vector_to_json(k.values); }

inline json to_json(const BoundaryPair& b) {
    return {{"final", to_json(b.final_part)}, {"initial", to_json(b.initial_part)}};
}

inline json to_json(const ScaleReport& r) {
    json cert = json::object();
    if (!r.reason.empty()) cert["reason"] = r.reason;
    if (r.vertex) cert["vertex"] = *r.vertex;
    if (r.negative_at) cert["negative_at"] = edge_to_json(*r.negative_at);
    return {{"member", r.member}, {"certificate", std::move(cert)}};
}

inline json to_json(const UniquenessReport& r) {
    json j = {{"classes", r.classes}, {"rank", r.rank}, {"uniqueness", r.unique}};
    json cert = {{"rank", r.rank}};
    if (!r.unique) cert["kernel_vector"] = vector_to_json(r.kernel_vector);
    j["certificate"] = std::move(cert);
    return j;
}

inline json to_json(const RecoveryResult& r) {
    json c = json::array();
    for (const auto& s : r.candidates) c.push_back(vector_to_json(s.counts));
    json j = {{"ambiguous", r.ambiguous()}, {"candidates", std::move(c)}};
    if (!r.ambiguous()) j["signature"] = to_json(r.signature());
    return j;
}

// ---- concrete embeddings ----------------------------------------------------

inline json unit_to_json(const MatrixUnit& u) { return json::array({u.p, u.q, u.row, u.col}); }

inline MatrixUnit unit_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw InputError("matrix unit must be [p, q, row, col]");
    return {count_from_json(j[0], "p"), count_from_json(j[1], "q"), count_from_json(j[2], "row"), count_from_json(j[3], "col")};
}

inline json to_json(const ConcreteEmbedding& e) {
    json units = json::array();
    for (const auto& [u, img] : e.images) {
        json targets = json::array();
        for (const auto& t : img) targets.push_back(unit_to_json(t));
        units.push_back(json::array({unit_to_json(u), std::move(targets)}));
    }
    return {{"source", to_json(e.source)}, {"target", to_json(e.target)}, {"units", std::move(units)}};
}

inline ConcreteEmbedding concrete_from_json(const json& j) {
    ConcreteEmbedding e{algebra_from_json(field(j, "source")), algebra_from_json(field(j, "target")), {}};
    for (const auto& pair : field(j, "units")) {
        if (!pair.is_array() || pair.size() != 2) throw InputError("units entries must be [unit, [targets]]");
        std::vector<MatrixUnit> img;
        for (const auto& t : pair[1]) img.push_back(unit_from_json(t));
        std::sort(img.begin(), img.end());
        e.images[unit_from_json(pair[0])] = std::move(img);
    }
    return e;
}

// ---- cycles -----------------------------------------------------------------

inline json to_json(const GroupRingElement& g) { return {{"m", g.m}, {"coefficients", vector_to_json(g.coefficients)}}; }

inline GroupRingElement group_ring_from_json(const json& j) {
    GroupRingElement g{count_from_json(field(j, "m"), "m"), vector_from_json(field(j, "coefficients"))};
    if (g.m < 2) throw InputError("group ring needs m >= 2");
    if (g.coefficients.size() != rigid_family(g.m)->size()) throw InputError("group ring element has the wrong length");
    return g;
}

// ---- systems ----------------------------------------------------------------

inline json to_json(const DirectSystem& sys) {
    json stages = json::array(), links = json::array();
    for (const auto& a : sys.stored_stages()) {
        if (sys.is_stationary() && !stages.empty()) break;
        stages.push_back(a.multiplicities);
    }
    for (const auto& s : sys.stored_links()) links.push_back(to_json(s));
    return {{"digraph", to_json(sys.digraph())}, {"stages", std::move(stages)}, {"links", std::move(links)},
            {"stationary", sys.is_stationary()}};
}

inline DirectSystem system_from_json(const json& j) {
    const Digraph h = digraph_from_json(field(j, "digraph"));
    std::vector<HAlgebra> stages;
    for (const auto& m : field(j, "stages")) stages.emplace_back(h, multiplicities_from_json(m));
    std::vector<Signature> links;
    FamilyPtr fam;
    for (const auto& l : field(j, "links")) {
        FamilyPtr f = family_from_json(h, l.contains("family") ? l.at("family") : json("all"));
        if (!fam) {
            fam = f;
        } else if (!same_family(fam, f)) {
            throw InputError("system links must share one family");
        }
        links.emplace_back(fam, vector_from_json(field(l, "counts")));
    }
    const bool stationary = j.value("stationary", false);
    if (stationary) {
        if (stages.empty() || links.size() != 1) throw InputError("stationary system needs a first stage and one link");
        return DirectSystem::stationary(stages.front(), links.front());
    }
    return DirectSystem::finite(std::move(stages), std::move(links));
}

inline json to_json(const IntertwineWitness& w) {
    json phi = json::array(), psi = json::array();
    for (const auto& s : w.phi) phi.push_back(vector_to_json(s.counts));
    for (const auto& s : w.psi) psi.push_back(vector_to_json(s.counts));
    return {{"depth", w.depth()}, {"a_stages", w.a_stages}, {"b_stages", w.b_stages}, {"phi", std::move(phi)}, {"psi", std::move(psi)}};
}

inline json to_json(const IntertwineResult& r) {
    json j = {{"found", r.witness.has_value()}, {"depth_searched", r.depth_searched}, {"mass_obstruction", r.mass_obstruction}};
    if (r.witness) j["witness"] = to_json(*r.witness);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline json to_json(const StationaryReport& r) {
    json j = {{"dimension", r.dimension},
              {"ranks", r.ranks},
              {"eventual_rank", r.eventual_rank},
              {"stabilization_stage", r.stabilization_stage}};
    if (r.spectral_lower) j["spectral_radius_bounds"] = json::array({integer_to_json(*r.spectral_lower), integer_to_json(*r.spectral_upper)});
    return j;
}

}  // namespace ddg::io

#endif  // DDG_IO_HPP

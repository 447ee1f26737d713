#ifndef DDG_REPRODUCTION_HPP
#define DDG_REPRODUCTION_HPP

// Acceptance battery: every published computation re-derived and compared
// against the printed data. Shared by the acceptance test binary and the
// `paper-check` subcommand.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ddg/cycles.hpp"
#include "ddg/ddgroup.hpp"
#include "ddg/digraph.hpp"
#include "ddg/embeddings.hpp"
#include "ddg/int_matrix.hpp"
#include "ddg/linalg.hpp"
#include "ddg/regular.hpp"
#include "ddg/systems.hpp"

namespace ddg::repro {

struct SubCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int number = 0;
    std::string title;
    std::vector<SubCheck> checks;
    double seconds = 0;

    bool pass() const {
        return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const SubCheck& c) { return c.pass; });
    }
};

// ---- printed data -----------------------------------------------------------

using SmallMatrix = std::vector<std::vector<int>>;

/// Printed T3 coefficient matrix, rows theta_1..theta_10, blocks (x, y, z).
inline const SmallMatrix& printed_10x18() {
    static const SmallMatrix m = {
        {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
        {0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0}, {1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0},
        {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0},
        {0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0}, {0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0},
        {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1},
    };
    return m;
}

/// The four rigid 4-cycle K_0 matrices, in printed order.
inline const std::vector<SmallMatrix>& printed_k0_list() {
    static const std::vector<SmallMatrix> m = {
        {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}},
        {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}},
        {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}},
        {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}},
    };
    return m;
}

/// Printed 8x8 G(phi); each entry lists the (1-based) r-indices summed there.
inline const std::vector<std::vector<std::vector<int>>>& printed_8x8() {
    static const std::vector<std::vector<std::vector<int>>> m = {
        {{1, 4}, {2, 3}, {}, {}, {}, {}, {}, {}},
        {{2, 3}, {1, 4}, {}, {}, {}, {}, {}, {}},
        {{}, {}, {1, 2}, {3, 4}, {}, {}, {}, {}},
        {{}, {}, {3, 4}, {1, 2}, {}, {}, {}, {}},
        {{}, {}, {}, {}, {1}, {4}, {3}, {2}},
        {{}, {}, {}, {}, {4}, {1}, {2}, {3}},
        {{}, {}, {}, {}, {3}, {2}, {1}, {4}},
        {{}, {}, {}, {}, {2}, {3}, {4}, {1}},
    };
    return m;
}

/// Printed m = 3 group-ring matrix; entry k stands for r_k.
inline const SmallMatrix& printed_6x6() {
    static const SmallMatrix m = {
        {1, 2, 5, 4, 3, 6}, {2, 1, 4, 3, 6, 5}, {3, 6, 5, 2, 1, 4},
        {4, 5, 6, 1, 2, 3}, {5, 4, 1, 6, 3, 2}, {6, 3, 2, 5, 4, 1},
    };
    return m;
}

// ---- helpers ----------------------------------------------------------------

inline SmallMatrix to_small(const IntMatrix& m) {
    SmallMatrix out(m.rows(), std::vector<int>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = static_cast<int>(m(i, j));
    return out;
}

inline IntMatrix from_small(const SmallMatrix& m) {
    IntMatrix out(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = m[i][j];
    return out;
}

inline std::string perm_string(const std::vector<std::size_t>& p, std::size_t offset = 1) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i] + offset;
    os << ")";
    return os.str();
}

inline std::vector<std::size_t> iota_perm(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return p;
}

/// Coefficient matrices of a linear matrix family: coeff[k] = M(e_k).
using LinearFamily = std::vector<SmallMatrix>;

/// Searches a class relabelling pi and a basis permutation sigma (applied to
/// rows and columns alike, restricted to `blocks`) with
/// printed[k](sigma(i), sigma(j)) = ours[pi(k)](i, j) for every k.
struct Relabeling {
    std::vector<std::size_t> classes;  ///< printed index k -> our class pi(k)
    std::vector<std::size_t> basis;    ///< our basis index i -> printed index sigma(i)
};

inline std::optional<Relabeling> find_relabeling(const LinearFamily& printed, const LinearFamily& ours,
                                                 const std::vector<std::vector<std::size_t>>& blocks) {
    const std::size_t nc = printed.size();
    const std::size_t dim = printed.front().size();
    // all block-preserving basis permutations
    std::vector<std::vector<std::size_t>> bases;
    {
        std::vector<std::vector<std::vector<std::size_t>>> per_block;
        for (const auto& b : blocks) {
            std::vector<std::vector<std::size_t>> ps;
            auto q = b;
            std::sort(q.begin(), q.end());
            do ps.push_back(q);
            while (std::next_permutation(q.begin(), q.end()));
            per_block.push_back(std::move(ps));
        }
        std::vector<std::size_t> sigma(dim);
        auto rec = [&](auto&& self, std::size_t bi) -> void {
            if (bi == blocks.size()) {
                bases.push_back(sigma);
                return;
            }
            for (const auto& img : per_block[bi]) {
                for (std::size_t t = 0; t < blocks[bi].size(); ++t) sigma[blocks[bi][t]] = img[t];
                self(self, bi + 1);
            }
        };
        rec(rec, 0);
    }
    auto pi = iota_perm(nc);
    do {
        for (const auto& sigma : bases) {
            bool ok = true;
            for (std::size_t k = 0; k < nc && ok; ++k) {
                const SmallMatrix& o = ours[pi[k]];
                const SmallMatrix& p = printed[k];
                for (std::size_t i = 0; i < dim && ok; ++i)
                    for (std::size_t j = 0; j < dim && ok; ++j)
                        if (p[sigma[i]][sigma[j]] != o[i][j]) ok = false;
            }
            if (ok) return Relabeling{pi, sigma};
        }
    } while (std::next_permutation(pi.begin(), pi.end()));
    return std::nullopt;
}

/// Coefficient matrices of a symbolic matrix whose entries are index lists.
inline LinearFamily symbolic_coefficients(const std::vector<std::vector<std::vector<int>>>& sym, std::size_t classes) {
    LinearFamily out(classes, SmallMatrix(sym.size(), std::vector<int>(sym.front().size(), 0)));
    for (std::size_t i = 0; i < sym.size(); ++i)
        for (std::size_t j = 0; j < sym[i].size(); ++j)
            for (int k : sym[i][j]) out[static_cast<std::size_t>(k - 1)][i][j] += 1;
    return out;
}

inline LinearFamily indexed_coefficients(const SmallMatrix& m, std::size_t classes) {
    std::vector<std::vector<std::vector<int>>> sym(m.size(), std::vector<std::vector<int>>(m.front().size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) sym[i][j] = {m[i][j]};
    return symbolic_coefficients(sym, classes);
}

inline bool is_latin(const SmallMatrix& m, std::string& where) {
    const std::size_t n = m.size();
    for (std::size_t j = 0; j < n; ++j) {
        std::set<int> seen;
        for (std::size_t i = 0; i < n; ++i)
            if (!seen.insert(m[i][j]).second) {
                where = "column " + std::to_string(j + 1) + " repeats r" + std::to_string(m[i][j]);
                return false;
            }
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::set<int> seen(m[i].begin(), m[i].end());
        if (seen.size() != n) {
            where = "row " + std::to_string(i + 1) + " repeats an entry";
            return false;
        }
    }
    return true;
}

/// Labelling pi (printed k -> our class) under which rows 2.. of `m` read
/// r_{theta_i theta_j} and row 1 reads r_{theta_j^-1}.
inline std::optional<std::vector<std::size_t>> cayley_reading(const SmallMatrix& m, const ClassFamily& fam) {
    const std::size_t n = fam.size();
    auto pi = iota_perm(n);
    do {
        std::vector<std::size_t> inv(n);
        for (std::size_t k = 0; k < n; ++k) inv[pi[k]] = k;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n && ok; ++j) {
                VertexMap g(fam[pi[j]].size());
                for (Vertex v = 0; v < g.size(); ++v) g[fam[pi[j]][v]] = v;
                const std::size_t want = i == 0 ? fam.index_of(g) : fam.compose_index(pi[i], pi[j]);
                ok = static_cast<std::size_t>(m[i][j] - 1) == inv[want];
            }
        if (ok) return pi;
    } while (std::next_permutation(pi.begin(), pi.end()));
    return std::nullopt;
}

class Random {
public:
    explicit Random(std::uint64_t seed) : gen_(seed) {}

    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }

    /// Nonzero signature with entries in [0, max_entry]; `density` is the chance an entry is nonzero.
    Signature signature(const FamilyPtr& fam, int max_entry, double density = 1.0) {
        for (;;) {
            Signature s = Signature::zero(fam);
            for (auto& c : s.counts)
                if (std::uniform_real_distribution<double>(0, 1)(gen_) < density)
                    c = std::uniform_int_distribution<int>(0, max_entry)(gen_);
            if (!s.is_zero()) return s;
        }
    }

    std::vector<std::size_t> multiplicities(std::size_t n, std::size_t max_mult) {
        std::vector<std::size_t> m(n);
        for (auto& x : m) x = 1 + below(max_mult);
        return m;
    }

private:
    std::mt19937_64 gen_;
};

inline std::vector<std::size_t> exact_fit(const Signature& s, const std::vector<std::size_t>& source_mult) {
    std::vector<std::size_t> out;
    for (const auto& x : required_capacity(s, source_mult)) out.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(x)));
    return out;
}

inline SubCheck sub(std::string name, bool pass, std::string detail = {}) {
    return SubCheck{std::move(name), pass, std::move(detail)};
}

// ---- criteria ---------------------------------------------------------------

inline Criterion check_class_counts() {
    Criterion c{1, "multiplicity-one class counts on chains", {}, 0};
    const std::array<std::size_t, 5> expected{1, 3, 10, 35, 126};
    std::ostringstream got;
    bool ok = true;
    for (std::size_t r = 1; r <= 5; ++r) {
        const std::size_t n = enumerate_endomorphisms(chain_digraph(r)).size();
        got << (r > 1 ? ", " : "") << n;
        ok = ok && n == expected[r - 1];
    }
    c.checks.push_back(sub("chain 1..5 counts = 1, 3, 10, 35, 126", ok, "got " + got.str()));
    return c;
}

inline Criterion check_ranks() {
    Criterion c{2, "coefficient-matrix ranks", {}, 0};
    auto t3 = ClassFamily::make(chain_digraph(3), FamilyKind::all);
    const IntMatrix x3 = coefficient_matrix(*t3);
    const std::size_t r3 = rank(x3);
    c.checks.push_back(sub("T3 all 10x18 rank 10", r3 == 10 && x3.rows() == 10 && x3.cols() == 18,
                           std::to_string(x3.rows()) + "x" + std::to_string(x3.cols()) + " rank " + std::to_string(r3)));
    // blocks for e12 = (0,1) and e23 = (1,2): our edge order is (0,1), (0,2), (1,2)
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < 6; ++j) cols.push_back(j);
    for (std::size_t j = 12; j < 18; ++j) cols.push_back(j);
    const std::size_t r12 = rank(x3.select_columns(cols));
    c.checks.push_back(sub("T3 restricted to e12, e23 blocks (12 columns) rank 9", r12 == 9, "rank " + std::to_string(r12)));
    auto t4 = ClassFamily::make(chain_digraph(4), FamilyKind::all);
    const IntMatrix x4 = coefficient_matrix(*t4);
    const std::size_t r4 = rank(x4);
    c.checks.push_back(sub("T4 all 35x60 rank 31", x4.rows() == 35 && x4.cols() == 60 && r4 == 31,
                           std::to_string(x4.rows()) + "x" + std::to_string(x4.cols()) + " rank " + std::to_string(r4)));
    auto t4n = ClassFamily::make(chain_digraph(4), FamilyKind::non_degenerate);
    const IntMatrix x4n = coefficient_matrix(*t4n);
    const std::size_t r4n = rank(x4n);
    c.checks.push_back(sub("T4 non-degenerate 31x60 rank 31", x4n.rows() == 31 && x4n.cols() == 60 && r4n == 31,
                           std::to_string(x4n.rows()) + "x" + std::to_string(x4n.cols()) + " rank " +
                               std::to_string(r4n)));
    return c;
}

struct PrintedMatch {
    std::vector<std::size_t> block_perm;  ///< printed block b is our edge block block_perm[b]
    std::vector<std::size_t> row_perm;    ///< printed row i is our class row_perm[i]
};

/// Finds the generator-block permutation and row matching that turn the
/// computed T3 coefficient matrix into the printed one.
inline std::optional<PrintedMatch> match_printed_10x18() {
    auto fam = ClassFamily::make(chain_digraph(3), FamilyKind::all);
    const SmallMatrix ours = to_small(coefficient_matrix(*fam));
    const SmallMatrix& printed = printed_10x18();
    auto bp = iota_perm(3);
    do {
        SmallMatrix permuted(10, std::vector<int>(18));
        for (std::size_t i = 0; i < 10; ++i)
            for (std::size_t b = 0; b < 3; ++b)
                for (std::size_t t = 0; t < 6; ++t) permuted[i][b * 6 + t] = ours[i][bp[b] * 6 + t];
        std::vector<std::size_t> rows;
        std::vector<char> used(10, 0);
        for (std::size_t i = 0; i < 10; ++i) {
            for (std::size_t k = 0; k < 10; ++k)
                if (!used[k] && permuted[k] == printed[i]) {
                    rows.push_back(k);
                    used[k] = 1;
                    break;
                }
            if (rows.size() != i + 1) break;
        }
        if (rows.size() == 10) return PrintedMatch{bp, rows};
    } while (std::next_permutation(bp.begin(), bp.end()));
    return std::nullopt;
}

inline Criterion check_printed_matrix() {
    Criterion c{3, "printed 10x18 coefficient matrix", {}, 0};
    auto m = match_printed_10x18();
    if (!m) {
        c.checks.push_back(sub("match up to row and generator-block permutation", false, "no permutation found"));
        return c;
    }
    const Digraph t3 = chain_digraph(3);
    std::ostringstream blocks;
    for (std::size_t b = 0; b < 3; ++b) {
        const Edge e = t3.proper_edges()[m->block_perm[b]];
        blocks << (b ? ", " : "") << "xyz"[b] << "=(" << e.first << "," << e.second << ")";
    }
    std::vector<std::size_t> documented = iota_perm(10);
    std::swap(documented[2], documented[3]);
    c.checks.push_back(sub("row permutation is the documented swap of rows 3 and 4", m->row_perm == documented,
                           "rows " + perm_string(m->row_perm) + ", blocks " + blocks.str()));
    return c;
}

inline Criterion check_uniqueness() {
    Criterion c{4, "uniqueness-property verdicts", {}, 0};
    auto verdict = [&](const std::string& name, const FamilyPtr& fam, bool expected) {
        const UniquenessReport u = uniqueness_property(*fam);
        c.checks.push_back(sub(name + (expected ? " -> true" : " -> false"), u.unique == expected,
                               "rank " + std::to_string(u.rank) + " of " + std::to_string(u.classes)));
        return u;
    };
    verdict("T2 all", ClassFamily::make(chain_digraph(2), FamilyKind::all), true);
    verdict("T3 all", ClassFamily::make(chain_digraph(3), FamilyKind::all), true);
    auto t4 = ClassFamily::make(chain_digraph(4), FamilyKind::all);
    const UniquenessReport u4 = verdict("T4 all", t4, false);
    if (!u4.unique) {
        auto [s1, s2] = split_kernel_vector(t4, u4.kernel_vector);
        const bool distinct = !(s1 == s2);
        const bool same_images = generator_images(s1) == generator_images(s2);
        bool reported = false;
        try {
            const RecoveryResult r = recover_signature(t4, generator_images(s1));
            reported = r.ambiguous() && std::find(r.candidates.begin(), r.candidates.end(), s1) != r.candidates.end() &&
                       std::find(r.candidates.begin(), r.candidates.end(), s2) != r.candidates.end();
        } catch (const std::exception&) {
        }
        c.checks.push_back(sub("T4 kernel certificate gives distinct signatures with equal images",
                               distinct && same_images && reported,
                               "masses " + s1.mass().str() + " and " + s2.mass().str() +
                                   (reported ? ", both listed in the ambiguity report" : "")));
    }
    verdict("T4 non-degenerate", ClassFamily::make(chain_digraph(4), FamilyKind::non_degenerate), true);
    verdict("cycle 4 automorphisms", rigid_family(2), true);
    return c;
}

inline Criterion check_recovery(std::uint64_t seed) {
    Criterion c{5, "signature recovery round trip", {}, 0};
    Random rng(seed);
    auto run = [&](const std::string& name, const FamilyPtr& fam, int trials) {
        int ok = 0, ambiguous = 0;
        const HAlgebra src = HAlgebra::of(fam->digraph());
        for (int t = 0; t < trials; ++t) {
            const Signature s = rng.signature(fam, 5);
            const ConcreteEmbedding e = realize(s, src, exact_fit(s, src.multiplicities));
            std::vector<DDElement> images;
            for (const auto& edge : fam->digraph().proper_edges()) images.push_back(rank_distribution(e, edge));
            try {
                const RecoveryResult r = recover_signature(fam, images);
                if (r.ambiguous()) ++ambiguous;
                else if (r.signature() == s) ++ok;
            } catch (const std::exception&) {
            }
        }
        c.checks.push_back(sub(name, ok == trials,
                               std::to_string(ok) + "/" + std::to_string(trials) + " recovered exactly, " +
                                   std::to_string(ambiguous) + " ambiguous"));
    };
    run("200 random T3 signatures (entries <= 5)", ClassFamily::make(chain_digraph(3), FamilyKind::all), 200);
    run("200 random T4 non-degenerate signatures (entries <= 5)",
        ClassFamily::make(chain_digraph(4), FamilyKind::non_degenerate), 200);
    return c;
}

/// Oracle agreement and functoriality over one family.
inline SubCheck oracle_suite(const std::string& name, const FamilyPtr& fam, int trials, Random& rng) {
    const Digraph& h = fam->digraph();
    int failures = 0;
    std::string first_failure;
    auto fail = [&](const std::string& what) {
        if (failures++ == 0) first_failure = what;
    };
    const auto edges = h.reflexive_edges();
    for (int t = 0; t < trials; ++t) {
        const Signature s = rng.signature(fam, 3, 0.5);
        const Signature u = rng.signature(fam, 3, 0.5);
        const HAlgebra src(h, rng.multiplicities(h.vertex_count(), 2));
        const ConcreteEmbedding es = realize(s, src, exact_fit(s, src.multiplicities));
        const IntMatrix ds = induced_dd_map(s);
        for (std::size_t c = 0; c < edges.size(); ++c)
            if (rank_distribution(es, edges[c]).values != ds.column(c)) fail("rank distribution vs induced column");
        if (!(loop_block(ds, h.vertex_count()) == k0_matrix(s))) fail("loop block vs K0 matrix");
        const Signature su = compose_signatures(s, u);
        if (!(induced_dd_map(su) == ds * induced_dd_map(u))) fail("induced_dd_map functoriality");
        if (!(induced_regular_map(su) == induced_regular_map(s) * induced_regular_map(u)))
            fail("induced_regular_map functoriality");
        // concrete composition: realize u first, then s on u's target
        const ConcreteEmbedding eu = realize(u, src, exact_fit(u, src.multiplicities));
        const ConcreteEmbedding es2 = realize(s, eu.target, exact_fit(s, eu.target.multiplicities));
        if (!(signature_of_concrete(compose_concrete(es2, eu), fam) == su)) fail("concrete composition vs compose_signatures");
    }
    return sub(name, failures == 0,
               std::to_string(trials) + " trials" + (failures ? ", " + std::to_string(failures) + " failures, first: " + first_failure : ""));
}

inline Criterion check_oracles(std::uint64_t seed) {
    Criterion c{6, "oracle agreement and functoriality", {}, 0};
    Random rng(seed + 6);
    for (std::size_t r : {2, 3, 4})
        c.checks.push_back(oracle_suite("chain " + std::to_string(r), ClassFamily::make(chain_digraph(r), FamilyKind::all), 100, rng));
    c.checks.push_back(oracle_suite("cycle 4", ClassFamily::make(cycle_digraph(2), FamilyKind::all), 100, rng));
    return c;
}

/// Rank distributions of all normalized partial isometries in `a`: subsets of
/// matrix units with pairwise distinct rows and pairwise distinct columns.
inline std::set<IntVector> partial_isometry_classes(const HAlgebra& a) {
    const auto units = matrix_units(a);
    std::vector<std::size_t> offset(a.digraph.vertex_count() + 1, 0);
    for (Vertex v = 0; v < a.digraph.vertex_count(); ++v) offset[v + 1] = offset[v] + a.multiplicities[v];
    std::set<IntVector> out;
    std::vector<char> row_used(offset.back(), 0), col_used(offset.back(), 0);
    DDElement g = DDElement::zero(a.digraph);
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == units.size()) {
            out.insert(g.values);
            return;
        }
        self(self, k + 1);
        const MatrixUnit& u = units[k];
        const std::size_t r = offset[u.p] + u.row, c = offset[u.q] + u.col;
        if (row_used[r] || col_used[c]) return;
        row_used[r] = col_used[c] = 1;
        g.at(u.p, u.q) += 1;
        self(self, k + 1);
        g.at(u.p, u.q) -= 1;
        row_used[r] = col_used[c] = 0;
    };
    rec(rec, 0);
    return out;
}

/// Achievable classes through embeddings: images under every capacity-feasible
/// signature from A(H) of every partial isometry of A(H).
inline std::set<IntVector> realized_classes(const HAlgebra& target, int max_entry) {
    const Digraph& h = target.digraph;
    auto fam = ClassFamily::make(h, FamilyKind::all);
    const HAlgebra src = HAlgebra::of(h);
    std::set<IntVector> out{IntVector(dd_dimension(h))};
    const auto units = matrix_units(src);
    Signature s = Signature::zero(fam);
    auto visit = [&]() {
        if (s.is_zero() || capacity_violation(s, src.multiplicities, target.multiplicities)) return;
        const ConcreteEmbedding e = realize(s, src, target.multiplicities);
        for (std::size_t mask = 0; mask < (std::size_t{1} << units.size()); ++mask) {
            std::set<Vertex> rows, cols;
            bool ok = true;
            for (std::size_t k = 0; k < units.size() && ok; ++k)
                if (mask >> k & 1) ok = rows.insert(units[k].p).second && cols.insert(units[k].q).second;
            if (!ok) continue;
            DDElement g = DDElement::zero(h);
            for (std::size_t k = 0; k < units.size(); ++k)
                if (mask >> k & 1)
                    for (const auto& t : e.images.at(units[k])) g.at(t.p, t.q) += 1;
            out.insert(g.values);
        }
    };
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == fam->size()) {
            visit();
            return;
        }
        for (int c = 0; c <= max_entry; ++c) {
            s.counts[k] = c;
            if (!s.is_zero() && capacity_violation(s, src.multiplicities, target.multiplicities)) break;
            self(self, k + 1);
        }
        s.counts[k] = 0;
    };
    rec(rec, 0);
    return out;
}

inline std::set<IntVector> scale_members(const HAlgebra& a, int max_entry) {
    const std::size_t d = dd_dimension(a.digraph);
    std::set<IntVector> out;
    DDElement g = DDElement::zero(a.digraph);
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == d) {
            if (scale_membership(a, g).member) out.insert(g.values);
            return;
        }
        for (int v = 0; v <= max_entry; ++v) {
            g.values[k] = v;
            self(self, k + 1);
        }
        g.values[k] = 0;
    };
    rec(rec, 0);
    return out;
}

/// 0-1 elements with at most one nonzero entry in each row and column of the
/// upper-triangular block picture.
inline std::set<IntVector> zero_one_description(const Digraph& h) {
    const auto pos = h.reflexive_edges();
    std::set<IntVector> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << pos.size()); ++mask) {
        std::set<Vertex> rows, cols;
        bool ok = true;
        IntVector g(pos.size());
        for (std::size_t k = 0; k < pos.size() && ok; ++k)
            if (mask >> k & 1) {
                ok = rows.insert(pos[k].first).second && cols.insert(pos[k].second).second;
                g[k] = 1;
            }
        if (ok) out.insert(g);
    }
    return out;
}

inline Criterion check_scale() {
    Criterion c{7, "scale characterization", {}, 0};
    const HAlgebra a111(chain_digraph(3), {1, 1, 1});
    const auto realized = realized_classes(a111, 1);
    const auto members = scale_members(a111, 2);
    const auto zero_one = zero_one_description(a111.digraph);
    c.checks.push_back(sub("T3 (1,1,1): realized classes = scale_membership set", realized == members,
                           std::to_string(realized.size()) + " realized, " + std::to_string(members.size()) + " members"));
    c.checks.push_back(sub("T3 (1,1,1): scale = 0-1 elements with at most one nonzero per row and column",
                           members == zero_one, std::to_string(zero_one.size()) + " zero-one elements"));
    const HAlgebra a212(chain_digraph(3), {2, 1, 2});
    const auto direct = partial_isometry_classes(a212);
    const auto members212 = scale_members(a212, 3);
    c.checks.push_back(sub("T3 (2,1,2): partial-isometry classes = scale_membership set (entries <= 3)",
                           direct == members212,
                           std::to_string(direct.size()) + " classes, " + std::to_string(members212.size()) + " members"));
    return c;
}

inline LinearFamily basis_images(std::size_t classes, const std::function<IntMatrix(const IntVector&)>& f) {
    LinearFamily out;
    for (std::size_t k = 0; k < classes; ++k) {
        IntVector e(classes);
        e[k] = 1;
        out.push_back(to_small(f(e)));
    }
    return out;
}

inline Criterion check_cycles(std::uint64_t seed) {
    Criterion c{8, "cycle algebras", {}, 0};
    auto rf = rigid_family(2);
    std::optional<std::vector<std::size_t>> k0_labels;
    // 8a: K0 list up to one vertex relabelling
    {
        LinearFamily ours;
        for (const auto& m : rigid_k0_matrices(2)) ours.push_back(to_small(m));
        auto r = find_relabeling(printed_k0_list(), ours, {{0, 1, 2, 3}});
        std::string d = "no relabelling";
        if (r) {
            k0_labels = r->classes;
            d = "printed theta_k = our class";
            for (std::size_t k = 0; k < 4; ++k) {
                d += (k ? ", " : " ");
                for (auto v : (*rf)[r->classes[k]]) d += std::to_string(v);
            }
            d += "; vertices " + perm_string(r->basis);
        }
        c.checks.push_back(sub("8a K0 matrices of rigid 4-cycle classes match the printed four", r.has_value(), d));
    }
    // 8b: G(phi)
    {
        const LinearFamily printed = symbolic_coefficients(printed_8x8(), 4);
        const LinearFamily ours = basis_images(4, [&](const IntVector& e) { return g_phi_matrix(Signature(rf, e)); });
        auto r = find_relabeling(printed, ours, {{0, 1, 2, 3}, {4, 5, 6, 7}});
        std::string d = "no relabelling";
        if (r) {
            d = "classes " + perm_string(r->classes) + ", basis " + perm_string(r->basis);
            if (k0_labels && r->classes == *k0_labels) d += "; same class labelling as 8a";
        }
        c.checks.push_back(sub("8b G(phi) matches the printed 8x8 for all signatures", r.has_value(), d));
    }
    // 8c: m = 3 group ring
    {
        const auto fam3 = rigid_family(3);
        const LinearFamily ours = basis_images(6, [](const IntVector& e) { return group_ring_left_mult_matrix(3, e); });
        auto r = find_relabeling(indexed_coefficients(printed_6x6(), 6), ours, {{0, 1, 2, 3, 4, 5}});
        std::string d;
        std::string where;
        if (r) {
            d = "classes " + perm_string(r->classes) + ", basis " + perm_string(r->basis);
        } else {
            d = "no relabelling";
            if (!is_latin(printed_6x6(), where)) d += " (printed matrix is not a Latin square: " + where + ")";
            if (auto pi = cayley_reading(printed_6x6(), *fam3))
                d += "; rows 2-6 are the table theta_i theta_j and row 1 lists theta_j^-1, under classes " +
                     perm_string(*pi);
        }
        c.checks.push_back(sub("8c group-ring matrix (m=3) matches the printed 6x6", r.has_value(), d));
    }
    // 8d: H1
    {
        Random rng(seed + 8);
        bool mult = true;
        for (int t = 0; t < 100; ++t) {
            const Signature s = rng.signature(rf, 4), u = rng.signature(rf, 4);
            if (h1_of_signature(compose_signatures(s, u)) != h1_of_signature(s) * h1_of_signature(u)) mult = false;
        }
        const bool id = h1_of_signature(Signature::identity(rf)) == 1;
        // printed K0-list order: id, swap sinks, swap both, swap sources
        Signature p = Signature::zero(rf);
        p.counts[rf->index_of({0, 1, 2, 3})] = 2;
        p.counts[rf->index_of({0, 1, 3, 2})] = 1;
        p.counts[rf->index_of({1, 0, 3, 2})] = 3;
        p.counts[rf->index_of({1, 0, 2, 3})] = 1;
        const Integer v = h1_of_signature(p);
        c.checks.push_back(sub("8d h1(identity) = 1, h1 multiplicative, (2,1,3,1) -> 3", id && mult && v == 3,
                               "h1(2,1,3,1) = " + v.str()));
    }
    return c;
}

inline Criterion check_reduced_family(std::uint64_t seed) {
    Criterion c{9, "reduced family of refinement, standard and degenerate embeddings", {}, 0};
    const ReducedFamily g = reduced_family_g();
    Random rng(seed + 9);
    auto coeffs = [&]() {
        IntVector v(3);
        do {
            for (auto& x : v) x = static_cast<long>(rng.below(5));
        } while (v[0].is_zero() && v[1].is_zero() && v[2].is_zero());
        return v;
    };
    int matrix_fail = 0, oracle_fail = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        const IntVector a = coeffs(), b = coeffs();
        const IntMatrix ma = g.induced_matrix(a), mb = g.induced_matrix(b);
        const IntVector ab = g.compose(a, b);
        if (!(ma == g_family_pattern(a[0], a[1], a[2])) || !(mb == g_family_pattern(b[0], b[1], b[2])) ||
            !(g.induced_matrix(ab) == ma * mb))
            ++matrix_fail;
        const Signature sa = g.expand(a), sb = g.expand(b);
        const HAlgebra src = HAlgebra::of(sb.digraph());
        const ConcreteEmbedding eb = realize(sb, src, exact_fit(sb, src.multiplicities));
        const ConcreteEmbedding ea = realize(sa, eb.target, exact_fit(sa, eb.target.multiplicities));
        const auto x = g.coordinates(signature_of_concrete(compose_concrete(ea, eb), g.base));
        if (!x || *x != ab || !(g_family_pattern((*x)[0], (*x)[1], (*x)[2]) == ma * mb)) ++oracle_fail;
    }
    c.checks.push_back(sub("matrix level: {r,s,t} -> [[r,0,0],[s,r+s,0],[t,t,r+s+t]], products compose",
                           matrix_fail == 0, std::to_string(trials) + " pairs, " + std::to_string(matrix_fail) + " failures"));
    c.checks.push_back(sub("concrete oracle composition agrees", oracle_fail == 0,
                           std::to_string(trials) + " pairs, " + std::to_string(oracle_fail) + " failures"));
    return c;
}

inline Criterion check_intertwining() {
    Criterion c{10, "intertwiner search", {}, 0};
    auto fam = ClassFamily::make(chain_digraph(3), FamilyKind::all);
    const HAlgebra a0 = HAlgebra::of(chain_digraph(3));
    auto sig = [&](std::initializer_list<VertexMap> classes) {
        Signature s = Signature::zero(fam);
        for (const auto& b : classes) s.counts[fam->index_of(b)] += 1;
        return s;
    };
    const DirectSystem a = DirectSystem::stationary(a0, sig({{0, 1, 2}, {0, 1, 1}}));
    IntertwineOptions opt;
    opt.multiplicity_bound = 4;
    auto timed = [&](const DirectSystem& x, const DirectSystem& y, std::size_t depth, double& secs) {
        opt.depth = depth;
        const auto t0 = std::chrono::steady_clock::now();
        IntertwineResult r = intertwine_search(x, y, opt);
        secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    };
    auto fmt = [](double s) {
        std::ostringstream os;
        os.precision(3);
        os << s << " s";
        return os.str();
    };
    {
        double secs = 0;
        const IntertwineResult r = timed(a, a, 1, secs);
        const bool ok = r.witness && r.witness->depth() == 1 && verify_witness(a, a, *r.witness) && secs < 10;
        c.checks.push_back(sub("identical systems -> witness at depth 1", ok, fmt(secs)));
    }
    struct Variant {
        std::string name;
        DirectSystem sys;
    };
    std::vector<Variant> variants;
    variants.push_back({"telescoped by 2", telescope(a, 2, 8)});
    variants.push_back({"identity link inserted at stage 1", insert_identity(a, 1, 10)});
    {
        std::vector<HAlgebra> st;
        std::vector<Signature> ln;
        for (std::size_t k = 1; k < 11; ++k) {
            st.push_back(a.stage(k));
            if (k + 1 < 11) ln.push_back(a.link(k));
        }
        variants.push_back({"delayed by one stage", DirectSystem::finite(std::move(st), std::move(ln))});
    }
    for (const auto& v : variants) {
        double secs = 0;
        const IntertwineResult r = timed(a, v.sys, 3, secs);
        const bool ok = r.witness && r.witness->depth() <= 3 && verify_witness(a, v.sys, *r.witness) && secs < 10;
        c.checks.push_back(sub(v.name + " -> witness within depth 3", ok,
                               (r.witness ? "depth " + std::to_string(r.witness->depth()) + ", " : "none, ") + fmt(secs)));
    }
    {
        const DirectSystem b = DirectSystem::stationary(a0, sig({{0, 1, 2}, {0, 1, 1}, {2, 2, 2}}));
        double secs = 0;
        const IntertwineResult r = timed(a, b, 4, secs);
        const bool ok = !r.witness && r.depth_searched == 4 && r.mass_obstruction && secs < 10;
        c.checks.push_back(sub("total multiplicity 2 vs 3 -> no witness through depth 4, mass obstruction", ok,
                               r.note + ", " + fmt(secs)));
    }
    return c;
}

inline std::vector<Criterion> run_all(std::uint64_t seed = 20240601) {
    std::vector<std::function<Criterion()>> steps = {
        [] { return check_class_counts(); },
        [] { return check_ranks(); },
        [] { return check_printed_matrix(); },
        [] { return check_uniqueness(); },
        [seed] { return check_recovery(seed); },
        [seed] { return check_oracles(seed); },
        [] { return check_scale(); },
        [seed] { return check_cycles(seed); },
        [seed] { return check_reduced_family(seed); },
        [] { return check_intertwining(); },
    };
    std::vector<Criterion> out;
    for (auto& step : steps) {
        const auto t0 = std::chrono::steady_clock::now();
        Criterion c = step();
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(c));
    }
    return out;
}

inline void print_report(std::ostream& os, const std::vector<Criterion>& results) {
    for (const auto& c : results) {
        os << (c.pass() ? "PASS" : "FAIL") << "  criterion " << c.number << ": " << c.title << "\n";
        for (const auto& s : c.checks)
            os << "        " << (s.pass ? "ok     " : "FAILED ") << s.name << (s.detail.empty() ? "" : "  [" + s.detail + "]")
               << "\n";
    }
}

}  // namespace ddg::repro

#endif  // DDG_REPRODUCTION_HPP

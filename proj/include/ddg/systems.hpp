#ifndef DDG_SYSTEMS_HPP
#define DDG_SYSTEMS_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddg/ddgroup.hpp"
#include "ddg/digraph.hpp"
#include "ddg/embeddings.hpp"
#include "ddg/error.hpp"
#include "ddg/int_matrix.hpp"
#include "ddg/linalg.hpp"

namespace ddg {

/// Direct system of H-algebras joined by regular embeddings. A stationary
/// system stores one stage and one link and grows unitally on demand:
/// multiplicities of stage k+1 = K_0(link) . multiplicities of stage k.
class DirectSystem {
public:
    DirectSystem() = default;

    static DirectSystem finite(std::vector<HAlgebra> stages, std::vector<Signature> links) {
        if (stages.empty()) throw InputError("DirectSystem: need at least one stage");
        if (links.size() + 1 != stages.size()) throw InputError("DirectSystem: need exactly one link per consecutive stage pair");
        DirectSystem sys;
        sys.stages_.assign(stages.begin(), stages.end());
        sys.links_ = std::move(links);
        sys.check_links(0);
        return sys;
    }

    static DirectSystem stationary(HAlgebra first, Signature link) {
        if (!(first.digraph == link.digraph())) throw InputError("DirectSystem: link over a different digraph");
        if (link.is_zero()) throw InputError("DirectSystem: zero link");
        DirectSystem sys;
        sys.stationary_ = true;
        sys.stages_.push_back(std::move(first));
        sys.links_.push_back(std::move(link));
        return sys;
    }

    bool is_stationary() const noexcept { return stationary_; }
    const Digraph& digraph() const { return stages_.front().digraph; }
    const FamilyPtr& family() const { return links_.empty() ? empty_family() : links_.front().family; }

    /// Number of stages available without extension; unbounded when stationary.
    std::optional<std::size_t> stage_count() const {
        if (stationary_) return std::nullopt;
        return stages_.size();
    }

    bool has_stage(std::size_t k) const { return stationary_ || k < stages_.size(); }

    const HAlgebra& stage(std::size_t k) const {
        if (!has_stage(k))
            throw InputError("DirectSystem: stage " + std::to_string(k) + " out of range (system has " +
                             std::to_string(stages_.size()) + " stages)");
        while (stages_.size() <= k) {
            const IntVector next = k0_matrix(links_.front()) * to_vector(stages_.back().multiplicities);
            std::vector<std::size_t> mult;
            for (const auto& x : next) mult.push_back(static_cast<std::size_t>(x));
            stages_.emplace_back(stages_.back().digraph, std::move(mult));
        }
        return stages_[k];
    }

    const Signature& link(std::size_t k) const {
        if (stationary_) return links_.front();
        if (k >= links_.size()) throw InputError("DirectSystem: link " + std::to_string(k) + " out of range");
        return links_[k];
    }

    /// Stored links (one for a stationary system).
    const std::vector<Signature>& stored_links() const noexcept { return links_; }
    const std::deque<HAlgebra>& stored_stages() const noexcept { return stages_; }

    /// Signature of the embedding from stage k to stage n >= k.
    Signature composite(std::size_t k, std::size_t n) const {
        if (n < k) throw InputError("DirectSystem: composite needs k <= n");
        stage(n);
        auto key = std::make_pair(k, n);
        if (auto it = composites_.find(key); it != composites_.end()) return it->second;
        Signature s = k == n ? Signature::identity(family()) : compose_signatures(link(n - 1), composite(k, n - 1));
        composites_.emplace(key, s);
        return s;
    }

    /// Finite prefix with `count` stages.
    DirectSystem truncate(std::size_t count) const {
        if (count == 0) throw InputError("truncate: need at least one stage");
        stage(count - 1);
        std::vector<HAlgebra> st(stages_.begin(), stages_.begin() + static_cast<std::ptrdiff_t>(count));
        std::vector<Signature> ln;
        for (std::size_t k = 0; k + 1 < count; ++k) ln.push_back(link(k));
        return finite(std::move(st), std::move(ln));
    }

private:
    static IntVector to_vector(const std::vector<std::size_t>& v) {
        IntVector out;
        for (auto x : v) out.emplace_back(x);
        return out;
    }

    static const FamilyPtr& empty_family() {
        static const FamilyPtr none;
        return none;
    }

    void check_links(std::size_t from) const {
        for (std::size_t k = from; k < links_.size(); ++k) {
            const Signature& s = links_[k];
            if (!(s.digraph() == stages_[k].digraph) || !(stages_[k + 1].digraph == stages_[k].digraph))
                throw InputError("DirectSystem: stages and links must share one digraph");
            if (!same_family(s.family, links_.front().family)) throw InputError("DirectSystem: links use different families");
            if (s.is_zero()) throw InputError("DirectSystem: zero link at " + std::to_string(k));
            if (auto v = capacity_violation(s, stages_[k].multiplicities, stages_[k + 1].multiplicities))
                throw CapacityError(*v, "", "DirectSystem: link " + std::to_string(k) + " exceeds block size at vertex " +
                                                std::to_string(*v));
        }
    }

    bool stationary_ = false;
    mutable std::deque<HAlgebra> stages_;  // deque: references survive on-demand growth
    std::vector<Signature> links_;
    mutable std::map<std::pair<std::size_t, std::size_t>, Signature> composites_;
};

/// Products of stationary links from stage 0: the system seen every `stride` stages.
inline DirectSystem telescope(const DirectSystem& sys, std::size_t stride, std::size_t count) {
    if (stride == 0) throw InputError("telescope: stride must be positive");
    std::vector<HAlgebra> st;
    std::vector<Signature> ln;
    for (std::size_t k = 0; k < count; ++k) {
        st.push_back(sys.stage(k * stride));
        if (k + 1 < count) ln.push_back(sys.composite(k * stride, (k + 1) * stride));
    }
    return DirectSystem::finite(std::move(st), std::move(ln));
}

/// Repeats stage `at` with an identity link; `count` stages of the original are kept.
inline DirectSystem insert_identity(const DirectSystem& sys, std::size_t at, std::size_t count) {
    std::vector<HAlgebra> st;
    std::vector<Signature> ln;
    for (std::size_t k = 0; k < count; ++k) {
        st.push_back(sys.stage(k));
        if (k == at) {
            st.push_back(sys.stage(k));
            ln.push_back(Signature::identity(sys.family()));
        }
        if (k + 1 < count) ln.push_back(sys.link(k));
    }
    return DirectSystem::finite(std::move(st), std::move(ln));
}

// ---- limit queries ----------------------------------------------------------

inline DDElement push_forward(const DirectSystem& sys, const DDElement& g, std::size_t from, std::size_t to) {
    if (!(g.digraph == sys.digraph())) throw InputError("push_forward: element over a different digraph");
    return apply(induced_dd_map(sys.composite(from, to)), g);
}

struct LimitVerdict {
    bool holds = false;          ///< equal / positive by stage `stage`
    std::size_t stage = 0;       ///< first stage where it holds, or the last stage inspected
    bool conclusive() const noexcept { return holds; }
};

/// g at stage k and h at stage l agree in the limit if their images agree at some stage n <= depth.
inline LimitVerdict equal_in_limit(const DirectSystem& sys, const DDElement& g, std::size_t k, const DDElement& h,
                                   std::size_t l, std::size_t depth) {
    const std::size_t start = std::max(k, l);
    if (depth < start) throw InputError("equal_in_limit: depth precedes the stages of the elements");
    for (std::size_t n = start; n <= depth; ++n)
        if (push_forward(sys, g, k, n) == push_forward(sys, h, l, n)) return {true, n};
    return {false, depth};
}

inline LimitVerdict positive_in_limit(const DirectSystem& sys, const DDElement& g, std::size_t k, std::size_t depth) {
    if (depth < k) throw InputError("positive_in_limit: depth precedes the element's stage");
    for (std::size_t n = k; n <= depth; ++n) {
        const DDElement p = push_forward(sys, g, k, n);
        if (std::all_of(p.values.begin(), p.values.end(), [](const Integer& x) { return x >= 0; })) return {true, n};
    }
    return {false, depth};
}

/// Loop blocks of the first `count` links (all stored links when omitted on a finite system).
inline std::vector<IntMatrix> k0_subsystem(const DirectSystem& sys, std::optional<std::size_t> count = std::nullopt) {
    std::size_t n = 0;
    if (count) {
        n = *count;
    } else if (auto sc = sys.stage_count()) {
        n = *sc - 1;
    } else {
        n = 1;
    }
    std::vector<IntMatrix> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(k0_matrix(sys.link(k)));
    return out;
}

struct StationaryReport {
    std::size_t dimension = 0;
    std::vector<std::size_t> ranks;  ///< rank(A^n) for n = 0..stabilization+1
    std::size_t eventual_rank = 0;
    std::size_t stabilization_stage = 0;  ///< least n with rank(A^n) = rank(A^{n+1})
    std::optional<Integer> spectral_lower;  ///< for a nonnegative loop block
    std::optional<Integer> spectral_upper;
};

/// Eventual rank and stabilization of powers of A; Perron bounds from row and
/// column sums of `loops` when it is nonnegative.
inline StationaryReport stationary_analysis(const IntMatrix& a, const IntMatrix& loops) {
    if (a.rows() != a.cols()) throw InputError("stationary_analysis: square matrix required");
    StationaryReport rep;
    rep.dimension = a.rows();
    IntMatrix p = IntMatrix::identity(a.rows());
    rep.ranks.push_back(rank(p));
    for (std::size_t n = 0;; ++n) {
        p = p * a;
        rep.ranks.push_back(rank(p));
        if (rep.ranks[n + 1] == rep.ranks[n]) {
            rep.stabilization_stage = n;
            rep.eventual_rank = rep.ranks[n];
            break;
        }
    }
    if (!loops.empty() && loops.is_nonnegative() && loops.rows() == loops.cols()) {
        std::vector<Integer> rs(loops.rows()), cs(loops.cols());
        for (std::size_t i = 0; i < loops.rows(); ++i)
            for (std::size_t j = 0; j < loops.cols(); ++j) {
                rs[i] += loops(i, j);
                cs[j] += loops(i, j);
            }
        const Integer lo = std::max(*std::min_element(rs.begin(), rs.end()), *std::min_element(cs.begin(), cs.end()));
        const Integer hi = std::min(*std::max_element(rs.begin(), rs.end()), *std::max_element(cs.begin(), cs.end()));
        rep.spectral_lower = lo;
        rep.spectral_upper = hi;
    }
    return rep;
}

inline StationaryReport stationary_analysis(const IntMatrix& a) { return stationary_analysis(a, a); }

inline StationaryReport stationary_analysis(const DirectSystem& sys) {
    if (!sys.is_stationary()) throw InputError("stationary_analysis: system is not stationary");
    const IntMatrix a = induced_dd_map(sys.link(0));
    return stationary_analysis(a, loop_block(a, sys.digraph().vertex_count()));
}

// ---- intertwining -----------------------------------------------------------

/// Zigzag A_{n_1} -phi_1-> B_{m_1} -psi_1-> A_{n_2} -phi_2-> B_{m_2} ...
/// with psi_i o phi_i = alpha(n_i -> n_{i+1}) and phi_{i+1} o psi_i = beta(m_i -> m_{i+1}).
/// Depth D means D psi maps and D+1 phi maps.
struct IntertwineWitness {
    std::vector<std::size_t> a_stages;
    std::vector<std::size_t> b_stages;
    std::vector<Signature> phi;
    std::vector<Signature> psi;

    std::size_t depth() const noexcept { return psi.size(); }
};

struct IntertwineResult {
    std::optional<IntertwineWitness> witness;
    std::size_t depth_searched = 0;
    bool mass_obstruction = false;  ///< no stage selection passes the K_0 mass test
    std::string note;
};

struct IntertwineOptions {
    std::size_t depth = 3;
    Integer multiplicity_bound = 4;
    std::size_t max_gap = 2;
};

namespace detail {

inline Integer total_size(const HAlgebra& a) { return Integer(a.total_size()); }

/// Coefficient matrix of x -> x o inner (x the unknown outer signature).
inline IntMatrix outer_composition_matrix(const Signature& inner) {
    const ClassFamily& fam = *inner.family;
    const std::size_t n = fam.size();
    IntMatrix a(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (!inner.counts[i].is_zero()) a(j, fam.compose_index(j, i)) += inner.counts[i];
    return a;
}

class Intertwiner {
public:
    Intertwiner(const DirectSystem& a, const DirectSystem& b, const IntertwineOptions& opt) : a_(a), b_(b), opt_(opt) {}

    IntertwineResult run() {
        IntertwineResult res;
        bool any_mass_ok = false;
        for (std::size_t d = 1; d <= opt_.depth; ++d) {
            res.depth_searched = d;
            std::vector<std::size_t> ns, ms;
            bool found = false;
            enumerate_stages(d, ns, ms, [&](const std::vector<std::size_t>& n, const std::vector<std::size_t>& m) {
                auto masses = mass_profile(n, m);
                if (masses.empty()) return false;
                any_mass_ok = true;
                if (auto w = search(n, m, masses)) {
                    res.witness = std::move(w);
                    found = true;
                    return true;
                }
                return false;
            });
            if (found) return res;
        }
        res.mass_obstruction = !any_mass_ok;
        res.note = res.mass_obstruction
                       ? "K0 mass obstruction: no stage selection through depth " + std::to_string(opt_.depth) +
                             " admits masses with mass(psi_i) mass(phi_i) = mass(alpha), mass(phi_{i+1}) mass(psi_i) = "
                             "mass(beta) and total block sizes respected"
                       : "no witness within the search bounds (inconclusive)";
        return res;
    }

private:
    using StageFn = std::function<bool(const std::vector<std::size_t>&, const std::vector<std::size_t>&)>;

    bool available(const DirectSystem& s, std::size_t k) const { return s.has_stage(k); }

    // n_1 < ... < n_{d+1}, m_1 < ... < m_{d+1}, first stage below max_gap, steps at most max_gap.
    void enumerate_stages(std::size_t d, std::vector<std::size_t>& n, std::vector<std::size_t>& m, const StageFn& fn) {
        bool stop = false;
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (stop) return;
            if (i == d + 1) {
                stop = fn(n, m);
                return;
            }
            const std::size_t nlo = i == 0 ? 0 : n[i - 1] + 1, nhi = i == 0 ? opt_.max_gap - 1 : n[i - 1] + opt_.max_gap;
            const std::size_t mlo = i == 0 ? 0 : m[i - 1] + 1, mhi = i == 0 ? opt_.max_gap - 1 : m[i - 1] + opt_.max_gap;
            for (std::size_t x = nlo; x <= nhi && !stop; ++x) {
                if (!available(a_, x)) break;
                for (std::size_t y = mlo; y <= mhi && !stop; ++y) {
                    if (!available(b_, y)) break;
                    n.push_back(x);
                    m.push_back(y);
                    self(self, i + 1);
                    n.pop_back();
                    m.pop_back();
                }
            }
        };
        rec(rec, 0);
    }

    // Feasible masses of phi_1 (empty if none): each choice fixes every later mass.
    std::vector<Integer> mass_profile(const std::vector<std::size_t>& n, const std::vector<std::size_t>& m) {
        std::vector<Integer> ok;
        const Integer first = a_.composite(n[0], n[1]).mass();
        for (Integer mu = 1; mu <= first; ++mu) {
            if (first % mu != 0) continue;
            if (masses_consistent(n, m, mu)) ok.push_back(mu);
        }
        return ok;
    }

    bool masses_consistent(const std::vector<std::size_t>& n, const std::vector<std::size_t>& m, Integer phi) const {
        const std::size_t d = n.size() - 1;
        for (std::size_t i = 0; i <= d; ++i) {
            if (phi * total_size(a_.stage(n[i])) > total_size(b_.stage(m[i]))) return false;
            if (i == d) break;
            const Integer am = a_.composite(n[i], n[i + 1]).mass();
            if (am % phi != 0) return false;
            const Integer psi = am / phi;
            if (psi * total_size(b_.stage(m[i])) > total_size(a_.stage(n[i + 1]))) return false;
            const Integer bm = b_.composite(m[i], m[i + 1]).mass();
            if (bm % psi != 0) return false;
            phi = bm / psi;
        }
        return true;
    }

    bool fits(const Signature& s, const HAlgebra& src, const HAlgebra& dst) const {
        return !s.is_zero() && !capacity_violation(s, src.multiplicities, dst.multiplicities);
    }

    const std::vector<IntVector>& outer_solutions(const Signature& inner, const Signature& target) {
        auto key = std::make_pair(inner.counts, target.counts);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        NonnegSolutions sol = solve_nonneg_integral(outer_composition_matrix(inner), target.counts, opt_.multiplicity_bound);
        return memo_.emplace(std::move(key), std::move(sol.solutions)).first->second;
    }

    // Extends a partial zigzag; phi.size() == psi.size() + 1 on entry.
    bool extend(const std::vector<std::size_t>& n, const std::vector<std::size_t>& m, IntertwineWitness& w) {
        const std::size_t i = w.psi.size();
        if (i + 1 == n.size()) return true;
        const Signature alpha = a_.composite(n[i], n[i + 1]);
        const auto psis = outer_solutions(w.phi[i], alpha);
        for (const auto& x : psis) {
            Signature psi(a_.family(), x);
            if (!fits(psi, b_.stage(m[i]), a_.stage(n[i + 1]))) continue;
            const Signature beta = b_.composite(m[i], m[i + 1]);
            const auto phis = outer_solutions(psi, beta);
            for (const auto& y : phis) {
                Signature phi(a_.family(), y);
                if (!fits(phi, a_.stage(n[i + 1]), b_.stage(m[i + 1]))) continue;
                w.psi.push_back(psi);
                w.phi.push_back(phi);
                if (extend(n, m, w)) return true;
                w.psi.pop_back();
                w.phi.pop_back();
            }
        }
        return false;
    }

    std::optional<IntertwineWitness> search(const std::vector<std::size_t>& n, const std::vector<std::size_t>& m,
                                            const std::vector<Integer>& masses) {
        const FamilyPtr& fam = a_.family();
        const HAlgebra& src = a_.stage(n[0]);
        const HAlgebra& dst = b_.stage(m[0]);
        const std::size_t classes = fam->size();
        const std::size_t verts = fam->digraph().vertex_count();
        const Integer max_mass = masses.back();

        Signature cur = Signature::zero(fam);
        IntVector load(verts);
        Integer mass = 0;
        std::optional<IntertwineWitness> out;
        auto rec = [&](auto&& self, std::size_t k) -> bool {
            if (k == classes) {
                if (std::find(masses.begin(), masses.end(), mass) == masses.end()) return false;
                IntertwineWitness w;
                w.a_stages = n;
                w.b_stages = m;
                w.phi.push_back(cur);
                if (extend(n, m, w)) {
                    out = std::move(w);
                    return true;
                }
                return false;
            }
            const VertexMap& b = (*fam)[k];
            IntVector per(verts);
            for (Vertex v = 0; v < verts; ++v) per[b[v]] += src.multiplicities[v];
            for (Integer c = 0; c <= opt_.multiplicity_bound && mass + c <= max_mass; ++c) {
                bool ok = true;
                for (Vertex q = 0; q < verts; ++q)
                    if (load[q] + c * per[q] > dst.multiplicities[q]) ok = false;
                if (!ok) break;
                cur.counts[k] = c;
                for (Vertex q = 0; q < verts; ++q) load[q] += c * per[q];
                mass += c;
                const bool done = self(self, k + 1);
                for (Vertex q = 0; q < verts; ++q) load[q] -= c * per[q];
                mass -= c;
                if (done) return true;
            }
            cur.counts[k] = 0;
            return false;
        };
        rec(rec, 0);
        return out;
    }

    const DirectSystem& a_;
    const DirectSystem& b_;
    IntertwineOptions opt_;
    std::map<std::pair<IntVector, IntVector>, std::vector<IntVector>> memo_;
};

}  // namespace detail

/// Bounded breadth-first search for a commuting zigzag between two systems.
/// Requires a family with the uniqueness property, so that equality of
/// signatures certifies commuting at the algebra level.
inline IntertwineResult intertwine_search(const DirectSystem& a, const DirectSystem& b, const IntertwineOptions& opt = {}) {
    if (!(a.digraph() == b.digraph())) throw InputError("intertwine_search: systems over different digraphs");
    if (!same_family(a.family(), b.family())) throw InputError("intertwine_search: systems use different families");
    if (opt.max_gap == 0) throw InputError("intertwine_search: max_gap must be positive");
    const UniquenessReport u = uniqueness_property(*a.family());
    if (!u.unique)
        throw PreconditionError("intertwine_search: family lacks the uniqueness property (coefficient matrix rank " +
                                std::to_string(u.rank) + " < " + std::to_string(u.classes) + " classes)");
    composition_table(*a.family());
    return detail::Intertwiner(a, b, opt).run();
}

/// Recomputes every identity and capacity condition of a witness.
inline bool verify_witness(const DirectSystem& a, const DirectSystem& b, const IntertwineWitness& w) {
    const std::size_t d = w.psi.size();
    if (w.phi.size() != d + 1 || w.a_stages.size() != d + 1 || w.b_stages.size() != d + 1) return false;
    for (std::size_t i = 0; i + 1 < w.a_stages.size(); ++i)
        if (w.a_stages[i] >= w.a_stages[i + 1] || w.b_stages[i] >= w.b_stages[i + 1]) return false;
    for (std::size_t i = 0; i <= d; ++i) {
        if (!a.has_stage(w.a_stages[i]) || !b.has_stage(w.b_stages[i])) return false;
        const HAlgebra& an = a.stage(w.a_stages[i]);
        const HAlgebra& bm = b.stage(w.b_stages[i]);
        if (w.phi[i].is_zero() || capacity_violation(w.phi[i], an.multiplicities, bm.multiplicities)) return false;
        if (i == d) break;
        const HAlgebra& an1 = a.stage(w.a_stages[i + 1]);
        if (w.psi[i].is_zero() || capacity_violation(w.psi[i], bm.multiplicities, an1.multiplicities)) return false;
        if (!(compose_signatures(w.psi[i], w.phi[i]) == a.composite(w.a_stages[i], w.a_stages[i + 1]))) return false;
        if (!(compose_signatures(w.phi[i + 1], w.psi[i]) == b.composite(w.b_stages[i], w.b_stages[i + 1]))) return false;
    }
    return true;
}

}  // namespace ddg

#endif  // DDG_SYSTEMS_HPP

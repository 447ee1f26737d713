#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "oracles.hpp"

using namespace ddg;

namespace {

FamilyPtr t3() { return ClassFamily::make(chain_digraph(3), FamilyKind::all); }

std::size_t cls(const FamilyPtr& f, VertexMap b) { return f->index_of(b); }

/// Product of two sums of matrix units, as a multiset of units.
std::map<MatrixUnit, int> unit_product(const std::vector<MatrixUnit>& a, const std::vector<MatrixUnit>& b) {
    std::map<MatrixUnit, int> out;
    for (const auto& x : a)
        for (const auto& y : b)
            if (x.q == y.p && x.col == y.row) ++out[MatrixUnit{x.p, y.q, x.row, y.col}];
    return out;
}

std::map<MatrixUnit, int> as_multiset(const std::vector<MatrixUnit>& a) {
    std::map<MatrixUnit, int> out;
    for (const auto& x : a) ++out[x];
    return out;
}

/// Multiplicativity and disjointness of diagonal images, straight from the definition.
void expect_homomorphism(const ConcreteEmbedding& e) {
    const auto units = matrix_units(e.source);
    for (const auto& u : units)
        for (const auto& v : units) {
            if (u.q != v.p || u.col != v.row) continue;
            const MatrixUnit uv{u.p, v.q, u.row, v.col};
            EXPECT_EQ(unit_product(e.images.at(u), e.images.at(v)), as_multiset(e.images.at(uv)));
        }
    std::set<std::pair<Vertex, std::size_t>> diag_rows;
    std::size_t count = 0;
    for (const auto& u : units) {
        if (u.p != u.q || u.row != u.col) continue;
        for (const auto& t : e.images.at(u)) {
            EXPECT_EQ(t.p, t.q);
            EXPECT_EQ(t.row, t.col);
            diag_rows.insert({t.p, t.row});
            ++count;
        }
    }
    EXPECT_EQ(diag_rows.size(), count);
}

/// Composition counts by direct summation over class pairs.
IntVector brute_compose(const Signature& outer, const Signature& inner, const ClassFamily& all) {
    IntVector out(all.size());
    for (std::size_t j = 0; j < outer.family->size(); ++j)
        for (std::size_t i = 0; i < inner.family->size(); ++i) {
            const VertexMap& a = (*outer.family)[j];
            const VertexMap& b = (*inner.family)[i];
            VertexMap c(b.size());
            for (std::size_t v = 0; v < b.size(); ++v) c[v] = a[b[v]];
            out[all.index_of(c)] += outer.counts[j] * inner.counts[i];
        }
    return out;
}

}  // namespace

TEST(ComposeClasses, IdentityIsNeutral) {
    const auto f = t3();
    for (const auto& b : f->classes()) {
        EXPECT_EQ(compose_classes({0, 1, 2}, b), b);
        EXPECT_EQ(compose_classes(b, {0, 1, 2}), b);
    }
    EXPECT_EQ(compose_classes({0, 0, 1}, {0, 1, 2}), (VertexMap{0, 0, 1}));
    EXPECT_EQ(compose_classes({0, 0, 1}, {1, 2, 2}), (VertexMap{0, 1, 1}));
    EXPECT_THROW(compose_classes({0, 1}, {0, 1, 2}), InputError);
}

TEST(ComposeClasses, ChainThreeTableIsAssociative) {
    const auto f = t3();
    const auto c = composition_table(*f);
    for (std::size_t a = 0; a < 10; ++a)
        for (std::size_t b = 0; b < 10; ++b)
            for (std::size_t d = 0; d < 10; ++d) EXPECT_EQ(c[a][c[b][d]], c[c[a][b]][d]);
}

TEST(CompositionTable, IdentityRowAndColumn) {
    const auto f = t3();
    const auto c = composition_table(*f);
    const std::size_t id = *f->identity_index();
    EXPECT_EQ(id, 4u);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(c[id][i], i);
        EXPECT_EQ(c[i][id], i);
    }
}

TEST(CompositionTable, CycleFourIsKleinGroup) {
    const auto f = ClassFamily::make(cycle_digraph(2), FamilyKind::automorphisms);
    const auto c = composition_table(*f);
    const std::size_t id = *f->identity_index();
    for (std::size_t a = 0; a < 4; ++a) {
        EXPECT_EQ(c[a][a], id);
        for (std::size_t b = 0; b < 4; ++b) {
            EXPECT_EQ(c[a][b], c[b][a]);
            if (a != b) {
                EXPECT_NE(c[a][b], id);
            }
        }
    }
}

TEST(CompositionTable, ChainThreeNonDegenerateIsNotClosed) {
    const auto f = ClassFamily::make(chain_digraph(3), FamilyKind::non_degenerate);
    try {
        composition_table(*f);
        FAIL() << "expected ClosureError";
    } catch (const ClosureError& e) {
        const VertexMap c = compose_classes((*f)[e.outer()], (*f)[e.inner()]);
        EXPECT_TRUE(is_degenerate(f->digraph(), c));
    }
    EXPECT_FALSE(f->closed());
}

TEST(Family, ExplicitIndicesAndLookup) {
    const auto h = chain_digraph(3);
    const auto f = ClassFamily::make_explicit(h, {9, 4, 0});
    EXPECT_EQ(f->size(), 3u);
    EXPECT_EQ((*f)[0], (VertexMap{0, 0, 0}));
    EXPECT_EQ((*f)[2], (VertexMap{2, 2, 2}));
    EXPECT_EQ(f->index_of({0, 1, 2}), 1u);
    EXPECT_EQ(f->index_of({0, 0, 1}), npos);
    EXPECT_TRUE(f->closed());
    EXPECT_THROW(ClassFamily::make_explicit(h, {10}), InputError);
    EXPECT_THROW(ClassFamily::make_explicit(h, {1, 1}), InputError);
}

TEST(ComposeSignatures, IdentityAndZero) {
    const auto f = t3();
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        const Signature s = oracle::random_signature(rng, f, 4);
        EXPECT_EQ(compose_signatures(Signature::identity(f), s), s);
        EXPECT_EQ(compose_signatures(s, Signature::identity(f)), s);
        EXPECT_TRUE(compose_signatures(s, Signature::zero(f)).is_zero());
        EXPECT_TRUE(compose_signatures(Signature::zero(f), s).is_zero());
    }
}

TEST(ComposeSignatures, AgreesWithPairwiseSumAndIsAssociativeAndBilinear) {
    std::mt19937_64 rng(32);
    for (const Digraph& h : {chain_digraph(2), chain_digraph(3), chain_digraph(4), cycle_digraph(2)}) {
        const auto all = ClassFamily::make(h, FamilyKind::all);
        for (int t = 0; t < 25; ++t) {
            const Signature a = oracle::random_signature(rng, all, 3);
            const Signature b = oracle::random_signature(rng, all, 3);
            const Signature c = oracle::random_signature(rng, all, 3);
            EXPECT_EQ(compose_signatures(a, b).counts, brute_compose(a, b, *all));
            EXPECT_EQ(compose_signatures(compose_signatures(a, b), c), compose_signatures(a, compose_signatures(b, c)));
            EXPECT_EQ(compose_signatures(a, b + c), compose_signatures(a, b) + compose_signatures(a, c));
            EXPECT_EQ(compose_signatures(a + b, c), compose_signatures(a, c) + compose_signatures(b, c));
        }
    }
}

TEST(ComposeSignatures, MixedFamiliesLandInAll) {
    const Digraph h = chain_digraph(4);
    const auto nondeg = ClassFamily::make(h, FamilyKind::non_degenerate);
    const auto all = ClassFamily::make(h, FamilyKind::all);
    std::mt19937_64 rng(33);
    for (int t = 0; t < 10; ++t) {
        const Signature a = oracle::random_signature(rng, nondeg, 2);
        const Signature b = oracle::random_signature(rng, nondeg, 2);
        const Signature c = compose_signatures(a, b);
        EXPECT_EQ(c.counts, brute_compose(a, b, *all));
    }
    EXPECT_THROW(compose_signatures(Signature::identity(all), Signature::identity(t3())), InputError);
}

TEST(Restrict, DropsNothingInsideFamily) {
    const auto f = t3();
    const auto sub = ClassFamily::make_explicit(chain_digraph(3), {0, 4, 9});
    const Signature s(f, to_int_vector({2, 0, 0, 0, 1, 0, 0, 0, 0, 3}));
    EXPECT_EQ(restrict_to(s, sub).counts, to_int_vector({2, 1, 3}));
    const Signature bad(f, to_int_vector({0, 1, 0, 0, 0, 0, 0, 0, 0, 0}));
    EXPECT_THROW(restrict_to(bad, sub), InputError);
}

TEST(Realize, IdentityInclusion) {
    const auto f = t3();
    const HAlgebra a = HAlgebra::of(chain_digraph(3));
    const ConcreteEmbedding e = realize(Signature::identity(f), a, {1, 1, 1});
    for (const auto& u : matrix_units(a)) EXPECT_EQ(e.images.at(u), std::vector<MatrixUnit>{u});
}

TEST(Realize, MultiplicityOneClassTheta5) {
    const auto f = t3();
    const ConcreteEmbedding e = realize(Signature::basis(f, cls(f, {0, 1, 2})), HAlgebra::of(chain_digraph(3)), {1, 1, 1});
    EXPECT_EQ(e.images.at(MatrixUnit{0, 1, 0, 0}), (std::vector<MatrixUnit>{{0, 1, 0, 0}}));
    const ConcreteEmbedding g = realize(Signature::basis(f, cls(f, {0, 0, 1})), HAlgebra::of(chain_digraph(3)), {2, 1, 1});
    EXPECT_EQ(g.images.at(MatrixUnit{1, 2, 0, 0}), (std::vector<MatrixUnit>{{0, 1, 1, 0}}));
    EXPECT_EQ(g.images.at(MatrixUnit{0, 1, 0, 0}), (std::vector<MatrixUnit>{{0, 0, 0, 1}}));
}

TEST(Realize, AllTenClassesFillTenRows) {
    const auto f = t3();
    const Signature s(f, IntVector(10, 1));
    EXPECT_EQ(required_capacity(s, {1, 1, 1}), to_int_vector({10, 10, 10}));
    const ConcreteEmbedding e = realize(s, HAlgebra::of(chain_digraph(3)), {10, 10, 10});
    expect_homomorphism(e);
    EXPECT_THROW(realize(s, HAlgebra::of(chain_digraph(3)), {10, 9, 10}), CapacityError);
    try {
        realize(s, HAlgebra::of(chain_digraph(3)), {10, 9, 10});
    } catch (const CapacityError& err) {
        EXPECT_EQ(err.vertex(), 1u);
    }
}

TEST(Realize, ZeroSignatureRejected) {
    EXPECT_THROW(realize(Signature::zero(t3()), HAlgebra::of(chain_digraph(3)), {1, 1, 1}), InputError);
}

TEST(Realize, ImagesAreMultiplicativeForRandomSignatures) {
    std::mt19937_64 rng(34);
    for (const Digraph& h : {chain_digraph(2), chain_digraph(3), cycle_digraph(2)}) {
        const auto all = ClassFamily::make(h, FamilyKind::all);
        for (int t = 0; t < 15; ++t) {
            const Signature s = oracle::random_signature(rng, all, 2);
            std::vector<std::size_t> src(h.vertex_count());
            for (auto& m : src) m = 1 + rng() % 2;
            const auto need = required_capacity(s, src);
            std::vector<std::size_t> tgt;
            for (const auto& x : need) tgt.push_back(static_cast<std::size_t>(x) + rng() % 2 + 1);
            expect_homomorphism(realize(s, HAlgebra(h, src), tgt));
        }
    }
}

TEST(SignatureOfConcrete, RoundTripOnChainThree) {
    const auto f = t3();
    std::mt19937_64 rng(35);
    for (int t = 0; t < 100; ++t) {
        const Signature s = oracle::random_signature(rng, f, 3, 0.6);
        const ConcreteEmbedding e = realize(s, HAlgebra::of(chain_digraph(3)), oracle::exact_target(s));
        EXPECT_EQ(signature_of_concrete(e, f), s);
    }
}

TEST(SignatureOfConcrete, RoundTripAcrossFamiliesAndSourceSizes) {
    std::mt19937_64 rng(36);
    for (const Digraph& h : {chain_digraph(2), chain_digraph(4), cycle_digraph(2), cycle_digraph(3)}) {
        for (FamilyKind k : {FamilyKind::all, FamilyKind::automorphisms, FamilyKind::non_degenerate}) {
            const auto f = ClassFamily::make(h, k);
            if (f->size() == 0) continue;
            for (int t = 0; t < 8; ++t) {
                const Signature s = oracle::random_signature(rng, f, 2);
                std::vector<std::size_t> src(h.vertex_count());
                for (auto& m : src) m = 1 + rng() % 2;
                std::vector<std::size_t> tgt;
                for (const auto& x : required_capacity(s, src)) tgt.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(x)));
                EXPECT_EQ(signature_of_concrete(realize(s, HAlgebra(h, src), tgt), f), s);
            }
        }
    }
}

TEST(SignatureOfConcrete, IdentityInclusion) {
    const auto f = t3();
    const HAlgebra a = HAlgebra::of(chain_digraph(3));
    ConcreteEmbedding e{a, a, {}};
    for (const auto& u : matrix_units(a)) e.images[u] = {u};
    EXPECT_EQ(signature_of_concrete(e, f), Signature::identity(f));
    EXPECT_EQ(signature_of_concrete(e).counts, Signature::identity(f).counts);
}

TEST(SignatureOfConcrete, MalformedImagesRejected) {
    const auto f = t3();
    ConcreteEmbedding e = realize(Signature(f, IntVector(10, 1)), HAlgebra::of(chain_digraph(3)), {10, 10, 10});
    e.images[MatrixUnit{0, 1, 0, 0}].pop_back();
    EXPECT_THROW(signature_of_concrete(e, f), MalformedEmbedding);
}

TEST(SignatureOfConcrete, DisconnectedDigraphRejected) {
    const Digraph h(4, {{0, 1}, {2, 3}});
    const auto f = ClassFamily::make(h, FamilyKind::all);
    const HAlgebra a = HAlgebra::of(h);
    ConcreteEmbedding e{a, a, {}};
    for (const auto& u : matrix_units(a)) e.images[u] = {u};
    EXPECT_THROW(signature_of_concrete(e, f), InputError);
}

TEST(SignatureOfConcrete, ConcreteCompositionMatchesComposeSignatures) {
    std::mt19937_64 rng(37);
    for (const Digraph& h : {chain_digraph(2), chain_digraph(3), cycle_digraph(2)}) {
        const auto f = ClassFamily::make(h, FamilyKind::all);
        for (int t = 0; t < 20; ++t) {
            const Signature inner = oracle::random_signature(rng, f, 2);
            const Signature outer = oracle::random_signature(rng, f, 2);
            const std::vector<std::size_t> src(h.vertex_count(), 1);
            const ConcreteEmbedding ei = realize(inner, HAlgebra(h, src), oracle::exact_target(inner));
            std::vector<std::size_t> tgt;
            for (const auto& x : required_capacity(outer, ei.target.multiplicities))
                tgt.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(x)));
            const ConcreteEmbedding eo = realize(outer, ei.target, tgt);
            const ConcreteEmbedding ec = compose_concrete(eo, ei);
            expect_homomorphism(ec);
            EXPECT_EQ(signature_of_concrete(ec, f), compose_signatures(outer, inner));
        }
    }
}

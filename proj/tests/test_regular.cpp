#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace ddg;

namespace {

FamilyPtr family(const Digraph& h, FamilyKind k = FamilyKind::all) { return ClassFamily::make(h, k); }

IntVector iv(std::initializer_list<long long> v) { return to_int_vector(v); }

std::vector<IntVector> tuple_of(const Signature& s) {
    std::vector<IntVector> t;
    for (std::size_t i = 0; i < s.family->size(); ++i) t.push_back(compose_signatures(s, Signature::basis(s.family, i)).counts);
    return t;
}

/// Composite of two signatures computed through concrete realizations.
Signature concrete_composite(const Signature& outer, const Signature& inner) {
    const Digraph& h = inner.digraph();
    const ConcreteEmbedding ei = realize(inner, HAlgebra::of(h), oracle::exact_target(inner));
    std::vector<std::size_t> tgt;
    for (const auto& x : required_capacity(outer, ei.target.multiplicities))
        tgt.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(x)));
    return signature_of_concrete(compose_concrete(realize(outer, ei.target, tgt), ei), inner.family);
}

}  // namespace

TEST(RegularMap, IdentityAndShape) {
    const auto t3 = family(chain_digraph(3));
    EXPECT_EQ(induced_regular_map(Signature::identity(t3)), IntMatrix::identity(10));
    const auto t4 = family(chain_digraph(4));
    const IntMatrix m = induced_regular_map(Signature::identity(t4, 2));
    EXPECT_EQ(m.rows(), 35u);
    EXPECT_EQ(m.cols(), 35u);
}

TEST(RegularMap, ColumnsAreCompositesWithBasisClasses) {
    std::mt19937_64 rng(51);
    const auto f = family(chain_digraph(3));
    for (int t = 0; t < 20; ++t) {
        const Signature s = oracle::random_signature(rng, f, 3);
        const IntMatrix m = induced_regular_map(s);
        const auto cols = tuple_of(s);
        for (std::size_t i = 0; i < f->size(); ++i) EXPECT_EQ(m.column(i), cols[i]);
    }
}

TEST(RegularMap, FunctorialAndMassPreserving) {
    std::mt19937_64 rng(52);
    for (const Digraph& h : {chain_digraph(2), chain_digraph(3), chain_digraph(4), cycle_digraph(2)}) {
        for (FamilyKind k : {FamilyKind::all, FamilyKind::automorphisms}) {
            const auto f = family(h, k);
            if (!f->closed()) continue;
            for (int t = 0; t < 20; ++t) {
                const Signature s = oracle::random_signature(rng, f, 3);
                const Signature u = oracle::random_signature(rng, f, 3);
                EXPECT_EQ(induced_regular_map(compose_signatures(s, u)), induced_regular_map(s) * induced_regular_map(u));
                const IntMatrix m = induced_regular_map(s);
                for (std::size_t c = 0; c < m.cols(); ++c) EXPECT_EQ(sum(m.column(c)), s.mass());
            }
        }
    }
}

TEST(RegularMap, OneVertexDegeneratesToTotalMultiplicity) {
    const auto f = family(Digraph(1, {}));
    ASSERT_EQ(f->size(), 1u);
    EXPECT_EQ(induced_regular_map(Signature(f, iv({7}))), (IntMatrix{{7}}));
    EXPECT_EQ(k0_matrix(Signature(f, iv({7}))), (IntMatrix{{7}}));
}

TEST(RegularMap, UnclosedFamilyRejected) {
    const auto f = family(chain_digraph(3), FamilyKind::non_degenerate);
    // The identity keeps every class inside the family; a collapsing class does not.
    EXPECT_NO_THROW(induced_regular_map(Signature::identity(f)));
    EXPECT_THROW(induced_regular_map(Signature::basis(f, f->index_of({0, 0, 1}))), ClosureError);
}

TEST(Multicone, BasisTupleGivesIdentity) {
    const auto f = family(chain_digraph(3));
    std::vector<IntVector> tuple;
    for (std::size_t i = 0; i < f->size(); ++i) tuple.push_back(Signature::basis(f, i).counts);
    const auto w = multicone_membership(f, tuple, true);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(*w, Signature::identity(f));
}

TEST(Multicone, RigidCycleTuplesRecoverSignatureUniquely) {
    std::mt19937_64 rng(53);
    for (std::size_t m = 2; m <= 3; ++m) {
        const auto f = family(cycle_digraph(m), FamilyKind::automorphisms);
        for (int t = 0; t < 30; ++t) {
            const Signature s = oracle::random_signature(rng, f, 4);
            const auto w = multicone_membership(f, tuple_of(s), true);
            ASSERT_TRUE(w.has_value());
            EXPECT_EQ(*w, s);
        }
    }
}

TEST(Multicone, TuplesFromChainSignaturesAreMembers) {
    std::mt19937_64 rng(54);
    const auto f = family(chain_digraph(3));
    for (int t = 0; t < 30; ++t) {
        const Signature s = oracle::random_signature(rng, f, 3);
        const auto w = multicone_membership(f, tuple_of(s), true);
        ASSERT_TRUE(w.has_value());
        EXPECT_EQ(tuple_of(*w), tuple_of(s));
    }
}

TEST(Multicone, InconsistentMassesHaveNoWitness) {
    const auto f = family(cycle_digraph(2), FamilyKind::automorphisms);
    auto tuple = tuple_of(Signature(f, iv({2, 1, 0, 1})));
    tuple[2][0] += 1;
    EXPECT_FALSE(multicone_membership(f, tuple, true).has_value());
    tuple = tuple_of(Signature(f, iv({2, 1, 0, 1})));
    tuple[1][1] = -1;
    EXPECT_FALSE(multicone_membership(f, tuple, true).has_value());
}

TEST(Multicone, InputValidation) {
    const auto f = family(cycle_digraph(2), FamilyKind::automorphisms);
    EXPECT_THROW(multicone_membership(f, {iv({1, 0, 0, 0})}, true), InputError);
    const auto tuple = tuple_of(Signature::identity(f));
    EXPECT_THROW(multicone_membership(f, tuple, false), InputError);
    EXPECT_THROW(multicone_membership(family(chain_digraph(3), FamilyKind::non_degenerate),
                                      std::vector<IntVector>(7, IntVector(7)), true),
                 ClosureError);
}

TEST(Multiscale, StableWitnessFitsOnceTargetIsLargeEnough) {
    std::mt19937_64 rng(55);
    const Digraph h = cycle_digraph(2);
    const auto f = family(h, FamilyKind::automorphisms);
    for (int t = 0; t < 15; ++t) {
        const Signature s = oracle::random_signature(rng, f, 3);
        const auto tuple = tuple_of(s);
        ASSERT_TRUE(multicone_membership(f, tuple, true).has_value());
        std::size_t k = 1;
        while (!multicone_membership(f, tuple, false, HAlgebra(h, std::vector<std::size_t>(4, k)))) {
            k *= 2;
            ASSERT_LE(k, 64u);
        }
        const auto w = multicone_membership(f, tuple, false, HAlgebra(h, std::vector<std::size_t>(4, k)));
        EXPECT_EQ(*w, s);
        EXPECT_FALSE(capacity_violation(*w, {1, 1, 1, 1}, std::vector<std::size_t>(4, k)).has_value());
        if (k > 1) {
            const std::size_t below = static_cast<std::size_t>(s.mass()) - 1;
            if (below >= 1) {
                EXPECT_FALSE(multicone_membership(f, tuple, false, HAlgebra(h, std::vector<std::size_t>(4, below))));
            }
        }
    }
}

TEST(ReducedFamily, InducedMatrixPattern) {
    const ReducedFamily g = reduced_family_g();
    ASSERT_EQ(g.size(), 3u);
    for (int r = 0; r <= 3; ++r)
        for (int s = 0; s <= 3; ++s)
            for (int t = 0; t <= 3; ++t) {
                const IntVector c = iv({r, s, t});
                EXPECT_EQ(g.induced_matrix(c), g_family_pattern(r, s, t));
            }
}

TEST(ReducedFamily, CompositionIsMatrixProductAndMatchesConcreteOracle) {
    const ReducedFamily g = reduced_family_g();
    std::mt19937_64 rng(56);
    for (int t = 0; t < 30; ++t) {
        IntVector a(3), b(3);
        for (auto& x : a) x = rng() % 3;
        for (auto& x : b) x = rng() % 3;
        if (sum(a).is_zero()) a[0] = 1;
        if (sum(b).is_zero()) b[0] = 1;
        const IntVector c = g.compose(a, b);
        EXPECT_EQ(g.induced_matrix(c), g.induced_matrix(a) * g.induced_matrix(b));
        EXPECT_EQ(g_family_pattern(c[0], c[1], c[2]),
                  g_family_pattern(a[0], a[1], a[2]) * g_family_pattern(b[0], b[1], b[2]));
        const Signature oracle_composite = concrete_composite(g.expand(a), g.expand(b));
        EXPECT_EQ(g.coordinates(oracle_composite), std::optional<IntVector>(c));
    }
}

TEST(ReducedFamily, RefinementsMultiply) {
    const ReducedFamily g = reduced_family_g();
    EXPECT_EQ(g.compose(iv({2, 0, 0}), iv({3, 0, 0})), iv({6, 0, 0}));
    EXPECT_EQ(g.compose(iv({0, 1, 0}), iv({0, 1, 0})), iv({0, 1, 0}));
    EXPECT_EQ(g.compose(iv({0, 0, 1}), iv({1, 1, 1})), iv({0, 0, 3}));
}

TEST(ReducedFamily, BlockPictureReadingHasDifferentMatrix) {
    const ReducedFamily b = block_picture_family();
    for (int r = 0; r <= 2; ++r)
        for (int s = 0; s <= 2; ++s)
            for (int t = 0; t <= 2; ++t) {
                const IntMatrix expect{{r, 0, 0}, {s, r + 3 * s, s}, {t, 3 * t, r + t}};
                EXPECT_EQ(b.induced_matrix(iv({r, s, t})), expect);
            }
    const IntVector a = iv({1, 1, 0}), c = iv({0, 1, 1});
    EXPECT_EQ(b.coordinates(concrete_composite(b.expand(a), b.expand(c))), std::optional<IntVector>(b.compose(a, c)));
}

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"

using namespace ddg;

TEST(Validate, ChainIsValid) { EXPECT_TRUE(validate(Digraph(3, {{0, 1}, {1, 2}, {0, 2}})).ok()); }

TEST(Validate, AntisymmetryViolation) {
    const auto rep = validate(Digraph(2, {{0, 1}, {1, 0}}));
    ASSERT_FALSE(rep.ok());
    const auto& v = rep.violations.front();
    EXPECT_EQ(v.kind, ValidationReport::Violation::Kind::antisymmetry);
    EXPECT_EQ(v.first, (Edge{0, 1}));
    EXPECT_EQ(v.second, (Edge{1, 0}));
}

TEST(Validate, TransitivityViolation) {
    const auto rep = validate(Digraph(3, {{0, 1}, {1, 2}}));
    ASSERT_EQ(rep.violations.size(), 1u);
    const auto& v = rep.violations.front();
    EXPECT_EQ(v.kind, ValidationReport::Violation::Kind::transitivity);
    ASSERT_TRUE(v.missing.has_value());
    EXPECT_EQ(*v.missing, (Edge{0, 2}));
}

TEST(Standard, ChainAndCycleShapes) {
    EXPECT_EQ(chain_digraph(3).proper_edges().size(), 3u);
    const Digraph c4 = cycle_digraph(2);
    EXPECT_EQ(c4.vertex_count(), 4u);
    EXPECT_EQ(c4.proper_edges(), (std::vector<Edge>{{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
    const Digraph c6 = cycle_digraph(3);
    EXPECT_EQ(c6.vertex_count(), 6u);
    EXPECT_EQ(c6.proper_edges().size(), 6u);
    for (std::size_t r = 1; r <= 6; ++r) EXPECT_TRUE(validate(chain_digraph(r)).ok());
    for (std::size_t m = 2; m <= 5; ++m) EXPECT_TRUE(validate(cycle_digraph(m)).ok());
}

TEST(Standard, SizeBelowMinimumIsInputError) {
    EXPECT_THROW(chain_digraph(0), InputError);
    EXPECT_THROW(cycle_digraph(1), InputError);
}

TEST(Digraph, PositionsAreLexicographic) {
    const auto pos = chain_digraph(3).positions_lex();
    EXPECT_EQ(pos, (std::vector<Edge>{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}));
}

TEST(Reduced, FullRelationCollapsesToPoint) {
    std::vector<Edge> e;
    for (Vertex i = 0; i < 3; ++i)
        for (Vertex j = 0; j < 3; ++j) e.push_back({i, j});
    const auto r = reduced_digraph(3, e);
    EXPECT_EQ(r.digraph.vertex_count(), 1u);
    EXPECT_EQ(r.multiplicities, std::vector<std::size_t>{3});
    EXPECT_EQ(r.partition, (std::vector<Vertex>{0, 0, 0}));
}

TEST(Reduced, ChainIsAlreadyReduced) {
    const auto r = reduced_digraph(3, {{0, 1}, {1, 2}, {0, 2}});
    EXPECT_EQ(r.digraph, chain_digraph(3));
    EXPECT_EQ(r.multiplicities, (std::vector<std::size_t>{1, 1, 1}));
}

TEST(Reduced, TwoClassesGiveChainTwo) {
    std::vector<Edge> e{{0, 1}, {1, 0}, {2, 3}, {3, 2}};
    for (Vertex i : {0, 1})
        for (Vertex j : {2, 3}) e.push_back({i, j});
    const auto r = reduced_digraph(4, e);
    EXPECT_EQ(r.digraph, chain_digraph(2));
    EXPECT_EQ(r.multiplicities, (std::vector<std::size_t>{2, 2}));
    EXPECT_TRUE(validate(r.digraph).ok());
    EXPECT_EQ(r.algebra().total_size(), 4u);
}

TEST(Reduced, NonTransitiveInputRejected) { EXPECT_THROW(reduced_digraph(3, {{0, 1}, {1, 2}}), InputError); }

TEST(Reduced, OutputAlwaysValidates) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + rng() % 5;
        std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
        for (std::size_t i = 0; i < n; ++i) {
            rel[i][i] = 1;
            for (std::size_t j = 0; j < n; ++j)
                if (rng() % 3 == 0) rel[i][j] = 1;
        }
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (rel[i][k] && rel[k][j]) rel[i][j] = 1;
        std::vector<Edge> e;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && rel[i][j]) e.push_back({i, j});
        const auto r = reduced_digraph(n, e);
        EXPECT_TRUE(validate(r.digraph).ok());
        std::size_t total = 0;
        for (auto m : r.multiplicities) total += m;
        EXPECT_EQ(total, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                EXPECT_EQ(bool(rel[i][j]), r.digraph.has_edge(r.partition[i], r.partition[j]));
    }
}

TEST(Endomorphisms, ChainThreeMatchesAssignments) {
    const auto all = enumerate_endomorphisms(chain_digraph(3));
    const std::vector<VertexMap> expect{{0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 1, 1}, {0, 1, 2},
                                        {0, 2, 2}, {1, 1, 1}, {1, 1, 2}, {1, 2, 2}, {2, 2, 2}};
    EXPECT_EQ(all, expect);
}

TEST(Endomorphisms, ChainCountsAreBinomial) {
    for (unsigned r = 1; r <= 6; ++r) {
        const auto all = enumerate_endomorphisms(chain_digraph(r));
        EXPECT_EQ(Integer(all.size()), oracle::binomial(2 * r - 1, r)) << "r=" << r;
        for (const auto& b : all) EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
    }
}

TEST(Endomorphisms, ChainFourDegenerateAreFour) {
    const Digraph h = chain_digraph(4);
    EXPECT_EQ(enumerate_endomorphisms(h).size(), 35u);
    EXPECT_EQ(enumerate_endomorphisms(h, FamilyKind::non_degenerate).size(), 31u);
}

TEST(Endomorphisms, CycleFourAutomorphisms) {
    EXPECT_EQ(enumerate_endomorphisms(cycle_digraph(2), FamilyKind::automorphisms).size(), 4u);
}

TEST(Endomorphisms, AgreeWithExhaustiveProductEnumeration) {
    for (const Digraph& h : {chain_digraph(2), chain_digraph(3), chain_digraph(4), cycle_digraph(2), cycle_digraph(3),
                             Digraph(4, {{0, 1}, {0, 2}, {0, 3}}), Digraph(3, {{0, 1}})}) {
        const auto brute = oracle::brute_force_endomorphisms(h);
        EXPECT_EQ(enumerate_endomorphisms(h), brute);
        std::vector<VertexMap> autos, nondeg;
        for (const auto& b : brute) {
            if (is_automorphism(h, b)) autos.push_back(b);
            bool collapses_all = true;
            for (const auto& [i, j] : h.proper_edges()) collapses_all = collapses_all && b[i] == b[j];
            if (!collapses_all || h.proper_edges().empty()) nondeg.push_back(b);
        }
        EXPECT_EQ(enumerate_endomorphisms(h, FamilyKind::automorphisms), autos);
        EXPECT_EQ(enumerate_endomorphisms(h, FamilyKind::non_degenerate), nondeg);
    }
}

TEST(Endomorphisms, DegenerateIsStructuralOnDisconnectedDigraph) {
    // Two disjoint edges: collapsing one edge but not the other is not degenerate.
    const Digraph h(4, {{0, 1}, {2, 3}});
    EXPECT_FALSE(is_degenerate(h, {0, 0, 2, 3}));
    EXPECT_TRUE(is_degenerate(h, {0, 0, 3, 3}));
    EXPECT_TRUE(is_degenerate(h, {1, 1, 1, 1}));
}

TEST(Endomorphisms, CycleAutomorphismsFormGroup) {
    for (std::size_t m = 2; m <= 4; ++m) {
        const Digraph h = cycle_digraph(m);
        const auto autos = enumerate_endomorphisms(h, FamilyKind::automorphisms);
        EXPECT_EQ(autos.size(), m == 2 ? 4u : 2 * m);
        VertexMap id(h.vertex_count());
        std::iota(id.begin(), id.end(), 0);
        EXPECT_NE(std::find(autos.begin(), autos.end(), id), autos.end());
        for (const auto& a : autos) {
            bool has_inverse = false;
            for (const auto& b : autos) {
                EXPECT_NE(std::find(autos.begin(), autos.end(), compose_classes(a, b)), autos.end());
                has_inverse = has_inverse || compose_classes(a, b) == id;
            }
            EXPECT_TRUE(has_inverse);
        }
    }
}

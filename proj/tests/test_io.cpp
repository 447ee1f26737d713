#include <gtest/gtest.h>

#include "ddg/io.hpp"
#include "oracles.hpp"

using namespace ddg;
using nlohmann::json;

namespace {

json roundtrip(const json& j) { return json::parse(j.dump()); }

}  // namespace

TEST(Json, IntegersSmallAndHuge) {
    EXPECT_EQ(io::integer_to_json(Integer(-5)), json(-5));
    const Integer big = Integer(1) << 100;
    EXPECT_TRUE(io::integer_to_json(big).is_string());
    EXPECT_EQ(io::integer_from_json(roundtrip(io::integer_to_json(big))), big);
    EXPECT_EQ(io::integer_from_json(json("-123")), Integer(-123));
    EXPECT_THROW(io::integer_from_json(json("12a")), InputError);
    EXPECT_THROW(io::integer_from_json(json("-")), InputError);
    EXPECT_THROW(io::integer_from_json(json(1.5)), InputError);
}

TEST(Json, MatrixRoundTrip) {
    std::mt19937_64 rng(81);
    IntMatrix m = oracle::random_matrix(rng, 3, 5, -9, 9);
    m(1, 2) = Integer("123456789012345678901234567890");
    EXPECT_EQ(io::matrix_from_json(roundtrip(io::to_json(m))), m);
    EXPECT_THROW(io::matrix_from_json(json{{"rows", 2}, {"cols", 1}, {"entries", {{1}}}}), InputError);
    EXPECT_THROW(io::matrix_from_json(json{{"rows", 1}, {"cols", 2}, {"entries", {{1}}}}), InputError);
    EXPECT_THROW(io::matrix_from_json(json{{"rows", -1}, {"cols", 0}, {"entries", json::array()}}), InputError);
    EXPECT_THROW(io::matrix_from_json(json{{"cols", 0}}), InputError);
}

TEST(Json, DigraphAndAlgebraRoundTrip) {
    for (const Digraph& h : {chain_digraph(4), cycle_digraph(3)}) {
        EXPECT_EQ(io::digraph_from_json(roundtrip(io::to_json(h))), h);
        const HAlgebra a(h, std::vector<std::size_t>(h.vertex_count(), 3));
        EXPECT_EQ(io::algebra_from_json(roundtrip(io::to_json(a))), a);
    }
    EXPECT_THROW(io::digraph_from_json(json{{"vertices", 2}, {"edges", {{0, 1, 2}}}}), InputError);
    EXPECT_THROW(io::digraph_from_json(json{{"vertices", 2}, {"edges", 3}}), InputError);
    EXPECT_THROW(io::digraph_from_json(json{{"vertices", 2}, {"edges", {{0, 5}}}}), InputError);
}

TEST(Json, SignatureRoundTripKeepsFamily) {
    std::mt19937_64 rng(82);
    for (const auto& fam : {ClassFamily::make(chain_digraph(3), FamilyKind::all),
                            ClassFamily::make(chain_digraph(4), FamilyKind::non_degenerate),
                            ClassFamily::make(cycle_digraph(2), FamilyKind::automorphisms)}) {
        const Signature s = oracle::random_signature(rng, fam, 5);
        const Signature back = io::signature_from_json(roundtrip(io::to_json(s)));
        EXPECT_EQ(back, s);
        EXPECT_TRUE(same_family(back.family, fam));
    }
    const auto explicit_fam = ClassFamily::make_explicit(chain_digraph(3), {0, 4, 9});
    const Signature e(explicit_fam, to_int_vector({1, 2, 3}));
    EXPECT_EQ(io::signature_from_json(roundtrip(io::to_json(e))), e);
}

TEST(Json, SignatureErrors) {
    const json h = io::to_json(chain_digraph(3));
    EXPECT_THROW(io::signature_from_json(json{{"digraph", h}, {"family", "bogus"}, {"counts", json::array()}}), InputError);
    EXPECT_THROW(io::signature_from_json(json{{"digraph", h}, {"counts", {1, 2}}}), InputError);
    EXPECT_THROW(io::signature_from_json(json{{"digraph", h}}), InputError);
    EXPECT_THROW(io::signature_from_json(json{{"digraph", h}, {"family", 3}, {"counts", json::array()}}), InputError);
}

TEST(Json, DDElementRoundTripAndDefaults) {
    const Digraph h = chain_digraph(3);
    std::mt19937_64 rng(83);
    IntVector v(dd_dimension(h));
    for (auto& x : v) x = static_cast<long long>(rng() % 21) - 10;
    const DDElement g(h, v);
    EXPECT_EQ(io::dd_from_json(roundtrip(io::to_json(g))), g);

    DDElement expect = DDElement::zero(h);
    expect.at(0, 0) = 1;
    expect.at(1, 2) = -4;
    EXPECT_EQ(io::dd_from_json(json{{"loops", {1, 0, 0}}, {"edges", {{{1, 2}, -4}}}}, &h), expect);
    EXPECT_THROW(io::dd_from_json(json{{"loops", {1, 0, 0}}}), InputError);
    EXPECT_THROW(io::dd_from_json(json{{"loops", {1, 0}}}, &h), InputError);
    EXPECT_THROW(io::dd_from_json(json{{"loops", {1, 0, 0}}, {"edges", {{{2, 1}, 1}}}}, &h), InputError);
}

TEST(Json, ConcreteEmbeddingRoundTrip) {
    const auto fam = ClassFamily::make(chain_digraph(3), FamilyKind::all);
    std::mt19937_64 rng(84);
    for (int t = 0; t < 5; ++t) {
        const Signature s = oracle::random_signature(rng, fam, 2) + Signature::identity(fam);
        const ConcreteEmbedding e = realize(s, HAlgebra::of(chain_digraph(3)), oracle::exact_target(s));
        EXPECT_EQ(io::concrete_from_json(roundtrip(io::to_json(e))), e);
    }
    EXPECT_THROW(io::unit_from_json(json{0, 1, 2}), InputError);
}

TEST(Json, GroupRingRoundTrip) {
    const GroupRingElement g{3, to_int_vector({1, -2, 0, 4, 0, 7})};
    EXPECT_EQ(io::group_ring_from_json(roundtrip(io::to_json(g))), g);
    EXPECT_THROW(io::group_ring_from_json(json{{"m", 1}, {"coefficients", {1}}}), InputError);
    EXPECT_THROW(io::group_ring_from_json(json{{"m", 2}, {"coefficients", {1, 2}}}), InputError);
}

TEST(Json, SystemRoundTrip) {
    const auto fam = ClassFamily::make(chain_digraph(3), FamilyKind::all);
    const Digraph h = chain_digraph(3);
    const DirectSystem st = DirectSystem::stationary(HAlgebra::of(h), Signature::identity(fam, 2));
    st.stage(3);
    const DirectSystem st2 = io::system_from_json(roundtrip(io::to_json(st)));
    EXPECT_TRUE(st2.is_stationary());
    EXPECT_EQ(st2.stage(4), st.stage(4));
    EXPECT_EQ(st2.link(7), st.link(7));

    const DirectSystem fin = st.truncate(3);
    const DirectSystem fin2 = io::system_from_json(roundtrip(io::to_json(fin)));
    EXPECT_EQ(fin2.stage_count(), fin.stage_count());
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(fin2.stage(k), fin.stage(k));
    EXPECT_EQ(fin2.composite(0, 2), fin.composite(0, 2));
}

TEST(Json, SystemErrors) {
    const json h = io::to_json(chain_digraph(3));
    const json link = {{"counts", {0, 0, 0, 0, 1, 0, 0, 0, 0, 0}}};
    const json link_auto = {{"family", "automorphisms"}, {"counts", {1}}};
    EXPECT_THROW(io::system_from_json(json{{"digraph", h}, {"stages", {{1, 1, 1}}}, {"links", {link}}}), InputError);
    EXPECT_THROW(io::system_from_json(json{{"digraph", h}, {"stages", {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}},
                                           {"links", {link, link_auto}}}),
                 InputError);
    EXPECT_THROW(io::system_from_json(json{{"digraph", h}, {"stages", json::array()}, {"links", {link}}, {"stationary", true}}),
                 InputError);
    const json doubling = {{"counts", {0, 0, 0, 0, 2, 0, 0, 0, 0, 0}}};
    EXPECT_THROW(io::system_from_json(json{{"digraph", h}, {"stages", {{1, 1, 1}, {2, 1, 2}}}, {"links", {doubling}}}),
                 CapacityError);
    EXPECT_THROW(io::system_from_json(json{{"digraph", h}, {"stages", {{1, 1, 1}, {1, 0, 1}}}, {"links", {link}}}),
                 InputError);
}

TEST(Json, ReportsCarryCertificates) {
    const json u = io::to_json(uniqueness_property(*ClassFamily::make(chain_digraph(4), FamilyKind::non_degenerate)));
    EXPECT_EQ(u.at("rank"), 27);
    EXPECT_EQ(u.at("classes"), 31);
    EXPECT_FALSE(u.at("uniqueness").get<bool>());
    const IntVector k = io::vector_from_json(u.at("certificate").at("kernel_vector"));
    const IntMatrix x = coefficient_matrix(*ClassFamily::make(chain_digraph(4), FamilyKind::non_degenerate));
    for (auto v : row_times(k, x)) EXPECT_EQ(v, 0);

    const json ok = io::to_json(ScaleReport{});
    EXPECT_TRUE(ok.at("member").get<bool>());
    EXPECT_TRUE(ok.at("certificate").empty());
}

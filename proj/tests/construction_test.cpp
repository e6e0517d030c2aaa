#include <gtest/gtest.h>

#include "kerchain/construction.hpp"
#include "kerchain/suites.hpp"
#include "oracles.hpp"

namespace {

using namespace kerchain;
namespace kc = kerchain::construction;
using kc::a;
using kc::t;

FreeWord W(const char* s) { return kc::alphabet().parse(s); }

TEST(Generators, Examples) {
  EXPECT_EQ(kc::h_generator(0), a());
  EXPECT_EQ(kc::h_generator(3), W("t^3 a^8 t^-3"));
  EXPECT_EQ(kc::witness_word(2), W("t^2 a t^-2"));
  EXPECT_THROW(kc::witness_word(0), InvalidInput);
  EXPECT_THROW(kc::pow2(63), ResourceError);
  const auto g1 = kc::hr_generators(1);
  ASSERT_EQ(g1.size(), 3u);
  EXPECT_EQ(g1[0], a());
  EXPECT_EQ(g1[1], W("t a^2 t^-1"));
  EXPECT_EQ(g1[2], t(2));
}

TEST(Membership, Examples) {
  EXPECT_TRUE(kc::in_h(W("t^3 a^8 t^-3")));
  EXPECT_FALSE(kc::in_h(W("t^3 a^4 t^-3")));
  EXPECT_TRUE(kc::in_h(FreeWord{}));
  EXPECT_FALSE(kc::in_h(t()));
  EXPECT_TRUE(kc::in_h(W("t a^2 t^-1 a^5 t^2 a^-4 t^-2")));
  EXPECT_TRUE(kc::in_hr(t(4), 3));
  EXPECT_FALSE(kc::in_hr(t(4), 4));
  EXPECT_FALSE(kc::in_h(W("t^-1 a t")));
}

TEST(Membership, ProductsOfGeneratorsAreMembers) {
  std::vector<oracle::Letters> gens;
  for (std::size_t m = 0; m <= 3; ++m) gens.push_back(kc::h_generator(m).expand());
  const auto products = oracle::bounded_products(gens, 5, 24);
  ASSERT_GT(products.size(), 100u);
  for (const auto& [key, factors] : products) {
    oracle::Letters w;
    for (auto [g, s] : key) w.push_back({g, s});
    EXPECT_TRUE(kc::in_h(FreeWord::from_letters(w)));
  }
}

TEST(Membership, ShortMembersAreShortProducts) {
  // Every member of length <= 6 is a product of few generators kept short.
  std::vector<oracle::Letters> gens;
  for (std::size_t m = 0; m <= 2; ++m) gens.push_back(kc::h_generator(m).expand());
  const auto products = oracle::bounded_products(gens, 8, 12);
  for (std::size_t len = 0; len <= 6; ++len)
    kc::for_each_reduced_word(len, [&](const FreeWord& w) {
      EXPECT_EQ(kc::in_h(w), products.count(oracle::key_of(w)) > 0) << kc::alphabet().format(w);
    });
}

TEST(Membership, TruncationLevelIsEnough) {
  Rng rng(53);
  for (int i = 0; i < 300; ++i) {
    const FreeWord w = random_reduced_word(rng, 2, 0, 16);
    const std::size_t reach = kc::t_reach(w);
    EXPECT_EQ(kc::in_h(w), contains(kc::truncated_h_core(reach + 3).graph, w));
  }
}

TEST(Membership, ClosedUnderProductsAndInverses) {
  Rng rng(59);
  std::vector<FreeWord> members;
  for (std::size_t m = 0; m <= 8; ++m) members.push_back(kc::h_generator(m));
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  std::uniform_int_distribution<int> flip(0, 1);
  for (int i = 0; i < 300; ++i) {
    FreeWord x = members[pick(rng)], y = members[pick(rng)];
    if (flip(rng)) y = inverse(y);
    const FreeWord p = x * y;
    EXPECT_TRUE(kc::in_h(p));
    EXPECT_TRUE(kc::in_h(kc::doubling().apply(p)));
    if (members.size() < 60) members.push_back(p);
    // A generator conjugated one level too shallow falls outside.
    const FreeWord out = p * kc::witness_word(1 + pick(rng) % 5);
    EXPECT_FALSE(kc::in_h(out));
  }
}

TEST(TruncatedCore, Sizes) {
  for (std::size_t level = 0; level <= 6; ++level) {
    const CoreGraph& g = kc::truncated_h_core(level).graph;
    EXPECT_EQ(g.vertex_count(), kc::layout::layered_vertex_count(level + 1));
    EXPECT_TRUE(g.is_trimmed());
  }
  EXPECT_EQ(kc::truncated_h_core(2).graph.edge_count(), 9u);
}

TEST(HrCore, RadiusThreeSize) {
  const CoreGraph g = kc::hr_core(3);
  EXPECT_EQ(g.vertex_count(), 15u);
  EXPECT_EQ(g.edge_count(), 19u);
  EXPECT_EQ(g, kc::hr_graph(3));
  for (std::size_t r = 0; r <= 8; ++r) EXPECT_EQ(kc::hr_core(r), kc::hr_graph(r)) << r;
}

TEST(HrCore, ContainsNextHGenerator) {
  // The chain is not nested in general: t^(r+2) lies outside H_r.
  for (std::size_t r = 1; r < 7; ++r) {
    EXPECT_TRUE(kc::in_hr(kc::h_generator(r + 1), r)) << r;
    EXPECT_FALSE(kc::in_hr(t(static_cast<Exponent>(r + 2)), r)) << r;
  }
}

TEST(Invariance, PhiSquaresGenerators) {
  const Report rep = kc::verify_phi_invariance(16);
  EXPECT_TRUE(rep.ok()) << rep;
  const std::vector<oracle::Letters> images{oracle::letters("aa"), oracle::letters("t")};
  for (std::size_t m = 0; m <= 8; ++m) {
    const oracle::Letters g = kc::h_generator(m).expand();
    EXPECT_EQ(oracle::substitute(images, g), oracle::repeat(g, 2));
  }
}

TEST(StrictIncrease, Chain) {
  const Report rep = kc::verify_strict_increase(10);
  EXPECT_TRUE(rep.ok()) << rep;
  EXPECT_TRUE(kc::in_h(W("t^2 a^4 t^-2")));
  EXPECT_FALSE(kc::in_h(W("t^2 a^2 t^-2")));
}

TEST(Decomposition, Examples) {
  for (std::size_t m = 0; m <= 12; ++m)
    for (std::size_t r = 0; r <= 6; ++r) {
      const kc::Decomposition d = kc::decompose_h_generator(m, r);
      EXPECT_TRUE(d.verified()) << "m=" << m << " r=" << r;
      EXPECT_EQ(d.outer * d.middle * d.outer_inverse, kc::h_generator(m));
      EXPECT_EQ(d.outer_inverse, inverse(d.outer));
    }
  const kc::Decomposition d = kc::decompose_h_generator(5, 1);
  EXPECT_EQ(d.outer, power(t(2), 2));
}

TEST(Decomposition, Report) {
  const Report rep = kc::verify_h_in_hr(12, 6);
  EXPECT_TRUE(rep.ok()) << rep;
}

TEST(CrossConstruction, Report) {
  const Report rep = kc::verify_cross_construction(6);
  EXPECT_TRUE(rep.ok()) << rep;
}

TEST(ReducedWords, Counts) {
  // 4 * 3^(n-1) reduced words of length n over two generators.
  std::size_t expected = 4;
  for (std::size_t n = 1; n <= 6; ++n, expected *= 3) {
    std::size_t count = 0;
    kc::for_each_reduced_word(n, [&](const FreeWord& w) {
      EXPECT_EQ(w.length(), static_cast<Exponent>(n));
      ++count;
    });
    EXPECT_EQ(count, expected);
  }
}

TEST(BallAgreement, UpToFive) {
  const kc::BallAgreement ba = kc::verify_ball_agreement(5);
  EXPECT_TRUE(ba.report.ok()) << ba.report;
  EXPECT_EQ(ba.words_checked, 4u + 12 + 36 + 108 + 324);
  for (std::size_t len = 1; len <= 5; ++len) EXPECT_LE(ba.minimal_radius[len], len + 1);
  EXPECT_THROW(kc::verify_ball_agreement(11), ResourceError);
}

TEST(BallClaim, SmallCases) {
  EXPECT_TRUE(kc::ball_claim_holds(0));
  EXPECT_TRUE(kc::ball_claim_holds(1));
  for (std::size_t n = 0; n <= 4; ++n) {
    const std::size_t r = kc::minimal_ball_index(n, 12);
    EXPECT_TRUE(balls_isomorphic(ball(kc::truncated_h_core(n + 2).graph, n), ball(kc::hr_core(r), n)));
  }
}

}  // namespace

#pragma once

// Verification suites shared by the command-line tool and the tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kerchain/construction.hpp"
#include "kerchain/graphs.hpp"
#include "kerchain/kernel_chain.hpp"
#include "kerchain/report.hpp"
#include "kerchain/words.hpp"

namespace kerchain {

using Rng = std::mt19937_64;

/// Uniform reduced word over `rank` generators with length in [min_len, max_len].
inline FreeWord random_reduced_word(Rng& rng, std::size_t rank, std::size_t min_len, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
  std::uniform_int_distribution<std::size_t> letter_dist(0, 2 * rank - 1);
  const std::size_t len = len_dist(rng);
  std::vector<Letter> letters;
  while (letters.size() < len) {
    const std::size_t pick = letter_dist(rng);
    const Letter l{pick / 2, pick % 2 == 0 ? 1 : -1};
    if (!letters.empty() && letters.back().gen == l.gen && letters.back().sign == -l.sign) continue;
    letters.push_back(l);
  }
  return FreeWord::from_letters(letters);
}

struct HallInstance {
  std::vector<FreeWord> gens;
  FreeWord avoid;
};

/// Random subgroup (1..4 generators of length 1..6) with a reduced word of
/// length 1..6 outside it.
inline HallInstance random_hall_instance(Rng& rng) {
  std::uniform_int_distribution<std::size_t> count_dist(1, 4);
  for (;;) {
    HallInstance inst;
    const std::size_t k = count_dist(rng);
    for (std::size_t i = 0; i < k; ++i) inst.gens.push_back(random_reduced_word(rng, 2, 1, 6));
    const CoreGraph g = CoreGraph::from_generators(2, inst.gens);
    for (int attempt = 0; attempt < 64; ++attempt) {
      inst.avoid = random_reduced_word(rng, 2, 1, 6);
      if (!contains(g, inst.avoid)) return inst;
    }
  }
}

/// hall_complete postconditions on `count` seeded random instances.
inline Report verify_hall_random(std::uint64_t seed, std::size_t count) {
  Report rep{"hall_random", {}};
  Rng rng(seed);
  const auto& ab = construction::alphabet();
  std::size_t failures = 0;
  std::string witness;
  for (std::size_t i = 0; i < count; ++i) {
    const HallInstance inst = random_hall_instance(rng);
    const CoreGraph g = CoreGraph::from_generators(2, inst.gens);
    const FreeWord avoid[] = {inst.avoid};
    const FiniteCover k = hall_complete(g, avoid);
    bool ok = k.is_complete() && !contains(k, inst.avoid);
    for (const FreeWord& w : inst.gens) ok = ok && contains(k, w);
    std::size_t bound = g.vertex_count() + static_cast<std::size_t>(inst.avoid.length());
    ok = ok && k.index() <= bound;
    if (!ok && failures++ == 0) {
      witness = "gens:";
      for (const FreeWord& w : inst.gens) witness += " [" + ab.format(w) + "]";
      witness += " avoid [" + ab.format(inst.avoid) + "]";
    }
  }
  rep.add(std::to_string(count) + " instances, seed " + std::to_string(seed), failures == 0,
          failures ? std::to_string(failures) + " failures, first " + witness : std::string{});
  return rep;
}

/// kernel_witness(n) for n = 1..max_n, plus the retraction to F sending it to 1.
inline Report verify_kernel_chain(std::size_t max_n) {
  Report rep{"kernel_chain", {}};
  for (std::size_t n = 1; n <= max_n; ++n) {
    try {
      const DoubleElement w = kernel_witness(n);
      const bool retracts = Double::retract(w).is_identity();
      rep.add("n=" + std::to_string(n), retracts,
              format_element(w) + (retracts ? "" : " does not retract to 1"));
    } catch (const VerificationFailure& e) {
      rep.add("n=" + std::to_string(n), false, e.what());
    }
  }
  return rep;
}

struct VerifyOptions {
  std::size_t max_n = 10;
  std::size_t max_m = 12;
  std::size_t max_len = 7;
  std::size_t max_r = 6;
  std::uint64_t seed = 0;
  std::size_t random_instances = 200;
};

/// Every proof obligation at the configured bounds, one report per suite.
inline std::vector<Report> run_verify(const VerifyOptions& opt) {
  using namespace construction;
  std::vector<Report> out;
  out.push_back(verify_phi_invariance(opt.max_m));
  out.push_back(verify_strict_increase(opt.max_n));
  out.push_back(verify_kernel_chain(opt.max_n));
  out.push_back(verify_h_in_hr(opt.max_m, opt.max_r));
  if (opt.max_len > 0) {
    BallAgreement ba = verify_ball_agreement(opt.max_len);
    std::string radii;
    for (std::size_t len = 1; len < ba.minimal_radius.size(); ++len)
      radii += (radii.empty() ? "" : ",") + std::to_string(ba.minimal_radius[len]);
    ba.report.add("minimal_radius", true, "r(|w|) for |w|=1.." + std::to_string(opt.max_len) + ": " + radii);
    out.push_back(std::move(ba.report));
  }
  out.push_back(verify_cross_construction(opt.max_r));
  out.push_back(verify_hall_random(opt.seed, opt.random_instances));
  return out;
}

}  // namespace kerchain

#pragma once

// Comparison of folded-graph membership against the product-search oracle.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "kerchain/construction.hpp"
#include "kerchain/graphs.hpp"
#include "kerchain/suites.hpp"
#include "oracles.hpp"

namespace oracle {

/// Bounds for the product search: factor count, and a cap on the reduced
/// length of every partial product. The factor bound is loose enough that the
/// search saturates; the cap starts at kMinPartialLength and is raised one at
/// a time, up to kMaxPartialLength, while some accepted word is unexplained.
/// Any product found is a genuine membership proof, so raising the cap
/// cannot hide a wrongly accepted or wrongly rejected word.
inline constexpr std::size_t kMaxFactors = 256;
inline constexpr std::size_t kMinPartialLength = 12;
inline constexpr std::size_t kMaxPartialLength = 16;
inline constexpr std::size_t kWordLength = 6;
inline constexpr std::size_t kRandomProducts = 200;

struct Agreement {
  bool ok = true;
  std::string witness;
  /// Most factors needed for any accepted word of length <= kWordLength.
  std::size_t max_factors_used = 0;
  /// Partial-length cap at which the search explained every accepted word.
  std::size_t partial_length_used = 0;
};

/// One instance: random products must be accepted, and accepted words of
/// length <= kWordLength must be exactly the short products found.
inline Agreement graph_agrees_with_products(kerchain::Rng& rng, const std::vector<kerchain::FreeWord>& gens) {
  using namespace kerchain;
  const auto& ab = construction::alphabet();
  const CoreGraph g = CoreGraph::from_generators(2, gens);
  std::vector<Letters> gen_letters;
  for (const FreeWord& w : gens) gen_letters.push_back(w.expand());

  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1), factors(1, 8);
  std::uniform_int_distribution<int> sign(0, 1);
  for (std::size_t i = 0; i < kRandomProducts; ++i) {
    Letters p;
    const std::size_t k = factors(rng);
    for (std::size_t f = 0; f < k; ++f) {
      const Letters& gw = gen_letters[pick(rng)];
      p = concat(p, sign(rng) ? gw : invert(gw));
    }
    if (!contains(g, FreeWord::from_letters(p)))
      return {false, "product [" + ab.format(FreeWord::from_letters(p)) + "] rejected"};
  }

  std::vector<FreeWord> accepted, rejected;
  for (std::size_t len = 0; len <= kWordLength; ++len)
    construction::for_each_reduced_word(len, [&](const FreeWord& w) { (contains(g, w) ? accepted : rejected).push_back(w); });

  Agreement out;
  for (std::size_t cap = kMinPartialLength; cap <= kMaxPartialLength; ++cap) {
    const auto found = bounded_products(gen_letters, kMaxFactors, cap);
    for (const FreeWord& w : rejected)
      if (found.count(key_of(w))) return {false, "[" + ab.format(w) + "] rejected by the graph but is a product"};
    out.max_factors_used = 0;
    out.witness.clear();
    for (const FreeWord& w : accepted) {
      const auto it = found.find(key_of(w));
      if (it == found.end()) {
        out.witness = "[" + ab.format(w) + "] accepted by the graph, no product found with partial length <= " +
                      std::to_string(cap);
        break;
      }
      out.max_factors_used = std::max(out.max_factors_used, it->second);
    }
    if (out.witness.empty()) {
      out.partial_length_used = cap;
      return out;
    }
  }
  out.ok = false;
  return out;
}

}  // namespace oracle

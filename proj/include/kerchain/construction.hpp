#pragma once

// The concrete counterexample: F = <a, t>, the endomorphism a -> a^2, t -> t,
// the invariant subgroup H = <t^m a^(2^m) t^-m : m >= 0>, its finitely
// generated over-groups H_r = <t^m a^(2^m) t^-m (m <= r), t^(r+1)>, and the
// covering-graph constructions used to decide membership in them.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "kerchain/errors.hpp"
#include "kerchain/graphs.hpp"
#include "kerchain/report.hpp"
#include "kerchain/words.hpp"

namespace kerchain::construction {

inline constexpr GenIndex kA = 0;
inline constexpr GenIndex kT = 1;

inline const Alphabet& alphabet() {
  static const Alphabet ab("at");
  return ab;
}

inline FreeWord a(Exponent e = 1) { return FreeWord::generator(kA, e); }
inline FreeWord t(Exponent e = 1) { return FreeWord::generator(kT, e); }

/// a -> a^2, t -> t.
inline const Endomorphism& doubling() {
  static const Endomorphism phi({a(2), t()});
  return phi;
}

inline Exponent pow2(std::size_t k) {
  if (k > 62) throw ResourceError("2^" + std::to_string(k) + " exceeds the exponent range");
  return Exponent{1} << k;
}

/// t^m a^(2^m) t^-m.
inline FreeWord h_generator(std::size_t m) { return conjugate(a(pow2(m)), t(static_cast<Exponent>(m))); }

/// t^n a t^-n, the element whose n-th image first lands in H.
inline FreeWord witness_word(std::size_t n) {
  if (n < 1) throw InvalidInput("witness_word: n must be positive");
  return conjugate(a(), t(static_cast<Exponent>(n)));
}

/// Generators of H_r: h_generator(0..r) followed by t^(r+1).
inline std::vector<FreeWord> hr_generators(std::size_t r) {
  std::vector<FreeWord> gens;
  for (std::size_t m = 0; m <= r; ++m) gens.push_back(h_generator(m));
  gens.push_back(t(static_cast<Exponent>(r + 1)));
  return gens;
}

namespace layout {

// Vertex count of one t-level of each a-cycle length 2^0 .. 2^levels-1, plus the level vertices.
inline std::size_t layered_vertex_count(std::size_t levels) {
  if (levels > 40) throw ResourceError("too many levels");
  return (std::size_t{1} << levels) - 1;
}

// t-path through `levels` level vertices (closed into a cycle when `cyclic`),
// with an a-cycle of length 2^j through level j.
inline std::vector<Edge> layered_edges(std::size_t levels, bool cyclic, std::size_t& vertices) {
  vertices = levels;
  std::vector<Edge> edges;
  for (std::size_t j = 0; j + 1 < levels; ++j) edges.push_back({static_cast<Vertex>(j), kT, static_cast<Vertex>(j + 1)});
  if (cyclic) edges.push_back({static_cast<Vertex>(levels - 1), kT, 0});
  for (std::size_t j = 0; j < levels; ++j) {
    const std::size_t len = std::size_t{1} << j;
    Vertex prev = static_cast<Vertex>(j);
    for (std::size_t i = 1; i < len; ++i) {
      const auto v = static_cast<Vertex>(vertices++);
      edges.push_back({prev, kA, v});
      prev = v;
    }
    edges.push_back({prev, kA, static_cast<Vertex>(j)});
  }
  return edges;
}

}  // namespace layout

/// Core of the cover for H truncated at t-level `level`.
struct TruncatedCore {
  std::size_t level = 0;
  CoreGraph graph;
};

inline TruncatedCore truncated_h_core(std::size_t level) {
  if (level >= 40) throw ResourceError("truncated_h_core: level too large");
  require_vertices(layout::layered_vertex_count(level + 1), "truncated_h_core");
  std::size_t n = 0;
  const auto edges = layout::layered_edges(level + 1, false, n);
  return {level, CoreGraph::from_edges(2, n, edges)};
}

/// Core of the cover for H_r, built directly: a t-cycle of length r+1 with an
/// a-cycle of length 2^j at level j.
inline CoreGraph hr_core(std::size_t r) {
  if (r >= 40) throw ResourceError("hr_core: r too large");
  require_vertices(layout::layered_vertex_count(r + 1), "hr_core");
  std::size_t n = 0;
  const auto edges = layout::layered_edges(r + 1, true, n);
  return CoreGraph::from_edges(2, n, edges);
}

/// H_r's graph obtained by folding its generators.
inline CoreGraph hr_graph(std::size_t r) {
  if (r >= 40) throw ResourceError("hr_graph: r too large");
  require_vertices(layout::layered_vertex_count(r + 1), "hr_graph");
  const auto gens = hr_generators(r);
  return CoreGraph::from_generators(2, gens);
}

/// Highest t-level a lift of w from the basepoint of H's cover can reach
/// while staying on the t-ray: the largest prefix sum of t-exponents.
inline std::size_t t_reach(const FreeWord& w) {
  Exponent level = 0, best = 0;
  for (const Block& b : w.blocks()) {
    if (b.gen != kT) continue;
    level = kerchain::detail::checked_add(level, b.exp);
    best = std::max(best, level);
  }
  return static_cast<std::size_t>(best);
}

/// Membership in H: w lifts to a closed path in the truncated core deep
/// enough that the lift cannot climb past it.
inline bool in_h(const FreeWord& w) { return contains(truncated_h_core(t_reach(w)).graph, w); }

inline bool in_hr(const FreeWord& w, std::size_t r) { return contains(hr_graph(r), w); }

/// phi(h_generator(m)) == h_generator(m)^2 and the image lies in H, for m = 0..max_m.
inline Report verify_phi_invariance(std::size_t max_m) {
  Report rep{"phi_invariance", {}};
  const auto& ab = alphabet();
  for (std::size_t m = 0; m <= max_m; ++m) {
    const FreeWord g = h_generator(m);
    const FreeWord image = doubling().apply(g);
    const bool squares = image == power(g, 2);
    const bool member = in_h(image);
    rep.add("m=" + std::to_string(m), squares && member,
            "phi(" + ab.format(g) + ") = " + ab.format(image) + (squares ? "" : " != square") +
                (member ? "" : " not in H"));
  }
  return rep;
}

/// phi^n(g_n) in H and phi^(n-1)(g_n) not in H, for n = 1..max_n.
inline Report verify_strict_increase(std::size_t max_n) {
  Report rep{"strict_increase", {}};
  const auto& ab = alphabet();
  for (std::size_t n = 1; n <= max_n; ++n) {
    const FreeWord before = doubling().iterate(n - 1, witness_word(n));
    const FreeWord after = doubling().apply(before);
    const bool in_after = in_h(after);
    const bool in_before = in_h(before);
    rep.add("n=" + std::to_string(n), in_after && !in_before,
            ab.format(after) + (in_after ? " in H, " : " NOT in H, ") + ab.format(before) +
                (in_before ? " in H" : " not in H"));
  }
  return rep;
}

/// Factors of h_generator(m) as powers of H_r generators, from m = q(r+1) + b:
/// (t^(r+1))^q * (t^b a^(2^b) t^-b)^(2^(q(r+1))) * (t^(r+1))^-q.
struct Decomposition {
  FreeWord outer;
  FreeWord middle;
  FreeWord outer_inverse;
  bool product_matches = false;
  bool graph_contains = false;

  bool verified() const { return product_matches && graph_contains; }
};

inline Decomposition decompose_h_generator(std::size_t m, std::size_t r, const CoreGraph& hr) {
  const std::size_t q = m / (r + 1);
  const std::size_t b = m % (r + 1);
  const FreeWord cycle = t(static_cast<Exponent>(r + 1));
  Decomposition d;
  d.outer = power(cycle, static_cast<Exponent>(q));
  d.middle = power(h_generator(b), pow2(q * (r + 1)));
  d.outer_inverse = power(cycle, -static_cast<Exponent>(q));
  const FreeWord target = h_generator(m);
  d.product_matches = d.outer * d.middle * d.outer_inverse == target;
  d.graph_contains = contains(hr, target);
  return d;
}

inline Decomposition decompose_h_generator(std::size_t m, std::size_t r) {
  return decompose_h_generator(m, r, hr_graph(r));
}

/// H ⊆ H_r at finite scale: decomposition identity and graph membership for m <= max_m, r <= max_r.
inline Report verify_h_in_hr(std::size_t max_m, std::size_t max_r) {
  Report rep{"h_in_hr", {}};
  const auto& ab = alphabet();
  for (std::size_t r = 0; r <= max_r; ++r) {
    const CoreGraph hr = hr_graph(r);
    for (std::size_t m = 0; m <= max_m; ++m) {
      const Decomposition d = decompose_h_generator(m, r, hr);
      rep.add("m=" + std::to_string(m) + ",r=" + std::to_string(r), d.verified(),
              d.verified() ? std::string{}
                           : "(" + ab.format(d.outer) + ")(" + ab.format(d.middle) + ")(" + ab.format(d.outer_inverse) +
                                 ") product_matches=" + std::to_string(d.product_matches) +
                                 " graph_contains=" + std::to_string(d.graph_contains));
    }
  }
  return rep;
}

/// Folded H_r graph equals the directly built core, for r = 0..max_r.
inline Report verify_cross_construction(std::size_t max_r) {
  Report rep{"cross_construction", {}};
  for (std::size_t r = 0; r <= max_r; ++r) {
    const CoreGraph folded = hr_graph(r);
    const CoreGraph direct = hr_core(r);
    rep.add("r=" + std::to_string(r), rooted_isomorphic(folded, direct),
            std::to_string(folded.vertex_count()) + " vs " + std::to_string(direct.vertex_count()) + " vertices");
  }
  return rep;
}

/// Calls `visit` on every reduced word over {a, t} of exactly `length` letters.
inline void for_each_reduced_word(std::size_t length, const std::function<void(const FreeWord&)>& visit) {
  std::vector<Letter> letters(length);
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == length) {
      visit(FreeWord::from_letters(letters));
      return;
    }
    for (GenIndex g = 0; g < 2; ++g)
      for (int s : {1, -1}) {
        if (pos > 0 && letters[pos - 1].gen == g && letters[pos - 1].sign == -s) continue;
        letters[pos] = {g, s};
        rec(pos + 1);
      }
  };
  rec(0);
}

struct BallAgreement {
  Report report;
  std::size_t words_checked = 0;
  /// minimal_radius[len]: least r0 with in_h(w) == in_hr(w, r) for every
  /// word of that length and every r0 <= r <= len + 2. Index 0 unused.
  std::vector<std::size_t> minimal_radius;
};

/// Exhaustive check of in_h(w) == in_hr(w, |w| + 1) for 1 <= |w| <= max_len,
/// plus the least radius that would have sufficed at each length.
inline BallAgreement verify_ball_agreement(std::size_t max_len) {
  BallAgreement out{{"ball_agreement", {}}, 0, std::vector<std::size_t>(max_len + 1, 0)};
  if (max_len > 10) throw ResourceError("verify_ball_agreement: length bound too large for exhaustive enumeration");
  std::vector<CoreGraph> hr;
  for (std::size_t r = 0; r <= max_len + 2; ++r) hr.push_back(hr_graph(r));
  const auto& ab = alphabet();
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<FreeWord> words;
    std::vector<bool> member;
    for_each_reduced_word(len, [&](const FreeWord& w) {
      words.push_back(w);
      member.push_back(in_h(w));
    });
    out.words_checked += words.size();
    std::size_t disagreements = 0;
    std::string witness;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (contains(hr[len + 1], words[i]) != member[i]) {
        if (disagreements++ == 0) witness = ab.format(words[i]);
      }
    }
    out.report.add("len=" + std::to_string(len), disagreements == 0,
                   std::to_string(words.size()) + " words, " + std::to_string(disagreements) + " disagreements" +
                       (witness.empty() ? "" : ", first: " + witness));
    std::size_t r0 = len + 2;
    for (;;) {
      const bool agrees = [&] {
        for (std::size_t i = 0; i < words.size(); ++i)
          if (contains(hr[r0], words[i]) != member[i]) return false;
        return true;
      }();
      if (!agrees) {
        ++r0;
        break;
      }
      if (r0 == 0) break;
      --r0;
    }
    out.minimal_radius[len] = r0;
  }
  return out;
}

/// Radius-n balls of the lazy-tree completions of H's cover and H_(n+1)'s cover.
inline bool ball_claim_holds(std::size_t n) {
  return balls_isomorphic(ball(truncated_h_core(n + 2).graph, n), ball(hr_core(n + 1), n));
}

/// Least r for which the radius-n balls of H's and H_r's covers coincide
/// (searched up to `max_r`; returns max_r + 1 when none qualifies).
inline std::size_t minimal_ball_index(std::size_t n, std::size_t max_r) {
  const Ball bh = ball(truncated_h_core(n + 2).graph, n);
  for (std::size_t r = 0; r <= max_r; ++r)
    if (balls_isomorphic(bh, ball(hr_core(r), n))) return r;
  return max_r + 1;
}

}  // namespace kerchain::construction

#pragma once

// Residual-finiteness certificates for elements of the double of <a, t>
// along H. A certificate carries finite covers of the bouquet together with
// the membership facts that make the image of the element nontrivial in a
// finite quotient of F (one syllable) or a nontrivial normal form in the
// amalgam of two copies of a finite quotient (alternating syllables).
//
// In the alternating case K is one Hall completion of H_r's graph that keeps
// every syllable out. Then H ⊆ H_r ⊆ K, so no syllable maps into the image of
// H in the coset-action quotient, and the image of the element is a
// nontrivial normal form there.
//
// check() re-derives every fact from the embedded covers alone.

#include <cstddef>
#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kerchain/amalgam.hpp"
#include "kerchain/construction.hpp"
#include "kerchain/errors.hpp"
#include "kerchain/graphs.hpp"
#include "kerchain/kernel_chain.hpp"

namespace kerchain {

enum class CertificateCase { amalgam_syllable, alternating_product };

inline std::string to_string(CertificateCase c) {
  return c == CertificateCase::amalgam_syllable ? "AmalgamSyllable" : "AlternatingProduct";
}

struct Fact {
  std::string kind;
  std::size_t cover = 0;
  FreeWord word;
  bool expected = false;
  bool observed = false;

  friend bool operator==(const Fact&, const Fact&) = default;
};

namespace fact_kind {
inline constexpr std::string_view syllable_excluded = "syllable_not_in_cover";
inline constexpr std::string_view hr_generator = "hr_generator_in_cover";
inline constexpr std::string_view h_generator_spot_check = "h_generator_in_cover";
inline constexpr std::string_view moves_basepoint = "image_moves_basepoint";
}  // namespace fact_kind

struct Certificate {
  CertificateCase kind = CertificateCase::amalgam_syllable;
  DoubleElement element;
  std::size_t bound_m = 0;
  /// Index r of the H_r contained in K (alternating case only).
  std::optional<std::size_t> radius;
  /// The cover K (one entry; kept as a list for the serialized form).
  std::vector<FiniteCover> covers;
  std::optional<PermRep> perm;
  /// Images of the syllable words (of the retracted word in the one-syllable case).
  std::vector<Permutation> syllable_images;
  std::vector<Fact> facts;

  const FiniteCover& quotient_cover() const { return covers.back(); }
};

namespace detail {

inline std::vector<Fact> required_facts(const Certificate& c) {
  using namespace construction;
  std::vector<Fact> facts;
  auto want = [&](std::string_view kind, std::size_t cover, const FreeWord& w, bool expected) {
    facts.push_back({std::string(kind), cover, w, expected, false});
  };
  const auto& syl = c.element.syllables();
  if (c.kind == CertificateCase::amalgam_syllable) {
    const FreeWord u = Double::retract(c.element);
    want(fact_kind::syllable_excluded, 0, u, false);
    want(fact_kind::moves_basepoint, 0, u, true);
    return facts;
  }
  for (const Syllable& s : syl) want(fact_kind::syllable_excluded, 0, s.word, false);
  for (const FreeWord& h : hr_generators(*c.radius)) want(fact_kind::hr_generator, 0, h, true);
  for (std::size_t m = 0; m <= c.bound_m; ++m) want(fact_kind::h_generator_spot_check, 0, h_generator(m), true);
  return facts;
}

inline bool observe(const Certificate& c, const Fact& f) {
  if (f.cover >= c.covers.size()) throw InvalidInput("fact refers to a missing cover");
  const FiniteCover& k = c.covers[f.cover];
  if (f.kind == fact_kind::moves_basepoint) {
    const auto end = k.lift(k.basepoint(), f.word);
    return end && *end != k.basepoint();
  }
  return contains(k, f.word);
}

}  // namespace detail

/// Builds a certificate that the nontrivial element w survives in a finite
/// image. `bound_m` sets how many generators of H are spot-checked in K.
inline Certificate certify(const DoubleElement& w, std::size_t bound_m) {
  using namespace construction;
  if (Double::is_trivial(w)) throw InvalidInput("certify: element is trivial");
  Certificate c;
  c.element = w;
  c.bound_m = bound_m;
  const auto& syl = w.syllables();
  if (syl.size() == 1) {
    c.kind = CertificateCase::amalgam_syllable;
    const FreeWord u = Double::retract(w);
    const FreeWord avoid[] = {u};
    c.covers.push_back(hall_complete(CoreGraph(2), avoid));
    c.perm.emplace(c.covers.back());
    c.syllable_images.push_back(c.perm->image(u));
  } else {
    c.kind = CertificateCase::alternating_product;
    // Start at the longest syllable plus one and move up until H_r excludes
    // every syllable; terminates because no syllable lies in H = ∩ H_r.
    std::vector<FreeWord> avoid;
    Exponent longest = 0;
    for (const Syllable& s : syl) {
      avoid.push_back(s.word);
      longest = std::max(longest, s.word.length());
    }
    std::size_t r = static_cast<std::size_t>(longest) + 1;
    CoreGraph hr = hr_graph(r);
    while (std::any_of(avoid.begin(), avoid.end(), [&](const FreeWord& w) { return contains(hr, w); }))
      hr = hr_graph(++r);
    c.radius = r;
    c.covers.push_back(hall_complete(hr, avoid));
    c.perm.emplace(c.covers.back());
    for (const Syllable& s : syl) c.syllable_images.push_back(c.perm->image(s.word));
  }
  c.facts = detail::required_facts(c);
  for (Fact& f : c.facts) {
    f.observed = detail::observe(c, f);
    if (f.observed != f.expected)
      throw VerificationFailure("certify: fact " + f.kind + " failed for " + alphabet().format(f.word));
  }
  return c;
}

/// Independent re-verification from the stored covers. Returns false when
/// any recorded or recomputed fact disagrees; throws InvalidInput when the
/// certificate is structurally malformed.
inline bool check(const Certificate& c) {
  const auto& syl = c.element.syllables();
  if (syl.empty()) return false;
  if (!c.perm) throw InvalidInput("certificate has no permutation representation");
  if (c.covers.empty()) throw InvalidInput("certificate has no covers");
  for (const FiniteCover& k : c.covers)
    if (k.rank() != 2 || !k.is_complete()) return false;

  if (c.covers.size() != 1) return false;
  if (c.radius && *c.radius > 40) return false;
  if (c.kind == CertificateCase::amalgam_syllable) {
    if (syl.size() != 1 || c.radius || c.syllable_images.size() != 1) return false;
  } else {
    if (syl.size() < 2 || !c.radius || c.syllable_images.size() != syl.size()) return false;
    for (std::size_t i = 0; i < syl.size(); ++i) {
      if (syl[i].word.is_identity()) return false;
      if (i > 0 && syl[i].side == syl[i - 1].side) return false;
    }
  }

  // Hall completion adds at most one vertex per letter of the avoided words.
  std::size_t bound = c.radius ? (std::size_t{1} << (*c.radius + 1)) - 1 : 1;
  for (const Syllable& s : syl) bound += static_cast<std::size_t>(s.word.length());
  if (c.quotient_cover().index() > bound) return false;

  if (!(*c.perm == PermRep(c.quotient_cover()))) return false;
  if (c.kind == CertificateCase::amalgam_syllable) {
    const Permutation& img = c.syllable_images.front();
    if (img != c.perm->image(Double::retract(c.element))) return false;
    if (img == identity_permutation(img.size()) || img[c.perm->basepoint()] == c.perm->basepoint()) return false;
  } else {
    for (std::size_t i = 0; i < syl.size(); ++i)
      if (c.syllable_images[i] != c.perm->image(syl[i].word)) return false;
  }

  const std::vector<Fact> required = detail::required_facts(c);
  if (required.size() != c.facts.size()) return false;
  for (std::size_t i = 0; i < required.size(); ++i) {
    const Fact& stored = c.facts[i];
    const Fact& need = required[i];
    if (stored.kind != need.kind || stored.cover != need.cover || stored.word != need.word ||
        stored.expected != need.expected)
      return false;
    const bool observed = detail::observe(c, stored);
    if (observed != stored.observed || observed != stored.expected) return false;
  }
  return true;
}

// Serialization. Field order: case, element, M, covers, perm_images, facts,
// then radius and syllable_images.

inline std::string to_json(const Certificate& c, int indent = 2) {
  using nlohmann::ordered_json;
  const Alphabet& ab = construction::alphabet();
  ordered_json j;
  j["case"] = to_string(c.kind);
  j["element"] = format_element(c.element, ab);
  j["M"] = c.bound_m;
  ordered_json covers = ordered_json::array();
  for (const FiniteCover& k : c.covers) {
    ordered_json cj;
    cj["vertices"] = k.vertex_count();
    cj["basepoint"] = k.basepoint();
    ordered_json edges = ordered_json::array();
    for (const Edge& e : k.edges()) edges.push_back(ordered_json::array({e.src, std::string(1, ab.symbol(e.gen)), e.dst}));
    cj["edges"] = std::move(edges);
    covers.push_back(std::move(cj));
  }
  j["covers"] = std::move(covers);
  ordered_json perms = ordered_json::object();
  if (c.perm)
    for (GenIndex g = 0; g < c.perm->generators().size(); ++g)
      perms[std::string(1, ab.symbol(g))] = c.perm->generators()[g];
  j["perm_images"] = std::move(perms);
  ordered_json facts = ordered_json::array();
  for (const Fact& f : c.facts) {
    ordered_json fj;
    fj["kind"] = f.kind;
    fj["cover"] = f.cover;
    fj["word"] = ab.format(f.word);
    fj["expected"] = f.expected;
    fj["observed"] = f.observed;
    facts.push_back(std::move(fj));
  }
  j["facts"] = std::move(facts);
  if (c.radius)
    j["radius"] = *c.radius;
  else
    j["radius"] = nullptr;
  j["syllable_images"] = c.syllable_images;
  return j.dump(indent) + "\n";
}

/// Parses a serialized certificate; the stored element must already be in normal form.
inline Certificate certificate_from_json(std::string_view text) {
  using nlohmann::json;
  const Alphabet& ab = construction::alphabet();
  try {
    const json j = json::parse(text);
    Certificate c;
    const std::string kind = j.at("case").get<std::string>();
    if (kind == "AmalgamSyllable")
      c.kind = CertificateCase::amalgam_syllable;
    else if (kind == "AlternatingProduct")
      c.kind = CertificateCase::alternating_product;
    else
      throw InvalidInput("unknown certificate case: " + kind);
    const auto raw = parse_syllables(j.at("element").get<std::string>(), ab);
    c.element = h_double().normalize(raw);
    if (c.element.syllables() != raw) throw InvalidInput("certificate element is not in normal form");
    c.bound_m = j.at("M").get<std::size_t>();
    for (const json& cj : j.at("covers")) {
      std::vector<Edge> edges;
      for (const json& e : cj.at("edges")) {
        const std::string sym = e.at(1).get<std::string>();
        if (sym.size() != 1) throw InvalidInput("edge label must be one symbol");
        edges.push_back({e.at(0).get<Vertex>(), ab.index_of(sym[0]), e.at(2).get<Vertex>()});
      }
      c.covers.push_back(FiniteCover::from_edges(ab.rank(), cj.at("vertices").get<std::size_t>(),
                                                 cj.at("basepoint").get<Vertex>(), edges));
    }
    if (c.covers.empty()) throw InvalidInput("certificate has no covers");
    std::vector<Permutation> gens;
    for (GenIndex g = 0; g < ab.rank(); ++g)
      gens.push_back(j.at("perm_images").at(std::string(1, ab.symbol(g))).get<Permutation>());
    c.perm.emplace(c.covers.back().vertex_count(), std::move(gens));
    for (const json& fj : j.at("facts")) {
      c.facts.push_back({fj.at("kind").get<std::string>(), fj.at("cover").get<std::size_t>(),
                         ab.parse(fj.at("word").get<std::string>()), fj.at("expected").get<bool>(),
                         fj.at("observed").get<bool>()});
      if (c.facts.back().cover >= c.covers.size()) throw InvalidInput("fact refers to a missing cover");
    }
    if (!j.at("radius").is_null()) c.radius = j.at("radius").get<std::size_t>();
    c.syllable_images = j.at("syllable_images").get<std::vector<Permutation>>();
    return c;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace kerchain

#pragma once

// The double of <a, t> along H with its induced endomorphism, and the
// elements g_n^-1 g_n' that enter Ker(Phi^n) without lying in Ker(Phi^(n-1)).

#include <string>

#include "kerchain/amalgam.hpp"
#include "kerchain/construction.hpp"
#include "kerchain/errors.hpp"

namespace kerchain {

/// G = F *_{H=H'} F' with H decided by construction::in_h.
inline const Double& h_double() {
  static const Double g([](const FreeWord& w) { return construction::in_h(w); });
  return g;
}

inline DoubleElement parse_element(std::string_view text) {
  return h_double().normalize(parse_syllables(text, construction::alphabet()));
}

inline std::string format_element(const DoubleElement& x) { return format_element(x, construction::alphabet()); }

/// Phi on G: phi applied to both factors.
inline DoubleElement apply_phi(const DoubleElement& x) { return h_double().apply(construction::doubling(), x); }

inline DoubleElement iterate_phi(std::size_t n, const DoubleElement& x) {
  return h_double().iterate(construction::doubling(), n, x);
}

/// [(L, g_n^-1), (R, g_n)]; checks that Phi^n kills it and Phi^(n-1) does not.
inline DoubleElement kernel_witness(std::size_t n) {
  const FreeWord g = construction::witness_word(n);
  const DoubleElement w = h_double().normalize({{Side::left, inverse(g)}, {Side::right, g}});
  const DoubleElement before = iterate_phi(n - 1, w);
  const DoubleElement after = apply_phi(before);
  if (!Double::is_trivial(after))
    throw VerificationFailure("kernel_witness(" + std::to_string(n) + "): Phi^n image is " + format_element(after));
  if (Double::is_trivial(before))
    throw VerificationFailure("kernel_witness(" + std::to_string(n) + "): already trivial under Phi^(n-1)");
  return w;
}

}  // namespace kerchain

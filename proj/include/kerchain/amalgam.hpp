#pragma once

// The double G = F *_{H=H'} F' of a free group along a subgroup H, given by a
// membership oracle for H. Elements are syllable sequences; normalize brings
// them to the reduced shape of the normal form theorem, so an element is
// trivial exactly when its normal form is empty.

#include <cctype>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kerchain/errors.hpp"
#include "kerchain/words.hpp"

namespace kerchain {

enum class Side { left, right };

inline Side flip(Side s) { return s == Side::left ? Side::right : Side::left; }

struct Syllable {
  Side side = Side::left;
  FreeWord word;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

using MembershipOracle = std::function<bool(const FreeWord&)>;

/// Normalized element of the double. Empty means the identity.
class DoubleElement {
 public:
  DoubleElement() = default;

  const std::vector<Syllable>& syllables() const noexcept { return syllables_; }
  std::size_t size() const noexcept { return syllables_.size(); }
  bool empty() const noexcept { return syllables_.empty(); }

  friend bool operator==(const DoubleElement&, const DoubleElement&) = default;

 private:
  explicit DoubleElement(std::vector<Syllable> s) : syllables_(std::move(s)) {}
  friend class Double;

  std::vector<Syllable> syllables_;
};

/// Arithmetic in F *_{H=H'} F' for the H decided by `in_subgroup`.
class Double {
 public:
  explicit Double(MembershipOracle in_subgroup) : in_subgroup_(std::move(in_subgroup)) {}

  bool in_subgroup(const FreeWord& w) const { return in_subgroup_(w); }

  /// Drops identity syllables, merges same-side neighbours, and moves any
  /// syllable lying in H across to its neighbour's side so it merges. A lone
  /// syllable in H is placed on the left.
  DoubleElement normalize(const std::vector<Syllable>& raw) const {
    std::vector<Syllable> stack;
    for (const Syllable& s : raw) push(stack, s);
    if (stack.size() == 1 && in_subgroup(stack.front().word)) stack.front().side = Side::left;
    return DoubleElement(std::move(stack));
  }

  DoubleElement multiply(const DoubleElement& x, const DoubleElement& y) const {
    std::vector<Syllable> raw = x.syllables();
    raw.insert(raw.end(), y.syllables().begin(), y.syllables().end());
    return normalize(raw);
  }

  DoubleElement invert(const DoubleElement& x) const {
    std::vector<Syllable> raw(x.syllables().rbegin(), x.syllables().rend());
    for (Syllable& s : raw) s.word = inverse(s.word);
    return normalize(raw);
  }

  static bool is_trivial(const DoubleElement& x) { return x.empty(); }

  bool equal(const DoubleElement& x, const DoubleElement& y) const { return is_trivial(multiply(x, invert(y))); }

  /// The induced map on the double; requires phi(H) ⊆ H.
  DoubleElement apply(const Endomorphism& phi, const DoubleElement& x) const {
    std::vector<Syllable> raw = x.syllables();
    for (Syllable& s : raw) s.word = phi.apply(s.word);
    return normalize(raw);
  }

  DoubleElement iterate(const Endomorphism& phi, std::size_t n, DoubleElement x) const {
    for (std::size_t i = 0; i < n; ++i) x = apply(phi, x);
    return x;
  }

  /// Folds both factors onto F.
  static FreeWord retract(const DoubleElement& x) {
    FreeWord out;
    for (const Syllable& s : x.syllables()) out = out * s.word;
    return out;
  }

 private:
  void push(std::vector<Syllable>& stack, Syllable s) const {
    if (s.word.is_identity()) return;
    if (stack.empty()) {
      stack.push_back(std::move(s));
      return;
    }
    Syllable& top = stack.back();
    if (top.side != s.side) {
      if (in_subgroup(s.word))
        s.side = top.side;
      else if (stack.size() == 1 && in_subgroup(top.word))
        top.side = s.side;
    }
    if (top.side == s.side) {
      Syllable merged{top.side, top.word * s.word};
      stack.pop_back();
      push(stack, std::move(merged));
      return;
    }
    stack.push_back(std::move(s));
  }

  MembershipOracle in_subgroup_;
};

/// expr := term ('*' term)* ; term := '[' word ']' '\''? ; empty expr is 1.
inline std::vector<Syllable> parse_syllables(std::string_view text, const Alphabet& alphabet) {
  std::vector<Syllable> out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size()) return out;
  for (;;) {
    skip_ws();
    if (i >= text.size() || text[i] != '[') throw InvalidInput("expected '[' in element: " + std::string(text));
    const auto close = text.find(']', i + 1);
    if (close == std::string_view::npos) throw InvalidInput("missing ']' in element: " + std::string(text));
    FreeWord w = alphabet.parse(text.substr(i + 1, close - i - 1));
    i = close + 1;
    skip_ws();
    Side side = Side::left;
    if (i < text.size() && text[i] == '\'') {
      side = Side::right;
      ++i;
    }
    out.push_back({side, std::move(w)});
    skip_ws();
    if (i == text.size()) return out;
    if (text[i] != '*') throw InvalidInput("expected '*' between terms: " + std::string(text));
    ++i;
  }
}

inline std::string format_syllables(const std::vector<Syllable>& syllables, const Alphabet& alphabet) {
  std::string out;
  for (const Syllable& s : syllables) {
    if (!out.empty()) out += " * ";
    out += '[' + alphabet.format(s.word) + ']';
    if (s.side == Side::right) out += '\'';
  }
  return out;
}

inline std::string format_element(const DoubleElement& x, const Alphabet& alphabet) {
  return format_syllables(x.syllables(), alphabet);
}

}  // namespace kerchain

#pragma once

// Reduced words in a free group of finite rank, stored run-length encoded,
// plus endomorphisms given by generator images.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kerchain/errors.hpp"

namespace kerchain {

using Exponent = std::int64_t;
using GenIndex = std::size_t;

namespace detail {

inline Exponent checked_add(Exponent x, Exponent y) {
  Exponent out;
  if (__builtin_add_overflow(x, y, &out)) throw ResourceError("exponent overflow in addition");
  return out;
}

inline Exponent checked_mul(Exponent x, Exponent y) {
  Exponent out;
  if (__builtin_mul_overflow(x, y, &out)) throw ResourceError("exponent overflow in multiplication");
  return out;
}

inline Exponent checked_neg(Exponent x) {
  if (x == std::numeric_limits<Exponent>::min()) throw ResourceError("exponent overflow in negation");
  return -x;
}

inline Exponent checked_abs(Exponent x) { return x < 0 ? checked_neg(x) : x; }

}  // namespace detail

/// One run g^e of a word; e is never zero inside a FreeWord.
struct Block {
  GenIndex gen = 0;
  Exponent exp = 0;

  friend bool operator==(const Block&, const Block&) = default;
  friend auto operator<=>(const Block&, const Block&) = default;
};

/// A single letter g or g^-1.
struct Letter {
  GenIndex gen = 0;
  int sign = 1;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Freely reduced word. Adjacent blocks always have different generators and
/// no exponent is zero, so structural equality is equality in the group.
class FreeWord {
 public:
  FreeWord() = default;

  static FreeWord generator(GenIndex gen, Exponent exp = 1) {
    FreeWord w;
    if (exp != 0) w.blocks_.push_back({gen, exp});
    return w;
  }

  /// Reduces an arbitrary block sequence (zero exponents and repeats allowed).
  static FreeWord from_blocks(std::span<const Block> raw) {
    FreeWord w;
    for (const Block& b : raw) w.push(b);
    return w;
  }

  static FreeWord from_blocks(std::initializer_list<Block> raw) {
    return from_blocks(std::span<const Block>(raw.begin(), raw.size()));
  }

  static FreeWord from_letters(std::span<const Letter> letters) {
    FreeWord w;
    for (const Letter& l : letters) w.push({l.gen, l.sign > 0 ? 1 : -1});
    return w;
  }

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  bool is_identity() const noexcept { return blocks_.empty(); }

  /// Letter count of the expanded word.
  Exponent length() const {
    Exponent n = 0;
    for (const Block& b : blocks_) n = detail::checked_add(n, detail::checked_abs(b.exp));
    return n;
  }

  std::vector<Letter> expand() const {
    std::vector<Letter> out;
    for (const Block& b : blocks_) {
      const int s = b.exp > 0 ? 1 : -1;
      for (Exponent i = 0; i < detail::checked_abs(b.exp); ++i) out.push_back({b.gen, s});
    }
    return out;
  }

  /// Largest generator index used plus one (0 for the identity).
  GenIndex min_rank() const noexcept {
    GenIndex r = 0;
    for (const Block& b : blocks_) r = std::max(r, b.gen + 1);
    return r;
  }

  friend bool operator==(const FreeWord&, const FreeWord&) = default;
  friend auto operator<=>(const FreeWord& x, const FreeWord& y) { return x.blocks_ <=> y.blocks_; }

 private:
  void push(Block b) {
    if (b.exp == 0) return;
    if (!blocks_.empty() && blocks_.back().gen == b.gen) {
      const Exponent e = detail::checked_add(blocks_.back().exp, b.exp);
      if (e == 0)
        blocks_.pop_back();
      else
        blocks_.back().exp = e;
      return;
    }
    blocks_.push_back(b);
  }

  friend FreeWord concat(const FreeWord& u, const FreeWord& v);

  std::vector<Block> blocks_;
};

inline FreeWord reduce(std::span<const Letter> letters) { return FreeWord::from_letters(letters); }

inline FreeWord concat(const FreeWord& u, const FreeWord& v) {
  FreeWord w = u;
  for (const Block& b : v.blocks_) w.push(b);
  return w;
}

inline FreeWord operator*(const FreeWord& u, const FreeWord& v) { return concat(u, v); }

inline FreeWord inverse(const FreeWord& u) {
  std::vector<Block> out(u.blocks().rbegin(), u.blocks().rend());
  for (Block& b : out) b.exp = detail::checked_neg(b.exp);
  return FreeWord::from_blocks(out);
}

/// x^y = y x y^-1.
inline FreeWord conjugate(const FreeWord& x, const FreeWord& y) { return y * x * inverse(y); }

/// Splits u = prefix * core * prefix^-1 with core cyclically reduced.
inline std::pair<FreeWord, FreeWord> cyclic_decomposition(const FreeWord& u) {
  std::vector<Block> core = u.blocks();
  std::vector<Block> prefix;
  std::size_t lo = 0, hi = core.size();  // active range [lo, hi)
  while (hi - lo >= 2 && core[lo].gen == core[hi - 1].gen &&
         (core[lo].exp > 0) != (core[hi - 1].exp > 0)) {
    Block& first = core[lo];
    Block& last = core[hi - 1];
    const Exponent mag = std::min(detail::checked_abs(first.exp), detail::checked_abs(last.exp));
    const Exponent peel = first.exp > 0 ? mag : -mag;
    prefix.push_back({first.gen, peel});
    first.exp -= peel;
    last.exp += peel;
    if (first.exp == 0) ++lo;
    if (hi > lo && core[hi - 1].exp == 0) --hi;
  }
  std::vector<Block> mid(core.begin() + static_cast<std::ptrdiff_t>(lo),
                         core.begin() + static_cast<std::ptrdiff_t>(hi));
  return {FreeWord::from_blocks(prefix), FreeWord::from_blocks(mid)};
}

/// u^k computed on blocks; conjugates y x y^-1 become y x^k y^-1 without expansion.
inline FreeWord power(const FreeWord& u, Exponent k) {
  if (k == 0 || u.is_identity()) return {};
  if (k < 0) return power(inverse(u), detail::checked_neg(k));
  auto [prefix, core] = cyclic_decomposition(u);
  FreeWord core_power;
  if (core.blocks().size() == 1) {
    const Block b = core.blocks().front();
    core_power = FreeWord::generator(b.gen, detail::checked_mul(b.exp, k));
  } else {
    FreeWord base = core;
    for (Exponent e = k;;) {
      if (e & 1) core_power = core_power * base;
      e >>= 1;
      if (e == 0) break;
      base = base * base;
    }
  }
  return prefix * core_power * inverse(prefix);
}

/// Ordered list of distinct single-character generator symbols.
class Alphabet {
 public:
  explicit Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw InvalidInput("alphabet must be nonempty");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      const char c = symbols_[i];
      if (!std::isalpha(static_cast<unsigned char>(c)))
        throw InvalidInput(std::string("alphabet symbol must be a letter: ") + c);
      if (symbols_.find(c, i + 1) != std::string::npos)
        throw InvalidInput(std::string("duplicate alphabet symbol: ") + c);
    }
  }

  std::size_t rank() const noexcept { return symbols_.size(); }
  char symbol(GenIndex g) const { return symbols_.at(g); }
  const std::string& symbols() const noexcept { return symbols_; }

  GenIndex index_of(char c) const {
    const auto pos = symbols_.find(c);
    if (pos == std::string::npos) throw InvalidInput(std::string("letter not in alphabet: ") + c);
    return pos;
  }

  /// Free reduction of (symbol, ±1) letters.
  FreeWord reduce(std::span<const std::pair<char, int>> letters) const {
    std::vector<Letter> out;
    out.reserve(letters.size());
    for (auto [c, s] : letters) {
      if (s != 1 && s != -1) throw InvalidInput("letter sign must be +1 or -1");
      out.push_back({index_of(c), s});
    }
    return FreeWord::from_letters(out);
  }

  /// word := block* ; block := gen ('^' '-'? digit+)? ; whitespace ignored.
  FreeWord parse(std::string_view text) const {
    std::vector<Block> raw;
    std::size_t i = 0;
    auto skip_ws = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    for (skip_ws(); i < text.size(); skip_ws()) {
      const GenIndex g = index_of(text[i++]);
      Exponent e = 1;
      skip_ws();
      if (i < text.size() && text[i] == '^') {
        ++i;
        skip_ws();
        bool negative = false;
        if (i < text.size() && text[i] == '-') {
          negative = true;
          ++i;
          skip_ws();
        }
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
          throw InvalidInput("expected digits after '^' in word: " + std::string(text));
        e = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          e = detail::checked_add(detail::checked_mul(e, 10), text[i] - '0');
          ++i;
        }
        if (negative) e = -e;
      }
      raw.push_back({g, e});
    }
    return FreeWord::from_blocks(raw);
  }

  /// Inverse of parse; identity prints as the empty string.
  std::string format(const FreeWord& w) const {
    std::string out;
    for (const Block& b : w.blocks()) {
      if (!out.empty()) out += ' ';
      out += symbol(b.gen);
      if (b.exp != 1) out += '^' + std::to_string(b.exp);
    }
    return out;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string symbols_;
};

/// Endomorphism of F determined by the image of each generator.
class Endomorphism {
 public:
  explicit Endomorphism(std::vector<FreeWord> images) : images_(std::move(images)) {
    for (const FreeWord& w : images_)
      if (w.min_rank() > images_.size()) throw InvalidInput("endomorphism image uses a generator outside its rank");
  }

  static Endomorphism identity(std::size_t rank) {
    std::vector<FreeWord> images;
    for (GenIndex g = 0; g < rank; ++g) images.push_back(FreeWord::generator(g));
    return Endomorphism(std::move(images));
  }

  std::size_t rank() const noexcept { return images_.size(); }
  const FreeWord& image(GenIndex g) const { return images_.at(g); }

  FreeWord apply(const FreeWord& u) const {
    if (u.min_rank() > rank()) throw InvalidInput("word uses a generator outside the endomorphism's rank");
    FreeWord out;
    for (const Block& b : u.blocks()) out = out * power(images_[b.gen], b.exp);
    return out;
  }

  FreeWord iterate(std::size_t n, FreeWord u) const {
    for (std::size_t i = 0; i < n; ++i) u = apply(u);
    return u;
  }

 private:
  std::vector<FreeWord> images_;
};

inline FreeWord apply_endo(const Endomorphism& phi, const FreeWord& u) { return phi.apply(u); }
inline FreeWord iterate_endo(const Endomorphism& phi, std::size_t n, const FreeWord& u) {
  return phi.iterate(n, u);
}

}  // namespace kerchain

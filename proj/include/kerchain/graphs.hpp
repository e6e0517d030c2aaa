#pragma once

// Folded, basepoint-rooted labeled graphs (Stallings graphs) for subgroups of
// a free group: folding, membership, fiber products, Hall completion to
// finite covers, coset permutation actions, balls and DOT export.
//
// Every graph produced here is canonical: vertex ids are dense, assigned in
// breadth-first order from the basepoint (id 0), visiting for each generator
// the forward edge before the backward one. Two canonical graphs are
// rooted-isomorphic iff they compare equal.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kerchain/errors.hpp"
#include "kerchain/words.hpp"

namespace kerchain {

using Vertex = std::uint32_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

/// Process-wide cap on the vertex count of any constructed graph.
inline std::atomic<std::size_t>& vertex_cap() {
  static std::atomic<std::size_t> cap{std::size_t{1} << 20};
  return cap;
}

inline void require_vertices(std::size_t n, const char* what) {
  if (n > vertex_cap().load())
    throw ResourceError(std::string(what) + ": " + std::to_string(n) + " vertices exceeds cap of " +
                        std::to_string(vertex_cap().load()));
}

namespace detail {

// Transition tables for a labeled graph whose edges per generator form a
// partial injection. Index v * rank + g.
struct Tables {
  std::size_t rank = 0;
  std::size_t n = 0;
  std::vector<Vertex> out;
  std::vector<Vertex> in;

  Tables() = default;
  Tables(std::size_t rank_, std::size_t n_)
      : rank(rank_), n(n_), out(rank_ * n_, kNoVertex), in(rank_ * n_, kNoVertex) {}

  Vertex add_vertex() {
    require_vertices(n + 1, "graph construction");
    out.resize(out.size() + rank, kNoVertex);
    in.resize(in.size() + rank, kNoVertex);
    return static_cast<Vertex>(n++);
  }

  Vertex& fwd(Vertex v, GenIndex g) { return out[v * rank + g]; }
  Vertex& bwd(Vertex v, GenIndex g) { return in[v * rank + g]; }
  Vertex fwd(Vertex v, GenIndex g) const { return out[v * rank + g]; }
  Vertex bwd(Vertex v, GenIndex g) const { return in[v * rank + g]; }

  bool operator==(const Tables&) const = default;
};

// Relabels vertices in breadth-first order from `base`, dropping everything
// not connected to it.
inline Tables canonicalize(const Tables& t, Vertex base) {
  std::vector<Vertex> order;
  std::vector<Vertex> label(t.n, kNoVertex);
  order.push_back(base);
  label[base] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Vertex v = order[head];
    for (GenIndex g = 0; g < t.rank; ++g) {
      for (Vertex w : {t.fwd(v, g), t.bwd(v, g)}) {
        if (w != kNoVertex && label[w] == kNoVertex) {
          label[w] = static_cast<Vertex>(order.size());
          order.push_back(w);
        }
      }
    }
  }
  Tables c(t.rank, order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (GenIndex g = 0; g < t.rank; ++g) {
      const Vertex f = t.fwd(order[i], g);
      const Vertex b = t.bwd(order[i], g);
      c.fwd(static_cast<Vertex>(i), g) = f == kNoVertex ? kNoVertex : label[f];
      c.bwd(static_cast<Vertex>(i), g) = b == kNoVertex ? kNoVertex : label[b];
    }
  }
  return c;
}

// Iteratively deletes non-base vertices of degree <= 1 (loops count twice).
inline Tables trim(Tables t, Vertex base) {
  std::vector<std::size_t> degree(t.n, 0);
  for (Vertex v = 0; v < t.n; ++v)
    for (GenIndex g = 0; g < t.rank; ++g)
      degree[v] += (t.fwd(v, g) != kNoVertex) + (t.bwd(v, g) != kNoVertex);
  std::vector<Vertex> queue;
  std::vector<bool> removed(t.n, false);
  for (Vertex v = 0; v < t.n; ++v)
    if (v != base && degree[v] <= 1) queue.push_back(v);
  while (!queue.empty()) {
    const Vertex v = queue.back();
    queue.pop_back();
    if (removed[v]) continue;
    removed[v] = true;
    for (GenIndex g = 0; g < t.rank; ++g) {
      if (Vertex w = t.fwd(v, g); w != kNoVertex) {
        t.fwd(v, g) = kNoVertex;
        t.bwd(w, g) = kNoVertex;
        if (--degree[w] <= 1 && w != base && !removed[w]) queue.push_back(w);
      }
      if (Vertex w = t.bwd(v, g); w != kNoVertex) {
        t.bwd(v, g) = kNoVertex;
        t.fwd(w, g) = kNoVertex;
        if (--degree[w] <= 1 && w != base && !removed[w]) queue.push_back(w);
      }
    }
  }
  return t;
}

// Stallings folding by union-find: conflicting targets are queued and merged
// until every generator acts as a partial injection on representatives.
class Folder {
 public:
  explicit Folder(std::size_t rank) : rank_(rank) {}

  Vertex add_vertex() {
    require_vertices(parent_.size() + 1, "folding");
    const auto v = static_cast<Vertex>(parent_.size());
    parent_.push_back(v);
    size_.push_back(1);
    out_.resize(out_.size() + rank_, kNoVertex);
    in_.resize(in_.size() + rank_, kNoVertex);
    return v;
  }

  void add_edge(Vertex src, GenIndex g, Vertex dst) {
    src = find(src);
    dst = find(dst);
    assign(out_, src, g, dst);
    assign(in_, dst, g, src);
    drain();
  }

  /// Adds a path spelling `w` from `start`; returns its endpoint.
  Vertex add_path(Vertex start, const FreeWord& w) {
    Vertex cur = start;
    for (const Block& b : w.blocks()) {
      const Exponent steps = b.exp < 0 ? -b.exp : b.exp;
      for (Exponent i = 0; i < steps; ++i) {
        const Vertex next = add_vertex();
        if (b.exp > 0)
          add_edge(cur, b.gen, next);
        else
          add_edge(next, b.gen, cur);
        cur = find(next);
      }
    }
    return find(cur);
  }

  /// Adds a closed loop spelling `w` at `base`.
  void add_loop(Vertex base, const FreeWord& w) {
    if (w.is_identity()) return;
    std::vector<Block> blocks = w.blocks();
    Block last = blocks.back();
    blocks.pop_back();
    const Vertex end = add_path(base, FreeWord::from_blocks(blocks));
    // The final letter closes the loop back at the base.
    const Exponent steps = last.exp < 0 ? -last.exp : last.exp;
    const Vertex mid = add_path(end, FreeWord::generator(last.gen, last.exp > 0 ? steps - 1 : -(steps - 1)));
    if (last.exp > 0)
      add_edge(mid, last.gen, base);
    else
      add_edge(base, last.gen, mid);
  }

  Vertex find(Vertex v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  /// Folded graph on representatives (not yet canonical).
  Tables tables() {
    std::vector<Vertex> rep_id(parent_.size(), kNoVertex);
    std::size_t n = 0;
    for (Vertex v = 0; v < parent_.size(); ++v)
      if (find(v) == v) rep_id[v] = static_cast<Vertex>(n++);
    Tables t(rank_, n);
    for (Vertex v = 0; v < parent_.size(); ++v) {
      if (find(v) != v) continue;
      for (GenIndex g = 0; g < rank_; ++g) {
        const Vertex f = out_[v * rank_ + g];
        const Vertex b = in_[v * rank_ + g];
        t.fwd(rep_id[v], g) = f == kNoVertex ? kNoVertex : rep_id[find(f)];
        t.bwd(rep_id[v], g) = b == kNoVertex ? kNoVertex : rep_id[find(b)];
      }
    }
    rep_ids_ = std::move(rep_id);
    return t;
  }

  /// Position of `v`'s representative in the last tables() result.
  Vertex table_id(Vertex v) { return rep_ids_.at(find(v)); }

 private:
  void assign(std::vector<Vertex>& tab, Vertex v, GenIndex g, Vertex x) {
    Vertex& slot = tab[v * rank_ + g];
    if (slot == kNoVertex)
      slot = x;
    else
      pending_.emplace_back(slot, x);
  }

  void merge(Vertex u, Vertex v) {
    u = find(u);
    v = find(v);
    if (u == v) return;
    if (size_[u] < size_[v]) std::swap(u, v);
    parent_[v] = u;
    size_[u] += size_[v];
    for (GenIndex g = 0; g < rank_; ++g) {
      if (Vertex f = out_[v * rank_ + g]; f != kNoVertex) assign(out_, u, g, f);
      if (Vertex b = in_[v * rank_ + g]; b != kNoVertex) assign(in_, u, g, b);
    }
  }

  void drain() {
    while (!pending_.empty()) {
      auto [x, y] = pending_.back();
      pending_.pop_back();
      merge(x, y);
    }
  }

  std::size_t rank_;
  std::vector<Vertex> parent_;
  std::vector<std::size_t> size_;
  std::vector<Vertex> out_;
  std::vector<Vertex> in_;
  std::vector<std::pair<Vertex, Vertex>> pending_;
  std::vector<Vertex> rep_ids_;
};

}  // namespace detail

/// One directed labeled edge src --gen--> dst.
struct Edge {
  Vertex src = 0;
  GenIndex gen = 0;
  Vertex dst = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Canonical folded graph rooted at vertex 0. Each generator acts as a
/// partial injection; every vertex is connected to the basepoint.
class FoldedGraph {
 public:
  std::size_t rank() const noexcept { return t_.rank; }
  std::size_t vertex_count() const noexcept { return t_.n; }
  Vertex basepoint() const noexcept { return 0; }

  /// δ(v, g), or nullopt.
  std::optional<Vertex> target(Vertex v, GenIndex g) const { return wrap(t_.fwd(v, g)); }
  /// δ⁻¹(v, g), or nullopt.
  std::optional<Vertex> source(Vertex v, GenIndex g) const { return wrap(t_.bwd(v, g)); }

  std::size_t edge_count() const {
    return static_cast<std::size_t>(std::count_if(t_.out.begin(), t_.out.end(), [](Vertex v) { return v != kNoVertex; }));
  }

  std::size_t degree(Vertex v) const {
    std::size_t d = 0;
    for (GenIndex g = 0; g < rank(); ++g) d += (t_.fwd(v, g) != kNoVertex) + (t_.bwd(v, g) != kNoVertex);
    return d;
  }

  /// Edges sorted by source, then generator.
  std::vector<Edge> edges() const {
    std::vector<Edge> es;
    for (Vertex v = 0; v < t_.n; ++v)
      for (GenIndex g = 0; g < rank(); ++g)
        if (Vertex w = t_.fwd(v, g); w != kNoVertex) es.push_back({v, g, w});
    return es;
  }

  bool is_complete() const {
    return std::find(t_.out.begin(), t_.out.end(), kNoVertex) == t_.out.end() &&
           std::find(t_.in.begin(), t_.in.end(), kNoVertex) == t_.in.end();
  }

  bool is_trimmed() const {
    for (Vertex v = 1; v < t_.n; ++v)
      if (degree(v) < 2) return false;
    return true;
  }

  /// Follows g^e from v; a g-cycle through v of length c reduces e modulo c.
  std::optional<Vertex> traverse(Vertex v, const Block& b) const {
    const bool forward = b.exp > 0;
    Exponent steps = b.exp < 0 ? detail::checked_neg(b.exp) : b.exp;
    Vertex cur = v;
    for (Exponent i = 1; i <= steps; ++i) {
      const Vertex next = forward ? t_.fwd(cur, b.gen) : t_.bwd(cur, b.gen);
      if (next == kNoVertex) return std::nullopt;
      cur = next;
      if (cur == v) {
        const Exponent rest = (steps - i) % i;
        for (Exponent j = 0; j < rest; ++j) cur = forward ? t_.fwd(cur, b.gen) : t_.bwd(cur, b.gen);
        return cur;
      }
    }
    return cur;
  }

  /// Endpoint of the lift of w starting at v, if the lift exists.
  std::optional<Vertex> lift(Vertex v, const FreeWord& w) const {
    if (w.min_rank() > rank()) throw InvalidInput("word uses a generator outside the graph's rank");
    std::optional<Vertex> cur = v;
    for (const Block& b : w.blocks()) {
      cur = traverse(*cur, b);
      if (!cur) return std::nullopt;
    }
    return cur;
  }

  /// Same as lift, but one letter at a time (no cycle shortcut).
  std::optional<Vertex> lift_letters(Vertex v, const FreeWord& w) const {
    Vertex cur = v;
    for (const Letter& l : w.expand()) {
      cur = l.sign > 0 ? t_.fwd(cur, l.gen) : t_.bwd(cur, l.gen);
      if (cur == kNoVertex) return std::nullopt;
    }
    return cur;
  }

  friend bool operator==(const FoldedGraph&, const FoldedGraph&) = default;

 protected:
  FoldedGraph() = default;
  explicit FoldedGraph(detail::Tables t) : t_(std::move(t)) {}

  const detail::Tables& tables() const noexcept { return t_; }

  friend class CoreGraph;
  friend class FiniteCover;
  friend class Ball;
  template <class G>
  friend G intersect(const G&, const G&);

 private:
  static std::optional<Vertex> wrap(Vertex v) { return v == kNoVertex ? std::nullopt : std::optional<Vertex>(v); }

  detail::Tables t_;
};

inline bool contains(const FoldedGraph& g, const FreeWord& w) { return g.lift(g.basepoint(), w) == g.basepoint(); }

inline bool rooted_isomorphic(const FoldedGraph& x, const FoldedGraph& y) { return x == y; }

/// Folded, trimmed rooted graph of a finitely generated subgroup.
class CoreGraph : public FoldedGraph {
 public:
  /// Graph of the trivial subgroup.
  explicit CoreGraph(std::size_t rank) : FoldedGraph(detail::Tables(rank, 1)) {}

  /// Wedge of one loop per generator, folded and trimmed.
  static CoreGraph from_generators(std::size_t rank, std::span<const FreeWord> gens) {
    detail::Folder folder(rank);
    const Vertex base = folder.add_vertex();
    for (const FreeWord& w : gens) {
      if (w.min_rank() > rank) throw InvalidInput("generator uses a symbol outside the alphabet");
      folder.add_loop(base, w);
    }
    auto t = folder.tables();
    const Vertex b = folder.table_id(base);
    return CoreGraph(detail::canonicalize(detail::trim(std::move(t), b), b));
  }

  /// Builds from an explicit edge list; folds any determinism violations, then trims.
  static CoreGraph from_edges(std::size_t rank, std::size_t vertices, std::span<const Edge> edges) {
    detail::Folder folder(rank);
    for (std::size_t i = 0; i < std::max<std::size_t>(vertices, 1); ++i) folder.add_vertex();
    for (const Edge& e : edges) {
      if (e.src >= vertices || e.dst >= vertices || e.gen >= rank) throw InvalidInput("edge out of range");
      folder.add_edge(e.src, e.gen, e.dst);
    }
    auto t = folder.tables();
    const Vertex b = folder.table_id(0);
    return CoreGraph(detail::canonicalize(detail::trim(std::move(t), b), b));
  }

 private:
  explicit CoreGraph(detail::Tables t) : FoldedGraph(std::move(t)) {}
  template <class G>
  friend G intersect(const G&, const G&);
};

/// Complete folded graph: a finite cover of the bouquet, i.e. a finite-index subgroup.
class FiniteCover : public FoldedGraph {
 public:
  std::size_t index() const noexcept { return vertex_count(); }

  /// Validates an explicit transition table (e.g. from a serialized
  /// certificate) without relabeling. Throws InvalidInput unless every
  /// generator is a permutation and the graph is connected.
  static FiniteCover from_edges(std::size_t rank, std::size_t vertices, Vertex basepoint, std::span<const Edge> edges) {
    if (vertices == 0) throw InvalidInput("cover must have at least one vertex");
    if (basepoint != 0) throw InvalidInput("cover basepoint must be vertex 0");
    require_vertices(vertices, "cover");
    detail::Tables t(rank, vertices);
    for (const Edge& e : edges) {
      if (e.src >= vertices || e.dst >= vertices || e.gen >= rank) throw InvalidInput("cover edge out of range");
      if (t.fwd(e.src, e.gen) != kNoVertex || t.bwd(e.dst, e.gen) != kNoVertex)
        throw InvalidInput("cover edges are not a partial injection");
      t.fwd(e.src, e.gen) = e.dst;
      t.bwd(e.dst, e.gen) = e.src;
    }
    FiniteCover c(t);
    if (!c.is_complete()) throw InvalidInput("cover is not complete");
    if (detail::canonicalize(t, 0).n != vertices) throw InvalidInput("cover is not connected");
    return c;
  }

 private:
  explicit FiniteCover(detail::Tables t) : FoldedGraph(std::move(t)) {}
  friend FiniteCover hall_complete(const FoldedGraph&, std::span<const FreeWord>);
  template <class G>
  friend G intersect(const G&, const G&);
};

/// Basepoint component of the fiber product. Membership in the result is
/// membership in both inputs. Covers intersect to covers.
template <class G>
G intersect(const G& x, const G& y) {
  if (x.rank() != y.rank()) throw InvalidInput("intersect: rank mismatch");
  const std::size_t rank = x.rank();
  std::unordered_map<std::uint64_t, Vertex> ids;
  std::vector<std::pair<Vertex, Vertex>> pairs;
  auto key = [](Vertex u, Vertex v) { return (std::uint64_t{u} << 32) | v; };
  auto id_of = [&](Vertex u, Vertex v) {
    auto [it, fresh] = ids.try_emplace(key(u, v), static_cast<Vertex>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(u, v);
      require_vertices(pairs.size(), "intersection");
    }
    return it->second;
  };
  id_of(0, 0);
  std::vector<Edge> edges;
  for (std::size_t head = 0; head < pairs.size(); ++head) {
    const auto [u, v] = pairs[head];
    for (GenIndex g = 0; g < rank; ++g) {
      const auto uf = x.target(u, g);
      const auto vf = y.target(v, g);
      if (uf && vf) edges.push_back({static_cast<Vertex>(head), g, id_of(*uf, *vf)});
      const auto ub = x.source(u, g);
      const auto vb = y.source(v, g);
      if (ub && vb) id_of(*ub, *vb);
    }
  }
  detail::Tables t(rank, pairs.size());
  for (const Edge& e : edges) {
    t.fwd(e.src, e.gen) = e.dst;
    t.bwd(e.dst, e.gen) = e.src;
  }
  if constexpr (std::is_same_v<G, CoreGraph>) t = detail::trim(std::move(t), 0);
  return G(detail::canonicalize(t, 0));
}

inline bool is_complete(const FoldedGraph& g) { return g.is_complete(); }

/// Extends g to a finite cover K ⊇ subgroup(g) with every word in `avoid`
/// outside K. The lifts of the avoided words are grafted at the basepoint,
/// then each generator's partial injection is completed by pairing
/// unmatched sources with unmatched targets in ascending id order.
inline FiniteCover hall_complete(const FoldedGraph& g, std::span<const FreeWord> avoid) {
  for (const FreeWord& w : avoid)
    if (contains(g, w)) throw InfeasibleError("hall_complete: avoided word already lies in the subgroup");
  const std::size_t rank = g.rank();
  detail::Folder folder(rank);
  for (std::size_t i = 0; i < g.vertex_count(); ++i) folder.add_vertex();
  for (const Edge& e : g.edges()) folder.add_edge(e.src, e.gen, e.dst);
  for (const FreeWord& w : avoid) {
    if (w.min_rank() > rank) throw InvalidInput("avoided word uses a symbol outside the alphabet");
    folder.add_path(0, w);
  }
  detail::Tables t = folder.tables();
  const Vertex base = folder.table_id(0);
  for (GenIndex gen = 0; gen < rank; ++gen) {
    std::vector<Vertex> sources, targets;
    for (Vertex v = 0; v < t.n; ++v) {
      if (t.fwd(v, gen) == kNoVertex) sources.push_back(v);
      if (t.bwd(v, gen) == kNoVertex) targets.push_back(v);
    }
    for (std::size_t i = 0; i < sources.size(); ++i) {
      t.fwd(sources[i], gen) = targets[i];
      t.bwd(targets[i], gen) = sources[i];
    }
  }
  FiniteCover k(detail::canonicalize(t, base));
  for (const FreeWord& w : avoid)
    if (contains(k, w)) throw VerificationFailure("hall_complete: avoided word closed up during completion");
  return k;
}

using Permutation = std::vector<Vertex>;

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), Vertex{0});
  return p;
}

/// x then y, acting on the right: (x*y)[v] = y[x[v]].
inline Permutation compose(const Permutation& x, const Permutation& y) {
  Permutation out(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) out[v] = y[x[v]];
  return out;
}

inline Permutation invert(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) out[p[v]] = static_cast<Vertex>(v);
  return out;
}

inline bool is_bijection(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (Vertex v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

/// Right action of F on the cosets of K: the image of w sends v to the
/// endpoint of w's lift at v.
class PermRep {
 public:
  explicit PermRep(const FiniteCover& k) : degree_(k.vertex_count()) {
    for (GenIndex g = 0; g < k.rank(); ++g) {
      Permutation p(degree_);
      for (Vertex v = 0; v < degree_; ++v) p[v] = *k.target(v, g);
      perms_.push_back(std::move(p));
    }
  }

  /// From stored arrays; throws InvalidInput unless each is a bijection of the same degree.
  PermRep(std::size_t degree, std::vector<Permutation> perms) : degree_(degree), perms_(std::move(perms)) {
    for (const Permutation& p : perms_)
      if (p.size() != degree_ || !is_bijection(p)) throw InvalidInput("generator image is not a permutation");
  }

  std::size_t degree() const noexcept { return degree_; }
  Vertex basepoint() const noexcept { return 0; }
  const std::vector<Permutation>& generators() const noexcept { return perms_; }

  Permutation image(const FreeWord& w) const {
    if (w.min_rank() > perms_.size()) throw InvalidInput("word uses a generator outside the permutation rep");
    Permutation out = identity_permutation(degree_);
    for (const Block& b : w.blocks()) {
      Permutation base = b.exp > 0 ? perms_[b.gen] : invert(perms_[b.gen]);
      for (Exponent e = b.exp < 0 ? detail::checked_neg(b.exp) : b.exp;;) {
        if (e & 1) out = compose(out, base);
        e >>= 1;
        if (e == 0) break;
        base = compose(base, base);
      }
    }
    return out;
  }

  friend bool operator==(const PermRep&, const PermRep&) = default;

 private:
  std::size_t degree_;
  std::vector<Permutation> perms_;
};

inline PermRep perm_rep(const FiniteCover& k) { return PermRep(k); }

/// Radius-n ball around the basepoint of the lazy-tree completion of a
/// folded graph: missing directions at interior vertices sprout fresh tree
/// vertices. Only edges incident to a vertex at distance < radius are kept.
class Ball : public FoldedGraph {
 public:
  std::size_t radius() const noexcept { return radius_; }
  std::size_t depth(Vertex v) const { return depth_.at(v); }

  static Ball around(const FoldedGraph& g, std::size_t radius) {
    const std::size_t rank = g.rank();
    detail::Tables t(rank, 0);
    std::vector<std::size_t> depth;
    // Each ball vertex is either a graph vertex or a fresh tree vertex.
    std::vector<Vertex> origin;
    std::vector<Vertex> image(g.vertex_count(), kNoVertex);
    auto new_vertex = [&](Vertex from_graph, std::size_t d) {
      const Vertex v = t.add_vertex();
      origin.push_back(from_graph);
      depth.push_back(d);
      if (from_graph != kNoVertex) image[from_graph] = v;
      return v;
    };
    new_vertex(g.basepoint(), 0);
    for (Vertex v = 0; v < t.n; ++v) {
      if (depth[v] >= radius) continue;
      for (GenIndex gen = 0; gen < rank; ++gen) {
        for (bool forward : {true, false}) {
          if ((forward ? t.fwd(v, gen) : t.bwd(v, gen)) != kNoVertex) continue;
          std::optional<Vertex> next;
          if (origin[v] != kNoVertex) next = forward ? g.target(origin[v], gen) : g.source(origin[v], gen);
          Vertex w;
          if (next) {
            w = image[*next] != kNoVertex ? image[*next] : new_vertex(*next, depth[v] + 1);
          } else {
            w = new_vertex(kNoVertex, depth[v] + 1);
          }
          (forward ? t.fwd(v, gen) : t.bwd(v, gen)) = w;
          (forward ? t.bwd(w, gen) : t.fwd(w, gen)) = v;
        }
      }
    }
    return Ball(detail::canonicalize(t, 0), radius);
  }

 private:
  Ball(detail::Tables t, std::size_t radius) : FoldedGraph(std::move(t)), radius_(radius) {
    depth_.assign(vertex_count(), 0);
    const auto& tab = tables();
    std::vector<bool> seen(vertex_count(), false);
    std::deque<Vertex> q{0};
    seen[0] = true;
    while (!q.empty()) {
      const Vertex v = q.front();
      q.pop_front();
      for (GenIndex gen = 0; gen < rank(); ++gen)
        for (Vertex w : {tab.fwd(v, gen), tab.bwd(v, gen)})
          if (w != kNoVertex && !seen[w]) {
            seen[w] = true;
            depth_[w] = depth_[v] + 1;
            q.push_back(w);
          }
    }
  }

  std::size_t radius_;
  std::vector<std::size_t> depth_;
};

inline Ball ball(const FoldedGraph& g, std::size_t radius) { return Ball::around(g, radius); }

/// Root-preserving labeled isomorphism by parallel breadth-first search.
/// Works on any vertex numbering; the map is forced because both sides are folded.
inline bool balls_isomorphic(const Ball& x, const Ball& y) {
  if (x.radius() != y.radius()) throw InvalidInput("balls_isomorphic: radius mismatch");
  if (x.rank() != y.rank()) throw InvalidInput("balls_isomorphic: rank mismatch");
  if (x.vertex_count() != y.vertex_count()) return false;
  std::vector<Vertex> fwd_map(x.vertex_count(), kNoVertex), back_map(y.vertex_count(), kNoVertex);
  std::deque<std::pair<Vertex, Vertex>> q{{x.basepoint(), y.basepoint()}};
  fwd_map[x.basepoint()] = y.basepoint();
  back_map[y.basepoint()] = x.basepoint();
  while (!q.empty()) {
    const auto [u, v] = q.front();
    q.pop_front();
    for (GenIndex g = 0; g < x.rank(); ++g) {
      for (bool forward : {true, false}) {
        const auto un = forward ? x.target(u, g) : x.source(u, g);
        const auto vn = forward ? y.target(v, g) : y.source(v, g);
        if (un.has_value() != vn.has_value()) return false;
        if (!un) continue;
        if (fwd_map[*un] == kNoVertex && back_map[*vn] == kNoVertex) {
          fwd_map[*un] = *vn;
          back_map[*vn] = *un;
          q.emplace_back(*un, *vn);
        } else if (fwd_map[*un] != *vn || back_map[*vn] != *un) {
          return false;
        }
      }
    }
  }
  return true;
}

/// Deterministic Graphviz text: basepoint drawn as a double circle, one
/// labeled edge per transition, sorted by source then generator.
inline std::string to_dot(const FoldedGraph& g, const Alphabet& alphabet) {
  if (alphabet.rank() != g.rank()) throw InvalidInput("to_dot: alphabet rank mismatch");
  std::ostringstream out;
  out << "digraph core {\n";
  out << "  node [shape=circle, label=\"\"];\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    out << "  " << v;
    if (v == g.basepoint()) out << " [shape=doublecircle]";
    out << ";\n";
  }
  for (const Edge& e : g.edges())
    out << "  " << e.src << " -> " << e.dst << " [label=\"" << alphabet.symbol(e.gen) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace kerchain

#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rasl/rational.hpp"
#include "rasl/rng.hpp"

namespace rasl::flow {

// Partial information-flow graph: source, in/out storage pairs, inheritor
// chains carrying surviving capacity, and (eventually) a data collector.
// Construction follows the evolution rules exactly; min_cut() is an exact
// max-flow over capacities scaled to a common denominator.
class PartialFlowGraph {
 public:
  enum class NodeKind { Source, In, Out, Collector };

  struct Node {
    NodeKind kind;
    long long chain = -1;    // original storage index this vertex belongs to
    long long serial = -1;   // pair serial (0 = initial vertex, 1 = first inheritor, ...)
  };

  struct Edge {
    std::size_t from, to;
    Rational capacity;       // ignored when infinite
    bool infinite = false;
  };

  struct StoragePair {
    std::size_t in, out;
    long long chain;
    long long serial;
    bool active = true;
    long long progenitor = -1;  // index into pairs_
    long long s_v = 0;          // surviving symbols inherited on creation
  };

  PartialFlowGraph(std::size_t n, long long r) : n_(n), r_(r) {
    if (n < 1) throw std::invalid_argument("PartialFlowGraph: need at least one vertex");
    if (r < 1) throw std::invalid_argument("PartialFlowGraph: need r >= 1");
    source_ = add_node({NodeKind::Source});
    for (std::size_t i = 0; i < n; ++i) {
      StoragePair p;
      p.in = add_node({NodeKind::In, (long long)i, 0});
      p.out = add_node({NodeKind::Out, (long long)i, 0});
      p.chain = (long long)i;
      p.serial = 0;
      add_edge(source_, p.in, Rational(r));
      add_edge(p.in, p.out, Rational(r));
      pairs_.push_back(p);
    }
  }

  std::size_t initial_count() const { return n_; }
  long long storage_r() const { return r_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<StoragePair>& pairs() const { return pairs_; }
  bool has_collector() const { return collector_.has_value(); }

  std::vector<std::size_t> active_pairs() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pairs_.size(); ++i)
      if (pairs_[i].active) out.push_back(i);
    return out;
  }

  // Fail pair v: deactivate it and create its direct inheritor, which inherits
  // s_v symbols for free and downloads beta from each of D active helpers.
  std::size_t apply_failure(std::size_t v, long long s_v, const std::vector<std::size_t>& helpers,
                            const Rational& beta) {
    if (collector_) throw std::logic_error("apply_failure: graph already finalized");
    if (v >= pairs_.size() || !pairs_[v].active)
      throw std::invalid_argument("apply_failure: vertex is not active");
    if (s_v < 0) throw std::invalid_argument("apply_failure: negative surviving count");
    for (auto h : helpers) {
      if (h >= pairs_.size() || !pairs_[h].active)
        throw std::invalid_argument("apply_failure: helper is not active");
      if (h == v) throw std::invalid_argument("apply_failure: failed vertex cannot help");
    }

    pairs_[v].active = false;
    StoragePair inh;
    inh.chain = pairs_[v].chain;
    inh.serial = pairs_[v].serial + 1;
    inh.in = add_node({NodeKind::In, inh.chain, inh.serial});
    inh.out = add_node({NodeKind::Out, inh.chain, inh.serial});
    inh.progenitor = (long long)v;
    inh.s_v = s_v;
    add_edge(pairs_[v].out, inh.in, Rational(s_v));
    for (auto h : helpers) add_edge(pairs_[h].out, inh.in, beta);
    add_edge(inh.in, inh.out, Rational(r_));
    pairs_.push_back(inh);
    return pairs_.size() - 1;
  }

  void attach_collector(const std::vector<std::size_t>& targets) {
    if (collector_) throw std::logic_error("attach_collector: collector already attached");
    std::vector<std::size_t> uniq = targets;
    std::sort(uniq.begin(), uniq.end());
    if (std::adjacent_find(uniq.begin(), uniq.end()) != uniq.end())
      throw std::invalid_argument("attach_collector: repeated target");
    collector_ = add_node({NodeKind::Collector});
    for (auto t : targets) {
      if (t >= pairs_.size() || !pairs_[t].active)
        throw std::invalid_argument("attach_collector: target is not active");
      Edge e{pairs_[t].out, *collector_, Rational(0), true};
      edges_.push_back(e);
    }
  }

  // Exact S->DC min cut.  Capacities are scaled to a common integer
  // denominator so Dinic runs on exact integers; infinite edges get a
  // capacity exceeding the finite total and can never be cut.
  Rational min_cut() const {
    if (!collector_) throw std::logic_error("min_cut: no collector attached");
    long long denom = 1;
    for (const auto& e : edges_)
      if (!e.infinite) denom = std::lcm(denom, e.capacity.den());
    long long finite_total = 0;
    for (const auto& e : edges_)
      if (!e.infinite) finite_total += e.capacity.num() * (denom / e.capacity.den());

    Dinic dinic(nodes_.size());
    for (const auto& e : edges_) {
      long long cap = e.infinite ? finite_total + 1
                                 : e.capacity.num() * (denom / e.capacity.den());
      dinic.add(e.from, e.to, cap);
    }
    long long flow = dinic.max_flow(source_, *collector_);
    if (flow > finite_total)
      throw std::logic_error("min_cut: infinite edge ended up in the cut");
    return Rational(flow, denom);
  }

  // Structural audit of the inheritor rules: active bookkeeping consistent,
  // at most one direct inheritor per vertex, and between two distinct chains
  // at most one helper edge from one chain into any fixed in-node.
  void audit() const {
    std::vector<int> direct(pairs_.size(), 0);
    for (const auto& p : pairs_)
      if (p.progenitor >= 0) {
        direct[(std::size_t)p.progenitor]++;
        if (pairs_[(std::size_t)p.progenitor].active)
          throw std::logic_error("audit: progenitor still active");
      }
    for (auto c : direct)
      if (c > 1) throw std::logic_error("audit: vertex has two direct inheritors");

    // map in-node -> pair, out-node -> pair
    std::vector<long long> owner(nodes_.size(), -1);
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      owner[pairs_[i].in] = (long long)i;
      owner[pairs_[i].out] = (long long)i;
    }
    // helper edges between distinct chains: at most one per (chain, in-node)
    std::vector<std::pair<long long, std::size_t>> seen;
    for (const auto& e : edges_) {
      if (e.infinite || nodes_[e.from].kind != NodeKind::Out ||
          nodes_[e.to].kind != NodeKind::In)
        continue;
      long long from_pair = owner[e.from], to_pair = owner[e.to];
      if (from_pair < 0 || to_pair < 0) continue;
      if (pairs_[(std::size_t)from_pair].chain == pairs_[(std::size_t)to_pair].chain) continue;
      auto key = std::make_pair(pairs_[(std::size_t)from_pair].chain, e.to);
      if (std::find(seen.begin(), seen.end(), key) != seen.end())
        throw std::logic_error("audit: duplicate cross-chain helper edge");
      seen.push_back(key);
    }

    // acyclicity via topological sort
    std::vector<std::size_t> indeg(nodes_.size(), 0);
    for (const auto& e : edges_) indeg[e.to]++;
    std::queue<std::size_t> q;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (!indeg[i]) q.push(i);
    std::size_t seen_nodes = 0;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      ++seen_nodes;
      for (const auto& e : edges_)
        if (e.from == u && --indeg[e.to] == 0) q.push(e.to);
    }
    if (seen_nodes != nodes_.size()) throw std::logic_error("audit: graph has a cycle");
  }

  std::string to_dot() const {
    std::ostringstream os;
    os << "digraph flow {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      os << "  n" << i << " [label=\"" << node_label(i) << "\"";
      if (nodes_[i].kind == NodeKind::Source || nodes_[i].kind == NodeKind::Collector)
        os << ", shape=box";
      os << "];\n";
    }
    for (const auto& e : edges_) {
      os << "  n" << e.from << " -> n" << e.to << " [label=\"";
      if (e.infinite) os << "inf";
      else os << e.capacity.str();
      os << "\"];\n";
    }
    os << "}\n";
    return os.str();
  }

  std::string node_label(std::size_t i) const {
    const Node& nd = nodes_[i];
    switch (nd.kind) {
      case NodeKind::Source: return "S";
      case NodeKind::Collector: return "DC";
      case NodeKind::In:
        return "X" + std::to_string(nd.chain) + "." + std::to_string(nd.serial) + ".in";
      case NodeKind::Out:
        return "X" + std::to_string(nd.chain) + "." + std::to_string(nd.serial) + ".out";
    }
    return "?";
  }

  std::size_t source_node() const { return source_; }
  std::optional<std::size_t> collector_node() const { return collector_; }

 private:
  struct Dinic {
    struct E {
      std::size_t to;
      long long cap;
      std::size_t rev;
    };
    std::vector<std::vector<E>> g;
    std::vector<int> level, iter;

    explicit Dinic(std::size_t n) : g(n), level(n), iter(n) {}

    void add(std::size_t from, std::size_t to, long long cap) {
      g[from].push_back({to, cap, g[to].size()});
      g[to].push_back({from, 0, g[from].size() - 1});
    }

    bool bfs(std::size_t s, std::size_t t) {
      std::fill(level.begin(), level.end(), -1);
      std::queue<std::size_t> q;
      level[s] = 0;
      q.push(s);
      while (!q.empty()) {
        auto v = q.front();
        q.pop();
        for (const auto& e : g[v])
          if (e.cap > 0 && level[e.to] < 0) {
            level[e.to] = level[v] + 1;
            q.push(e.to);
          }
      }
      return level[t] >= 0;
    }

    long long dfs(std::size_t v, std::size_t t, long long f) {
      if (v == t) return f;
      for (auto& i = iter[v]; i < (int)g[v].size(); ++i) {
        E& e = g[v][(std::size_t)i];
        if (e.cap > 0 && level[e.to] == level[v] + 1) {
          long long d = dfs(e.to, t, std::min(f, e.cap));
          if (d > 0) {
            e.cap -= d;
            g[e.to][e.rev].cap += d;
            return d;
          }
        }
      }
      return 0;
    }

    long long max_flow(std::size_t s, std::size_t t) {
      long long flow = 0;
      while (bfs(s, t)) {
        std::fill(iter.begin(), iter.end(), 0);
        long long f;
        while ((f = dfs(s, t, INT64_MAX)) > 0) flow += f;
      }
      return flow;
    }
  };

  std::size_t add_node(Node nd) {
    nodes_.push_back(nd);
    return nodes_.size() - 1;
  }

  void add_edge(std::size_t from, std::size_t to, const Rational& cap) {
    edges_.push_back({from, to, cap, false});
  }

  std::size_t n_;
  long long r_;
  std::size_t source_;
  std::optional<std::size_t> collector_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<StoragePair> pairs_;
};

inline PartialFlowGraph build_initial(std::size_t n, long long r) {
  return PartialFlowGraph(n, r);
}

// The capacity-minimizing evolution: fail the K vertices with the smallest
// survivor counts, in descending order of s, so the later (smaller-s)
// inheritors receive the fewest helper edges from outside the collector set.
// Each failure is helped by the most recent inheritors plus enough still
// untouched original vertices.
inline PartialFlowGraph worst_case_graph(std::size_t N, std::size_t K, std::size_t D,
                                         const Rational& beta, const std::vector<long long>& s,
                                         long long r) {
  if (K > N) throw std::invalid_argument("worst_case_graph: need K <= N");
  if (D < 1 || D > N - 1) throw std::invalid_argument("worst_case_graph: need 1 <= D <= N-1");
  if (s.size() != N) throw std::invalid_argument("worst_case_graph: s must have N entries");

  std::vector<std::size_t> idx(N);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
  std::vector<std::size_t> fail_order(idx.begin(), idx.begin() + (std::ptrdiff_t)K);
  std::reverse(fail_order.begin(), fail_order.end());  // largest of the K smallest goes first

  PartialFlowGraph g(N, r);
  std::vector<std::size_t> inheritors;
  for (std::size_t t = 0; t < K; ++t) {
    std::size_t chain = fail_order[t];
    std::vector<std::size_t> helpers;
    // most recent inheritors first (window <= D)
    for (std::size_t b = inheritors.size(); b-- > 0 && helpers.size() < D;)
      helpers.push_back(inheritors[b]);
    // top up with active original vertices (never-failed preferred)
    for (std::size_t i = 0; i < N && helpers.size() < D; ++i) {
      if (i == chain) continue;
      bool scheduled = false;
      for (std::size_t tt = 0; tt <= t; ++tt)
        if (fail_order[tt] == i) scheduled = true;
      if (scheduled) continue;
      if (g.pairs()[i].active) helpers.push_back(i);
    }
    for (std::size_t i = 0; i < N && helpers.size() < D; ++i) {
      if (i == chain || !g.pairs()[i].active) continue;
      if (std::find(helpers.begin(), helpers.end(), i) == helpers.end()) helpers.push_back(i);
    }
    if (helpers.size() < D) throw std::logic_error("worst_case_graph: not enough helpers");
    inheritors.push_back(g.apply_failure(chain, s[chain], helpers, beta));
  }
  g.attach_collector(inheritors);
  return g;
}

// Random admissible evolution: random chains fail (inheritors can fail again,
// inheriting the same per-chain survivor count), helpers are sampled among
// the other active vertices, and the collector lands on K random active
// vertices.
inline PartialFlowGraph random_evolution(std::size_t N, std::size_t K, std::size_t D,
                                         const Rational& beta, const std::vector<long long>& s,
                                         long long r, std::size_t steps, std::uint64_t seed) {
  if (K > N) throw std::invalid_argument("random_evolution: need K <= N");
  if (D < 1 || D > N - 1) throw std::invalid_argument("random_evolution: need 1 <= D <= N-1");
  if (s.size() != N) throw std::invalid_argument("random_evolution: s must have N entries");

  Rng rng(seed);
  PartialFlowGraph g(N, r);
  for (std::size_t t = 0; t < steps; ++t) {
    auto active = g.active_pairs();
    std::size_t victim = active[rng.below(active.size())];
    std::vector<std::size_t> pool;
    for (auto a : active)
      if (a != victim) pool.push_back(a);
    for (std::size_t i = pool.size(); i-- > 1;) std::swap(pool[i], pool[rng.below(i + 1)]);
    pool.resize(D);
    long long chain = g.pairs()[victim].chain;
    g.apply_failure(victim, s[(std::size_t)chain], pool, beta);
  }
  auto active = g.active_pairs();
  for (std::size_t i = active.size(); i-- > 1;) std::swap(active[i], active[rng.below(i + 1)]);
  active.resize(K);
  g.attach_collector(active);
  g.audit();
  return g;
}

}  // namespace rasl::flow

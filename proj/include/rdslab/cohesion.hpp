#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <vector>

#include "rdslab/graph.hpp"
#include "rdslab/rng.hpp"

namespace rdslab {

namespace detail {

// Dinic max-flow on a small integer-capacity digraph.
class Dinic {
 public:
  explicit Dinic(int n) : head_(n, -1), level_(n), iter_(n) {}

  void add_edge(int from, int to, int cap) {
    edges_.push_back({to, head_[from], cap});
    head_[from] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[to], 0});
    head_[to] = static_cast<int>(edges_.size()) - 1;
  }

  int max_flow(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      iter_ = head_;
      while (int f = dfs(s, t, std::numeric_limits<int>::max())) flow += f;
    }
    return flow;
  }

 private:
  struct Edge {
    int to, next, cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int e = head_[u]; e != -1; e = edges_[e].next)
        if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[u] + 1;
          q.push(edges_[e].to);
        }
    }
    return level_[t] >= 0;
  }

  int dfs(int u, int t, int limit) {
    if (u == t) return limit;
    for (int& e = iter_[u]; e != -1; e = edges_[e].next) {
      Edge& ed = edges_[e];
      if (ed.cap > 0 && level_[ed.to] == level_[u] + 1) {
        const int d = dfs(ed.to, t, std::min(limit, ed.cap));
        if (d > 0) {
          ed.cap -= d;
          edges_[e ^ 1].cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  std::vector<Edge> edges_;
  std::vector<int> head_, level_, iter_;
};

}  // namespace detail

/// Number of node-independent paths between two distinct nodes: unit-capacity
/// max-flow on the node-split digraph. The direct edge, when present, is kept
/// and counts as one path, so adjacent dyads of K_n score n-1.
inline int node_independent_paths(const Graph& g, int s, int t) {
  if (s == t) throw data_error("node_independent_paths: identical endpoints");
  const int n = static_cast<int>(g.node_count());
  // node v splits into in(v)=2v, out(v)=2v+1
  detail::Dinic flow(2 * n);
  for (int v = 0; v < n; ++v) flow.add_edge(2 * v, 2 * v + 1, 1);
  for (int v = 0; v < n; ++v)
    for (int w : g.neighbors(v)) flow.add_edge(2 * v + 1, 2 * w, 1);
  return flow.max_flow(2 * s + 1, 2 * t);
}

struct CohesionEstimate {
  double mean = 0.0;
  int min = 0;
  int max = 0;
  std::size_t dyads_evaluated = 0;
  bool exhaustive = false;
};

/// Mean (and range) of node-independent path counts over sampled dyads;
/// exhaustive enumeration whenever the graph has no more dyads than asked
/// for. Dyads are sampled without replacement unless told otherwise.
inline CohesionEstimate estimate_node_independent_paths(const Graph& g, std::size_t dyad_sample,
                                                        Rng& rng,
                                                        bool with_replacement = false) {
  const std::size_t n = g.node_count();
  if (n < 2) throw data_error("estimate_node_independent_paths: need at least two nodes");
  if (dyad_sample == 0) throw data_error("estimate_node_independent_paths: dyad_sample must be >= 1");
  const std::size_t total = n * (n - 1) / 2;

  std::vector<std::pair<int, int>> dyads;
  CohesionEstimate est;
  if (total <= dyad_sample) {
    est.exhaustive = true;
    dyads.reserve(total);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        dyads.emplace_back(static_cast<int>(i), static_cast<int>(j));
  } else if (with_replacement) {
    dyads.reserve(dyad_sample);
    while (dyads.size() < dyad_sample) {
      const int a = static_cast<int>(rng.uniform_below(n));
      const int b = static_cast<int>(rng.uniform_below(n));
      if (a == b) continue;
      dyads.emplace_back(std::min(a, b), std::max(a, b));
    }
  } else {
    std::set<std::pair<int, int>> chosen;
    while (chosen.size() < dyad_sample) {
      const int a = static_cast<int>(rng.uniform_below(n));
      const int b = static_cast<int>(rng.uniform_below(n));
      if (a == b) continue;
      chosen.insert({std::min(a, b), std::max(a, b)});
    }
    dyads.assign(chosen.begin(), chosen.end());
  }

  long long sum = 0;
  est.min = std::numeric_limits<int>::max();
  est.max = 0;
  for (const auto& [s, t] : dyads) {
    const int k = node_independent_paths(g, s, t);
    sum += k;
    est.min = std::min(est.min, k);
    est.max = std::max(est.max, k);
  }
  est.dyads_evaluated = dyads.size();
  est.mean = static_cast<double>(sum) / static_cast<double>(dyads.size());
  return est;
}

}  // namespace rdslab

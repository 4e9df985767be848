#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rdslab/chain.hpp"
#include "rdslab/graph.hpp"
#include "rdslab/rng.hpp"

namespace rdslab {

/// Four-cell homophily block model. Cells are (Y,Z) = (0,0),(0,1),(1,1),(1,0)
/// in that order. D, E, F, H count *directed* friendship nominations per the
/// block layout: D within cell 1 (and 4), E between cells 1-2 (and 3-4),
/// F within cell 2 (and 3), H across the Y boundary (cells 2-3). Equal cell
/// degree forces D = F + H.
struct BlockModelSpec {
  long cell_size = 50;
  long d = 500, e = 250, f = 250, h = 250;

  double mix_a() const { return static_cast<double>(e) / static_cast<double>(e + f + h); }
  double mix_b() const { return static_cast<double>(h) / static_cast<double>(e + f + h); }

  void validate() const {
    if (cell_size < 1) throw data_error("BlockModelSpec: cell_size must be >= 1");
    if (d < 0 || e < 0 || f < 0 || h < 0) throw data_error("BlockModelSpec: negative edge count");
    if (d != f + h)
      throw data_error("BlockModelSpec: equal cell degree requires D = F + H (got D=" +
                       std::to_string(d) + ", F+H=" + std::to_string(f + h) + ")");
    if (d % 2 != 0 || f % 2 != 0)
      throw data_error("BlockModelSpec: within-cell nomination counts D and F must be even");
    if (e + f + h == 0) throw data_error("BlockModelSpec: cells have no ties");
  }
};

struct CategoryChainPair {
  CategoryChain four_state;  // (Y,Z) cell chain, Y = (0,0,1,1)
  CategoryChain two_state;   // collapsed Y chain with cross probability b/2
};

/// Category-level chains implied by the block model: the 4-state cell chain
/// with mixing rates a = E/(E+F+H), b = H/(E+F+H) and the 2-state chain a
/// dyadic observer would fit. Both are doubly stochastic, hence uniform
/// stationary and reversible. H = 0 splits the Y groups and is rejected.
inline CategoryChainPair build_category_chain(const BlockModelSpec& spec) {
  spec.validate();
  if (spec.h == 0)
    throw data_error("build_category_chain: H = 0 makes the chain reducible across Y groups");
  const double a = spec.mix_a();
  const double b = spec.mix_b();

  CategoryChainPair out;
  Eigen::MatrixXd m(4, 4);
  m << 1 - a, a, 0, 0,
       a, 1 - a - b, b, 0,
       0, b, 1 - a - b, a,
       0, 0, a, 1 - a;
  out.four_state.transition = m;
  out.four_state.y = Eigen::Vector4d(0, 0, 1, 1);
  out.four_state.stationary = Eigen::Vector4d::Constant(0.25);

  Eigen::MatrixXd c(2, 2);
  const double cross = b / 2.0;
  c << 1 - cross, cross, cross, 1 - cross;
  out.two_state.transition = c;
  out.two_state.y = Eigen::Vector2d(0, 1);
  out.two_state.stationary = Eigen::Vector2d::Constant(0.5);

  out.four_state.validate();
  out.two_state.validate();
  return out;
}

struct BlockEigenvalues {
  std::array<double, 4> four_state;  // {1, 1-a-b+r, 1-2a, 1-a-b-r}, r = sqrt(a^2+b^2)
  std::array<double, 2> two_state;   // {1, 1-b}
};

/// Closed-form spectra of the two block-model chains as functions of the
/// mixing rates.
inline BlockEigenvalues closed_form_eigenvalues(double a, double b) {
  if (a < 0 || b < 0 || a + b > 1)
    throw data_error("closed_form_eigenvalues: need a,b >= 0 and a+b <= 1");
  const double r = std::sqrt(a * a + b * b);
  BlockEigenvalues out;
  out.four_state = {1.0, 1.0 - a - b + r, 1.0 - 2.0 * a, 1.0 - a - b - r};
  out.two_state = {1.0, 1.0 - b};
  return out;
}

namespace detail {

// k distinct indices from [0, universe), uniformly (Floyd's algorithm).
inline std::vector<std::size_t> sample_distinct(std::size_t universe, std::size_t k, Rng& rng) {
  std::set<std::size_t> chosen;
  for (std::size_t j = universe - k; j < universe; ++j) {
    const std::size_t t = rng.uniform_below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

inline std::pair<int, int> unrank_within(std::size_t idx, long n) {
  // unrank an unordered pair over {0..n-1}
  std::size_t i = 0;
  std::size_t row = static_cast<std::size_t>(n) - 1;
  while (idx >= row) {
    idx -= row;
    --row;
    ++i;
  }
  return {static_cast<int>(i), static_cast<int>(i + 1 + idx)};
}

}  // namespace detail

/// Realize the block model as a concrete simple graph with the block edge
/// counts met exactly (not just in expectation). Node attributes y and z are
/// attached. Retries fresh realizations until one is connected.
inline Graph generate_block_network(const BlockModelSpec& spec, Rng& rng,
                                    int max_retries = 1000) {
  spec.validate();
  if (spec.h == 0)
    throw data_error("generate_block_network: H = 0 cannot produce a connected graph");
  const long n = spec.cell_size;
  const long within_pairs = n * (n - 1) / 2;
  const long cross_pairs = n * n;
  if (spec.d / 2 > within_pairs || spec.f / 2 > within_pairs)
    throw data_error("generate_block_network: within-cell count exceeds n(n-1)/2");
  if (spec.e > cross_pairs || spec.h > cross_pairs)
    throw data_error("generate_block_network: cross-cell count exceeds n*n");

  // cells 0..3 = (Y,Z): (0,0),(0,1),(1,1),(1,0); node v is in cell v / n
  const auto node_name = [&](long cell, long i) { return std::to_string(cell * n + i + 1); };

  struct Block {
    long cell_a, cell_b;  // cell_a == cell_b for within blocks
    long count;           // undirected edges to place
  };
  const std::vector<Block> blocks = {
      {0, 0, spec.d / 2}, {0, 1, spec.e}, {1, 1, spec.f / 2}, {1, 2, spec.h},
      {2, 2, spec.f / 2}, {2, 3, spec.e}, {3, 3, spec.d / 2},
  };

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& blk : blocks) {
      if (blk.count == 0) continue;
      if (blk.cell_a == blk.cell_b) {
        auto picks = detail::sample_distinct(static_cast<std::size_t>(within_pairs),
                                             static_cast<std::size_t>(blk.count), rng);
        for (auto idx : picks) {
          auto [i, j] = detail::unrank_within(idx, n);
          edges.emplace_back(node_name(blk.cell_a, i), node_name(blk.cell_a, j));
        }
      } else {
        auto picks = detail::sample_distinct(static_cast<std::size_t>(cross_pairs),
                                             static_cast<std::size_t>(blk.count), rng);
        for (auto idx : picks)
          edges.emplace_back(node_name(blk.cell_a, static_cast<long>(idx) / n),
                             node_name(blk.cell_b, static_cast<long>(idx) % n));
      }
    }
    Graph g = Graph::from_edges(edges);
    if (g.node_count() != static_cast<std::size_t>(4 * n) || !g.connected()) continue;

    std::vector<int> y(4 * n), z(4 * n);
    static constexpr int cell_y[4] = {0, 0, 1, 1};
    static constexpr int cell_z[4] = {0, 1, 1, 0};
    for (long cell = 0; cell < 4; ++cell)
      for (long i = 0; i < n; ++i) {
        const int v = *g.index_of(node_name(cell, i));
        y[v] = cell_y[cell];
        z[v] = cell_z[cell];
      }
    g.set_attribute("y", std::move(y));
    g.set_attribute("z", std::move(z));
    return g;
  }
  throw data_error("generate_block_network: no connected realization within retry budget");
}

struct ContrastPairParams {
  long cell_size = 50;
  long unit = 100;  // block counts are (D,E,F,H) = (5u, u, u, 4u)
  int max_retries = 1000;
};

struct ContrastPair {
  Graph fom;     // degree-preserving rewiring of nonfom, Z structure destroyed
  Graph nonfom;  // the raw block network
};

/// Two graphs with identical size, edge count, per-node degrees and dyadic
/// Y-transition matrix, where only the second carries the hidden Z block
/// structure that slows walk mixing. The first is obtained from the second by
/// degree- and edge-type-preserving double-edge swaps.
inline ContrastPair make_contrast_pair(const ContrastPairParams& params, Rng& rng) {
  BlockModelSpec spec;
  spec.cell_size = params.cell_size;
  spec.d = 5 * params.unit;
  spec.e = params.unit;
  spec.f = params.unit;
  spec.h = 4 * params.unit;
  if (spec.d % 2 != 0 || spec.f % 2 != 0)
    throw data_error("make_contrast_pair: unit must keep D and F even");

  ContrastPair out;
  out.nonfom = generate_block_network(spec, rng, params.max_retries);

  const auto& y = out.nonfom.attribute("y");
  const int n = static_cast<int>(out.nonfom.node_count());
  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    // bucket edges by unordered Y type: 0 = within Y=0, 1 = within Y=1, 2 = cross
    std::array<std::vector<std::pair<int, int>>, 3> buckets;
    for (int v = 0; v < n; ++v)
      for (int w : out.nonfom.neighbors(v)) {
        if (v >= w) continue;
        if (y[v] == 0 && y[w] == 0)
          buckets[0].emplace_back(v, w);
        else if (y[v] == 1 && y[w] == 1)
          buckets[1].emplace_back(v, w);
        else
          buckets[2].emplace_back(y[v] == 0 ? v : w, y[v] == 0 ? w : v);  // orient 0-side first
      }
    std::set<std::pair<int, int>> present;
    for (const auto& bucket : buckets)
      for (auto [a, b] : bucket) present.insert(std::minmax(a, b));

    const auto has_edge = [&](int a, int b) { return present.count(std::minmax(a, b)) > 0; };
    std::size_t total_edges = present.size();
    std::size_t wanted = 10 * total_edges;
    std::size_t done = 0, tries = 0;
    while (done < wanted && tries < 100 * wanted) {
      ++tries;
      auto& bucket = buckets[rng.uniform_below(3)];
      if (bucket.size() < 2) continue;
      const std::size_t ia = rng.uniform_below(bucket.size());
      const std::size_t ib = rng.uniform_below(bucket.size());
      if (ia == ib) continue;
      auto [a1, a2] = bucket[ia];
      auto [b1, b2] = bucket[ib];
      if (&bucket != &buckets[2] && rng.uniform_below(2) == 1) std::swap(b1, b2);
      // propose (a1,b2) and (b1,a2)
      if (a1 == b2 || b1 == a2) continue;
      if (has_edge(a1, b2) || has_edge(b1, a2)) continue;
      present.erase(std::minmax(a1, a2));
      present.erase(std::minmax(b1, b2));
      present.insert(std::minmax(a1, b2));
      present.insert(std::minmax(b1, a2));
      bucket[ia] = {a1, b2};
      bucket[ib] = {b1, a2};
      ++done;
    }

    std::vector<std::pair<std::string, std::string>> edges;
    edges.reserve(present.size());
    for (auto [a, b] : present)
      edges.emplace_back(out.nonfom.node_id(a), out.nonfom.node_id(b));
    Graph g = Graph::from_edges(edges);
    if (g.node_count() != out.nonfom.node_count() || !g.connected()) continue;
    std::vector<int> y2(g.node_count()), z2(g.node_count());
    const auto& z = out.nonfom.attribute("z");
    for (int v = 0; v < n; ++v) {
      const int idx = *g.index_of(out.nonfom.node_id(v));
      y2[idx] = y[v];
      z2[idx] = z[v];
    }
    g.set_attribute("y", std::move(y2));
    g.set_attribute("z", std::move(z2));
    out.fom = std::move(g);
    return out;
  }
  throw data_error("make_contrast_pair: no connected rewiring within retry budget");
}

}  // namespace rdslab

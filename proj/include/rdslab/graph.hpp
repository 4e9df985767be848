#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rdslab/errors.hpp"

namespace rdslab {

/// What got cleaned away while building a simple graph.
struct LoadReport {
  std::size_t self_loops = 0;
  std::size_t duplicate_edges = 0;
  std::size_t lines_read = 0;
};

/// Undirected simple graph over string-identified nodes, with optional binary
/// node attributes (-1 encodes missing). Immutable once built; every accessor
/// is safe to call from concurrent readers.
class Graph {
 public:
  Graph() = default;

  /// Build from (possibly directed, possibly duplicated) edge pairs. Edges are
  /// symmetrized and deduplicated; self-loops are dropped. `directed_input`
  /// only changes what counts as a duplicate in the report: a reversed pair is
  /// expected in directed files and is not reported there.
  static Graph from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                          bool directed_input = false, LoadReport* report = nullptr) {
    Graph g;
    std::set<std::pair<int, int>> undirected_seen;
    std::set<std::pair<int, int>> ordered_seen;
    for (const auto& [a, b] : edges) {
      const int u = g.intern(a);
      const int v = g.intern(b);
      if (u == v) {
        if (report) ++report->self_loops;
        continue;
      }
      const auto key = std::minmax(u, v);
      if (directed_input) {
        if (!ordered_seen.insert({u, v}).second) {
          if (report) ++report->duplicate_edges;
          continue;
        }
        undirected_seen.insert(key);
      } else {
        if (!undirected_seen.insert(key).second) {
          if (report) ++report->duplicate_edges;
          continue;
        }
      }
    }
    if (directed_input) {
      // symmetrization already folded reversed pairs into one undirected edge
    }
    g.adj_.assign(g.node_ids_.size(), {});
    for (const auto& [u, v] : undirected_seen) {
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());
    g.edge_count_ = undirected_seen.size();
    return g;
  }

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  long degree(int v) const { return static_cast<long>(adj_[v].size()); }

  const std::string& node_id(int v) const { return node_ids_[v]; }
  const std::vector<std::string>& node_ids() const { return node_ids_; }

  std::optional<int> index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool adjacent(int u, int v) const {
    const auto& nbrs = adj_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
  }

  /// Attribute values per node; -1 means missing.
  const std::map<std::string, std::vector<int>>& attributes() const { return attributes_; }

  const std::vector<int>& attribute(const std::string& name) const {
    auto it = attributes_.find(name);
    if (it == attributes_.end()) throw data_error("unknown attribute: " + name);
    return it->second;
  }

  void set_attribute(const std::string& name, std::vector<int> values) {
    if (values.size() != node_count())
      throw data_error("attribute " + name + " has wrong length");
    for (int v : values)
      if (v != -1 && v != 0 && v != 1)
        throw data_error("attribute " + name + " holds a non-binary value");
    attributes_[name] = std::move(values);
  }

  bool connected() const {
    if (node_count() == 0) return false;
    std::vector<char> seen(node_count(), 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t visited = 1;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int w : adj_[u])
        if (!seen[w]) {
          seen[w] = 1;
          ++visited;
          frontier.push(w);
        }
    }
    return visited == node_count();
  }

 private:
  int intern(const std::string& id) {
    auto it = index_.find(id);
    if (it != index_.end()) return it->second;
    const int idx = static_cast<int>(node_ids_.size());
    node_ids_.push_back(id);
    index_.emplace(id, idx);
    return idx;
  }

  friend Graph largest_connected_component(const Graph&);

  std::vector<std::string> node_ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> adj_;
  std::map<std::string, std::vector<int>> attributes_;
  std::size_t edge_count_ = 0;
};

namespace detail {

// Numeric-aware id ordering so "9" < "10"; falls back to lexicographic.
inline bool id_less(const std::string& a, const std::string& b) {
  const auto all_digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (all_digits(a) && all_digits(b)) {
    if (a.size() != b.size()) return a.size() < b.size();
  }
  return a < b;
}

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::string spaced = line;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::replace(spaced.begin(), spaced.end(), '\t', ' ');
  std::istringstream in(spaced);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

/// Parse an edge-list file: one edge per line, two whitespace- or
/// comma-separated node tokens, `#` starts a comment.
inline Graph load_edge_list(const std::string& path, bool directed_input = false,
                            LoadReport* report = nullptr) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open edge list: " + path);
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto toks = detail::split_tokens(line);
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw data_error(path + ":" + std::to_string(line_no) + ": expected two node tokens, got " +
                       std::to_string(toks.size()));
    edges.emplace_back(std::move(toks[0]), std::move(toks[1]));
  }
  if (report) report->lines_read = line_no;
  return Graph::from_edges(edges, directed_input, report);
}

/// Attribute file: header `node,attr1,attr2,...`; values 0/1 or empty
/// (missing). Every referenced node must exist in the graph.
inline void load_attributes(Graph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open attribute file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error("attribute file is empty: " + path);
  auto header = detail::split_tokens(line);
  if (header.size() < 2 || header[0] != "node")
    throw data_error(path + ": header must be node,attr1,...");
  std::vector<std::string> names(header.begin() + 1, header.end());
  std::map<std::string, std::vector<int>> values;
  for (const auto& n : names) values[n].assign(g.node_count(), -1);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    // split on commas, preserving empty fields
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    fields.push_back(cur);
    if (fields.size() != names.size() + 1)
      throw data_error(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(names.size() + 1) + " fields");
    auto idx = g.index_of(fields[0]);
    if (!idx)
      throw data_error(path + ":" + std::to_string(line_no) + ": unknown node " + fields[0]);
    for (std::size_t a = 0; a < names.size(); ++a) {
      const std::string& f = fields[a + 1];
      if (f.empty()) continue;
      if (f != "0" && f != "1")
        throw data_error(path + ":" + std::to_string(line_no) + ": attribute value must be 0/1/empty");
      values[names[a]][*idx] = f == "1" ? 1 : 0;
    }
  }
  for (auto& [name, vals] : values) g.set_attribute(name, std::move(vals));
}

/// Subgraph induced by the largest connected component. Ties on size go to
/// the component holding the smallest node id. External ids and attributes
/// carry over.
inline Graph largest_connected_component(const Graph& g) {
  if (g.node_count() == 0) throw data_error("largest_connected_component on empty graph");
  const int n = static_cast<int>(g.node_count());
  std::vector<int> comp(n, -1);
  int n_comp = 0;
  for (int start = 0; start < n; ++start) {
    if (comp[start] != -1) continue;
    std::queue<int> frontier;
    frontier.push(start);
    comp[start] = n_comp;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int w : g.neighbors(u))
        if (comp[w] == -1) {
          comp[w] = n_comp;
          frontier.push(w);
        }
    }
    ++n_comp;
  }
  std::vector<long> size(n_comp, 0);
  std::vector<const std::string*> min_id(n_comp, nullptr);
  for (int v = 0; v < n; ++v) {
    ++size[comp[v]];
    const std::string& id = g.node_id(v);
    if (!min_id[comp[v]] || detail::id_less(id, *min_id[comp[v]])) min_id[comp[v]] = &id;
  }
  int best = 0;
  for (int c = 1; c < n_comp; ++c) {
    if (size[c] > size[best] ||
        (size[c] == size[best] && detail::id_less(*min_id[c], *min_id[best])))
      best = c;
  }

  Graph out;
  std::vector<int> new_index(n, -1);
  for (int v = 0; v < n; ++v)
    if (comp[v] == best) new_index[v] = out.intern(g.node_id(v));
  out.adj_.assign(out.node_count(), {});
  std::size_t m = 0;
  for (int v = 0; v < n; ++v) {
    if (comp[v] != best) continue;
    for (int w : g.neighbors(v)) {
      out.adj_[new_index[v]].push_back(new_index[w]);
      if (v < w) ++m;
    }
  }
  for (auto& nbrs : out.adj_) std::sort(nbrs.begin(), nbrs.end());
  out.edge_count_ = m;
  for (const auto& [name, vals] : g.attributes()) {
    std::vector<int> kept(out.node_count(), -1);
    for (int v = 0; v < n; ++v)
      if (new_index[v] != -1) kept[new_index[v]] = vals[v];
    out.attributes_[name] = std::move(kept);
  }
  return out;
}

/// Row-stochastic walk matrix: entry (i,j) = 1/d_i on neighbors, 0 elsewhere.
inline Eigen::MatrixXd transition_matrix(const Graph& g) {
  const int n = static_cast<int>(g.node_count());
  for (int v = 0; v < n; ++v)
    if (g.degree(v) == 0) throw data_error("transition_matrix: isolated node " + g.node_id(v));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int v = 0; v < n; ++v) {
    const double p = 1.0 / static_cast<double>(g.degree(v));
    for (int w : g.neighbors(v)) m(v, w) = p;
  }
  return m;
}

/// Walk equilibrium: pi_i = d_i / 2m.
inline Eigen::VectorXd stationary_distribution(const Graph& g) {
  const int n = static_cast<int>(g.node_count());
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  if (two_m == 0) throw data_error("stationary_distribution: graph has no edges");
  Eigen::VectorXd pi(n);
  for (int v = 0; v < n; ++v) pi[v] = static_cast<double>(g.degree(v)) / two_m;
  return pi;
}

/// Write the graph back out in the edge-list + attribute formats that
/// load_edge_list / load_attributes read.
inline void write_edge_list(const Graph& g, std::ostream& out) {
  for (int v = 0; v < static_cast<int>(g.node_count()); ++v)
    for (int w : g.neighbors(v))
      if (v < w) out << g.node_id(v) << ' ' << g.node_id(w) << '\n';
}

inline void write_attributes(const Graph& g, std::ostream& out) {
  out << "node";
  for (const auto& [name, vals] : g.attributes()) out << ',' << name;
  out << '\n';
  for (int v = 0; v < static_cast<int>(g.node_count()); ++v) {
    out << g.node_id(v);
    for (const auto& [name, vals] : g.attributes()) {
      out << ',';
      if (vals[v] != -1) out << vals[v];
    }
    out << '\n';
  }
}

}  // namespace rdslab

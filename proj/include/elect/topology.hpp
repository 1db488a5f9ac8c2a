#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "elect/error.hpp"
#include "elect/rng.hpp"

namespace elect {

using NodeId = std::uint32_t;
/// Local port index at a node, 0-based internally; rendered 1-based in text formats.
using Port = std::uint32_t;

/// Undirected, connected graph with a per-node port numbering.
///
/// `adjacency[u]` is sorted ascending. `ports[u][p]` is the neighbor reached
/// through port `p`; it is always a permutation of `adjacency[u]`.
/// `return_port(u, p)` is the port at that neighbor leading back to `u`.
class Topology {
public:
  Topology() = default;

  /// Build from an edge list. Ports start out in adjacency order.
  static Topology from_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges, bool lazy = false) {
    if (n == 0) throw error(errc::invalid_size, "topology needs at least one node");
    if (n > std::numeric_limits<NodeId>::max()) throw error(errc::invalid_size, "node count overflows NodeId");
    Topology t;
    t.adjacency_.assign(n, {});
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw error(errc::precondition, "edge endpoint out of range");
      if (u == v) throw error(errc::precondition, "self-loop at node " + std::to_string(u));
      t.adjacency_[u].push_back(v);
      t.adjacency_[v].push_back(u);
    }
    for (auto& nbrs : t.adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
      if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
        throw error(errc::precondition, "multi-edge in edge list");
    }
    t.ports_ = t.adjacency_;
    t.edge_count_ = edges.size();
    t.bipartite_ = t.two_colorable();
    t.lazy_ = lazy || t.bipartite_;
    t.rebuild_return_ports();
    if (!t.connected()) throw error(errc::precondition, "topology is disconnected");
    return t;
  }

  std::size_t size() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t degree(NodeId u) const { return adjacency_[u].size(); }
  bool lazy() const noexcept { return lazy_; }
  bool bipartite() const noexcept { return bipartite_; }

  const std::vector<NodeId>& neighbors(NodeId u) const { return adjacency_[u]; }
  const std::vector<NodeId>& port_map(NodeId u) const { return ports_[u]; }
  NodeId neighbor(NodeId u, Port p) const { return ports_[u][p]; }
  Port return_port(NodeId u, Port p) const { return return_ports_[u][p]; }

  bool is_complete() const {
    const auto n = size();
    return std::all_of(adjacency_.begin(), adjacency_.end(), [n](const auto& a) { return a.size() == n - 1; });
  }

  /// Copy with the lazy flag overridden. Clearing it on a bipartite graph is
  /// allowed; mixing-time queries on the result then fail.
  Topology with_lazy(bool lazy) const {
    Topology t = *this;
    t.lazy_ = lazy;
    return t;
  }

  /// Copy whose port maps are replaced. Each entry must be a permutation of the
  /// node's neighbor set.
  Topology with_ports(std::vector<std::vector<NodeId>> ports) const {
    if (ports.size() != size()) throw error(errc::precondition, "port map count differs from node count");
    Topology t = *this;
    t.ports_ = std::move(ports);
    for (std::size_t u = 0; u < size(); ++u) {
      auto sorted = t.ports_[u];
      std::sort(sorted.begin(), sorted.end());
      if (sorted != adjacency_[u]) throw error(errc::precondition, "port map of node " + std::to_string(u) + " is not a bijection onto its neighbors");
    }
    t.rebuild_return_ports();
    return t;
  }

  /// Throws on any violated structural invariant.
  void validate() const {
    for (NodeId u = 0; u < size(); ++u) {
      for (NodeId v : adjacency_[u]) {
        if (!std::binary_search(adjacency_[v].begin(), adjacency_[v].end(), u))
          throw error(errc::precondition, "asymmetric adjacency between " + std::to_string(u) + " and " + std::to_string(v));
      }
      auto sorted = ports_[u];
      std::sort(sorted.begin(), sorted.end());
      if (sorted != adjacency_[u]) throw error(errc::precondition, "port map of node " + std::to_string(u) + " is not a bijection");
      for (Port p = 0; p < ports_[u].size(); ++p) {
        NodeId v = ports_[u][p];
        if (ports_[v][return_ports_[u][p]] != u) throw error(errc::precondition, "return port mismatch");
      }
    }
    if (!connected()) throw error(errc::precondition, "topology is disconnected");
  }

  bool connected() const {
    std::vector<bool> seen(size(), false);
    std::vector<NodeId> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : adjacency_[u]) {
        if (!seen[v]) {
          seen[v] = true;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == size();
  }

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.adjacency_ == b.adjacency_ && a.ports_ == b.ports_ && a.lazy_ == b.lazy_;
  }

private:
  bool two_colorable() const {
    std::vector<int> color(size(), -1);
    for (NodeId s = 0; s < size(); ++s) {
      if (color[s] != -1) continue;
      color[s] = 0;
      std::queue<NodeId> q;
      q.push(s);
      while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        for (NodeId v : adjacency_[u]) {
          if (color[v] == -1) {
            color[v] = 1 - color[u];
            q.push(v);
          } else if (color[v] == color[u]) {
            return false;
          }
        }
      }
    }
    return true;
  }

  void rebuild_return_ports() {
    const auto n = size();
    // position of each neighbor in the port map, indexed like adjacency_
    std::vector<std::vector<Port>> port_of(n);
    for (NodeId u = 0; u < n; ++u) {
      port_of[u].resize(adjacency_[u].size());
      for (Port p = 0; p < ports_[u].size(); ++p) {
        auto it = std::lower_bound(adjacency_[u].begin(), adjacency_[u].end(), ports_[u][p]);
        port_of[u][static_cast<std::size_t>(it - adjacency_[u].begin())] = p;
      }
    }
    return_ports_.assign(n, {});
    for (NodeId u = 0; u < n; ++u) {
      return_ports_[u].resize(ports_[u].size());
      for (Port p = 0; p < ports_[u].size(); ++p) {
        NodeId v = ports_[u][p];
        auto it = std::lower_bound(adjacency_[v].begin(), adjacency_[v].end(), u);
        return_ports_[u][p] = port_of[v][static_cast<std::size_t>(it - adjacency_[v].begin())];
      }
    }
  }

  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::vector<NodeId>> ports_;
  std::vector<std::vector<Port>> return_ports_;
  std::size_t edge_count_ = 0;
  bool lazy_ = false;
  bool bipartite_ = false;
};

// ---------------------------------------------------------------------------
// Generators

inline Topology make_complete(std::size_t n) {
  if (n < 2) throw error(errc::invalid_size, "complete graph needs n >= 2, got " + std::to_string(n));
  if (n > (std::size_t{1} << 16)) throw error(errc::invalid_size, "complete graph too large: " + std::to_string(n));
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n * (n - 1) / 2);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Topology::from_edges(n, edges);
}

/// Hypercube on 2^dim nodes. Always bipartite, so the lazy flag is set.
inline Topology make_hypercube(unsigned dim) {
  if (dim < 1) throw error(errc::invalid_size, "hypercube needs dim >= 1");
  if (dim >= 31) throw error(errc::invalid_size, "hypercube dim " + std::to_string(dim) + " overflows the node count");
  const std::size_t n = std::size_t{1} << dim;
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n * dim / 2);
  for (NodeId u = 0; u < n; ++u)
    for (unsigned b = 0; b < dim; ++b) {
      NodeId v = u ^ (NodeId{1} << b);
      if (u < v) edges.emplace_back(u, v);
    }
  return Topology::from_edges(n, edges, true);
}

/// Ring on n nodes; even rings are bipartite and come back lazy.
inline Topology make_cycle(std::size_t n) {
  if (n < 3) throw error(errc::invalid_size, "cycle needs n >= 3, got " + std::to_string(n));
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(n);
  for (NodeId u = 0; u < n; ++u) edges.emplace_back(std::min<NodeId>(u, (u + 1) % n), std::max<NodeId>(u, (u + 1) % n));
  return Topology::from_edges(n, edges);
}

/// Simple connected d-regular graph from the pairing model. Each attempt pairs
/// half-edges uniformly among the pairs that keep the graph simple; an attempt
/// that gets stuck or yields a disconnected graph is thrown away.
inline Topology make_random_regular(std::size_t n, std::size_t d, std::uint64_t seed, int max_attempts = 100) {
  if (d < 3 || d >= n) throw error(errc::invalid_size, "random-regular needs 3 <= d < n");
  if ((n * d) % 2 != 0) throw error(errc::invalid_size, "random-regular needs n*d even");
  Rng rng(derive_seed(seed, stream::graph, n, d));

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<NodeId> points;
    points.reserve(n * d);
    for (NodeId u = 0; u < n; ++u)
      for (std::size_t k = 0; k < d; ++k) points.push_back(u);
    std::vector<std::vector<NodeId>> nbrs(n);
    std::vector<std::pair<NodeId, NodeId>> edges;
    auto has_edge = [&](NodeId a, NodeId b) {
      return std::find(nbrs[a].begin(), nbrs[a].end(), b) != nbrs[a].end();
    };
    auto suitable = [&](NodeId a, NodeId b) { return a != b && !has_edge(a, b); };

    bool stuck = false;
    while (!points.empty() && !stuck) {
      // A bounded number of blind tries, then an exhaustive check for any usable pair.
      bool paired = false;
      for (int tries = 0; tries < 64 && !paired; ++tries) {
        std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j || !suitable(points[i], points[j])) continue;
        NodeId a = points[i], b = points[j];
        nbrs[a].push_back(b);
        nbrs[b].push_back(a);
        edges.emplace_back(std::min(a, b), std::max(a, b));
        if (i < j) std::swap(i, j);
        points[i] = points.back();
        points.pop_back();
        points[j] = points.back();
        points.pop_back();
        paired = true;
      }
      if (paired) continue;
      bool any = false;
      for (std::size_t i = 0; i < points.size() && !any; ++i)
        for (std::size_t j = i + 1; j < points.size() && !any; ++j) any = suitable(points[i], points[j]);
      stuck = !any;
    }
    if (stuck) continue;
    try {
      return Topology::from_edges(n, edges);
    } catch (const error& e) {
      if (e.code() != errc::precondition) throw;
    }
  }
  throw error(errc::generation_failure,
              "no simple connected " + std::to_string(d) + "-regular graph after " + std::to_string(max_attempts) + " attempts");
}

/// Replace every node's port map with an independent uniform permutation.
inline Topology assign_random_ports(const Topology& t, std::uint64_t seed) {
  std::vector<std::vector<NodeId>> ports(t.size());
  for (NodeId u = 0; u < t.size(); ++u) {
    ports[u] = t.neighbors(u);
    Rng rng(derive_seed(seed, stream::ports, u));
    std::shuffle(ports[u].begin(), ports[u].end(), rng);
  }
  return t.with_ports(std::move(ports));
}

/// Entries d_i / (2|E|). The lazy transform leaves this vector unchanged.
inline std::vector<double> stationary_distribution(const Topology& t) {
  if (!t.connected()) throw error(errc::precondition, "stationary distribution needs a connected topology");
  if (t.size() == 1) return {1.0};
  const double total = 2.0 * static_cast<double>(t.edge_count());
  std::vector<double> pi(t.size());
  for (NodeId u = 0; u < t.size(); ++u) pi[u] = static_cast<double>(t.degree(u)) / total;
  return pi;
}

// ---------------------------------------------------------------------------
// Canonical text serialization
//
//   elect-topology 1
//   n <n>
//   lazy <0|1>
//   edges <m>
//   <u> <v>                       one line per edge, u < v, sorted
//   port <u> <nbr_1> ... <nbr_d>  neighbor reached through ports 1..d

inline void write_topology(std::ostream& os, const Topology& t) {
  os << "elect-topology 1\n";
  os << "n " << t.size() << "\n";
  os << "lazy " << (t.lazy() ? 1 : 0) << "\n";
  os << "edges " << t.edge_count() << "\n";
  for (NodeId u = 0; u < t.size(); ++u)
    for (NodeId v : t.neighbors(u))
      if (u < v) os << u << ' ' << v << '\n';
  for (NodeId u = 0; u < t.size(); ++u) {
    os << "port " << u;
    for (NodeId v : t.port_map(u)) os << ' ' << v;
    os << '\n';
  }
}

inline std::string to_text(const Topology& t) {
  std::ostringstream os;
  write_topology(os, t);
  return os.str();
}

inline Topology read_topology(std::istream& is) {
  auto fail = [](const std::string& what) { return error(errc::parse, "topology: " + what); };
  std::string word;
  int version = 0;
  if (!(is >> word >> version) || word != "elect-topology" || version != 1) throw fail("bad header");
  std::size_t n = 0, m = 0;
  int lazy = 0;
  if (!(is >> word >> n) || word != "n") throw fail("expected n");
  if (!(is >> word >> lazy) || word != "lazy") throw fail("expected lazy");
  if (!(is >> word >> m) || word != "edges") throw fail("expected edges");
  std::vector<std::pair<NodeId, NodeId>> edges(m);
  for (auto& [u, v] : edges)
    if (!(is >> u >> v)) throw fail("truncated edge list");
  Topology t = Topology::from_edges(n, edges);
  std::vector<std::vector<NodeId>> ports(n);
  for (std::size_t k = 0; k < n; ++k) {
    NodeId u = 0;
    if (!(is >> word >> u) || word != "port" || u >= n) throw fail("expected port line");
    ports[u].resize(t.degree(u));
    for (auto& v : ports[u])
      if (!(is >> v)) throw fail("truncated port line");
  }
  return t.with_ports(std::move(ports)).with_lazy(lazy != 0);
}

inline Topology topology_from_text(const std::string& text) {
  std::istringstream is(text);
  return read_topology(is);
}

}  // namespace elect

// Finite simple undirected graphs, vertex functions, standard generators.
#pragma once

#include <algorithm>
#include <cstddef>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace curvdim {

using vertex_t = std::size_t;

/// Finite simple undirected graph with sorted adjacency lists. Immutable once
/// built; every constructor path validates irreflexivity and index range, and
/// stores each edge in both directions.
class Graph {
public:
  Graph() = default;

  Graph(std::size_t vertex_count, std::span<const std::pair<vertex_t, vertex_t>> edges)
      : adjacency_(vertex_count) {
    for (auto [u, w] : edges) {
      if (u >= vertex_count || w >= vertex_count) {
        throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(w) +
                                    ") out of range for n=" + std::to_string(vertex_count));
      }
      if (u == w) {
        throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
      }
      adjacency_[u].push_back(w);
      adjacency_[w].push_back(u);
    }
    for (auto& nbrs : adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
  }

  Graph(std::size_t vertex_count, const std::vector<std::pair<vertex_t, vertex_t>>& edges)
      : Graph(vertex_count, std::span<const std::pair<vertex_t, vertex_t>>(edges)) {}

  std::size_t vertex_count() const noexcept { return adjacency_.size(); }

  std::span<const vertex_t> neighbors(vertex_t v) const {
    check_vertex(v);
    return adjacency_[v];
  }

  std::size_t degree(vertex_t v) const { return neighbors(v).size(); }

  bool has_edge(vertex_t u, vertex_t w) const {
    auto nbrs = neighbors(u);
    return std::binary_search(nbrs.begin(), nbrs.end(), w);
  }

  /// Undirected edges as (u, w) with u < w, in lexicographic order.
  std::vector<std::pair<vertex_t, vertex_t>> edges() const {
    std::vector<std::pair<vertex_t, vertex_t>> out;
    for (vertex_t u = 0; u < adjacency_.size(); ++u) {
      for (vertex_t w : adjacency_[u]) {
        if (u < w) out.emplace_back(u, w);
      }
    }
    return out;
  }

  void check_vertex(vertex_t v) const {
    if (v >= adjacency_.size()) {
      throw std::out_of_range("vertex " + std::to_string(v) + " out of range for n=" +
                              std::to_string(adjacency_.size()));
    }
  }

  friend bool operator==(const Graph&, const Graph&) = default;

private:
  std::vector<std::vector<vertex_t>> adjacency_;
};

/// Real-valued function on the vertices of a graph; remembers whether it is
/// strictly positive so operators restricted to C+(V) can check cheaply.
class VertexFunction {
public:
  VertexFunction() = default;

  explicit VertexFunction(std::vector<double> values) : values_(std::move(values)) {
    positive_ = std::all_of(values_.begin(), values_.end(), [](double x) { return x > 0.0; });
  }

  static VertexFunction constant(std::size_t n, double c) {
    return VertexFunction(std::vector<double>(n, c));
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool positive() const noexcept { return positive_; }
  double operator[](vertex_t v) const { return values_[v]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const VertexFunction& a, const VertexFunction& b) {
    return a.values_ == b.values_;
  }

private:
  std::vector<double> values_;
  bool positive_ = true;
};

namespace detail {

inline void require_defined_on(const Graph& g, const VertexFunction& f) {
  if (f.size() != g.vertex_count()) {
    throw std::invalid_argument("vertex function has " + std::to_string(f.size()) +
                                " values, graph has " + std::to_string(g.vertex_count()) +
                                " vertices");
  }
}

inline void require_positive(const VertexFunction& f) {
  if (!f.positive()) throw std::domain_error("vertex function must be strictly positive");
}

}  // namespace detail

enum class Family { cycle, path, complete, hypercube, torus2d, petersen, star };

struct GeneratorSpec {
  Family family;
  std::vector<long long> parameters;
};

inline Family parse_family(const std::string& name) {
  if (name == "cycle") return Family::cycle;
  if (name == "path") return Family::path;
  if (name == "complete") return Family::complete;
  if (name == "hypercube") return Family::hypercube;
  if (name == "torus2d") return Family::torus2d;
  if (name == "petersen") return Family::petersen;
  if (name == "star") return Family::star;
  throw std::invalid_argument("unknown graph family '" + name + "'");
}

inline std::string family_name(Family f) {
  switch (f) {
    case Family::cycle: return "cycle";
    case Family::path: return "path";
    case Family::complete: return "complete";
    case Family::hypercube: return "hypercube";
    case Family::torus2d: return "torus2d";
    case Family::petersen: return "petersen";
    case Family::star: return "star";
  }
  return "?";
}

/// Builds a graph from a family and its integer parameters.
///
/// Vertex numbering:
///   cycle(n), n >= 3       0..n-1 consecutive, n-1 ~ 0
///   path(n), n >= 1        0..n-1 consecutive
///   complete(n), n >= 1    all pairs
///   hypercube(k), k >= 1   binary codes, neighbors differ in one bit
///   torus2d(m, n), >= 3    row-major: (r, c) -> r*n + c
///   petersen()             outer cycle 0..4, spokes i ~ i+5, inner pentagram
///   star(k), k >= 1        center 0, leaves 1..k
inline Graph generate_graph(const GeneratorSpec& spec) {
  const auto& p = spec.parameters;
  auto need = [&](std::size_t count) {
    if (p.size() != count) {
      throw std::invalid_argument(family_name(spec.family) + " expects " +
                                  std::to_string(count) + " parameter(s)");
    }
  };
  auto at_least = [&](long long value, long long lo, const char* what) {
    if (value < lo) {
      throw std::invalid_argument(family_name(spec.family) + ": " + what + " must be >= " +
                                  std::to_string(lo));
    }
  };

  std::vector<std::pair<vertex_t, vertex_t>> edges;
  std::size_t n = 0;
  switch (spec.family) {
    case Family::cycle: {
      need(1);
      at_least(p[0], 3, "n");
      n = static_cast<std::size_t>(p[0]);
      for (vertex_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
      break;
    }
    case Family::path: {
      need(1);
      at_least(p[0], 1, "n");
      n = static_cast<std::size_t>(p[0]);
      for (vertex_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    }
    case Family::complete: {
      need(1);
      at_least(p[0], 1, "n");
      n = static_cast<std::size_t>(p[0]);
      for (vertex_t i = 0; i < n; ++i)
        for (vertex_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      break;
    }
    case Family::hypercube: {
      need(1);
      at_least(p[0], 1, "dimension");
      if (p[0] > 20) throw std::invalid_argument("hypercube: dimension must be <= 20");
      const auto dim = static_cast<unsigned>(p[0]);
      n = std::size_t{1} << dim;
      for (vertex_t i = 0; i < n; ++i)
        for (unsigned b = 0; b < dim; ++b) {
          vertex_t j = i ^ (vertex_t{1} << b);
          if (i < j) edges.emplace_back(i, j);
        }
      break;
    }
    case Family::torus2d: {
      need(2);
      at_least(p[0], 3, "m");
      at_least(p[1], 3, "n");
      const auto rows = static_cast<std::size_t>(p[0]);
      const auto cols = static_cast<std::size_t>(p[1]);
      n = rows * cols;
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          vertex_t here = r * cols + c;
          edges.emplace_back(here, r * cols + (c + 1) % cols);
          edges.emplace_back(here, ((r + 1) % rows) * cols + c);
        }
      break;
    }
    case Family::petersen: {
      need(0);
      n = 10;
      for (vertex_t i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);
        edges.emplace_back(i, i + 5);
        edges.emplace_back(5 + i, 5 + (i + 2) % 5);
      }
      break;
    }
    case Family::star: {
      need(1);
      at_least(p[0], 1, "leaves");
      n = static_cast<std::size_t>(p[0]) + 1;
      for (vertex_t i = 1; i < n; ++i) edges.emplace_back(0, i);
      break;
    }
  }
  return Graph(n, edges);
}

/// Vertices at graph distance <= radius from v, sorted ascending.
inline std::vector<vertex_t> ball(const Graph& g, vertex_t v, std::size_t radius) {
  g.check_vertex(v);
  constexpr auto unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.vertex_count(), unseen);
  std::queue<vertex_t> frontier;
  dist[v] = 0;
  frontier.push(v);
  while (!frontier.empty()) {
    vertex_t u = frontier.front();
    frontier.pop();
    if (dist[u] == radius) continue;
    for (vertex_t w : g.neighbors(u)) {
      if (dist[w] == unseen) {
        dist[w] = dist[u] + 1;
        frontier.push(w);
      }
    }
  }
  std::vector<vertex_t> out;
  for (vertex_t u = 0; u < dist.size(); ++u)
    if (dist[u] != unseen) out.push_back(u);
  return out;
}

}  // namespace curvdim

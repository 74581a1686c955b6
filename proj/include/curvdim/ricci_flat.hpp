// D-Ricci-flatness at a vertex: every w in N(v) = {v} ∪ {w ~ v} has degree D
// and there are maps η_1..η_D : N(v) -> V with
//   η_i(w) ~ w,   η_i(w) != η_j(w) for i != j,
//   {η_k(η_i(v)) : k} = {η_i(η_k(v)) : k}   for every i.
// Decided by exhaustive backtracking; answers come with a checkable
// certificate or a refutation.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "graph.hpp"

namespace curvdim {

struct RicciFlatCertificate {
  vertex_t vertex = 0;
  std::size_t degree = 0;
  /// eta[w][i] = η_{i+1}(w) for every w in N(v).
  std::map<vertex_t, std::vector<vertex_t>> eta;
};

enum class RefutationReason { degree_mismatch, exhausted_search, budget_exhausted };

inline std::string reason_name(RefutationReason r) {
  switch (r) {
    case RefutationReason::degree_mismatch: return "degree-mismatch";
    case RefutationReason::exhausted_search: return "exhausted-search";
    case RefutationReason::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

struct Refutation {
  vertex_t vertex = 0;
  RefutationReason reason = RefutationReason::exhausted_search;
  /// For degree-mismatch: the offending w in N(v) and its degree.
  std::optional<vertex_t> offending_vertex;
  std::size_t offending_degree = 0;
  std::size_t expected_degree = 0;
  std::uint64_t nodes = 0;
};

using RicciFlatOutcome = std::variant<RicciFlatCertificate, Refutation>;

/// Set equality follows the definition literally; multiset equality is the
/// stricter reading. Under the injectivity clause both coincide (each side
/// holds D distinct elements), so the mode only changes what is validated.
enum class CommutationMode { set, multiset };

struct RicciFlatOptions {
  std::uint64_t node_budget = 100'000'000;
  CommutationMode mode = CommutationMode::set;
};

/// Literal check of the definition's clauses. Independent of the search.
inline bool validate_certificate(const Graph& g, const RicciFlatCertificate& cert,
                                 CommutationMode mode = CommutationMode::set) {
  if (cert.vertex >= g.vertex_count()) return false;
  const vertex_t v = cert.vertex;
  const std::size_t d = cert.degree;
  std::vector<vertex_t> closed{v};
  for (vertex_t w : g.neighbors(v)) closed.push_back(w);
  if (g.degree(v) != d) return false;
  if (cert.eta.size() != closed.size()) return false;

  for (vertex_t w : closed) {
    if (g.degree(w) != d) return false;
    auto it = cert.eta.find(w);
    if (it == cert.eta.end() || it->second.size() != d) return false;
    const auto& labels = it->second;
    for (std::size_t i = 0; i < d; ++i) {
      if (labels[i] >= g.vertex_count() || !g.has_edge(w, labels[i])) return false;
      for (std::size_t j = 0; j < i; ++j)
        if (labels[i] == labels[j]) return false;
    }
  }

  const auto& at_v = cert.eta.at(v);
  for (std::size_t i = 0; i < d; ++i) {
    // η_i(v) is adjacent to v, so it lies in N(v) and η is defined there.
    std::vector<vertex_t> lhs = cert.eta.at(at_v[i]);
    std::vector<vertex_t> rhs;
    for (std::size_t k = 0; k < d; ++k) rhs.push_back(cert.eta.at(at_v[k])[i]);
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    if (mode == CommutationMode::set) {
      lhs.erase(std::unique(lhs.begin(), lhs.end()), lhs.end());
      rhs.erase(std::unique(rhs.begin(), rhs.end()), rhs.end());
    }
    if (lhs != rhs) return false;
  }
  return true;
}

namespace detail {

// Labels at v are fixed to η_i(v) = i-th smallest neighbor (any certificate can
// be relabeled this way). Then, writing w_k = η_k(v), the clause for label i
// says that k -> η_i(w_k) hits exactly the neighbors of w_i. Cells (k, i) are
// filled row by row; a candidate must be a neighbor of both w_k and w_i and
// unused in its row and in its column.
class EtaSearch {
public:
  EtaSearch(const Graph& g, vertex_t v, std::uint64_t budget)
      : g_(g), hub_(g.neighbors(v).begin(), g.neighbors(v).end()), d_(hub_.size()),
        budget_(budget), cells_(d_ * d_, kUnset) {}

  enum class Status { found, exhausted, budget };

  Status run() { return extend(0); }

  std::uint64_t nodes() const { return nodes_; }
  vertex_t cell(std::size_t k, std::size_t i) const { return cells_[k * d_ + i]; }

private:
  static constexpr vertex_t kUnset = static_cast<vertex_t>(-1);

  Status extend(std::size_t position) {
    if (position == d_ * d_) return Status::found;
    const std::size_t k = position / d_;
    const std::size_t i = position % d_;
    const vertex_t row_vertex = hub_[k];
    const vertex_t column_vertex = hub_[i];
    for (vertex_t c : g_.neighbors(row_vertex)) {
      if (++nodes_ > budget_) return Status::budget;
      if (!g_.has_edge(column_vertex, c)) continue;
      bool clash = false;
      for (std::size_t j = 0; j < i && !clash; ++j) clash = cell(k, j) == c;
      for (std::size_t r = 0; r < k && !clash; ++r) clash = cell(r, i) == c;
      if (clash) continue;
      cells_[k * d_ + i] = c;
      const Status s = extend(position + 1);
      if (s != Status::exhausted) return s;
      cells_[k * d_ + i] = kUnset;
    }
    return Status::exhausted;
  }

  const Graph& g_;
  std::vector<vertex_t> hub_;
  std::size_t d_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<vertex_t> cells_;
};

}  // namespace detail

/// Decides D-Ricci-flatness at v with D = deg(v). Deterministic: returns the
/// lexicographically first certificate in the canonical labeling.
inline RicciFlatOutcome ricci_flat_at(const Graph& g, vertex_t v,
                                      const RicciFlatOptions& options = {}) {
  g.check_vertex(v);
  const auto hub = g.neighbors(v);
  const std::size_t d = hub.size();

  Refutation refutation;
  refutation.vertex = v;
  refutation.expected_degree = d;
  for (vertex_t w : hub) {
    if (g.degree(w) != d) {
      refutation.reason = RefutationReason::degree_mismatch;
      refutation.offending_vertex = w;
      refutation.offending_degree = g.degree(w);
      return refutation;
    }
  }

  detail::EtaSearch search(g, v, options.node_budget);
  const auto status = search.run();
  refutation.nodes = search.nodes();
  if (status == detail::EtaSearch::Status::exhausted) {
    refutation.reason = RefutationReason::exhausted_search;
    return refutation;
  }
  if (status == detail::EtaSearch::Status::budget) {
    refutation.reason = RefutationReason::budget_exhausted;
    return refutation;
  }

  RicciFlatCertificate cert;
  cert.vertex = v;
  cert.degree = d;
  cert.eta[v] = std::vector<vertex_t>(hub.begin(), hub.end());
  for (std::size_t k = 0; k < d; ++k) {
    auto& labels = cert.eta[hub[k]];
    for (std::size_t i = 0; i < d; ++i) labels.push_back(search.cell(k, i));
  }
  if (!validate_certificate(g, cert, options.mode)) {
    throw std::logic_error("ricci_flat_at: search produced an invalid certificate");
  }
  return cert;
}

struct RicciFlatReport {
  std::vector<RicciFlatOutcome> outcomes;
  std::optional<std::size_t> common_degree;
  bool ricci_flat = false;
};

inline RicciFlatReport ricci_flat(const Graph& g, const RicciFlatOptions& options = {}) {
  RicciFlatReport report;
  bool all_certified = true;
  bool uniform = true;
  for (vertex_t v = 0; v < g.vertex_count(); ++v) {
    report.outcomes.push_back(ricci_flat_at(g, v, options));
    all_certified = all_certified && std::holds_alternative<RicciFlatCertificate>(report.outcomes.back());
    uniform = uniform && g.degree(v) == g.degree(0);
  }
  if (g.vertex_count() > 0 && uniform) report.common_degree = g.degree(0);
  report.ricci_flat = g.vertex_count() > 0 && all_certified && uniform;
  return report;
}

struct DimensionPair {
  double cd_phi_psi;  // d = D / C
  double cde_prime;   // d = D / (4C), via CDE'(d, K) <=> CD^log_√(4d, K)
};

inline DimensionPair dimension_from_constant(std::size_t degree, double constant) {
  if (!(constant > 0.0)) throw std::domain_error("dimension_from_constant: constant must be > 0");
  if (degree < 1) throw std::domain_error("dimension_from_constant: degree must be >= 1");
  const auto d = static_cast<double>(degree);
  return {d / constant, d / (4.0 * constant)};
}

}  // namespace curvdim

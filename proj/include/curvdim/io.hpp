// JSON documents: graph, vertex function, and a deterministic writer that
// emits every double with 17 significant digits.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graph.hpp"

namespace curvdim {

using json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write_json(std::ostream& os, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ", ";
        first = false;
        os << json(it.key()).dump() << ": ";
        write_json(os, it.value());
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) os << ", ";
        first = false;
        write_json(os, item);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      break;
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Serializes with ", " / ": " separators and %.17g doubles; keys keep their
/// insertion order.
inline std::string dump(const json& j) {
  std::ostringstream os;
  detail::write_json(os, j);
  return os.str();
}

/// Reads a double that may have been written as "inf"/"-inf" or null (nan).
inline double read_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_null()) return std::nan("");
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw ParseError("expected a number, got " + j.dump());
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Graph graph_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
    throw ParseError("graph document needs \"n\" and \"edges\"");
  }
  const auto& n = doc["n"];
  if (!n.is_number_integer() || n.get<long long>() < 0) {
    throw ParseError("\"n\" must be a nonnegative integer");
  }
  const auto& edges = doc["edges"];
  if (!edges.is_array()) throw ParseError("\"edges\" must be an array");
  std::vector<std::pair<vertex_t, vertex_t>> list;
  list.reserve(edges.size());
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || e[0].get<long long>() < 0 || e[1].get<long long>() < 0) {
      throw ParseError("edge must be a pair of nonnegative integers, got " + e.dump());
    }
    list.emplace_back(e[0].get<vertex_t>(), e[1].get<vertex_t>());
  }
  try {
    return Graph(n.get<std::size_t>(), list);
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
}

inline Graph load_graph(const std::string& document) {
  return graph_from_json(parse_json(document));
}

inline std::string serialize_graph(const Graph& g) {
  std::ostringstream os;
  os << "{\"n\": " << g.vertex_count() << ", \"edges\": [";
  bool first = true;
  for (auto [u, w] : g.edges()) {
    if (!first) os << ", ";
    first = false;
    os << '[' << u << ", " << w << ']';
  }
  os << "]}";
  return os.str();
}

inline VertexFunction load_function(const std::string& document) {
  auto doc = parse_json(document);
  if (!doc.is_object() || !doc.contains("values") || !doc["values"].is_array()) {
    throw ParseError("function document needs a \"values\" array");
  }
  std::vector<double> values;
  for (const auto& x : doc["values"]) values.push_back(read_double(x));
  return VertexFunction(std::move(values));
}

inline std::string serialize_function(const VertexFunction& f) {
  std::ostringstream os;
  os << "{\"values\": [";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) os << ", ";
    os << format_double(f[i]);
  }
  os << "]}";
  return os.str();
}

}  // namespace curvdim

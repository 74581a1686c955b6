// JSON documents for curvature reports, Ricci-flat outcomes, constant
// estimates, limit probes, and identity suites.
#pragma once

#include <string>
#include <variant>

#include "cd_check.hpp"
#include "constants.hpp"
#include "identities.hpp"
#include "io.hpp"
#include "psi_calc.hpp"
#include "ricci_flat.hpp"

namespace curvdim {

inline json values_json(std::span<const double> values) {
  json arr = json::array();
  for (double x : values) arr.push_back(x);
  return arr;
}

inline json to_json(const CurvatureReport& r) {
  json doc;
  doc["condition"] = condition_name(r.kind);
  doc["dim"] = r.dim.value();
  doc["kappa"] = r.kappa;
  doc["verdict"] = verdict_name(r.global);
  json vertices = json::array();
  for (const auto& e : r.vertices) {
    json row;
    row["v"] = e.v;
    row["verdict"] = verdict_name(e.verdict);
    row["best_kappa"] = e.best_kappa;
    row["residual"] = e.residual;
    row["witness"] = e.witness ? values_json(e.witness->values()) : json(nullptr);
    if (r.search) row["boundary_hit"] = e.boundary_hit;
    vertices.push_back(std::move(row));
  }
  doc["vertices"] = std::move(vertices);
  if (r.search) {
    doc["seed"] = r.search->seed;
    doc["starts"] = r.search->starts;
    doc["iterations"] = r.search->max_iterations;
  } else {
    doc["seed"] = nullptr;
  }
  return doc;
}

inline json to_json(const RicciFlatCertificate& c) {
  json doc;
  doc["v"] = c.vertex;
  doc["D"] = c.degree;
  json eta = json::object();
  for (const auto& [w, labels] : c.eta) {
    json arr = json::array();
    for (vertex_t x : labels) arr.push_back(x);
    eta[std::to_string(w)] = std::move(arr);
  }
  doc["eta"] = std::move(eta);
  return doc;
}

inline json to_json(const Refutation& r) {
  json doc;
  doc["v"] = r.vertex;
  doc["D"] = r.expected_degree;
  doc["refuted"] = reason_name(r.reason);
  if (r.offending_vertex) {
    doc["offending_vertex"] = *r.offending_vertex;
    doc["offending_degree"] = r.offending_degree;
  } else {
    doc["nodes"] = r.nodes;
  }
  return doc;
}

inline json to_json(const RicciFlatOutcome& o) {
  return std::visit([](const auto& x) { return to_json(x); }, o);
}

inline RicciFlatCertificate certificate_from_json(const json& doc) {
  RicciFlatCertificate c;
  try {
    c.vertex = doc.at("v").get<vertex_t>();
    c.degree = doc.at("D").get<std::size_t>();
    for (auto it = doc.at("eta").begin(); it != doc.at("eta").end(); ++it) {
      c.eta[static_cast<vertex_t>(std::stoull(it.key()))] = it.value().get<std::vector<vertex_t>>();
    }
  } catch (const std::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
  return c;
}

inline json to_json(const ConstantEstimate& e, const std::string& psi_name,
                    const std::string& phi_name) {
  json doc;
  doc["psi"] = psi_name;
  doc["phi"] = phi_name;
  doc["value"] = e.value;
  doc["argmin"] = e.is_infinite() ? json(nullptr) : json::array({e.argmin.first, e.argmin.second});
  doc["location"] = location_name(e.location);
  doc["grid_min"] = e.grid_min;
  doc["refined_min"] = e.refined_min;
  return doc;
}

inline json to_json(const LimitProbeResult& r) {
  json doc;
  doc["estimated_limit"] = r.estimated_limit;
  doc["reference_value"] = r.reference_value;
  doc["observed_order"] = r.observed_order;
  doc["epsilon_schedule"] = values_json(r.epsilon_schedule);
  return doc;
}

inline json to_json(const IdentityReport& r) {
  json doc;
  doc["passed"] = r.passed();
  json suites = json::array();
  for (const auto& s : r.suites) {
    json row;
    row["suite"] = s.name;
    row["checks"] = s.checks;
    row["max_error"] = s.max_error;
    row["tolerance"] = s.tolerance;
    row["relative"] = s.relative;
    row["passed"] = s.passed();
    if (!s.passed() && s.worst_input) {
      row["witness"] = values_json(s.worst_input->values());
      row["witness_vertex"] = s.worst_vertex;
    }
    suites.push_back(std::move(row));
  }
  doc["suites"] = std::move(suites);
  return doc;
}

}  // namespace curvdim

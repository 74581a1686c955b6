// Command-line front end. Exit codes: 0 success / verified, 1 condition
// violated or refuted (the report carries the witness or refutation),
// 2 usage or input error.
#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <curvdim/curvdim.hpp>

namespace curvdim::cli {

enum ExitCode : int { kOk = 0, kViolated = 1, kUsage = 2 };

namespace detail {

inline Dimension parse_dimension(const std::string& text) {
  if (text == "inf" || text == "infinity") return Dimension::infinite();
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("bad --dim '" + text + "'");
  return Dimension(d);
}

inline void emit(const json& doc, const std::string& out_path, std::ostream& out) {
  const std::string text = dump(doc) + "\n";
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw ParseError("cannot write '" + out_path + "'");
  file << text;
}

inline void emit_text(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw ParseError("cannot write '" + out_path + "'");
  file << text << "\n";
}

// Exit 1 must come with a witness that re-validates through the library.
inline bool witnesses_revalidate(const Graph& g, const ConditionSpec& spec,
                                 const CurvatureReport& report) {
  for (const auto& e : report.vertices) {
    if (e.verdict != Verdict::violated) continue;
    if (!e.witness) return false;
    const auto r = nonlinear_residual(g, spec, *e.witness, e.v);
    if (r.skipped || !(r.value < 0.0)) return false;
  }
  return true;
}

}  // namespace detail

/// Runs one invocation; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature-dimension calculus on finite graphs"};
  app.require_subcommand(1);
  std::string out_path;

  auto* gen = app.add_subcommand("gen", "generate a graph document");
  std::string family;
  std::vector<long long> params;
  gen->add_option("--family", family, "cycle|path|complete|hypercube|torus2d|petersen|star")
      ->required();
  gen->add_option("--params", params, "integer parameters of the family");
  gen->add_option("--out", out_path, "output file (default stdout)");

  auto* cd = app.add_subcommand("cd", "exact CD(d,K) curvature per vertex");
  std::string graph_path, dim_text;
  std::optional<double> kappa;
  std::optional<vertex_t> vertex;
  cd->add_option("--graph", graph_path)->required();
  cd->add_option("--dim", dim_text, "dimension d > 0 or 'inf'")->required();
  cd->add_option("--kappa", kappa);
  cd->add_option("--vertex", vertex);
  cd->add_option("--out", out_path);

  auto* check = app.add_subcommand("check", "search for violations of a nonlinear condition");
  std::string condition, psi_name, phi_name;
  double check_kappa = 0.0;
  std::size_t starts = 0, iterations = 2000;
  std::uint64_t seed = 0;
  check->add_option("--condition", condition)
      ->required()
      ->check(CLI::IsMember({"cde", "cde-prime", "cdpsi", "cdphipsi"}));
  check->add_option("--psi", psi_name);
  check->add_option("--phi", phi_name);
  check->add_option("--graph", graph_path)->required();
  check->add_option("--dim", dim_text)->required();
  check->add_option("--kappa", check_kappa)->required();
  check->add_option("--starts", starts)->required();
  check->add_option("--seed", seed)->required();
  check->add_option("--iterations", iterations, "simplex iterations per start");
  check->add_option("--vertex", vertex);
  check->add_option("--out", out_path);

  auto* constant = app.add_subcommand("constant", "estimate the constant C_psi^phi");
  ConstantSearchConfig constant_config;
  constant->add_option("--psi", psi_name)->required();
  constant->add_option("--phi", phi_name)->required();
  constant->add_option("--box", constant_config.box, "half-width in log coordinates");
  constant->add_option("--grid", constant_config.grid, "grid nodes per axis");
  constant->add_option("--refine", constant_config.refine_starts, "refinement starts");
  constant->add_option("--out", out_path);

  auto* ricci = app.add_subcommand("ricci-flat", "certify or refute D-Ricci-flatness");
  bool strict = false;
  ricci->add_option("--graph", graph_path)->required();
  ricci->add_option("--vertex", vertex);
  ricci->add_flag("--strict", strict, "compare the commutation sets as multisets");
  ricci->add_option("--out", out_path);

  auto* identities = app.add_subcommand("identities", "randomized identity suites");
  std::size_t trials = 0;
  identities->add_option("--graph", graph_path)->required();
  identities->add_option("--trials", trials)->required();
  identities->add_option("--seed", seed)->required();
  identities->add_option("--out", out_path);

  auto* limits = app.add_subcommand("limits", "probe the eps -> 0 limits of the psi-operators");
  std::string function_path;
  limits->add_option("--psi", psi_name)->required();
  limits->add_option("--graph", graph_path)->required();
  limits->add_option("--f", function_path)->required();
  limits->add_option("--vertex", vertex);
  limits->add_option("--out", out_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      const Graph g = generate_graph({parse_family(family), params});
      detail::emit_text(serialize_graph(g), out_path, out);
      return kOk;
    }

    if (cd->parsed()) {
      const Graph g = load_graph(read_file(graph_path));
      const Dimension d = detail::parse_dimension(dim_text);
      if (vertex) g.check_vertex(*vertex);
      if (kappa) {
        ConditionSpec spec{ConditionKind::cd, {}, {}, d, *kappa};
        const auto report = check_condition(g, spec, std::nullopt, vertex);
        detail::emit(to_json(report), out_path, out);
        if (report.global == Verdict::violated) {
          if (!detail::witnesses_revalidate(g, spec, report)) {
            throw std::logic_error("witness failed to re-validate");
          }
          return kViolated;
        }
        return kOk;
      }
      json doc;
      doc["condition"] = "cd";
      doc["dim"] = d.value();
      doc["kappa"] = nullptr;
      json rows = json::array();
      for (vertex_t v = 0; v < g.vertex_count(); ++v) {
        if (vertex && v != *vertex) continue;
        json row;
        row["v"] = v;
        row["best_kappa"] = cd_curvature_exact(g, d, v);
        rows.push_back(std::move(row));
      }
      doc["vertices"] = std::move(rows);
      doc["seed"] = nullptr;
      detail::emit(doc, out_path, out);
      return kOk;
    }

    if (check->parsed()) {
      const Graph g = load_graph(read_file(graph_path));
      ConditionSpec spec;
      spec.kind = parse_condition(condition);
      if (!psi_name.empty()) spec.psi = psi::by_name(psi_name);
      if (!phi_name.empty()) spec.phi = psi::by_name(phi_name);
      spec.dim = detail::parse_dimension(dim_text);
      spec.kappa = check_kappa;
      SearchConfig config(seed);
      config.starts = starts;
      config.max_iterations = iterations;
      const auto report = check_condition(g, spec, config, vertex);
      detail::emit(to_json(report), out_path, out);
      if (report.global == Verdict::violated) {
        if (!detail::witnesses_revalidate(g, spec, report)) {
          throw std::logic_error("witness failed to re-validate");
        }
        return kViolated;
      }
      return kOk;
    }

    if (constant->parsed()) {
      const auto psi = psi::by_name(psi_name);
      const auto phi = psi::by_name(phi_name);
      const auto estimate = cd_constant(psi, phi, constant_config);
      detail::emit(to_json(estimate, psi.name(), phi.name()), out_path, out);
      return kOk;
    }

    if (ricci->parsed()) {
      const Graph g = load_graph(read_file(graph_path));
      RicciFlatOptions options;
      options.mode = strict ? CommutationMode::multiset : CommutationMode::set;
      if (vertex) {
        const auto outcome = ricci_flat_at(g, *vertex, options);
        detail::emit(to_json(outcome), out_path, out);
        return std::holds_alternative<RicciFlatCertificate>(outcome) ? kOk : kViolated;
      }
      const auto report = ricci_flat(g, options);
      json doc;
      doc["ricci_flat"] = report.ricci_flat;
      doc["D"] = report.common_degree ? json(*report.common_degree) : json(nullptr);
      json rows = json::array();
      for (const auto& o : report.outcomes) rows.push_back(to_json(o));
      doc["vertices"] = std::move(rows);
      detail::emit(doc, out_path, out);
      return report.ricci_flat ? kOk : kViolated;
    }

    if (identities->parsed()) {
      const Graph g = load_graph(read_file(graph_path));
      const auto report = run_identity_suites(g, trials, seed);
      detail::emit(to_json(report), out_path, out);
      return report.passed() ? kOk : kViolated;
    }

    if (limits->parsed()) {
      const Graph g = load_graph(read_file(graph_path));
      const VertexFunction f = load_function(read_file(function_path));
      curvdim::detail::require_defined_on(g, f);
      const auto psi = psi::by_name(psi_name);
      if (vertex) g.check_vertex(*vertex);
      json doc;
      doc["psi"] = psi.name();
      json rows = json::array();
      for (vertex_t v = 0; v < g.vertex_count(); ++v) {
        if (vertex && v != *vertex) continue;
        json row;
        row["v"] = v;
        for (auto kind : {LimitKind::laplacian, LimitKind::gamma, LimitKind::gamma2}) {
          row[limit_kind_name(kind)] = to_json(limit_probe(g, psi, f, kind, v));
        }
        rows.push_back(std::move(row));
      }
      doc["vertices"] = std::move(rows);
      detail::emit(doc, out_path, out);
      return kOk;
    }
  } catch (const std::logic_error& e) {
    // invalid_argument, domain_error, out_of_range derive from logic_error.
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace curvdim::cli

#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "starspec/io.hpp"
#include "starspec/starspec.hpp"

namespace starspec::cli {

enum ExitCode { kOk = 0, kInputError = 2, kNumericalError = 3 };

struct Manifest {
  std::string command;
  std::string config_path;
  std::string out_path;
  std::string format;  // empty: per-command default
  double grid = 8192.0;
  double tol = 1e-9;
  std::uint64_t seed = 0;

  SolverOptions solver() const {
    SolverOptions o;
    o.grid_per_unit = grid;
    o.residual_tol = tol;
    return o;
  }

  Json to_json() const {
    return {{"command", command}, {"config", config_path}, {"grid", grid}, {"tol", tol}, {"seed", seed}};
  }
};

// Output is either a JSON document or CSV text; both go through here so
// --out works the same everywhere.
struct Output {
  std::ostream* stream;
  std::ofstream file;

  explicit Output(const std::string& path, std::ostream& fallback) : stream(&fallback) {
    if (!path.empty()) {
      file.open(path);
      if (!file) fail(ErrorCode::InvalidInput, "cannot write to '" + path + "'");
      stream = &file;
    }
  }
  std::ostream& os() { return *stream; }
};

inline std::string csv_number(double v) { return format_number(v, 12); }

inline Json record_json(const EigenRecord& r) {
  return {{"lambda_tilde", r.lambda_tilde}, {"lambda", r.lambda},          {"multiplicity", r.multiplicity},
          {"residual", r.residual},         {"identity_defect", r.identity_defect}, {"parabolic", r.parabolic}};
}

inline Json records_json(const std::vector<EigenRecord>& rs) {
  Json a = Json::array();
  for (const auto& r : rs) a.push_back(record_json(r));
  return a;
}

inline void write_records_csv(std::ostream& os, const std::vector<EigenRecord>& rs) {
  os << "lambda_tilde,lambda,multiplicity,residual,identity_defect\n";
  for (const auto& r : rs)
    os << csv_number(r.lambda_tilde) << ',' << csv_number(r.lambda) << ',' << r.multiplicity << ','
       << csv_number(r.residual) << ',' << csv_number(r.identity_defect) << '\n';
}

inline std::vector<std::size_t> parse_param_path(const std::string& text, std::size_t n_edges) {
  static const std::regex form(R"(^\s*tau\s*\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, form))
    fail(ErrorCode::InvalidInput, "parameter path must look like tau[1] or tau[1,3], got '" + text + "'");
  std::vector<std::size_t> edges;
  std::stringstream ss(m[1].str());
  std::string item;
  while (std::getline(ss, item, ',')) {
    const long k = std::stol(item);
    if (k < 1 || std::size_t(k) > n_edges)
      fail(ErrorCode::IndexOutOfRange, "edge " + std::to_string(k) + " outside 1.." + std::to_string(n_edges));
    edges.push_back(std::size_t(k - 1));
  }
  return edges;
}

inline StarGraph load_graph(const Manifest& m) {
  if (m.config_path.empty()) fail(ErrorCode::InvalidInput, "--config is required for this command");
  return graph_from_file(m.config_path);
}

inline void emit_json(Output& out, Json doc, const Manifest& m) {
  doc["manifest"] = m.to_json();
  write_json(out.os(), doc);
  out.os() << '\n';
}

inline int cmd_spectrum(const Manifest& m, double lo, double hi, std::ostream& os) {
  const auto g = load_graph(m);
  const auto s = find_eigenvalues(g, lo, hi, m.solver());
  Output out(m.out_path, os);
  if (m.format == "csv") {
    write_records_csv(out.os(), s.records);
    return kOk;
  }
  emit_json(out,
            {{"graph", graph_to_json(g)},
             {"window", {lo, hi}},
             {"eigenvalues", records_json(s.records)},
             {"boundary", records_json(s.boundary)},
             {"total_multiplicity", s.total_multiplicity()}},
            m);
  return kOk;
}

inline int cmd_deficiency(const Manifest& m, std::ostream& os) {
  const auto g = load_graph(m);
  const auto d = deficiency_indices(g, m.solver());
  Output out(m.out_path, os);
  if (m.format == "csv") {
    out.os() << "n_plus,n_minus,count_in_window,boundary_eigenvalue\n"
             << d.n_plus << ',' << d.n_minus << ',' << d.count_in_window << ',' << (d.boundary_eigenvalue ? 1 : 0)
             << '\n';
    return kOk;
  }
  emit_json(out,
            {{"graph", graph_to_json(g)},
             {"n_plus", d.n_plus},
             {"n_minus", d.n_minus},
             {"count_in_window", d.count_in_window},
             {"boundary_eigenvalue", d.boundary_eigenvalue},
             {"boundary", records_json(d.spectrum.boundary)},
             {"eigenvalues", records_json(d.spectrum.records)}},
            m);
  return kOk;
}

inline int cmd_sweep(const Manifest& m, const std::string& param, double from, double to, int steps,
                     std::ostream& os) {
  if (!(from <= to)) fail(ErrorCode::InvalidInput, "sweep range must satisfy from <= to");
  if (steps < 0) fail(ErrorCode::InvalidInput, "steps must be non-negative");
  if (steps == 0 && from != to) fail(ErrorCode::InvalidInput, "steps = 0 needs from == to");
  const auto g = load_graph(m);
  const ParamPath path{parse_param_path(param, g.n_edges())};
  std::vector<double> values;
  for (int i = 0; i <= steps; ++i) values.push_back(steps == 0 ? from : from + (to - from) * double(i) / steps);
  const auto res = sweep(g, path, values, m.solver());

  Output out(m.out_path, os);
  if (m.format == "json") {
    Json rows = Json::array();
    for (const auto& r : res.rows) {
      Json row = {{"value", r.value}, {"ok", r.ok}};
      if (r.ok) {
        row["n_plus"] = r.n_plus;
        row["eigenvalues"] = records_json(r.eigenvalues);
      } else {
        row["error"] = r.error;
      }
      rows.push_back(row);
    }
    Json trans = Json::array();
    for (const auto& t : res.transitions)
      trans.push_back({{"from", t.from_value}, {"to", t.to_value}, {"n_before", t.n_before}, {"n_after", t.n_after}});
    emit_json(out, {{"graph", graph_to_json(g)}, {"param", param}, {"rows", rows}, {"transitions", trans}}, m);
    return kOk;
  }
  out.os() << "value,ok,n_plus,eigenvalues,error\n";
  for (const auto& r : res.rows) {
    out.os() << csv_number(r.value) << ',' << (r.ok ? 1 : 0) << ',';
    if (r.ok) out.os() << r.n_plus;
    out.os() << ',';
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      if (i) out.os() << ';';
      out.os() << csv_number(r.eigenvalues[i].lambda_tilde);
      if (r.eigenvalues[i].multiplicity == 2) out.os() << "x2";
    }
    std::string err = r.error;
    for (auto& c : err)
      if (c == ',' || c == '\n') c = ' ';
    out.os() << ',' << err << '\n';
  }
  return kOk;
}

inline int cmd_validate(const Manifest& m, const std::string& suite, double perturb, std::ostream& os) {
  const auto report = run_validation(suite, perturb);
  Output out(m.out_path, os);
  if (m.format == "csv") {
    out.os() << "suite,check,passed,metric,tolerance\n";
    for (const auto& c : report.checks)
      out.os() << c.suite << ',' << c.name << ',' << (c.passed ? 1 : 0) << ',' << csv_number(c.metric) << ','
               << csv_number(c.tolerance) << '\n';
  } else {
    Json checks = Json::array();
    for (const auto& c : report.checks)
      checks.push_back({{"suite", c.suite},
                        {"check", c.name},
                        {"passed", c.passed},
                        {"metric", std::isfinite(c.metric) ? Json(c.metric) : Json()},
                        {"tolerance", c.tolerance}});
    emit_json(out, {{"suite", suite}, {"all_passed", report.all_passed()}, {"checks", checks}}, m);
  }
  return report.all_passed() ? kOk : kNumericalError;
}

inline int cmd_unitary(const Manifest& m, bool dump_matrix, std::ostream& os) {
  const auto g = load_graph(m);
  const auto v = build_vertex_unitary(g);
  const auto phases = eigenphases(v, g.n_edges());
  Output out(m.out_path, os);

  std::optional<int> arc;
  std::string note;
  if (g.is_symmetric()) {
    arc = 0;
    for (const auto& p : phases)
      if (p.on_arc) *arc += p.multiplicity;
  } else {
    note = "NotSymmetric: the arc method needs equally spaced edges";
  }

  if (m.format == "csv") {
    out.os() << "theta,re,im,multiplicity,on_arc\n";
    for (const auto& p : phases) {
      const Complex z = unit_phase(p.theta);
      out.os() << csv_number(p.theta) << ',' << csv_number(z.real()) << ',' << csv_number(z.imag()) << ','
               << p.multiplicity << ',' << (p.on_arc ? 1 : 0) << '\n';
    }
    return kOk;
  }
  Json ph = Json::array();
  for (const auto& p : phases) {
    const Complex z = unit_phase(p.theta);
    ph.push_back({{"theta", p.theta},
                  {"re", z.real()},
                  {"im", z.imag()},
                  {"multiplicity", p.multiplicity},
                  {"on_arc", p.on_arc},
                  {"arc_boundary", p.arc_boundary}});
  }
  Json doc = {{"graph", graph_to_json(g)}, {"unitarity_defect", v.unitarity_defect}, {"eigenphases", ph}};
  doc["arc_count"] = arc ? Json(*arc) : Json();
  if (!note.empty()) doc["arc_note"] = note;
  if (dump_matrix) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < v.u.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < v.u.cols(); ++j) row.push_back({v.u(i, j).real(), v.u(i, j).imag()});
      rows.push_back(row);
    }
    doc["matrix"] = rows;
  }
  emit_json(out, doc, m);
  return kOk;
}

struct DefectGrid {
  double lambda_tilde = 0.0;
  double r_min = 0.1, r_max = 10.0;
  int r_points = 100;
  int theta_points = 1;
  int sign = 1;
  int basis = 1;
};

inline int cmd_defect(const Manifest& m, const DefectGrid& d, std::ostream& os) {
  check_defect_order(d.lambda_tilde);
  if (!(d.r_min > 0.0 && d.r_max >= d.r_min) || d.r_points < 1 || d.theta_points < 1)
    fail(ErrorCode::InvalidInput, "defect grid needs 0 < rmin <= rmax and positive point counts");
  const auto g = load_graph(m);
  const auto opt = m.solver();

  EigenRecord rec;
  if (std::abs(d.lambda_tilde) <= opt.boundary_tol) {
    if (!has_zero_mode(g, opt)) fail(ErrorCode::NoZeroMode, "0 is not an eigenvalue of this configuration");
    rec.lambda_tilde = 0.0;
    rec.lambda = -0.5;
    rec.multiplicity = 2;
  } else {
    const auto s = find_eigenvalues(g, 0.0, 0.5, opt);
    bool found = false;
    for (const auto& r : s.records)
      if (std::abs(r.lambda_tilde - d.lambda_tilde) <= 1e-6) {
        rec = r;
        found = true;
      }
    if (!found)
      fail(ErrorCode::NotAnEigenvalue, "no eigenvalue within 1e-6 of lambda_tilde = " + std::to_string(d.lambda_tilde));
  }

  Output out(m.out_path, os);
  out.os() << "r,theta,re1,im1,re2,im2\n";
  for (int i = 0; i < d.r_points; ++i) {
    const double r = d.r_points == 1 ? d.r_min : d.r_min + (d.r_max - d.r_min) * double(i) / (d.r_points - 1);
    for (int k = 0; k < d.theta_points; ++k) {
      const double th = kTwoPi * double(k) / d.theta_points;
      const auto v = defect_spinor_2d(g, rec, std::size_t(d.basis), d.sign, r, th, opt);
      out.os() << csv_number(r) << ',' << csv_number(th) << ',' << csv_number(v[0].real()) << ','
               << csv_number(v[0].imag()) << ',' << csv_number(v[1].real()) << ',' << csv_number(v[1].imag())
               << '\n';
    }
  }
  return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra, deficiency indices and self-adjoint extensions of Dirac operators with "
               "Lorentz-scalar interactions on star graphs"};
  app.require_subcommand(1);
  Manifest m;
  app.add_option("--config", m.config_path, "graph configuration (JSON)");
  app.add_option("--out", m.out_path, "write output to this file instead of stdout");
  app.add_option("--format", m.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--grid", m.grid, "scan points per unit of lambda")->check(CLI::PositiveNumber);
  app.add_option("--tol", m.tol, "residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", m.seed, "seed recorded in the manifest");

  double lo = -0.5, hi = 0.5;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of J_N in a window of lambda_tilde");
  spectrum->add_option("--lo", lo, "window lower end");
  spectrum->add_option("--hi", hi, "window upper end");

  app.add_subcommand("deficiency", "deficiency indices");

  std::string param;
  double from = 0.0, to = 0.0;
  int steps = 100;
  auto* sw = app.add_subcommand("sweep", "deficiency indices along a parameter path");
  sw->add_option("--param", param, "tau[j] or tied group tau[i,j] (1-based edges)")->required();
  sw->add_option("--from", from)->required();
  sw->add_option("--to", to)->required();
  sw->add_option("--steps", steps, "number of intervals");

  std::string suite = "all";
  double perturb = 0.0;
  auto* val = app.add_subcommand("validate", "cross-check closed forms against the solver");
  val->add_option("--suite", suite, "suite name or 'all'");
  val->add_option("--perturb", perturb)->group("");  // test hook

  bool dump = false;
  auto* uni = app.add_subcommand("unitary", "vertex matrix eigenphases and arc count");
  uni->add_flag("--dump-matrix", dump, "include the matrix (row-major [re, im] pairs)");

  DefectGrid grid;
  auto* def = app.add_subcommand("defect", "sample defect spinors on a polar grid (CSV)");
  def->add_option("--lambda-tilde", grid.lambda_tilde, "eigenvalue in [0, 1/2)")->required();
  def->add_option("--rmin", grid.r_min);
  def->add_option("--rmax", grid.r_max);
  def->add_option("--points", grid.r_points);
  def->add_option("--theta-points", grid.theta_points);
  def->add_option("--sign", grid.sign)->check(CLI::IsMember({-1, 1}));
  def->add_option("--basis", grid.basis, "basis index within the eigenspace (1-based)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (spectrum->parsed()) {
      m.command = "spectrum";
      return cmd_spectrum(m, lo, hi, out);
    }
    if (app.got_subcommand("deficiency")) {
      m.command = "deficiency";
      return cmd_deficiency(m, out);
    }
    if (sw->parsed()) {
      m.command = "sweep";
      if (m.format.empty()) m.format = "csv";
      return cmd_sweep(m, param, from, to, steps, out);
    }
    if (val->parsed()) {
      m.command = "validate";
      return cmd_validate(m, suite, perturb, out);
    }
    if (uni->parsed()) {
      m.command = "unitary";
      return cmd_unitary(m, dump, out);
    }
    if (def->parsed()) {
      m.command = "defect";
      return cmd_defect(m, grid, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e.code()) ? kInputError : kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  return kInputError;
}

}  // namespace starspec::cli

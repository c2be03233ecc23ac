#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "starspec/errors.hpp"
#include "starspec/graph.hpp"
#include "starspec/linalg.hpp"

namespace starspec {

using Json = nlohmann::json;

// Angles may be given as numbers or as multiples of pi: "pi", "pi/3",
// "2pi/3", "2*pi/3", "-0.5*pi", "5 pi / 6".
inline double parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?)\s*)?$)",
                                  std::regex::icase);
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double coef = 1.0;
    const std::string c = m[1].str();
    if (c == "-") coef = -1.0;
    else if (!c.empty() && c != "+") coef = std::stod(c);
    const double den = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (den == 0.0) fail(ErrorCode::InvalidInput, "zero denominator in angle '" + text + "'");
    return coef * kPi / den;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (text.find_first_not_of(" \t", used) == std::string::npos) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::InvalidInput, "cannot read angle '" + text + "'");
}

inline double angle_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_angle(j.get<std::string>());
  fail(ErrorCode::InvalidInput, "angle must be a number or a string such as \"pi/3\"");
}

// {"mode": "symmetric", "n": 3, "tau": [4, 4, 4]}
// {"mode": "general", "omega": ["pi/3", "pi"], "tau": [1, 2, 3]}
// {"mode": "broken_line", "tau_l": 1, "tau_r": -4, "omega": "pi/2"}
inline StarGraph graph_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidInput, "configuration must be a JSON object");
  const std::string mode = j.value("mode", j.contains("omega") && j["omega"].is_array() ? "general" : "symmetric");
  try {
    if (mode == "broken_line") {
      if (!j.contains("tau_l") || !j.contains("tau_r") || !j.contains("omega"))
        fail(ErrorCode::InvalidInput, "broken_line needs tau_l, tau_r and omega");
      return broken_line_graph(j["tau_l"].get<double>(), j["tau_r"].get<double>(), angle_from_json(j["omega"]));
    }
    if (!j.contains("tau") || !j["tau"].is_array()) fail(ErrorCode::InvalidInput, "missing 'tau' array");
    const auto taus = j["tau"].get<std::vector<double>>();
    if (mode == "symmetric") {
      const std::size_t n = j.value("n", taus.size());
      return StarGraph::symmetric(n, taus);
    }
    if (mode == "general") {
      if (!j.contains("omega") || !j["omega"].is_array()) fail(ErrorCode::InvalidInput, "missing 'omega' array");
      std::vector<double> omegas;
      for (const auto& w : j["omega"]) omegas.push_back(angle_from_json(w));
      if (j.contains("n") && j["n"].get<std::size_t>() != taus.size())
        fail(ErrorCode::InvalidInput, "'n' disagrees with the length of 'tau'");
      return StarGraph::general(omegas, taus);
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed configuration: ") + e.what());
  }
  fail(ErrorCode::InvalidInput, "unknown mode '" + mode + "'");
}

inline StarGraph graph_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidInput, "cannot open configuration file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("configuration is not valid JSON: ") + e.what());
  }
  return graph_from_json(j);
}

inline Json graph_to_json(const StarGraph& g) {
  Json j;
  j["n"] = g.n_edges();
  j["omega"] = std::vector<double>(g.omegas().begin(), g.omegas().end());
  j["tau"] = std::vector<double>(g.taus().begin(), g.taus().end());
  j["symmetric"] = g.is_symmetric();
  return j;
}

inline std::string format_number(double v, int digits) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// JSON text with every floating-point number printed to 17 significant
// digits, so a round trip reproduces the doubles exactly.
inline void write_json(std::ostream& os, const Json& j, int indent = 2, int level = 0) {
  const std::string pad(std::size_t(indent * (level + 1)), ' ');
  const std::string close(std::size_t(indent * level), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent, level + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent, level + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>(), 17);
      return;
    default:
      os << j.dump();
  }
}

inline std::string to_json_text(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  os << "\n";
  return os.str();
}

}  // namespace starspec

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "diskinterp/carleson.hpp"
#include "diskinterp/earl.hpp"
#include "diskinterp/error.hpp"
#include "diskinterp/quadrature.hpp"
#include "diskinterp/sequences.hpp"
#include "diskinterp/spaces.hpp"
#include "diskinterp/verify.hpp"

namespace diskinterp {

/// Insertion-ordered so reports serialize in a fixed field order.
using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void dump_string(std::string& out, const std::string& s) {
  out += Json(s).dump();
}

inline void dump(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_string(out, it.key());
        out += ": ";
        dump(out, it.value(), indent, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // numeric arrays stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump(out, e, indent, depth + 1);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// JSON text with every double printed to 17 significant digits; NaN and
/// infinities become null.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::string out;
  detail::dump(out, j, indent, 0);
  out += "\n";
  return out;
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::InvalidArgument, what + ": malformed JSON (" + e.what() + ")");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

// ---- sequences ----

inline void write_sequence_text(std::ostream& os, const DiskSequence& seq) {
  if (!seq.label.empty()) os << "# " << seq.label << "\n";
  for (const auto& p : seq.points) os << format_double(p.value().real()) << " " << format_double(p.value().imag()) << "\n";
}

inline DiskSequence read_sequence_text(std::istream& is, const std::string& source = "sequence") {
  DiskSequence seq;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      if (seq.label.empty() && seq.empty()) {
        auto text = line.substr(hash + 1);
        text.erase(0, text.find_first_not_of(' '));
        seq.label = text;
      }
      line.erase(hash);
    }
    std::istringstream ls(line);
    double re = 0, im = 0;
    if (!(ls >> re)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fail(ErrorCode::InvalidArgument, source + ": line " + std::to_string(lineno) + ": expected 're im'");
    }
    if (!(ls >> im)) fail(ErrorCode::InvalidArgument, source + ": line " + std::to_string(lineno) + ": missing imaginary part");
    std::string rest;
    if (ls >> rest) fail(ErrorCode::InvalidArgument, source + ": line " + std::to_string(lineno) + ": trailing text '" + rest + "'");
    try {
      seq.points.emplace_back(cplx(re, im));
    } catch (const Error& e) {
      fail(ErrorCode::InvalidArgument, source + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return seq;
}

inline Json point_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json points_json(const std::vector<cplx>& zs) {
  Json a = Json::array();
  for (const cplx z : zs) a.push_back(point_json(z));
  return a;
}

inline Json sequence_to_json(const DiskSequence& seq) {
  Json j;
  j["kind"] = "sequence";
  j["label"] = seq.label;
  j["points"] = points_json(seq.values());
  return j;
}

inline cplx point_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(ErrorCode::InvalidArgument, field + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

/// Accepts a bare array of [re, im] pairs or an object with "points".
inline DiskSequence sequence_from_json(const Json& j, const std::string& source = "sequence") {
  const Json* pts = &j;
  DiskSequence seq;
  if (j.is_object()) {
    if (!j.contains("points")) fail(ErrorCode::InvalidArgument, source + ": missing field 'points'");
    pts = &j["points"];
    if (j.contains("label") && j["label"].is_string()) seq.label = j["label"].get<std::string>();
  }
  if (!pts->is_array()) fail(ErrorCode::InvalidArgument, source + ": field 'points' must be an array");
  for (std::size_t i = 0; i < pts->size(); ++i) {
    const std::string field = source + ": points[" + std::to_string(i) + "]";
    const cplx z = point_from_json((*pts)[i], field);
    try {
      seq.points.emplace_back(z);
    } catch (const Error& e) {
      fail(ErrorCode::InvalidArgument, field + ": " + e.what());
    }
  }
  return seq;
}

/// .json files are JSON, anything else the 're im' text format.
inline DiskSequence read_sequence_file(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return sequence_from_json(parse_json(text, path), path);
  std::istringstream is(text);
  return read_sequence_text(is, path);
}

inline void write_sequence_file(const std::string& path, const DiskSequence& seq) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    write_file(path, dump_json(sequence_to_json(seq)));
    return;
  }
  std::ostringstream os;
  write_sequence_text(os, seq);
  write_file(path, os.str());
}

// ---- interpolation problems ----

inline Json problem_to_json(const InterpolationProblem& prob) {
  Json j;
  j["kind"] = "interpolation_problem";
  j["nodes"] = points_json(prob.nodes.values());
  j["values"] = points_json(prob.values);
  return j;
}

inline InterpolationProblem problem_from_json(const Json& j, const std::string& source = "problem") {
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, source + ": expected an object with 'nodes' and 'values'");
  for (const char* f : {"nodes", "values"})
    if (!j.contains(f) || !j[f].is_array()) fail(ErrorCode::InvalidArgument, source + ": field '" + f + "' must be an array");
  InterpolationProblem prob;
  prob.nodes = sequence_from_json(j["nodes"], source + ": nodes");
  for (std::size_t i = 0; i < j["values"].size(); ++i)
    prob.values.push_back(point_from_json(j["values"][i], source + ": values[" + std::to_string(i) + "]"));
  if (prob.values.size() != prob.nodes.size())
    fail(ErrorCode::InvalidArgument, source + ": field 'values' must have one entry per node");
  return prob;
}

// ---- reports ----

inline Json to_json(const CarlesonReport& r) {
  Json j;
  j["test"] = r.test;
  j["constant"] = r.constant_estimate;
  j["witness"] = r.witness;
  j["witness_point"] = point_json(r.witness_point);
  j["classification"] = to_string(r.classification);
  j["slope"] = r.growth_slope;
  j["raw_slope"] = r.raw_slope;
  j["tail_ratio"] = r.tail_ratio;
  j["extrapolated"] = r.extrapolated;
  j["levels"] = r.levels;
  j["values"] = r.constants;
  j["note"] = r.note;
  return j;
}

inline Json to_json(const SupReport& r) {
  Json j;
  j["quantity"] = r.quantity;
  j["value"] = r.value;
  j["sup"] = r.sup;
  j["witness_point"] = point_json(r.witness);
  j["verdict"] = r.verdict;
  j["classification"] = to_string(r.classification);
  j["slope"] = r.growth_slope;
  j["raw_slope"] = r.raw_slope;
  j["tail_ratio"] = r.tail_ratio;
  j["extrapolated"] = r.extrapolated;
  j["levels"] = r.levels;
  j["per_level"] = r.per_level;
  j["evaluations"] = r.evaluations;
  j["nonconverged"] = r.nonconverged;
  j["note"] = r.note;
  return j;
}

inline Json to_json(const QuadratureResult& r) {
  Json j;
  j["value"] = r.value;
  j["error_estimate"] = r.error_estimate;
  j["verdict"] = r.verdict;
  j["levels"] = r.levels;
  j["previous_level_value"] = r.previous_level_value;
  j["level_change"] = r.level_change;
  j["cells"] = r.cells;
  j["per_level"] = r.per_level;
  j["note"] = r.note;
  return j;
}

inline Json to_json(const NormReport& r) {
  Json j;
  j["value"] = r.value;
  j["integral"] = r.integral;
  j["verdict"] = r.quadrature.verdict;
  j["quadrature"] = to_json(r.quadrature);
  return j;
}

inline Json to_json(const SeparationReport& r) {
  Json j;
  j["separation"] = r.separation;
  j["uniform_separation"] = r.uniform_separation;
  j["blaschke_sum"] = r.blaschke_sum;
  j["singleton"] = r.singleton;
  j["has_duplicates"] = r.has_duplicates;
  j["closest_pair"] = Json::array({r.closest_pair.first, r.closest_pair.second});
  j["weakest_index"] = r.weakest_index;
  return j;
}

inline Json to_json(const EarlSolution& s) {
  Json j;
  j["status"] = to_string(s.status);
  j["scale"] = point_json(s.scale);
  j["perturbed_zeros"] = points_json(s.perturbed_zeros.values());
  j["residuals"] = s.residuals;
  j["max_residual"] = s.max_residual;
  j["max_perturbation"] = s.max_perturbation;
  j["delta"] = s.delta;
  j["perturbation_bound"] = s.delta / 3.0;
  j["amplification"] = s.amplification;
  j["iterations"] = s.iterations;
  j["restarts"] = s.restarts;
  j["message"] = s.message;
  return j;
}

inline Json to_json(const ConditionVerdict& v) {
  Json j;
  j["name"] = v.name;
  j["classification"] = to_string(v.classification);
  j["constant"] = v.constant;
  j["slope"] = v.slope;
  j["raw_slope"] = v.raw_slope;
  j["extrapolated"] = v.extrapolated;
  j["converged"] = v.converged;
  j["levels"] = v.levels;
  j["values"] = v.values;
  j["note"] = v.note;
  return j;
}

inline Json to_json(const EquivalenceReport& r) {
  Json j;
  j["theorem"] = r.theorem;
  j["family"] = r.family;
  j["consistent"] = r.consistent;
  j["converged"] = r.converged;
  Json c = Json::array();
  for (const auto& v : r.conditions) c.push_back(to_json(v));
  j["conditions"] = c;
  j["notes"] = r.notes;
  return j;
}

inline Json to_json(const Theorem21Report& r) {
  Json j = to_json(r.equivalence);
  Json t;
  t["run"] = r.interpolation_run;
  if (r.interpolation_run) {
    const auto& it = r.interpolation;
    t["trials"] = it.trials;
    t["successes"] = it.successes;
    t["subset_size"] = it.subset_size;
    t["delta"] = it.delta;
    t["max_residual"] = it.max_residual;
    t["max_perturbation_ratio"] = it.max_perturbation_ratio;
    t["statuses"] = it.statuses;
    t["membership"] = to_json(it.membership);
  }
  j["interpolation"] = t;
  return j;
}

inline Json to_json(const ZhuReport& r) {
  Json j;
  j["c"] = r.c;
  j["t"] = r.t;
  j["expectation"] = r.expectation;
  j["pass"] = r.pass;
  j["classification"] = to_string(r.classification);
  j["fitted_exponent"] = r.fitted_exponent;
  j["log_ratio_min"] = r.log_ratio_min;
  j["log_ratio_max"] = r.log_ratio_max;
  j["log_bracket"] = r.log_bracket;
  j["samples"] = points_json(r.samples);
  j["values"] = r.values;
  Json conv = Json::array();
  for (bool b : r.converged) conv.push_back(b);
  j["converged"] = conv;
  return j;
}

inline Json to_json(const ForelliRudinReport& r) {
  Json j;
  j["s"] = r.s;
  j["r"] = r.r;
  j["t"] = r.t;
  j["pairs"] = r.pairs;
  j["max_ratio"] = r.max_ratio;
  j["max_ratio_refined"] = r.max_ratio_refined;
  j["relative_change"] = r.relative_change;
  j["nonconverged"] = r.nonconverged;
  j["worst_z"] = point_json(r.worst_z);
  j["worst_zeta"] = point_json(r.worst_zeta);
  j["pass"] = r.pass;
  return j;
}

inline Json to_json(const ClosureReport& r) {
  Json j;
  j["verdict"] = r.verdict;
  j["in_closure"] = r.in_closure;
  j["epsilons"] = r.epsilons;
  Json e = Json::array();
  for (const auto& v : r.per_epsilon) e.push_back(to_json(v));
  j["per_epsilon"] = e;
  j["bloch"] = to_json(r.bloch);
  return j;
}

inline Json to_json(const WitnessReport& r) {
  Json j;
  j["family"] = r.family;
  j["reproduced"] = r.reproduced;
  j["tempered_bounded"] = r.tempered_ok;
  j["s_carleson_divergent"] = r.s_divergent;
  j["t_carleson_bounded"] = r.t_bounded;
  j["log_tempered"] = to_json(r.tempered);
  j["box_s"] = to_json(r.box_s);
  j["kernel_s"] = to_json(r.kernel_s);
  Json t = Json::array();
  for (std::size_t i = 0; i < r.t_values.size(); ++i) {
    Json e;
    e["t"] = r.t_values[i];
    e["box"] = to_json(r.box_t[i]);
    e["kernel"] = to_json(r.kernel_t[i]);
    t.push_back(e);
  }
  j["t_carleson"] = t;
  return j;
}

inline Json to_json(const MultiplierReport& r) {
  Json j;
  j["verdict"] = r.verdict;
  j["member"] = r.member;
  j["atoms"] = r.atoms;
  j["discretization_change"] = r.discretization_change;
  j["hinf"] = to_json(r.hinf);
  j["carleson"] = to_json(r.carleson);
  return j;
}

inline Json to_json(const Prop22Report& r) {
  Json j;
  j["consistent"] = r.consistent;
  Json e = Json::array();
  for (const auto& x : r.entries) {
    Json k;
    k["function"] = x.function;
    k["agree"] = x.agree;
    k["multiplier_member"] = x.multiplier.member;
    k["intersection_member"] = x.intersection_member;
    k["multiplier"] = to_json(x.multiplier);
    k["fpps"] = to_json(x.fpps);
    e.push_back(k);
  }
  j["entries"] = e;
  return j;
}

// ---- per-level CSV ----

struct LevelRow {
  std::string series;
  int level = 0;
  double value = 0.0;
};

inline void add_rows(std::vector<LevelRow>& rows, const std::string& series, const std::vector<int>& levels,
                     const std::vector<double>& values) {
  for (std::size_t i = 0; i < levels.size() && i < values.size(); ++i) rows.push_back({series, levels[i], values[i]});
}

inline std::string levels_csv(const std::vector<LevelRow>& rows) {
  std::string out = "series,level,value\n";
  for (const auto& r : rows) {
    std::string name = r.series;
    if (name.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char c : name) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      name = q + "\"";
    }
    out += name + "," + std::to_string(r.level) + "," + format_double(r.value) + "\n";
  }
  return out;
}

}  // namespace diskinterp

#pragma once

#include <chrono>
#include <ctime>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diskinterp/io.hpp"
#include "diskinterp/verify.hpp"

namespace diskinterp::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode { kOk = 0, kRejected = 2, kNonConvergence = 3, kInternal = 4 };

/// What a subcommand hands back: the result document, per-level rows for
/// the CSV, and whether a plain file (sequence, solution) replaces the report.
struct Outcome {
  Json result;
  std::vector<LevelRow> rows;
  std::string report_kind;
};

inline std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, field + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) fail(ErrorCode::InvalidArgument, field + ": empty list");
  return out;
}

/// Function specs: constant[:re], log, monomial:n, series:c0,c1,...,
/// blaschke:PATH (zeros file), test_fn:re,im (uses p and s).
inline AnalyticFunction parse_function(const std::string& spec, double p, double s) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const std::string field = "--function '" + spec + "'";
  if (head == "constant") return AnalyticFunction::constant(arg.empty() ? 1.0 : parse_list(arg, field).at(0));
  if (head == "log") return AnalyticFunction::log_branch();
  if (head == "monomial") {
    const double n = parse_list(arg, field).at(0);
    if (n != std::floor(n) || n < 0) fail(ErrorCode::InvalidArgument, field + ": degree must be a nonnegative integer");
    return AnalyticFunction::monomial(static_cast<int>(n));
  }
  if (head == "series") {
    std::vector<cplx> c;
    for (double v : parse_list(arg, field)) c.emplace_back(v);
    return AnalyticFunction::user_series(c);
  }
  if (head == "blaschke") {
    if (arg.empty()) fail(ErrorCode::InvalidArgument, field + ": needs a zeros file");
    return AnalyticFunction::blaschke(BlaschkeProduct(read_sequence_file(arg)));
  }
  if (head == "test_fn") {
    const auto a = parse_list(arg, field);
    if (a.size() != 2) fail(ErrorCode::InvalidArgument, field + ": expected test_fn:re,im");
    return AnalyticFunction::test_fn_a(cplx(a[0], a[1]), s, p);
  }
  fail(ErrorCode::InvalidArgument, field + ": unknown function kind '" + head + "'");
}

/// Scans a result for non-convergence markers: converged == false,
/// nonconverged > 0, verdict INCONCLUSIVE, solver statuses other than
/// CONVERGED, and inconsistent equivalence reports.
inline bool has_nonconvergence(const Json& j) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& k = it.key();
      const auto& v = it.value();
      if (k == "converged" && v.is_boolean() && !v.get<bool>()) return true;
      if (k == "converged" && v.is_array())
        for (const auto& e : v)
          if (e.is_boolean() && !e.get<bool>()) return true;
      if (k == "consistent" && v.is_boolean() && !v.get<bool>()) return true;
      if (k == "nonconverged" && v.is_number() && v.get<double>() > 0) return true;
      if (k == "verdict" && v.is_string() && v.get<std::string>() == "INCONCLUSIVE") return true;
      if (k == "status" && v.is_string() && v.get<std::string>() != "CONVERGED") return true;
      if (k == "statuses" && v.is_array())
        for (const auto& e : v)
          if (e.is_string() && e.get<std::string>() != "CONVERGED") return true;
      if (has_nonconvergence(v)) return true;
    }
  } else if (j.is_array()) {
    for (const auto& e : j)
      if (has_nonconvergence(e)) return true;
  }
  return false;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

struct Common {
  std::string out;
  std::string csv;
  bool no_timestamp = false;
  unsigned jobs = default_jobs();
};

/// Every option of the subcommand, by long name, as given or defaulted.
inline Json echo_config(const CLI::App& sub) {
  std::map<std::string, std::string> kv;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || opt->get_lnames().empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
      if (opt->get_type_size() == 0 && res.empty()) value = "true";
    } else {
      value = opt->get_default_str();
    }
    kv[opt->get_lnames().front()] = value;
  }
  Json j = Json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

inline void add_rows_from(std::vector<LevelRow>& rows, const std::string& prefix, const Json& j) {
  if (j.is_object()) {
    const bool has_levels = j.contains("levels") && j["levels"].is_array();
    const char* vkey = j.contains("values") ? "values" : (j.contains("per_level") ? "per_level" : nullptr);
    if (has_levels && vkey && j[vkey].is_array() && j[vkey].size() == j["levels"].size()) {
      std::string name = prefix;
      if (j.contains("name") && j["name"].is_string()) name += (name.empty() ? "" : "/") + j["name"].get<std::string>();
      for (std::size_t i = 0; i < j["levels"].size(); ++i) {
        const auto& v = j[vkey][i];
        rows.push_back({name.empty() ? "value" : name, j["levels"][i].get<int>(), v.is_number() ? v.get<double>() : NAN});
      }
    }
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.value().is_structured()) add_rows_from(rows, prefix.empty() ? it.key() : prefix + "/" + it.key(), it.value());
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      if (j[i].is_structured()) add_rows_from(rows, prefix + "[" + std::to_string(i) + "]", j[i]);
  }
}

}  // namespace detail

/// Parses argv, runs one subcommand, writes the JSON report (stdout when no
/// --out) and the per-level CSV, and returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical harness for interpolation, Carleson measures and Besov-type spaces on the unit disk",
               "diskinterp"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kToolVersion);

  detail::Common common;
  std::function<Outcome()> action;
  std::map<std::string, std::function<Outcome()>> actions;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--out", common.out, "output path (stdout when omitted)");
    sub->add_option("--csv", common.csv, "per-level CSV path (default: <out>.levels.csv)");
    sub->add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp so reports are byte-identical");
    sub->add_option("--jobs", common.jobs, "worker threads (default from DISKINTERP_JOBS)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  // shared parameter storage
  double p = 1.0, s = 0.5, t = NAN, q = 0.5, growth = 0.9, scale = 1.0, log_power = -2.0, arc_exponent = 1.0;
  double jitter = 0.1, min_rho = 0.5, max_radius = 0.9, aperture = 1.0, c = 0.5, r = 2.5, fr_s = 0.0, rel_tol = 1e-3;
  int n = 10, levels = 10, per_level = 3, generations = 40, trials = 10, boundary_levels = 16, max_level_pairs = 12;
  int net_density = 8, extra_levels = 1, pairs = 1000;
  std::uint64_t seed = 0;
  bool witness = false;
  std::string family = "radial", in, zeros_path, test = "box", function = "log", norm = "fpps", eps = "0.05,0.1,0.2,0.4";
  std::string t_list = "0.7,0.9", level_list = "8,9,10,11,12,13,14";
  std::vector<std::string> functions;
  double tol = 1e-10;
  int max_iter = 100;

  auto net_config = [&] {
    NetConfig nc;
    nc.density = net_density;
    nc.extra_levels = extra_levels;
    return nc;
  };
  auto carleson_config = [&] {
    CarlesonConfig cc;
    cc.jobs = common.jobs;
    return cc;
  };
  auto read_in = [&](const std::string& path, const char* flag) {
    if (path.empty()) fail(ErrorCode::InvalidArgument, std::string(flag) + ": an input file is required");
    return read_sequence_file(path);
  };

  // gen
  auto* gen = app.add_subcommand("gen", "generate a test sequence");
  add_common(gen);
  gen->add_option("--family", family, "radial|clustered|bwy|stolz|perturbed|random")->capture_default_str();
  gen->add_option("--q", q, "radial ratio")->capture_default_str();
  gen->add_option("--n", n, "point count (radial, perturbed, random)")->capture_default_str();
  gen->add_option("--s", s, "target exponent (clustered, bwy)")->capture_default_str();
  gen->add_option("--growth", growth, "clustered growth exponent")->capture_default_str();
  gen->add_option("--levels", levels, "dyadic levels (clustered, bwy, stolz)")->capture_default_str();
  gen->add_option("--per-level", per_level, "stolz points per level")->capture_default_str();
  gen->add_option("--aperture", aperture, "stolz aperture")->capture_default_str();
  gen->add_option("--jitter", jitter, "perturbed radial jitter")->capture_default_str();
  gen->add_option("--min-rho", min_rho, "random separated: minimum rho")->capture_default_str();
  gen->add_option("--max-radius", max_radius, "random separated: radius cap")->capture_default_str();
  gen->add_option("--scale", scale, "bwy calibration scale")->capture_default_str();
  gen->add_option("--log-power", log_power, "bwy calibration log power")->capture_default_str();
  gen->add_option("--arc-exponent", arc_exponent, "bwy calibration arc exponent")->capture_default_str();
  gen->add_option("--seed", seed, "seed (required by perturbed and random)");
  actions["gen"] = [&] {
    DiskSequence seq;
    const bool random = family == "perturbed" || family == "random";
    if (random && gen->get_option("--seed")->count() == 0)
      fail(ErrorCode::InvalidArgument, "--seed: required for the '" + family + "' family");
    if (family == "radial") seq = gen_radial(q, n);
    else if (family == "clustered") seq = gen_clustered(s, growth, levels);
    else if (family == "bwy") {
      const BwyCalibration def;
      const bool is_default = scale == def.scale && log_power == def.log_power && arc_exponent == def.arc_exponent;
      seq = gen_bwy_candidate(s, levels, BwyCalibration{scale, log_power, arc_exponent, is_default ? "default" : "custom"});
    } else if (family == "stolz") seq = gen_stolz(levels, per_level, aperture);
    else if (family == "perturbed") seq = gen_perturbed_radial(q, n, jitter, seed);
    else if (family == "random") seq = gen_random_separated(static_cast<std::size_t>(n), min_rho, max_radius, seed);
    else fail(ErrorCode::InvalidArgument, "--family: unknown family '" + family + "'");
    Outcome o;
    o.report_kind = "sequence";
    o.result = sequence_to_json(seq);
    return o;
  };

  // metrics
  auto* metrics = app.add_subcommand("metrics", "separation, uniform separation and Blaschke sum of a sequence");
  add_common(metrics);
  metrics->add_option("--in", in, "sequence file");
  actions["metrics"] = [&] {
    const auto seq = read_in(in, "--in");
    Outcome o;
    o.report_kind = "metrics";
    o.result = to_json(separation_report(seq));
    o.result["points"] = seq.size();
    o.result["max_level"] = max_level(seq);
    return o;
  };

  // carleson
  auto* carleson = app.add_subcommand("carleson", "Carleson-measure tests of sum (1-|z_n|^2)^s delta_{z_n}");
  add_common(carleson);
  carleson->add_option("--in", in, "sequence file");
  carleson->add_option("--s", s, "exponent")->capture_default_str();
  carleson->add_option("--t", t, "kernel exponent (default s)");
  carleson->add_option("--test", test, "box|kernel|bps")->capture_default_str();
  carleson->add_option("--generations", generations, "dyadic generations for the box test")->capture_default_str();
  carleson->add_option("--density", net_density, "net density")->capture_default_str();
  carleson->add_option("--extra-levels", extra_levels, "extra net levels past the deepest atom")->capture_default_str();
  actions["carleson"] = [&] {
    const auto seq = read_in(in, "--in");
    const auto mu = weights_from_sequence(seq, s);
    const double tt = std::isnan(t) ? s : t;
    CarlesonReport rep;
    if (test == "box") rep = box_constant(mu, s, generations, carleson_config());
    else if (test == "kernel") rep = kernel_constant(mu, s, tt, make_net(seq, net_config()), carleson_config());
    else if (test == "bps") rep = bps_carleson_ratio(mu, s, make_net(seq, net_config()), carleson_config());
    else fail(ErrorCode::InvalidArgument, "--test: unknown test '" + test + "'");
    Outcome o;
    o.report_kind = "carleson";
    o.result = to_json(rep);
    return o;
  };

  // inner
  auto* inner = app.add_subcommand("inner", "is the Blaschke product with these zeros in F(p,p-2,s)");
  add_common(inner);
  inner->add_option("--zeros", zeros_path, "zeros file");
  inner->add_option("--p", p)->capture_default_str();
  inner->add_option("--s", s)->capture_default_str();
  inner->add_option("--density", net_density, "net density")->capture_default_str();
  actions["inner"] = [&] {
    const auto zs = read_in(zeros_path, "--zeros");
    Outcome o;
    o.report_kind = "carleson";
    o.result = to_json(inner_membership_test(BlaschkeProduct(zs), p, s, make_net(zs, net_config()), carleson_config()));
    return o;
  };

  // seminorm
  auto* seminorm = app.add_subcommand("seminorm", "norms and seminorms of an analytic function");
  add_common(seminorm);
  seminorm->add_option("--function", function, "constant[:c]|log|monomial:n|series:c0,c1,..|blaschke:PATH|test_fn:re,im")
      ->capture_default_str();
  seminorm->add_option("--norm", norm, "fpps|bps|bloch|hinf")->capture_default_str();
  seminorm->add_option("--p", p)->capture_default_str();
  seminorm->add_option("--s", s)->capture_default_str();
  seminorm->add_option("--levels", levels, "net levels")->capture_default_str();
  seminorm->add_option("--rel-tol", rel_tol, "quadrature relative tolerance")->capture_default_str();
  seminorm->add_option("--boundary-levels", boundary_levels, "quadrature boundary levels")->capture_default_str();
  actions["seminorm"] = [&] {
    const auto f = parse_function(function, p, s);
    QuadratureConfig qc;
    qc.rel_tol = rel_tol;
    qc.boundary_levels = boundary_levels;
    Outcome o;
    o.report_kind = "seminorm";
    if (norm == "fpps") {
      SeminormOptions so;
      so.quadrature = qc;
      so.jobs = common.jobs;
      FunctionNetConfig fc;
      fc.levels = levels;
      o.result = to_json(fpps_seminorm(f, SpaceParams{p, s}, function_net(f, fc), so));
    } else if (norm == "bps") {
      o.result = to_json(bps_norm(f, SpaceParams{p, s}, qc));
    } else if (norm == "bloch") {
      o.result = to_json(bloch_seminorm(f, boundary_grid(f, levels)));
    } else if (norm == "hinf") {
      o.result = to_json(hinf_norm(f, boundary_grid(f, levels)));
    } else {
      fail(ErrorCode::InvalidArgument, "--norm: unknown norm '" + norm + "'");
    }
    o.result["function"] = f.description();
    return o;
  };

  // interpolate
  auto* interpolate = app.add_subcommand("interpolate", "solve an interpolation problem by a perturbed Blaschke product");
  add_common(interpolate);
  interpolate->add_option("--in", in, "problem file {nodes, values}");
  interpolate->add_option("--tol", tol)->capture_default_str();
  interpolate->add_option("--max-iter", max_iter)->capture_default_str();
  actions["interpolate"] = [&] {
    if (in.empty()) fail(ErrorCode::InvalidArgument, "--in: a problem file is required");
    if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "--tol: must be positive");
    if (max_iter < 1) fail(ErrorCode::InvalidArgument, "--max-iter: must be at least 1");
    const auto prob = problem_from_json(parse_json(read_file(in), in), in);
    EarlConfig ec;
    ec.tol = tol;
    ec.max_iter = max_iter;
    Outcome o;
    o.report_kind = "interpolation";
    o.result = to_json(earl_interpolate(prob, ec));
    o.result["problem"] = problem_to_json(prob);
    return o;
  };

  // theorem21
  auto* th21 = app.add_subcommand("theorem21", "interpolating sequences: box, kernel and interpolation sides");
  add_common(th21);
  th21->add_option("--in", in, "sequence file");
  th21->add_option("--p", p)->capture_default_str();
  th21->add_option("--s", s)->capture_default_str();
  th21->add_option("--t", t, "kernel exponent (default s)");
  th21->add_option("--trials", trials, "seeded interpolation trials")->capture_default_str();
  th21->add_option("--seed", seed, "seed for the interpolation targets")->required();
  th21->add_option("--density", net_density, "net density")->capture_default_str();
  actions["theorem21"] = [&] {
    const auto seq = read_in(in, "--in");
    Theorem21Options opt;
    opt.net = net_config();
    opt.carleson = carleson_config();
    opt.seed = seed;
    Outcome o;
    o.report_kind = "equivalence";
    o.result = to_json(check_theorem21(seq, p, s, std::isnan(t) ? s : t, trials, opt));
    return o;
  };

  // theorem32
  auto* th32 = app.add_subcommand("theorem32", "Blaschke products in F(p,p-2,s) versus s-Carleson zeros");
  add_common(th32);
  th32->add_option("--zeros", zeros_path, "zeros file");
  th32->add_option("--p", p)->capture_default_str();
  th32->add_option("--s", s)->capture_default_str();
  th32->add_option("--rel-tol", rel_tol, "quadrature relative tolerance")->capture_default_str();
  th32->add_option("--boundary-levels", boundary_levels, "quadrature boundary levels")->capture_default_str();
  actions["theorem32"] = [&] {
    const auto zs = read_in(zeros_path, "--zeros");
    Theorem32Options opt;
    opt.carleson = carleson_config();
    opt.quadrature.rel_tol = rel_tol;
    opt.quadrature.boundary_levels = boundary_levels;
    Outcome o;
    o.report_kind = "equivalence";
    o.result = to_json(check_theorem32(zs, p, s, opt));
    return o;
  };

  // zhu
  auto* zhu = app.add_subcommand("zhu", "growth of int (1-|w|^2)^t / |1-conj(z) w|^(2+t+c) dA(w)");
  add_common(zhu);
  zhu->add_option("--c", c)->capture_default_str();
  zhu->add_option("--t", t, "weight exponent (default 0)");
  zhu->add_option("--levels", level_list, "sample levels j, z = 1 - 2^-j")->capture_default_str();
  zhu->add_option("--rel-tol", rel_tol)->capture_default_str();
  actions["zhu"] = [&] {
    std::vector<cplx> zs;
    for (double j : parse_list(level_list, "--levels")) {
      if (j != std::floor(j) || j < 1 || j > 40) fail(ErrorCode::InvalidArgument, "--levels: entries must be integers in [1, 40]");
      zs.emplace_back(1.0 - std::ldexp(1.0, -static_cast<int>(j)));
    }
    QuadratureConfig qc;
    qc.rel_tol = rel_tol;
    Outcome o;
    o.report_kind = "zhu";
    o.result = to_json(validate_zhu_estimate(c, std::isnan(t) ? 0.0 : t, zs, qc));
    return o;
  };

  // forelli
  auto* forelli = app.add_subcommand("forelli", "two-point integral estimate over seeded pairs");
  add_common(forelli);
  forelli->add_option("--s", fr_s)->capture_default_str();
  forelli->add_option("--r", r)->capture_default_str();
  forelli->add_option("--t", t, "second exponent (default 1)");
  forelli->add_option("--pairs", pairs)->capture_default_str();
  forelli->add_option("--max-level", max_level_pairs, "deepest level of the sampled points")->capture_default_str();
  forelli->add_option("--seed", seed)->required();
  forelli->add_option("--rel-tol", rel_tol)->capture_default_str();
  forelli->add_option("--boundary-levels", boundary_levels)->capture_default_str();
  actions["forelli"] = [&] {
    require(pairs >= 1, "--pairs: must be positive");
    require(max_level_pairs >= 1 && max_level_pairs <= 40, "--max-level: must lie in [1, 40]");
    QuadratureConfig qc;
    qc.rel_tol = rel_tol;
    qc.boundary_levels = boundary_levels;
    Outcome o;
    o.report_kind = "forelli";
    o.result = to_json(validate_forelli_rudin(fr_s, r, std::isnan(t) ? 1.0 : t,
                                              forelli_rudin_pairs(static_cast<std::size_t>(pairs), max_level_pairs, seed),
                                              qc, 0.1, common.jobs));
    return o;
  };

  // closure
  auto* closure = app.add_subcommand("closure", "closure-in-Bloch criterion over an epsilon grid");
  add_common(closure);
  closure->add_option("--function", function, "function spec (see seminorm)")->capture_default_str();
  closure->add_option("--zeros", zeros_path, "zeros file: Blaschke product classified by zero truncation");
  closure->add_option("--eps", eps, "epsilon grid")->capture_default_str();
  closure->add_option("--t", t, "derivative exponent (default 2)");
  closure->add_option("--s", s)->capture_default_str();
  closure->add_option("--levels", levels, "net levels for function inputs")->capture_default_str();
  closure->add_option("--rel-tol", rel_tol)->capture_default_str();
  actions["closure"] = [&] {
    ClosureOptions opt;
    opt.quadrature.rel_tol = rel_tol;
    opt.jobs = common.jobs;
    const auto grid = parse_list(eps, "--eps");
    const double tt = std::isnan(t) ? 2.0 : t;
    Outcome o;
    o.report_kind = "closure";
    if (!zeros_path.empty()) {
      const auto zs = read_sequence_file(zeros_path);
      NetConfig nc = net_config();
      nc.include_rings = false;
      o.result = to_json(closure_test_zeros(zs, grid, tt, s, make_net(zs, nc), opt));
    } else {
      const auto f = parse_function(function, 2.0, s);
      FunctionNetConfig fc;
      fc.levels = levels;
      o.result = to_json(closure_test(f, grid, tt, s, function_net(f, fc), opt));
      o.result["function"] = f.description();
    }
    return o;
  };

  // logtempered
  auto* logt = app.add_subcommand("logtempered", "log-tempered sums, optionally with the s- and t-Carleson witness checks");
  add_common(logt);
  logt->add_option("--in", in, "sequence file");
  logt->add_option("--s", s)->capture_default_str();
  logt->add_flag("--witness", witness, "also run box/kernel tests at s and at every t in --t-list");
  logt->add_option("--t-list", t_list)->capture_default_str();
  logt->add_option("--density", net_density, "net density")->capture_default_str();
  actions["logtempered"] = [&] {
    const auto seq = read_in(in, "--in");
    Outcome o;
    if (witness) {
      o.report_kind = "witness";
      o.result = to_json(witness_test(seq, s, parse_list(t_list, "--t-list"), net_config(), carleson_config()));
    } else {
      o.report_kind = "carleson";
      o.result = to_json(log_tempered_test(seq, s, make_net(seq, net_config()), carleson_config()));
    }
    return o;
  };

  // prop22
  auto* prop22 = app.add_subcommand("prop22", "multipliers of B_p(s) versus F(p,p-2,s) cap H-infinity");
  add_common(prop22);
  prop22->add_option("--function", functions, "function specs (repeatable)");
  prop22->add_option("--p", p)->capture_default_str();
  prop22->add_option("--s", s)->capture_default_str();
  prop22->add_option("--levels", levels, "net levels")->capture_default_str();
  actions["prop22"] = [&] {
    if (functions.empty()) fail(ErrorCode::InvalidArgument, "--function: at least one function is required");
    std::vector<AnalyticFunction> fam;
    for (const auto& spec : functions) fam.push_back(parse_function(spec, p, s));
    Prop22Options opt;
    opt.multiplier.jobs = opt.seminorm.jobs = common.jobs;
    opt.net.levels = levels;
    Outcome o;
    o.report_kind = "prop22";
    o.result = to_json(check_prop22(fam, p, s, opt));
    return o;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kRejected;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    Outcome o = actions.at(name)();
    Json doc;
    std::string text;
    if (o.report_kind == "sequence") {
      doc = o.result;
      doc["subcommand"] = name;
      doc["tool_version"] = kToolVersion;
      if (!common.no_timestamp) doc["timestamp"] = utc_timestamp();
      doc["config"] = detail::echo_config(*sub);
      if (!common.out.empty() && !(common.out.size() >= 5 && common.out.substr(common.out.size() - 5) == ".json")) {
        // text format: config echoed as comments
        std::ostringstream os;
        os << "# " << doc["label"].get<std::string>() << "\n";
        os << "# tool_version = " << kToolVersion << "\n";
        if (doc.contains("timestamp")) os << "# timestamp = " << doc["timestamp"].get<std::string>() << "\n";
        for (auto it = doc["config"].begin(); it != doc["config"].end(); ++it)
          os << "# " << it.key() << " = " << it.value().get<std::string>() << "\n";
        for (const auto& pt : doc["points"]) os << format_double(pt[0].get<double>()) << " " << format_double(pt[1].get<double>()) << "\n";
        text = os.str();
      } else {
        text = dump_json(doc);
      }
    } else {
      doc["report"] = o.report_kind;
      doc["subcommand"] = name;
      doc["tool_version"] = kToolVersion;
      if (!common.no_timestamp) doc["timestamp"] = utc_timestamp();
      doc["config"] = detail::echo_config(*sub);
      doc["result"] = o.result;
      text = dump_json(doc);
    }
    if (common.out.empty()) out << text;
    else write_file(common.out, text);

    if (o.report_kind != "sequence") {
      detail::add_rows_from(o.rows, "", o.result);
      const std::string csv = !common.csv.empty() ? common.csv : (common.out.empty() ? "" : common.out + ".levels.csv");
      if (!csv.empty()) write_file(csv, levels_csv(o.rows));
    }
    if (o.report_kind != "sequence" && has_nonconvergence(o.result)) {
      err << name << ": report contains non-converged or inconsistent verdicts\n";
      return kNonConvergence;
    }
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::InvalidArgument:
      case ErrorCode::NotUniformlySeparated:
      case ErrorCode::Io: return kRejected;
      default: return kInternal;
    }
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace diskinterp::cli

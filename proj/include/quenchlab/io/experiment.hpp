#pragma once

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quenchlab/interpolation.hpp"
#include "quenchlab/io/json_lines.hpp"
#include "quenchlab/io/model_json.hpp"
#include "quenchlab/quench.hpp"
#include "quenchlab/stability.hpp"

namespace quenchlab::io {

/// Config problem, already anchored to a line of the source document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "pressure",     "potential",  "ground_state", "lemma1", "ibp",     "corr_derivative", "superadditivity",
      "interpolation", "bounds",    "convergence",  "ferro",  "covariance_identity"};
  return names;
}

inline constexpr std::uint64_t kDefaultSeed = 0x5eed;

struct ExperimentConfig {
  json raw;
  json model_spec;
  DisorderModel model{SiteLattice(1, {1}), SpinSpace::ising(), {}};
  std::optional<Partition> partition;
  std::optional<AveragingScheme> scheme;  // unset: per-check defaults
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;
  std::vector<double> t_grid = {0.1, 0.25, 0.5, 0.75, 0.9};
  double gibbs_step = 1e-4;
  double interpolation_step = 1e-3;
  std::vector<double> betas = {0.5, 1.0};
  std::vector<SiteLattice> volumes;
  int covariance_samples = 20;
  std::string out_dir = ".";
  std::string format = "csv";
};

namespace detail {

inline std::vector<double> as_number_list(const json& v, const std::string& at) {
  if (!v.is_array()) throw SchemaError(at, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], at + "/" + std::to_string(i)));
  return out;
}

inline std::uint64_t as_seed(const json& v, const std::string& at) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw SchemaError(at, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline void check_format(const std::string& f, const std::string& at) {
  if (f != "csv" && f != "json" && f != "both") throw SchemaError(at, "format must be csv, json or both");
}

inline void parse_body(ExperimentConfig& cfg) {
  const json& v = cfg.raw;
  if (!v.is_object()) throw SchemaError("", "config must be a JSON object");
  static const std::set<std::string> allowed = {"model",  "partition", "averaging", "checks",
                                                "tolerances", "t_grid", "fd_step", "interpolation_fd_step",
                                                "betas", "volumes", "covariance_samples", "output"};
  for (const auto& [key, _] : v.items())
    if (!allowed.count(key)) throw SchemaError("/" + key, "unknown key \"" + key + "\"");

  cfg.model_spec = require(v, "model", "");
  cfg.model = parse_model(cfg.model_spec, "/model");

  if (v.contains("partition")) {
    const json& p = v["partition"];
    try {
      if (p.contains("blocks")) {
        std::vector<std::vector<SiteIndex>> blocks;
        const json& b = p["blocks"];
        if (!b.is_array()) throw SchemaError("/partition/blocks", "expected an array of blocks");
        for (std::size_t i = 0; i < b.size(); ++i)
          blocks.push_back(as_int_list(b[i], "/partition/blocks/" + std::to_string(i)));
        cfg.partition.emplace(cfg.model.site_count(), std::move(blocks));
      } else {
        const int axis = static_cast<int>(as_int(require(p, "axis", "/partition"), "/partition/axis"));
        const int cut = static_cast<int>(as_int(require(p, "cut", "/partition"), "/partition/cut"));
        cfg.partition.emplace(split_axis(cfg.model.lattice(), axis, cut));
      }
    } catch (const InvalidArgument& e) {
      throw SchemaError("/partition", e.what());
    }
  } else {
    const auto& sides = cfg.model.lattice().sides();
    for (int a = 0; a < cfg.model.lattice().dimension(); ++a)
      if (sides[a] >= 2) {
        cfg.partition.emplace(split_axis(cfg.model.lattice(), a, sides[a] / 2));
        break;
      }
  }

  if (v.contains("averaging")) {
    const json& a = v["averaging"];
    const auto& kind = as_string(require(a, "kind", "/averaging"), "/averaging/kind");
    if (a.contains("seed")) cfg.seed = as_seed(a["seed"], "/averaging/seed");
    try {
      if (kind == "quadrature") {
        const auto order = a.contains("order") ? as_int(a["order"], "/averaging/order") : 40;
        const auto cap = a.contains("cap") ? as_int(a["cap"], "/averaging/cap") : (1LL << 24);
        cfg.scheme = AveragingScheme::quadrature(static_cast<int>(order), static_cast<std::uint64_t>(cap));
      } else if (kind == "mc") {
        const auto samples = a.contains("samples") ? as_int(a["samples"], "/averaging/samples") : 20000;
        if (samples < 2) throw SchemaError("/averaging/samples", "Monte Carlo needs at least 2 samples");
        cfg.scheme = AveragingScheme::monte_carlo(static_cast<std::uint64_t>(samples), cfg.seed);
      } else {
        throw SchemaError("/averaging/kind", "averaging kind must be quadrature or mc");
      }
    } catch (const InvalidArgument& e) {
      throw SchemaError("/averaging", e.what());
    }
  }

  const json& checks = require(v, "checks", "");
  if (!checks.is_array() || checks.empty()) throw SchemaError("/checks", "expected a non-empty array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string at = "/checks/" + std::to_string(i);
    const auto& name = as_string(checks[i], at);
    if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
      throw SchemaError(at, "unknown check \"" + name + "\"");
    cfg.checks.push_back(name);
  }

  if (v.contains("tolerances")) {
    const json& t = v["tolerances"];
    if (!t.is_object()) throw SchemaError("/tolerances", "expected an object");
    for (const auto& [name, value] : t.items()) {
      const std::string at = "/tolerances/" + name;
      if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
        throw SchemaError(at, "unknown check \"" + name + "\"");
      const double tol = as_number(value, at);
      if (!(tol > 0.0)) throw SchemaError(at, "tolerances must be positive");
      cfg.tolerances[name] = tol;
    }
  }
  if (v.contains("t_grid")) {
    cfg.t_grid = as_number_list(v["t_grid"], "/t_grid");
    for (std::size_t i = 0; i < cfg.t_grid.size(); ++i)
      if (!(cfg.t_grid[i] >= 0.0 && cfg.t_grid[i] <= 1.0))
        throw SchemaError("/t_grid/" + std::to_string(i), "t must lie in [0, 1]");
  }
  if (v.contains("fd_step")) cfg.gibbs_step = as_number(v["fd_step"], "/fd_step");
  if (v.contains("interpolation_fd_step"))
    cfg.interpolation_step = as_number(v["interpolation_fd_step"], "/interpolation_fd_step");
  if (!(cfg.gibbs_step > 0.0)) throw SchemaError("/fd_step", "step must be positive");
  if (!(cfg.interpolation_step > 0.0)) throw SchemaError("/interpolation_fd_step", "step must be positive");
  if (v.contains("betas")) cfg.betas = as_number_list(v["betas"], "/betas");
  if (v.contains("covariance_samples"))
    cfg.covariance_samples = static_cast<int>(as_int(v["covariance_samples"], "/covariance_samples"));
  if (v.contains("volumes")) {
    const json& vol = v["volumes"];
    if (!vol.is_array()) throw SchemaError("/volumes", "expected an array of side lists");
    for (std::size_t i = 0; i < vol.size(); ++i) {
      const std::string at = "/volumes/" + std::to_string(i);
      const auto sides = as_int_list(vol[i], at);
      try {
        cfg.volumes.emplace_back(static_cast<int>(sides.size()), sides);
      } catch (const InvalidArgument& e) {
        throw SchemaError(at, e.what());
      }
    }
    if (!is_nested_chain(cfg.volumes))
      throw SchemaError("/volumes", "volumes must form a nested chain");
  }
  if (v.contains("output")) {
    const json& o = v["output"];
    if (o.contains("path")) cfg.out_dir = as_string(o["path"], "/output/path");
    if (o.contains("format")) {
      cfg.format = as_string(o["format"], "/output/format");
      check_format(cfg.format, "/output/format");
    }
  }
  const bool needs_partition = std::any_of(cfg.checks.begin(), cfg.checks.end(), [](const std::string& c) {
    return c == "superadditivity" || c == "interpolation" || c == "ferro" || c == "covariance_identity";
  });
  if (needs_partition && !cfg.partition)
    throw SchemaError("/partition", "the requested checks need a partition with at least two blocks");
  if (std::count(cfg.checks.begin(), cfg.checks.end(), "convergence") && cfg.volumes.empty())
    throw SchemaError("/volumes", "the convergence check needs \"volumes\"");
}

}  // namespace detail

/// Parses and validates a config document; every error carries a line number.
inline ExperimentConfig parse_experiment(const std::string& text) {
  ExperimentConfig cfg;
  try {
    cfg.raw = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  try {
    detail::parse_body(cfg);
  } catch (const SchemaError& e) {
    const JsonLineIndex lines(text);
    const std::string where = e.pointer().empty() ? "/" : e.pointer();
    throw ConfigError("line " + std::to_string(lines.line_of(e.pointer())) + ": " + where + ": " + e.what());
  }
  return cfg;
}

/// Applies the --seed override to the seed and any Monte Carlo scheme.
inline void override_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  if (cfg.scheme && !cfg.scheme->is_quadrature())
    cfg.scheme = AveragingScheme::monte_carlo(cfg.scheme->as_monte_carlo().samples, seed);
}

struct ReportRow {
  std::string check;
  std::string model;
  int sites = 0;
  std::string scheme;
  double value = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string model_label(const DisorderModel& model) {
  std::string label = model.family() + "/";
  const auto& sides = model.lattice().sides();
  for (std::size_t i = 0; i < sides.size(); ++i) label += (i ? "x" : "") + std::to_string(sides[i]);
  if (model.spins().kind == SpinKind::Potts) label += "/q" + std::to_string(model.spins().q);
  return label;
}

namespace detail {

/// Runs the requested checks in config order and collects report rows.
class ExperimentRunner {
 public:
  explicit ExperimentRunner(const ExperimentConfig& cfg)
      : cfg_(cfg), label_(model_label(cfg.model)), sites_(cfg.model.site_count()) {}

  std::vector<ReportRow> run() {
    for (const auto& check : cfg_.checks) {
      if (check == "pressure") pressure();
      else if (check == "potential") potential();
      else if (check == "ground_state") ground_state();
      else if (check == "lemma1") lemma1();
      else if (check == "ibp") ibp();
      else if (check == "corr_derivative") corr_derivative();
      else if (check == "superadditivity") superadditivity();
      else if (check == "interpolation") interpolation();
      else if (check == "bounds") bounds();
      else if (check == "convergence") convergence();
      else if (check == "ferro") ferro();
      else if (check == "covariance_identity") covariance_identity();
    }
    return std::move(rows_);
  }

 private:
  AveragingScheme scheme_for(int couplings) const {
    return cfg_.scheme ? *cfg_.scheme : default_scheme(couplings, cfg_.seed);
  }

  /// Interpolation defaults to m = 16 quadrature up to 6 replica couplings.
  AveragingScheme interpolation_scheme(int couplings) const {
    if (cfg_.scheme) return *cfg_.scheme;
    if (couplings <= 6) return AveragingScheme::quadrature(16);
    return AveragingScheme::monte_carlo(20000, cfg_.seed);
  }

  double tolerance(const std::string& check, double exact_default, double std_error, bool quadrature) const {
    if (auto it = cfg_.tolerances.find(check); it != cfg_.tolerances.end()) return it->second;
    return quadrature ? exact_default : 3.0 * std_error;
  }

  void add(std::string check, const std::string& scheme, double value, double se, double bound, double tol,
           bool pass) {
    rows_.push_back({std::move(check), label_, sites_, scheme, value, se, bound, tol, pass});
  }

  /// Row asserting value >= bound - tol.
  void at_least(const std::string& base, std::string check, const QuenchedEstimate& e, double bound,
                bool quadrature, double exact = 1e-10) {
    const double tol = tolerance(base, exact, e.std_error, quadrature);
    add(std::move(check), e.scheme, e.value, e.std_error, bound, tol, e.value >= bound - tol);
  }

  void pressure() {
    const auto scheme = scheme_for(cfg_.model.term_count());
    const auto p = quenched_pressure(cfg_.model, scheme);
    const double tol = tolerance("pressure", 1e-10, p.std_error, scheme.is_quadrature());
    const double annealed = annealed_pressure(cfg_.model);
    add("pressure", p.scheme, p.value, p.std_error, annealed, tol, p.value <= annealed + tol);
  }

  void potential() {
    const auto scheme = scheme_for(cfg_.model.term_count());
    at_least("potential", "potential", quenched_potential(cfg_.model, scheme).direct, 0.0, scheme.is_quadrature());
  }

  void ground_state() {
    const auto scheme = scheme_for(cfg_.model.term_count());
    const auto g = quenched_ground_state(cfg_.model, scheme);
    const auto u = quenched_potential(cfg_.model, scheme).direct;
    const double se = std::hypot(g.std_error, u.std_error);
    const double tol = tolerance("ground_state", 1e-10, se, scheme.is_quadrature());
    add("ground_state", g.scheme, g.value, g.std_error, u.value, tol, g.value >= u.value - tol);
  }

  void lemma1() {
    const auto scheme = scheme_for(cfg_.model.term_count());
    const auto local = local_term_averages(cfg_.model, scheme);
    for (std::size_t k = 0; k < local.size(); ++k)
      at_least("lemma1", "lemma1:term" + std::to_string(k), local[k].direct, 0.0, scheme.is_quadrature());
  }

  void ibp() {
    const auto scheme = scheme_for(cfg_.model.term_count());
    if (!scheme.is_quadrature()) throw Unsupported("the ibp check needs a quadrature scheme");
    const auto local = local_term_averages(cfg_.model, scheme);
    const double tol = tolerance("ibp", 1e-10, 0.0, true);
    for (std::size_t k = 0; k < local.size(); ++k) {
      const double r = local[k].direct.value - local[k].by_parts.value;
      add("ibp:term" + std::to_string(k), local[k].direct.scheme, r, 0.0, 0.0, tol, std::abs(r) <= tol);
    }
  }

  void corr_derivative() {
    const DisorderAssignment J =
        cfg_.model.deterministic()
            ? unit_disorder(cfg_.model)
            : sample_disorder(cfg_.model, AveragingScheme::monte_carlo(2, cfg_.seed), 0);
    const double tol = tolerance("corr_derivative", 1e-6, 0.0, true);
    const std::string scheme = "fixed_disorder(h=" + format_number(cfg_.gibbs_step) + ")";
    for (int k = 0; k < cfg_.model.term_count(); ++k) {
      const auto d = correlation_derivative_check(cfg_.model, J, k, cfg_.gibbs_step);
      add("corr_derivative:term" + std::to_string(k), scheme, d.gap(), 0.0, 0.0, tol, d.gap() <= tol);
    }
  }

  void superadditivity() {
    const auto scheme = scheme_for(cfg_.model.term_count());
    const bool quad = scheme.is_quadrature();
    const auto& part = *cfg_.partition;
    at_least("superadditivity", "superadditivity:pressure", superadditivity_gap_pressure(cfg_.model, part, scheme),
             0.0, quad);
    at_least("superadditivity", "superadditivity:potential",
             superadditivity_gap_potential(cfg_.model, part, scheme).direct, 0.0, quad);
    at_least("superadditivity", "superadditivity:ground_state",
             superadditivity_gap_ground_state(cfg_.model, part, scheme), 0.0, quad);
  }

  void interpolation() {
    const InterpolationSystem system(cfg_.model, *cfg_.partition);
    const auto scheme = interpolation_scheme(system.coupling_count());
    const bool quad = scheme.is_quadrature();
    const auto p1 = interpolating_pressure(system, 1.0, scheme);
    const auto p0 = interpolating_pressure(system, 0.0, scheme);
    {
      const auto full = quenched_pressure(cfg_.model, scheme);
      const double d = std::abs(p1.value - full.value);
      const double se = std::hypot(p1.std_error, full.std_error);
      const double tol = tolerance("interpolation", 1e-10, se, quad);
      add("interpolation:endpoint@t=1", p1.scheme, d, se, 0.0, tol, d <= tol);
    }
    {
      double blocks = 0.0, var = 0.0;
      for (const auto& b : system.block_models()) {
        if (b.term_count() == 0) continue;
        const auto e = quenched_pressure(b, scheme);
        blocks += e.value;
        var += e.std_error * e.std_error;
      }
      const double d = std::abs(p0.value - blocks);
      const double se = std::hypot(p0.std_error, std::sqrt(var));
      const double tol = tolerance("interpolation", 1e-10, se, quad);
      add("interpolation:endpoint@t=0", p0.scheme, d, se, 0.0, tol, d <= tol);
    }
    std::vector<double> grid = cfg_.t_grid;
    std::sort(grid.begin(), grid.end());
    QuenchedEstimate prev = p0;
    for (double t : grid) {
      const auto deriv = pressure_derivative_closed_form(system, t, scheme);
      at_least("interpolation", "interpolation:derivative@t=" + format_number(t), deriv, 0.0, quad);
      const auto p = interpolating_pressure(system, t, scheme);
      const double se = std::hypot(p.std_error, prev.std_error);
      const double tol = tolerance("interpolation", 1e-10, se, quad);
      add("interpolation:monotone@t=" + format_number(t), p.scheme, p.value, p.std_error, prev.value, tol,
          p.value >= prev.value - tol);
      prev = p;
      const double h = cfg_.interpolation_step;
      if (quad && t - h > 0.0 && t + h < 1.0) {
        const double fd = pressure_derivative_fd(system, t, h, scheme);
        const double d = std::abs(fd - deriv.value);
        const double ftol = tolerance("interpolation", 1e-5, 0.0, true);
        add("interpolation:fd@t=" + format_number(t), deriv.scheme, d, 0.0, 0.0, ftol, d <= ftol);
      }
    }
  }

  void bounds() {
    const auto scheme = scheme_for(cfg_.model.term_count());
    const double tol = tolerance("bounds", 1e-10, 0.0, true);
    const auto r = check_bounds(cfg_.model, scheme, tol);
    const double pslack = tol + 3.0 * r.quenched_pressure.std_error;
    const double uslack = tol + 3.0 * r.quenched_potential.std_error;
    add("bounds:jensen", r.quenched_pressure.scheme, r.quenched_pressure.value, r.quenched_pressure.std_error,
        r.annealed, pslack, r.quenched_pressure.value <= r.annealed + pslack);
    add("bounds:annealed", "exact", r.annealed, 0.0, r.volume_bound_pressure, tol,
        r.annealed <= r.volume_bound_pressure + tol);
    add("bounds:potential", r.quenched_potential.scheme, r.quenched_potential.value,
        r.quenched_potential.std_error, r.volume_bound_potential, uslack, r.potential);
  }

  void convergence() {
    const json spec = cfg_.model_spec;
    const ModelFamily family = [spec](const SiteLattice& lattice) {
      json s = spec;
      s["lattice"] = {{"d", lattice.dimension()}, {"sides", lattice.sides()}};
      return parse_model(s, "/model");
    };
    const auto scheme = cfg_.scheme ? *cfg_.scheme : AveragingScheme::monte_carlo(20000, cfg_.seed);
    const auto points = monotone_volume_sequence(family, cfg_.volumes, scheme);
    const bool quad = scheme.is_quadrature();
    const auto tol_base = [&](double se) { return tolerance("convergence", 1e-10, se, quad); };
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& pt = points[i];
      const std::string at = "@N=" + std::to_string(pt.sites);
      struct Series {
        const char* name;
        const QuenchedEstimate VolumePoint::*field;
        double cap;
      };
      const Series series[] = {{"pressure", &VolumePoint::pressure, 0.5 * pt.per_site_norm},
                               {"potential", &VolumePoint::potential, 2.0 * pt.per_site_norm},
                               {"ground_state", &VolumePoint::ground_state, 0.0}};
      for (const auto& s : series) {
        const auto& cur = pt.*(s.field);
        const auto& before = i ? points[i - 1].*(s.field) : cur;
        const double se = std::hypot(cur.std_error, i ? before.std_error : 0.0);
        const double tol = tol_base(se);
        bool pass = cur.value >= before.value - tol;
        if (s.cap > 0.0) pass = pass && cur.value <= s.cap + tol_base(cur.std_error);
        rows_.push_back({std::string("convergence:") + s.name + at, label_, pt.sites, cur.scheme, cur.value,
                         cur.std_error, before.value, tol, pass});
      }
    }
  }

  void ferro() {
    const double tol = tolerance("ferro", 1e-6, 0.0, true);
    for (double beta : cfg_.betas) {
      const FerroSystem system(cfg_.model.lattice(), *cfg_.partition, beta);
      for (double t : cfg_.t_grid) {
        if (!(t > 0.0 && t < 1.0)) continue;
        const double h = std::min({cfg_.gibbs_step, t / 2, (1 - t) / 2});
        const auto d = ferro_interpolation_derivative(system, t, h);
        const bool griffiths = std::all_of(d.cross_correlations.begin(), d.cross_correlations.end(),
                                           [](double c) { return c >= 0.0; });
        const double gap = std::abs(d.finite_difference - d.closed);
        rows_.push_back({"ferro@beta=" + format_number(beta) + ";t=" + format_number(t),
                         model_label(system.model()), sites_, "exact", d.closed, 0.0, 0.0, tol,
                         griffiths && d.closed >= 0.0 && gap <= tol});
      }
    }
  }

  void covariance_identity() {
    const CounterRng rng(cfg_.seed, 0xc0fe);
    const auto& spins = cfg_.model.spins();
    const double tol = tolerance("covariance_identity", 1e-12, 0.0, true);
    std::uint64_t counter = 0;
    for (int i = 0; i < cfg_.covariance_samples; ++i) {
      SpinConfiguration sigma(sites_), tau(sites_);
      for (auto* cfg : {&sigma, &tau})
        for (auto& x : *cfg) x = spins.value(static_cast<int>(rng.bits(counter++) % spins.cardinality()));
      const auto d = cross_covariance_identity(cfg_.model, *cfg_.partition, sigma, tau);
      const double gap = std::abs(d.lhs - d.rhs);
      add("covariance_identity:pair" + std::to_string(i), "exact", gap, 0.0, 0.0, tol, gap <= tol);
    }
  }

  const ExperimentConfig& cfg_;
  std::string label_;
  int sites_;
  std::vector<ReportRow> rows_;
};

}  // namespace detail

inline std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg) {
  return detail::ExperimentRunner(cfg).run();
}

inline bool all_pass(const std::vector<ReportRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

inline std::string to_csv(const std::vector<ReportRow>& rows) {
  std::string out = "check,model,N,scheme,value,stderr,bound,tolerance,pass\n";
  for (const auto& r : rows) {
    out += r.check + "," + r.model + "," + std::to_string(r.sites) + "," + r.scheme + "," + format_number(r.value) +
           "," + format_number(r.std_error) + "," + format_number(r.bound) + "," + format_number(r.tolerance) + "," +
           (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

inline json to_json(const ExperimentConfig& cfg, const std::vector<ReportRow>& rows) {
  json j;
  j["config"] = cfg.raw;
  j["seed"] = cfg.seed;
  j["pass"] = all_pass(rows);
  j["rows"] = json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"check", r.check},
                         {"model", r.model},
                         {"N", r.sites},
                         {"scheme", r.scheme},
                         {"value", r.value},
                         {"stderr", r.std_error},
                         {"bound", r.bound},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass}});
  return j;
}

/// {"per_site_norm", "annealed", "quenched_pressure", "quenched_potential", "bounds": {...}}.
inline json to_json(const StabilityReport& r) {
  auto est = [](const QuenchedEstimate& e) {
    return json{{"value", e.value}, {"stderr", e.std_error}, {"scheme", e.scheme}, {"count", e.count}};
  };
  return json{{"per_site_norm", r.per_site_norm},
              {"annealed", r.annealed},
              {"quenched_pressure", est(r.quenched_pressure)},
              {"quenched_potential", est(r.quenched_potential)},
              {"bounds", {{"jensen", r.jensen}, {"potential", r.potential}}}};
}

}  // namespace quenchlab::io

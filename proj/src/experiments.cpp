#include "kzk/experiments.hpp"

#include "kzk/io.hpp"
#include "kzk/oracle.hpp"
#include "kzk/periodic.hpp"
#include "kzk/solver.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace kzk {

using nlohmann::json;

namespace {

constexpr double kMonotoneTol = 1e-6;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(finite_or_null(x));
  return a;
}

RunSpec decay_spec(const RunConfig& cfg, bool strong) {
  RunSpec s = make_run_spec(cfg);
  const WeightSpec w = WeightSpec::exponential(cfg.alpha);
  s.weights.insert(s.weights.begin(), w);
  if (strong) s.strong_weights.insert(s.strong_weights.begin(), w);
  return s;
}

std::vector<std::string> weight_names(const RunConfig& cfg, bool with_decay) {
  std::vector<std::string> n;
  if (with_decay) n.push_back("decay");
  for (const auto& w : cfg.weights) n.push_back(w.name);
  return n;
}

std::vector<std::string> strong_names(const RunConfig& cfg, bool with_decay) {
  std::vector<std::string> n;
  if (with_decay) n.push_back("decay");
  for (const auto& w : cfg.weights)
    if (w.strong) n.push_back(w.name);
  return n;
}

std::vector<std::string> lambda_names(const RunConfig& cfg) {
  std::vector<std::string> n;
  for (auto f : cfg.lambda_plus) n.push_back(lambda_field_name(f));
  return n;
}

} // namespace

std::string eps0_cache_key(const RunConfig& cfg) {
  std::ostringstream os;
  os << cfg.make_nonlinearity().name() << "|b=" << format_double(cfg.b) << "|L=" << format_double(cfg.L)
     << "|family=" << family_tag(cfg.family);
  return os.str();
}

bool decay_probe(const RunConfig& cfg, double amplitude) {
  RunConfig probe = cfg;
  probe.T = cfg.probe_T;
  probe.dt = cfg.probe_dt;
  probe.record_every = std::max(1, static_cast<int>(std::lround(cfg.probe_T / cfg.probe_dt)));
  probe.weights.clear();
  probe.lambda_plus.clear();
  probe.track_h1 = false;
  RunSpec s = decay_spec(probe, false);
  const double sup = s.u0.max_abs();
  if (sup == 0.0) return true;
  s.u0.coeff() *= amplitude / sup;
  const Trajectory tr = run(s);
  if (tr.blew_up) return false;
  const double m0 = tr.records.front().weighted_mass[0];
  const double m1 = tr.records.back().weighted_mass[0];
  const auto d = decay_constants(cfg.b, cfg.L, cfg.family, cfg.make_nonlinearity().p());
  return std::isfinite(m1) && m1 <= m0 * std::exp(-0.8 * cfg.alpha * d.beta * probe.T);
}

Eps0Calibration calibrate_eps0(const RunConfig& cfg, const std::optional<std::filesystem::path>& cache) {
  Eps0Calibration c;
  c.key = eps0_cache_key(cfg);
  json db = json::object();
  if (cache && std::filesystem::exists(*cache)) {
    std::ifstream in(*cache);
    try {
      db = json::parse(in);
    } catch (const json::parse_error&) {
      db = json::object();
    }
    if (db.contains(c.key)) {
      c.eps0 = db[c.key].value("eps0", 0.0);
      c.at_bracket_top = db[c.key].value("at_bracket_top", false);
      c.cached = true;
      return c;
    }
  }
  double lo = 0.0, hi = cfg.eps0_max;
  if (decay_probe(cfg, hi)) {
    c.eps0 = hi;
    c.at_bracket_top = true;
  } else {
    for (int k = 0; k < 8; ++k) {
      const double mid = 0.5 * (lo + hi);
      (decay_probe(cfg, mid) ? lo : hi) = mid;
    }
    c.eps0 = lo;
  }
  if (cache) {
    db[c.key] = {{"eps0", c.eps0}, {"at_bracket_top", c.at_bracket_top}};
    write_text(*cache, db.dump(2) + "\n");
  }
  return c;
}

DecayVerdict run_decay(const RunConfig& cfg, const std::optional<std::filesystem::path>& eps0_cache) {
  DecayVerdict v;
  const bool strong = cfg.experiment == "decay_strong";
  v.preset = strong ? "decay_strong" : "decay_weak";
  v.alpha = cfg.alpha;
  RunConfig gated = cfg;
  gated.experiment = v.preset;
  v.gate_violations = decay_gate(gated);
  if (!v.gate_violations.empty()) {
    v.message = "gate rejected: no integration performed";
    return v;
  }
  const Nonlinearity nl = cfg.make_nonlinearity();
  v.constants = decay_constants(cfg.b, cfg.L, cfg.family, nl.p());
  v.required = cfg.alpha * v.constants.beta;
  v.threshold = 0.8 * v.required;

  RunSpec spec = decay_spec(cfg, strong);
  v.amplitude = spec.u0.max_abs();
  if (v.amplitude == 0.0) {
    v.trivial = true;
    v.pass = true;
    v.message = "zero initial data: masses vanish identically, rate fit skipped";
    return v;
  }
  if (cfg.calibrate_eps0) {
    v.eps0 = calibrate_eps0(cfg, eps0_cache);
    v.constants.eps0 = v.eps0.eps0;
    if (v.amplitude > v.eps0.eps0) {
      v.gate_violations.push_back("gate: amplitude " + format_double(v.amplitude) + " above calibrated eps0 " +
                                  format_double(v.eps0.eps0));
      v.message = "gate rejected: no integration performed";
      return v;
    }
  }

  const Trajectory tr = run(spec);
  v.ran = true;
  v.records = tr.records;
  if (tr.blew_up) {
    v.message = "blow-up: " + tr.message;
    return v;
  }
  std::vector<double> t, weak;
  for (const auto& r : tr.records) {
    t.push_back(r.t);
    weak.push_back(r.weighted_mass[0]);
    v.series.push_back(strong ? r.weighted_strong[0] : r.weighted_mass[0]);
  }
  const double T = tr.t_final;
  const double t_start = cfg.t_start < 0.0 ? 0.2 * T : cfg.t_start;
  v.floor = cfg.fit_floor * v.series.front();
  v.window_end = T;

  try {
    v.raw_window_rate = decay_fit(t, v.series, t_start).rate;
  } catch (const std::invalid_argument&) {
    v.raw_window_rate = nan();
  }

  int above = 0;
  for (size_t k = 0; k < t.size(); ++k)
    if (t[k] >= t_start && v.series[k] > v.floor) ++above;
  v.window_start = t_start;
  if (above < 20) {
    v.window_fallback = true;
    v.window_start = 0.0;
  }
  try {
    v.fit = decay_fit(t, v.series, v.window_start, v.floor);
  } catch (const std::invalid_argument& e) {
    v.message = e.what();
    return v;
  }
  if (v.fit.used < 20) {
    v.message = "fewer than 20 samples above the fit floor";
    return v;
  }

  const double weak_floor = cfg.fit_floor * weak.front();
  double last = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < t.size(); ++k) {
    if (t[k] < v.window_start || weak[k] <= weak_floor) continue;
    if (weak[k] > last * (1.0 + kMonotoneTol)) v.monotone = false;
    last = weak[k];
  }
  v.pass = v.fit.rate >= v.threshold && v.monotone;
  if (!v.monotone) v.message = "weighted mass increases after the transient window";
  return v;
}

ContinuousDependenceVerdict run_continuous_dependence(const RunConfig& cfg) {
  ContinuousDependenceVerdict v;
  v.deltas = cfg.deltas;
  RunSpec spec = make_run_spec(cfg);
  const WeightSpec w = cfg.weights.empty() ? WeightSpec::unit() : cfg.weights.front().spec();
  v.weight = w.label();
  const Field pert = Field::from_function(spec.grid, bump_function(cfg.perturbation, spec.grid->basis));
  const double pnorm = std::sqrt(weighted_mass(pert, w));
  if (pnorm == 0.0) {
    v.message = "perturbation has zero norm";
    return v;
  }

  const int n = static_cast<int>(v.deltas.size());
  std::vector<Solver> solvers;
  std::vector<Field> u;
  for (int k = 0; k <= n; ++k) {
    solvers.emplace_back(spec.grid, spec.b, spec.nl, spec.forcing, spec.options);
    Field f = spec.u0;
    if (k > 0) f.coeff() += v.deltas[k - 1] * pert.coeff();
    u.push_back(std::move(f));
  }
  std::vector<double> sup(n, 0.0), last(n, 0.0);
  auto sample = [&] {
    for (int k = 0; k < n; ++k) {
      const Field d(spec.grid, u[k + 1].coeff() - u[0].coeff());
      last[k] = std::sqrt(weighted_mass(d, w));
      sup[k] = std::max(sup[k], last[k]);
    }
  };
  sample();
  const long steps = std::lround(spec.grid->T / spec.grid->dt);
  try {
    for (long s = 0; s < steps; ++s) {
      const double t = s * spec.grid->dt;
      for (int k = 0; k <= n; ++k) solvers[k].step(u[k], t);
      if ((s + 1) % spec.record_every == 0 || s + 1 == steps) sample();
    }
  } catch (const BlowUpError& e) {
    v.message = std::string("blow-up: ") + e.what();
    return v;
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k = 0; k < n; ++k) {
    const double scale = std::abs(v.deltas[k]) * pnorm;
    v.ratios.push_back(v.deltas[k] == 0.0 ? 0.0 : sup[k] / scale);
    v.final_ratios.push_back(v.deltas[k] == 0.0 ? 0.0 : last[k] / scale);
    if (v.deltas[k] == 0.0) continue;
    lo = std::min(lo, v.final_ratios.back());
    hi = std::max(hi, v.final_ratios.back());
  }
  v.spread = hi > 0.0 ? hi / lo : 1.0;
  v.pass = std::isfinite(v.spread) && v.spread <= 2.0;
  return v;
}

OracleConvergenceVerdict run_oracle_convergence(const RunConfig& cfg) {
  OracleConvergenceVerdict v;
  if (!cfg.make_nonlinearity().is_zero()) {
    v.message = "oracle convergence needs nonlinearity = none";
    return v;
  }
  const Forcing forcing = make_forcing(cfg, build_basis(cfg.family, cfg.L, cfg.ny_modes));
  const int cells = cfg.nx - 1;
  for (int r = 0; r < 3; ++r) {
    RunConfig c = cfg;
    c.nx = cells * (1 << r) + 1;
    c.dt = cfg.dt / (1 << r);
    c.record_every = std::numeric_limits<int>::max();
    c.weights.clear();
    c.lambda_plus.clear();
    c.track_h1 = false;
    RunSpec s = make_run_spec(c);
    const Trajectory tr = run(s);
    if (tr.blew_up) {
      v.message = "solver blow-up: " + tr.message;
      return v;
    }
    const LinearOracle oracle(s.grid->basis, c.X_max, c.nx - 1, c.b);
    Eigen::MatrixXd u0 = s.u0.coeff().topRows(c.nx - 1);
    const OracleResult ref = oracle.evolve(u0, tr.t_final, forcing, 32, cfg.tail_tol);
    const Eigen::MatrixXd diff = tr.final_state.coeff().topRows(c.nx - 1) - ref.coeff;
    const double rn = ref.coeff.norm();
    v.dx.push_back(s.grid->dx());
    v.dt.push_back(c.dt);
    v.errors.push_back(rn > 0.0 ? diff.norm() / rn : diff.norm());
    v.tail_fraction = std::max(v.tail_fraction, ref.tail_fraction);
    v.tail_ok = v.tail_ok && ref.tail_ok;
  }
  bool orders_ok = true;
  for (size_t k = 1; k < v.errors.size(); ++k) {
    const double o = v.errors[k] > 0.0 ? std::log2(v.errors[k - 1] / v.errors[k]) : nan();
    v.orders.push_back(o);
    if (v.errors[k - 1] > 0.0 && !(o >= kOracleMinOrder)) orders_ok = false;
  }
  if (!v.tail_ok) {
    v.message = "horizon too long: boundary contamination above tail tolerance";
    return v;
  }
  v.pass = orders_ok && v.errors.front() <= kOracleMaxError;
  return v;
}

ConservationVerdict run_conservation_drift(const RunConfig& cfg) {
  ConservationVerdict v;
  if (cfg.forcing.kind != "zero" && cfg.forcing.amplitude != 0.0) {
    v.message = "conservation drift needs f = 0";
    return v;
  }
  PeriodicSolver ps(build_basis(cfg.family, cfg.L, cfg.ny_modes), cfg.X_max, cfg.periodic_nx, cfg.b,
                    cfg.make_nonlinearity(), cfg.dt);
  ps.set_state(ps.project(bump_function(cfg.initial, ps.basis())));
  v.mass0 = ps.mass();
  v.energy0 = ps.hamiltonian();
  auto drift = [](double now, double ref) { return ref != 0.0 ? std::abs(now / ref - 1.0) : std::abs(now); };
  const long steps = std::lround(cfg.T / cfg.dt);
  for (long s = 0; s < steps; ++s) {
    ps.step();
    v.mass_drift = std::max(v.mass_drift, drift(ps.mass(), v.mass0));
    v.energy_drift = std::max(v.energy_drift, drift(ps.hamiltonian(), v.energy0));
    if (!std::isfinite(v.mass_drift) || !std::isfinite(v.energy_drift)) {
      v.message = "non-finite state";
      return v;
    }
  }
  v.pass = v.mass_drift <= kMassDriftTol && v.energy_drift <= kEnergyDriftTol;
  return v;
}

bool run_experiment(const RunConfig& cfg, const std::filesystem::path& out, std::string& summary) {
  json j;
  j["experiment"] = cfg.experiment;
  bool pass = false;
  std::ostringstream sum;
  if (cfg.is_decay_preset()) {
    const DecayVerdict v = run_decay(cfg, out / cfg.eps0_cache);
    pass = v.pass;
    j["ran"] = v.ran;
    j["trivial"] = v.trivial;
    j["gate_violations"] = v.gate_violations;
    j["alpha"] = v.alpha;
    j["beta"] = v.constants.beta;
    j["L0"] = finite_or_null(v.constants.L0);
    j["alpha0"] = v.constants.alpha0;
    j["eps0"] = finite_or_null(v.constants.eps0);
    j["eps0_at_bracket_top"] = v.eps0.at_bracket_top;
    j["amplitude"] = v.amplitude;
    j["required_rate"] = v.required;
    j["threshold"] = v.threshold;
    j["fitted_rate"] = finite_or_null(v.fit.rate);
    j["stderr"] = finite_or_null(v.fit.stderr_rate);
    j["samples_used"] = v.fit.used;
    j["truncated"] = v.fit.truncated;
    j["window"] = {v.window_start, v.window_end};
    j["window_fallback"] = v.window_fallback;
    j["fit_floor"] = v.floor;
    j["raw_window_rate"] = finite_or_null(v.raw_window_rate);
    j["monotone"] = v.monotone;
    if (v.ran) {
      write_records_csv(out / "records.csv", v.records, weight_names(cfg, true),
                        strong_names(cfg, cfg.experiment == "decay_strong"), lambda_names(cfg));
    }
    sum << v.preset << ": rate " << format_double(v.fit.rate) << " vs threshold " << format_double(v.threshold);
    for (const auto& g : v.gate_violations) sum << "\n  " << g;
    if (!v.message.empty()) sum << "\n  " << v.message;
    j["message"] = v.message;
  } else if (cfg.experiment == "continuous_dependence") {
    const auto v = run_continuous_dependence(cfg);
    pass = v.pass;
    j["deltas"] = to_json(v.deltas);
    j["ratios"] = to_json(v.ratios);
    j["final_ratios"] = to_json(v.final_ratios);
    j["spread"] = finite_or_null(v.spread);
    j["weight"] = v.weight;
    j["message"] = v.message;
    sum << "continuous_dependence: spread " << format_double(v.spread);
  } else if (cfg.experiment == "oracle_convergence") {
    const auto v = run_oracle_convergence(cfg);
    pass = v.pass;
    j["dx"] = to_json(v.dx);
    j["dt"] = to_json(v.dt);
    j["errors"] = to_json(v.errors);
    j["orders"] = to_json(v.orders);
    j["tail_fraction"] = v.tail_fraction;
    j["tail_ok"] = v.tail_ok;
    j["message"] = v.message;
    std::ostringstream csv;
    csv << "dx,dt,error\n";
    for (size_t k = 0; k < v.errors.size(); ++k)
      csv << format_double(v.dx[k]) << ',' << format_double(v.dt[k]) << ',' << format_double(v.errors[k]) << "\n";
    write_text(out / "convergence.csv", csv.str());
    sum << "oracle_convergence: error " << (v.errors.empty() ? "n/a" : format_double(v.errors.front()));
    for (double o : v.orders) sum << " order " << format_double(o);
  } else if (cfg.experiment == "conservation_drift") {
    const auto v = run_conservation_drift(cfg);
    pass = v.pass;
    j["mass_drift"] = v.mass_drift;
    j["energy_drift"] = v.energy_drift;
    j["mass0"] = v.mass0;
    j["energy0"] = v.energy0;
    j["message"] = v.message;
    sum << "conservation_drift: mass " << format_double(v.mass_drift) << " energy "
        << format_double(v.energy_drift);
  } else {
    throw ConfigError("config selects no experiment");
  }
  j["pass"] = pass;
  write_text(out / "verdict.json", j.dump(2) + "\n");
  sum << (pass ? "\nPASS" : "\nFAIL");
  summary = sum.str();
  return pass;
}

} // namespace kzk

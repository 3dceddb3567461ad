#include "kzk/config.hpp"

#include "kzk/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace kzk {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"equation", {"b", "nonlinearity", "p", "a", "sign", "h"}},
      {"domain", {"L", "X_max", "family"}},
      {"discretization",
       {"nx", "ny_modes", "dt", "T", "sponge", "sponge_strength", "dealias", "truncation_h"}},
      {"initial", {"kind", "amplitude", "x0", "sigma", "mode", "file"}},
      {"forcing", {"kind", "amplitude", "x0", "sigma", "mode", "omega"}},
      {"perturbation", {"kind", "amplitude", "x0", "sigma", "mode"}},
      {"diagnostics", {"record_every", "lambda_plus", "track_h1"}},
      {"output", {"dir"}},
      {"experiment",
       {"name", "alpha", "t_start", "fit_floor", "calibrate_eps0", "eps0_cache", "probe_T",
        "probe_dt", "eps0_max", "deltas", "tail_tol", "periodic_nx"}},
      {"regime", {"uniqueness", "q", "trace_tol"}},
      {"weight", {"kind", "alpha", "x0", "strong"}},
  };
  return keys;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

template <class T>
void get(const pt::ptree& sec, const std::string& key, T& out) {
  if (auto v = sec.get_optional<std::string>(key)) {
    try {
      if constexpr (std::is_same_v<T, bool>) {
        out = parse_bool(*v);
      } else if constexpr (std::is_same_v<T, std::string>) {
        out = *v;
      } else {
        out = sec.get<T>(key);
      }
    } catch (const pt::ptree_bad_data&) {
      throw ConfigError("bad value for '" + key + "': '" + *v + "'");
    }
  }
}

BumpSpec read_bump(const pt::ptree& sec, BumpSpec s) {
  get(sec, "kind", s.kind);
  get(sec, "amplitude", s.amplitude);
  get(sec, "x0", s.x0);
  get(sec, "sigma", s.sigma);
  get(sec, "mode", s.mode);
  get(sec, "omega", s.omega);
  get(sec, "file", s.file);
  if (s.kind != "zero" && s.kind != "gaussian" && s.kind != "csv")
    throw ConfigError("unknown data kind '" + s.kind + "'");
  return s;
}

} // namespace

Nonlinearity RunConfig::make_nonlinearity() const {
  if (nonlinearity == "none") return Nonlinearity::none();
  if (nonlinearity == "quadratic") return Nonlinearity::quadratic(h);
  if (nonlinearity == "cubic") return Nonlinearity::cubic(a, h);
  if (nonlinearity == "power") return Nonlinearity::power_law(p, sign, h);
  throw ConfigError("unknown nonlinearity '" + nonlinearity + "'");
}

GridPtr RunConfig::make_grid() const { return kzk::make_grid(X_max, nx, family, L, ny_modes, dt, T); }

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.sponge = sponge;
  o.sponge_strength = sponge_strength;
  o.dealias = dealias;
  return o;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& source_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("unparseable config: ") + e.what());
  }
  RunConfig c;
  c.source_dir = source_dir;
  for (const auto& [name, sec] : tree) {
    const std::string base = name.rfind("weight:", 0) == 0 ? "weight" : name;
    auto it = known_keys().find(base);
    if (it == known_keys().end()) throw ConfigError("unknown section [" + name + "]");
    for (const auto& [key, _] : sec)
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
  }

  if (auto s = tree.get_child_optional("equation")) {
    get(*s, "b", c.b);
    get(*s, "nonlinearity", c.nonlinearity);
    get(*s, "p", c.p);
    get(*s, "a", c.a);
    get(*s, "sign", c.sign);
    get(*s, "h", c.h);
  }
  if (auto s = tree.get_child_optional("domain")) {
    get(*s, "L", c.L);
    get(*s, "X_max", c.X_max);
    std::string fam = family_tag(c.family);
    get(*s, "family", fam);
    try {
      c.family = parse_family(fam);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (auto s = tree.get_child_optional("discretization")) {
    get(*s, "nx", c.nx);
    get(*s, "ny_modes", c.ny_modes);
    get(*s, "dt", c.dt);
    get(*s, "T", c.T);
    get(*s, "sponge", c.sponge);
    get(*s, "sponge_strength", c.sponge_strength);
    get(*s, "dealias", c.dealias);
    get(*s, "truncation_h", c.truncation_h);
  }
  for (const auto& [name, sec] : tree) {
    if (name.rfind("weight:", 0) != 0) continue;
    NamedWeight w;
    w.name = name.substr(7);
    get(sec, "kind", w.kind);
    get(sec, "alpha", w.alpha);
    get(sec, "x0", w.x0);
    get(sec, "strong", w.strong);
    try {
      (void)w.spec();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("[" + name + "]: " + e.what());
    }
    c.weights.push_back(w);
  }
  if (auto s = tree.get_child_optional("initial")) c.initial = read_bump(*s, c.initial);
  if (auto s = tree.get_child_optional("forcing")) c.forcing = read_bump(*s, c.forcing);
  if (auto s = tree.get_child_optional("perturbation")) c.perturbation = read_bump(*s, c.perturbation);
  if (auto s = tree.get_child_optional("diagnostics")) {
    get(*s, "record_every", c.record_every);
    get(*s, "track_h1", c.track_h1);
    std::string lp;
    get(*s, "lambda_plus", lp);
    try {
      for (const auto& f : split_list(lp)) c.lambda_plus.push_back(parse_lambda_field(f));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (auto s = tree.get_child_optional("output")) get(*s, "dir", c.output_dir);
  if (auto s = tree.get_child_optional("experiment")) {
    get(*s, "name", c.experiment);
    get(*s, "alpha", c.alpha);
    get(*s, "t_start", c.t_start);
    get(*s, "fit_floor", c.fit_floor);
    get(*s, "calibrate_eps0", c.calibrate_eps0);
    get(*s, "eps0_cache", c.eps0_cache);
    get(*s, "probe_T", c.probe_T);
    get(*s, "probe_dt", c.probe_dt);
    get(*s, "eps0_max", c.eps0_max);
    get(*s, "tail_tol", c.tail_tol);
    get(*s, "periodic_nx", c.periodic_nx);
    std::string deltas;
    get(*s, "deltas", deltas);
    if (!deltas.empty()) {
      c.deltas.clear();
      for (const auto& d : split_list(deltas)) {
        try {
          c.deltas.push_back(std::stod(d));
        } catch (const std::exception&) {
          throw ConfigError("bad delta '" + d + "'");
        }
      }
    }
    static const std::set<std::string> names{"none", "decay_weak", "decay_strong",
                                             "continuous_dependence", "oracle_convergence",
                                             "conservation_drift"};
    if (!names.count(c.experiment)) throw ConfigError("unknown experiment '" + c.experiment + "'");
  }
  if (auto s = tree.get_child_optional("regime")) {
    get(*s, "uniqueness", c.uniqueness);
    get(*s, "q", c.q);
    get(*s, "trace_tol", c.trace_tol);
    if (c.uniqueness != "none" && c.uniqueness != "weak" && c.uniqueness != "strong")
      throw ConfigError("unknown uniqueness regime '" + c.uniqueness + "'");
  }
  (void)c.make_nonlinearity();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

std::function<double(double)> mode_profile(const EigenBasis& basis, int mode) {
  if (mode < 1 || mode > basis.count())
    throw ConfigError("mode " + std::to_string(mode) + " outside 1.." + std::to_string(basis.count()));
  const int l = mode - 1;
  double sup = 0.0;
  for (int k = 0; k <= 2000; ++k) sup = std::max(sup, std::abs(basis.eval(l, basis.L() * k / 2000.0)));
  return [basis, l, sup](double y) { return basis.eval(l, y) / sup; };
}

std::function<double(double, double)> bump_function(const BumpSpec& s, const EigenBasis& basis) {
  if (s.kind == "zero" || s.amplitude == 0.0) return [](double, double) { return 0.0; };
  if (s.kind != "gaussian") throw ConfigError("bump_function needs a gaussian spec");
  if (!(s.sigma > 0.0)) throw ConfigError("sigma must be positive");
  auto prof = mode_profile(basis, s.mode);
  return [s, prof](double x, double y) {
    const double d = (x - s.x0) / s.sigma;
    return s.amplitude * std::exp(-0.5 * d * d) * prof(y);
  };
}

Field initial_field(const RunConfig& cfg, GridPtr grid) {
  if (cfg.initial.kind == "csv") {
    const auto path = std::filesystem::path(cfg.initial.file).is_absolute()
                          ? std::filesystem::path(cfg.initial.file)
                          : cfg.source_dir / cfg.initial.file;
    FieldFile f = read_field_csv(path);
    if (f.values.rows() != grid->nx || f.values.cols() != grid->ny())
      throw ConfigError("initial field " + path.string() + " does not match the grid");
    return Field::from_physical(grid, f.values);
  }
  return Field::from_function(grid, bump_function(cfg.initial, grid->basis));
}

Forcing make_forcing(const RunConfig& cfg, const EigenBasis& basis) {
  if (cfg.forcing.kind == "zero" || cfg.forcing.amplitude == 0.0) return {};
  auto f = bump_function(cfg.forcing, basis);
  const double w = cfg.forcing.omega;
  return [f, w](double t, double x, double y) { return std::cos(w * t) * f(x, y); };
}

RunSpec make_run_spec(const RunConfig& cfg) {
  RunSpec s;
  s.grid = cfg.make_grid();
  s.b = cfg.b;
  s.nl = cfg.make_nonlinearity();
  s.forcing = make_forcing(cfg, s.grid->basis);
  s.options = cfg.solver_options();
  s.u0 = initial_field(cfg, s.grid);
  s.truncation_h = cfg.truncation_h;
  s.record_every = cfg.record_every;
  for (const auto& w : cfg.weights) {
    s.weights.push_back(w.spec());
    if (w.strong) s.strong_weights.push_back(w.spec());
  }
  s.lambda_plus = cfg.lambda_plus;
  s.track_h1 = cfg.track_h1;
  return s;
}

std::vector<std::string> decay_gate(const RunConfig& cfg) {
  std::vector<std::string> v;
  auto fmt = [](double x) { return format_double(x); };
  if (cfg.family != BCFamily::A_DirichletDirichlet && cfg.family != BCFamily::C_DirichletNeumann) {
    v.push_back("decay presets require family a or c (got " + family_tag(cfg.family) + ")");
    return v;
  }
  const double p = cfg.make_nonlinearity().p();
  const auto d = decay_constants(cfg.b, cfg.L, cfg.family, p);
  if (!d.admissible) v.push_back("gate: L = " + fmt(cfg.L) + " >= L0 = " + fmt(d.L0));
  if (!(cfg.alpha > 0.0)) v.push_back("gate: alpha must be positive");
  if (cfg.alpha > d.alpha0) v.push_back("gate: alpha = " + fmt(cfg.alpha) + " > alpha0 = " + fmt(d.alpha0));
  if (cfg.experiment == "decay_weak" && !(p > 0.0 && p <= 2.0)) v.push_back("gate: weak decay needs p in (0, 2]");
  return v;
}

std::vector<std::string> validate(const RunConfig& cfg) {
  std::vector<std::string> v;
  auto fmt = [](double x) { return format_double(x); };

  if (!(cfg.L > 0.0)) v.push_back("L must be positive");
  if (!(cfg.X_max > 0.0)) v.push_back("X_max must be positive");
  if (cfg.nx < 16) v.push_back("nx must be at least 16");
  if (cfg.ny_modes < 1) v.push_back("ny_modes must be at least 1");
  if (!(cfg.dt > 0.0)) v.push_back("dt must be positive");
  if (cfg.T < 0.0) v.push_back("T must be non-negative");
  if (cfg.dt > 0.0 && cfg.T > 0.0) {
    const double steps = cfg.T / cfg.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps) v.push_back("T is not a multiple of dt");
  }
  if (cfg.record_every < 1) v.push_back("record_every must be at least 1");
  if (!v.empty()) return v;

  const Nonlinearity nl = cfg.make_nonlinearity();
  const double p = nl.p();
  if (!(p >= 0.0 && p < 8.0 / 3.0)) v.push_back("p outside [0, 8/3)");

  for (const auto& w : cfg.weights) {
    const auto rep = check_admissibility(w.spec());
    if (!rep.pass) v.push_back("weight '" + w.name + "' (" + w.spec().label() + ") is not admissible");
    if (cfg.uniqueness == "weak" || cfg.uniqueness == "strong") {
      const auto h = check_theorem_hypotheses(w.spec(), p, cfg.q);
      if (cfg.uniqueness == "weak" && !h.weak_uniqueness_ok)
        v.push_back("weight '" + w.name + "' fails the weak uniqueness condition (inf " + fmt(h.weak_c0) + ")");
      if (cfg.uniqueness == "strong" && !h.strong_uniqueness_ok)
        v.push_back("weight '" + w.name + "' fails the strong uniqueness condition (inf " +
                    fmt(h.strong_c0) + ")");
    }
  }

  if (cfg.is_decay_preset())
    for (auto& g : decay_gate(cfg)) v.push_back(std::move(g));

  const bool strong_data = cfg.experiment == "decay_strong" || cfg.uniqueness == "strong";
  if ((strong_data && cfg.initial.kind != "zero") || cfg.initial.kind == "csv") {
    try {
      const Field u0 = initial_field(cfg, cfg.make_grid());
      const Eigen::MatrixXd phys = u0.physical();
      const double sup = phys.cwiseAbs().maxCoeff();
      const double trace = phys.row(0).cwiseAbs().maxCoeff();
      if (strong_data && sup > 0.0 && trace > cfg.trace_tol * sup)
        v.push_back("strong data needs u0(0, y) = 0; max trace " + fmt(trace) + " exceeds " +
                    fmt(cfg.trace_tol) + " of max |u0|");
    } catch (const std::exception& e) {
      v.push_back(std::string("initial data: ") + e.what());
    }
  }
  return v;
}

} // namespace kzk

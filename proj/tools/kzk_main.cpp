#include "kzk/config.hpp"
#include "kzk/eigenbasis.hpp"
#include "kzk/experiments.hpp"
#include "kzk/inequality_lab.hpp"
#include "kzk/io.hpp"
#include "kzk/oracle.hpp"
#include "kzk/solver.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitUsage = 64;

const char* kUsage =
    "usage: kzk <subcommand> [options]\n"
    "  run <config>             integrate and write records.csv and final_field.csv\n"
    "  oracle [flags]           exact linear solution on the periodic box\n"
    "  inequalities [flags]     empirical constants of the interpolation inequalities\n"
    "  experiment <config>      run the preset named in [experiment]\n"
    "  eigen-table [flags]      eigenvalues of the y-problem\n"
    "  validate <config>        check hypotheses, write nothing\n";

std::string join_command(int argc, char** argv) {
  std::string s;
  for (int k = 0; k < argc; ++k) s += (k ? " " : "") + std::string(argv[k]);
  return s;
}

int report_violations(const std::vector<std::string>& v) {
  for (const auto& s : v) std::cerr << "violation: " << s << "\n";
  return v.empty() ? kExitOk : kExitFail;
}

int cmd_validate(const std::string& path) {
  const kzk::RunConfig cfg = kzk::load_config(path);
  const auto v = kzk::validate(cfg);
  if (v.empty()) std::cout << "valid\n";
  return report_violations(v);
}

int cmd_run(const std::string& path, const std::string& command) {
  const kzk::RunConfig cfg = kzk::load_config(path);
  if (int rc = report_violations(kzk::validate(cfg))) return rc;
  const auto out = kzk::resolve_output_dir(cfg.output_dir);
  kzk::RunSpec spec = kzk::make_run_spec(cfg);
  const kzk::Trajectory tr = kzk::run(spec);
  std::vector<std::string> wn, sn, ln;
  for (const auto& w : cfg.weights) {
    wn.push_back(w.name);
    if (w.strong) sn.push_back(w.name);
  }
  for (auto f : cfg.lambda_plus) ln.push_back(kzk::lambda_field_name(f));
  kzk::write_records_csv(out / "records.csv", tr.records, wn, sn, ln);
  kzk::write_field_csv(out / "final_field.csv", tr.final_state);
  kzk::write_metadata(out, command);
  if (tr.blew_up) {
    std::cerr << "blow-up at t = " << kzk::format_double(tr.t_final) << ": " << tr.message << "\n";
    return kExitRuntime;
  }
  std::cout << "wrote " << out.string() << "\n";
  return kExitOk;
}

int cmd_experiment(const std::string& path, const std::string& command) {
  const kzk::RunConfig cfg = kzk::load_config(path);
  if (cfg.experiment == "none") {
    std::cerr << "config selects no experiment\n";
    return kExitFail;
  }
  if (int rc = report_violations(kzk::validate(cfg))) return rc;
  const auto out = kzk::resolve_output_dir(cfg.output_dir);
  std::string summary;
  const bool pass = kzk::run_experiment(cfg, out, summary);
  kzk::write_metadata(out, command);
  std::cout << summary << "\n";
  return pass ? kExitOk : kExitFail;
}

struct OracleArgs {
  double X = 60.0;
  int nx = 1200;
  std::string family = "a";
  double L = 1.0;
  int modes = 4;
  double b = 0.0;
  double t = 0.5;
  double x0 = 30.0;
  double sigma = 3.0;
  int mode = 1;
  double amplitude = 1.0;
  double tail_tol = 1e-6;
  std::string out = "oracle_field.csv";
};

int cmd_oracle(const OracleArgs& a) {
  const kzk::EigenBasis basis = kzk::build_basis(kzk::parse_family(a.family), a.L, a.modes);
  const kzk::LinearOracle oracle(basis, a.X, a.nx, a.b);
  kzk::BumpSpec bump;
  bump.kind = "gaussian";
  bump.amplitude = a.amplitude;
  bump.x0 = a.x0;
  bump.sigma = a.sigma;
  bump.mode = a.mode;
  const auto res = oracle.evolve(oracle.project(kzk::bump_function(bump, basis)), a.t, {}, 32, a.tail_tol);
  const Eigen::MatrixXd phys = res.coeff * basis.synthesis().transpose();
  std::ostringstream os;
  os << "# nx=" << a.nx << "\n# ny=" << basis.n_nodes() << "\n# X_max=" << kzk::format_double(a.X)
     << "\n# L=" << kzk::format_double(a.L) << "\n# family=" << a.family << "\n# periodic=1\n# t="
     << kzk::format_double(a.t) << "\n";
  for (int i = 0; i < phys.rows(); ++i) {
    for (int j = 0; j < phys.cols(); ++j) os << (j ? "," : "") << kzk::format_double(phys(i, j));
    os << "\n";
  }
  kzk::write_text(kzk::resolve_output_dir(a.out), os.str());
  std::cout << "tail_fraction " << kzk::format_double(res.tail_fraction) << "\n";
  if (!res.tail_ok) {
    std::cerr << "horizon too long: boundary share " << kzk::format_double(res.tail_fraction)
              << " exceeds " << kzk::format_double(a.tail_tol) << "\n";
    return kExitFail;
  }
  return kExitOk;
}

struct InequalityArgs {
  int size = 200;
  std::uint64_t seed = 42;
  std::string out = "inequalities.csv";
};

std::string q_label(double q) { return std::isinf(q) ? "inf" : kzk::format_double(q); }

int cmd_inequalities(const InequalityArgs& a) {
  using kzk::WeightSpec;
  kzk::EnsembleSpec spec;
  spec.size = a.size;
  spec.seed = a.seed;
  const kzk::Ensemble ens = kzk::make_ensemble(spec);
  std::vector<kzk::InequalityRow> rows;
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<std::pair<int, double>> mq{{0, 2.0}, {0, 4.0}, {0, inf}, {1, 2.0}, {1, 6.0}};
  const std::vector<std::pair<std::string, std::pair<WeightSpec, WeightSpec>>> pairs{
      {"unit,unit", {WeightSpec::unit(), WeightSpec::unit()}},
      {"exp(0.1),exp(0.1)", {WeightSpec::exponential(0.1), WeightSpec::exponential(0.1)}},
      {"exp(0.1),unit", {WeightSpec::exponential(0.1), WeightSpec::unit()}},
  };
  bool all = true;
  for (const auto& [name, w] : pairs)
    for (const auto& [m, q] : mq) {
      const auto r = kzk::check_lemma21(m, q, w.first, w.second, ens);
      rows.push_back({"interpolation", "m=" + std::to_string(m) + ";q=" + q_label(q) + ";weights=" + name,
                      r.max_ratio, r.finite});
      all = all && r.finite;
    }
  for (const auto& w : {WeightSpec::unit(), WeightSpec::exponential(0.1), WeightSpec::rho0()}) {
    const auto r = kzk::check_lemma22(w, ens);
    rows.push_back({"weighted_linf", "form=mass;psi=" + w.label(), r.c_mass, r.finite});
    rows.push_back({"weighted_linf", "form=gradient;psi=" + w.label(), r.c_grad, r.finite});
    all = all && r.finite;
  }
  const auto box = kzk::make_box_ensemble(spec);
  const auto an = kzk::check_base_anisotropic(box, ens);
  rows.push_back({"anisotropic_linf", "domain=unit_box", an.c_box, an.finite});
  rows.push_back({"anisotropic_l6", "domain=half_strip", an.c_strip, an.finite});
  all = all && an.finite;

  std::ostringstream os;
  os << "lemma,parameters,constant,pass\n";
  for (const auto& r : rows)
    os << r.lemma << ",\"" << r.params << "\"," << kzk::format_double(r.constant) << ","
       << (r.pass ? "true" : "false") << "\n";
  kzk::write_text(kzk::resolve_output_dir(a.out), os.str());
  std::cout << os.str();
  return all ? kExitOk : kExitFail;
}

struct EigenArgs {
  std::string family = "a";
  double L = 1.0;
  int count = 8;
};

int cmd_eigen_table(const EigenArgs& a) {
  const kzk::EigenBasis basis = kzk::build_basis(kzk::parse_family(a.family), a.L, a.count);
  std::cout << "l,lambda\n";
  for (int l = 0; l < basis.count(); ++l)
    std::cout << basis.index(l) << "," << kzk::format_double(basis.lambda(l)) << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  static const std::set<std::string> known{"run", "oracle", "inequalities", "experiment", "eigen-table",
                                           "validate"};
  if (argc < 2) {
    std::cerr << kUsage;
    return kExitUsage;
  }
  const std::string first = argv[1];
  if (first == "-h" || first == "--help") {
    std::cout << kUsage;
    return kExitOk;
  }
  if (!known.count(first)) {
    std::cerr << "unknown subcommand '" << first << "'\n" << kUsage;
    return kExitUsage;
  }

  CLI::App app{"Half-strip Kawahara-Zakharov-Kuznetsov simulator and verification harness", "kzk"};
  app.require_subcommand(1);
  std::string config;

  auto* run = app.add_subcommand("run", "integrate a config");
  run->add_option("config", config, "config file")->required();
  auto* exp = app.add_subcommand("experiment", "run an experiment preset");
  exp->add_option("config", config, "config file")->required();
  auto* val = app.add_subcommand("validate", "check a config without writing files");
  val->add_option("config", config, "config file")->required();

  OracleArgs oa;
  auto* orc = app.add_subcommand("oracle", "exact linear solution");
  orc->add_option("--X", oa.X, "periodic box length");
  orc->add_option("--nx", oa.nx, "x nodes");
  orc->add_option("--family", oa.family, "a|b|c|d");
  orc->add_option("--L", oa.L, "strip width");
  orc->add_option("--modes", oa.modes, "y modes");
  orc->add_option("--b", oa.b, "convection coefficient");
  orc->add_option("--t", oa.t, "time");
  orc->add_option("--x0", oa.x0, "bump center");
  orc->add_option("--sigma", oa.sigma, "bump width");
  orc->add_option("--mode", oa.mode, "y mode of the bump (1-based)");
  orc->add_option("--amplitude", oa.amplitude, "bump amplitude");
  orc->add_option("--tail-tol", oa.tail_tol, "boundary share tolerance");
  orc->add_option("--out", oa.out, "output CSV");

  InequalityArgs ia;
  auto* ineq = app.add_subcommand("inequalities", "interpolation inequality report");
  ineq->add_option("--size", ia.size, "ensemble size");
  ineq->add_option("--seed", ia.seed, "ensemble seed");
  ineq->add_option("--out", ia.out, "output CSV");

  EigenArgs ea;
  auto* eig = app.add_subcommand("eigen-table", "eigenvalues of the y-problem");
  eig->add_option("--family", ea.family, "a|b|c|d");
  eig->add_option("--L", ea.L, "strip width");
  eig->add_option("--count", ea.count, "number of modes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = join_command(argc, argv);
  try {
    if (*val) return cmd_validate(config);
    if (*run) return cmd_run(config, command);
    if (*exp) return cmd_experiment(config, command);
    if (*orc) return cmd_oracle(oa);
    if (*ineq) return cmd_inequalities(ia);
    if (*eig) return cmd_eigen_table(ea);
  } catch (const kzk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

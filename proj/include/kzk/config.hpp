#pragma once

#include "kzk/diagnostics.hpp"
#include "kzk/eigenbasis.hpp"
#include "kzk/field.hpp"
#include "kzk/nonlinearity.hpp"
#include "kzk/solver.hpp"
#include "kzk/weights.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace kzk {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct NamedWeight {
  std::string name;
  std::string kind = "exp";
  double alpha = 0.1;
  double x0 = 0.0;
  bool strong = false;  ///< also track the weighted strong norm
  WeightSpec spec() const { return WeightSpec::from_name(kind, alpha, x0); }
};

/// Shape shared by initial data, forcing and perturbations:
/// amplitude * exp(-(x - x0)^2 / (2 sigma^2)) * Y(y), where Y is eigenfunction
/// `mode` (1-based) scaled to unit sup-norm.
struct BumpSpec {
  std::string kind = "zero";  ///< zero | gaussian | csv
  double amplitude = 0.0;
  double x0 = 15.0;
  double sigma = 3.0;
  int mode = 1;
  double omega = 0.0;  ///< forcing only: time factor cos(omega t)
  std::string file;    ///< csv only
};

struct RunConfig {
  std::filesystem::path source_dir = ".";

  double b = 0.0;
  std::string nonlinearity = "none";  ///< none | quadratic | cubic | power
  double p = 1.0;
  double a = 1.0;
  double sign = 1.0;
  double h = 0.0;

  double L = 1.0;
  double X_max = 30.0;
  BCFamily family = BCFamily::A_DirichletDirichlet;

  int nx = 601;
  int ny_modes = 32;
  double dt = 1e-3;
  double T = 1.0;
  bool sponge = false;
  double sponge_strength = 20.0;
  bool dealias = true;
  double truncation_h = 0.0;

  std::vector<NamedWeight> weights;
  BumpSpec initial;
  BumpSpec forcing;

  int record_every = 100;
  std::vector<LambdaField> lambda_plus;
  bool track_h1 = true;

  std::string output_dir = "out";

  std::string experiment = "none";
  double alpha = 0.1;
  double t_start = -1.0;    ///< negative: 0.2 T
  double fit_floor = 1e-8;  ///< relative to the initial value of the fitted series
  bool calibrate_eps0 = true;
  std::string eps0_cache = "eps0_cache.json";
  double probe_T = 5.0;
  double probe_dt = 1e-2;
  double eps0_max = 1.0;
  std::vector<double> deltas{1e-2, 1e-3};
  BumpSpec perturbation;
  double tail_tol = 1e-6;
  int periodic_nx = 256;

  std::string uniqueness = "none";  ///< none | weak | strong
  double q = 1.0;
  double trace_tol = 1e-5;

  Nonlinearity make_nonlinearity() const;
  GridPtr make_grid() const;
  SolverOptions solver_options() const;
  bool is_decay_preset() const { return experiment == "decay_weak" || experiment == "decay_strong"; }
};

/// Reads an INI file. Unknown sections or keys raise ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& source_dir = ".");

/// Decay-preset gates: family a or c, L below L0 when b > 0, alpha <= alpha0
/// and (weak preset) p in (0, 2]. Empty when every gate passes.
std::vector<std::string> decay_gate(const RunConfig& cfg);

/// Checks p-range, weight admissibility, uniqueness conditions, decay gates
/// and the strong-data trace condition. Never touches the filesystem beyond
/// reading a CSV initial field.
std::vector<std::string> validate(const RunConfig& cfg);

/// Unit sup-norm eigenfunction profile for a 1-based mode index.
std::function<double(double)> mode_profile(const EigenBasis& basis, int mode);
std::function<double(double, double)> bump_function(const BumpSpec& s, const EigenBasis& basis);

Field initial_field(const RunConfig& cfg, GridPtr grid);
Forcing make_forcing(const RunConfig& cfg, const EigenBasis& basis);
RunSpec make_run_spec(const RunConfig& cfg);

} // namespace kzk

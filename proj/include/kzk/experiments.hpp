#pragma once

#include "kzk/config.hpp"
#include "kzk/diagnostics.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace kzk {

/// Amplitude bisection for the empirical smallness threshold. The probe
/// runs the config for probe_T with step probe_dt and reports decay when the
/// weighted mass e^{2 alpha x} falls by at least exp(-0.8 alpha beta probe_T).
struct Eps0Calibration {
  double eps0 = 0.0;
  bool at_bracket_top = false;  ///< eps0_max itself decayed
  bool cached = false;
  std::string key;
};

std::string eps0_cache_key(const RunConfig& cfg);
bool decay_probe(const RunConfig& cfg, double amplitude);
/// Reads and updates the JSON cache at `cache` when given.
Eps0Calibration calibrate_eps0(const RunConfig& cfg, const std::optional<std::filesystem::path>& cache);

struct DecayVerdict {
  std::string preset;
  bool ran = false;
  bool trivial = false;
  std::vector<std::string> gate_violations;
  DecayConstants constants;
  double alpha = 0.0;
  double required = 0.0;   ///< alpha beta
  double threshold = 0.0;  ///< 0.8 alpha beta
  double amplitude = 0.0;
  Eps0Calibration eps0;
  DecayFit fit;
  double window_start = 0.0;
  double window_end = 0.0;
  double floor = 0.0;          ///< absolute fit floor
  bool window_fallback = false; ///< series fell below the floor before t_start
  double raw_window_rate = 0.0; ///< fit on [t_start, T] with only the underflow floor
  bool monotone = true;
  bool pass = false;
  std::string message;
  std::vector<DiagnosticsRecord> records;
  std::vector<double> series;
};

/// Gates are evaluated before any integration; a failing gate returns a
/// verdict with ran == false.
DecayVerdict run_decay(const RunConfig& cfg, const std::optional<std::filesystem::path>& eps0_cache = {});

struct ContinuousDependenceVerdict {
  std::vector<double> deltas;
  std::vector<double> ratios;  ///< sup_t ||u - u~||_psi / (delta ||perturbation||_psi)
  std::vector<double> final_ratios;  ///< same quotient at the final time
  double spread = 0.0;  ///< max / min of final_ratios over the non-zero deltas
  std::string weight;
  bool pass = false;
  std::string message;
};

ContinuousDependenceVerdict run_continuous_dependence(const RunConfig& cfg);

struct OracleConvergenceVerdict {
  std::vector<double> dx;
  std::vector<double> dt;
  std::vector<double> errors;
  std::vector<double> orders;
  double tail_fraction = 0.0;
  bool tail_ok = true;
  bool pass = false;
  std::string message;
};

constexpr double kOracleMinOrder = 1.7;
constexpr double kOracleMaxError = 1e-2;

/// Three resolutions dx, dx/2, dx/4 with dt scaled alongside dx.
OracleConvergenceVerdict run_oracle_convergence(const RunConfig& cfg);

struct ConservationVerdict {
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  double mass0 = 0.0;
  double energy0 = 0.0;
  bool pass = false;
  std::string message;
};

constexpr double kMassDriftTol = 1e-4;
constexpr double kEnergyDriftTol = 1e-3;

/// Periodic verification mode on the box [0, X_max) with periodic_nx nodes.
ConservationVerdict run_conservation_drift(const RunConfig& cfg);

/// Dispatches on cfg.experiment, writes verdict.json and CSVs under `out`
/// and returns whether the verdict passed.
bool run_experiment(const RunConfig& cfg, const std::filesystem::path& out, std::string& summary);

} // namespace kzk

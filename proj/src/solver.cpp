#include "kzk/solver.hpp"

#include "kzk/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kzk {

namespace {

constexpr double kUnderflowFloor = 1e-140;

BandMatrix shifted_identity(const BandMatrix& a, double scale) {
  BandMatrix m(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = std::max(0, i - BandMatrix::kBand); j <= std::min(a.size() - 1, i + BandMatrix::kBand); ++j)
      m.at(i, j) = scale * a.at(i, j) + (i == j ? 1.0 : 0.0);
  return m;
}

} // namespace

Solver::Solver(GridPtr grid, double b, Nonlinearity nl, Forcing forcing, SolverOptions options)
    : grid_(std::move(grid)), b_(b), nl_(nl), forcing_(std::move(forcing)), opt_(options),
      dt_(grid_->dt), ops_(assemble_linear_operator(*grid_, b)) {
  full_.dt = dt_;
  for (const auto& a : ops_) full_.implicit.emplace_back(shifted_identity(a, 0.5 * dt_));
  const int m = grid_->modes();
  keep_modes_ = opt_.dealias ? m - static_cast<int>(std::floor(nl_.dealias_fraction() * m)) : m;
  if (grid_->basis.family() == BCFamily::D_Periodic && keep_modes_ % 2 == 0) --keep_modes_;
  keep_modes_ = std::max(1, keep_modes_);
}

const Solver::CnFactors& Solver::half_factors() {
  if (!half_) {
    CnFactors f;
    f.dt = 0.5 * dt_;
    for (const auto& a : ops_) f.implicit.emplace_back(shifted_identity(a, 0.25 * dt_));
    half_ = std::move(f);
  }
  return *half_;
}

void Solver::cn_solve(Eigen::MatrixXd& c, const CnFactors& f, const Eigen::MatrixXd* source) const {
  const int n = grid_->nx - 2;
  for (int l = 0; l < grid_->modes(); ++l) {
    const Eigen::VectorXd interior = c.col(l).segment(1, n);
    Eigen::VectorXd rhs = interior - 0.5 * f.dt * ops_[l].multiply(interior);
    if (source) rhs += f.dt * source->col(l).segment(1, n);
    f.implicit[l].solve(rhs);
    c.col(l).segment(1, n) = rhs;
    c(0, l) = 0.0;
    c(grid_->nx - 1, l) = 0.0;
  }
}

Eigen::MatrixXd Solver::nonlinear_rhs(const Field& u) const {
  const Grid& g = *grid_;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(g.nx, g.modes());
  if (nl_.is_zero()) return r;
  Eigen::MatrixXd c = u.coeff();
  const int cut = g.modes() - keep_modes_;
  if (cut > 0) c.rightCols(cut).setZero();
  const Eigen::MatrixXd& psi = g.basis.synthesis();
  const Eigen::MatrixXd up = c * psi.transpose();
  const Eigen::MatrixXd ux = dx_columns(c, g.dx(), 1) * psi.transpose();
  const Eigen::MatrixXd prod =
      up.unaryExpr([this](double v) { return nl_.gprime(v); }).cwiseProduct(ux);
  r = -prod * g.basis.analysis().transpose();
  if (cut > 0) r.rightCols(cut).setZero();
  r.row(0).setZero();
  r.row(g.nx - 1).setZero();
  return r;
}

Eigen::MatrixXd Solver::forcing_rhs(double t) const {
  const Grid& g = *grid_;
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(g.nx, g.ny());
  if (forcing_) {
    const auto& y = g.basis.nodes();
    for (int i = 1; i < g.nx - 1; ++i)
      for (int j = 0; j < g.ny(); ++j) v(i, j) = forcing_(t, g.x(i), y(j));
  }
  return v * g.basis.analysis().transpose();
}

void Solver::apply_sponge(Eigen::MatrixXd& c) const {
  const Grid& g = *grid_;
  const double start = 0.9 * g.X_max;
  const double width = 0.1 * g.X_max;
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    if (x <= start) continue;
    const double s = (x - start) / width;
    c.row(i) *= std::exp(-opt_.sponge_strength * s * s * dt_);
  }
}

void Solver::step(Field& u, double t) {
  Eigen::MatrixXd& c = u.coeff();
  if (!c.allFinite()) throw BlowUpError("non-finite state at t = " + std::to_string(t));
  if (is_linear_unforced()) {
    cn_solve(c, full_, nullptr);
  } else {
    Eigen::MatrixXd src = forcing_ ? forcing_rhs(t + 0.5 * dt_) : Eigen::MatrixXd::Zero(c.rows(), c.cols());
    if (!nl_.is_zero()) {
      const Eigen::MatrixXd n0 = nonlinear_rhs(u);
      if (!prev_nl_) {
        Eigen::MatrixXd half = c;
        Eigen::MatrixXd hsrc = n0;
        if (forcing_) hsrc += forcing_rhs(t + 0.25 * dt_);
        cn_solve(half, half_factors(), &hsrc);
        src += nonlinear_rhs(Field(grid_, std::move(half)));
      } else {
        src += 1.5 * n0 - 0.5 * (*prev_nl_);
      }
      prev_nl_ = n0;
    }
    cn_solve(c, full_, &src);
  }
  if (opt_.sponge) apply_sponge(c);
  if (!c.allFinite()) {
    std::ostringstream os;
    os << "non-finite field after step at t=" << t + dt_;
    throw BlowUpError(os.str());
  }
  if (c.cwiseAbs().maxCoeff() < kUnderflowFloor) c.setZero();
}

DiagnosticsRecord make_record(double t, const Field& u, const RunSpec& spec,
                              const std::vector<LambdaPlusAccumulator>& acc) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass = mass(u);
  for (const auto& w : spec.weights) r.weighted_mass.push_back(weighted_mass(u, w));
  for (const auto& w : spec.strong_weights) r.weighted_strong.push_back(strong_weighted_norm(u, w));
  if (spec.track_h1) r.h1_energy = h1_energy(u, spec.nl);
  r.mu2_norm = mu2_norm(u);
  for (const auto& a : acc) r.lambda_plus.push_back(a.value());
  return r;
}

Trajectory run(const RunSpec& spec) {
  if (!spec.grid) throw std::invalid_argument("run: grid missing");
  const Grid& g = *spec.grid;
  if (spec.record_every < 1) throw std::invalid_argument("run: record_every must be >= 1");
  const long nsteps = std::lround(g.T / g.dt);
  if (std::abs(nsteps * g.dt - g.T) > 1e-9 * std::max(1.0, g.T))
    throw std::invalid_argument("run: T must be an integer multiple of dt");

  Field u = spec.u0.coeff().size() ? spec.u0 : Field(spec.grid);
  Forcing forcing = spec.forcing;
  if (spec.truncation_h > 0.0) {
    const double radius = 1.0 / spec.truncation_h;
    for (int i = 0; i < g.nx; ++i) u.coeff().row(i) *= eta(radius - g.x(i));
    if (forcing) {
      forcing = [f = spec.forcing, radius](double t, double x, double y) {
        return f(t, x, y) * eta(radius - x);
      };
    }
  }

  Solver solver(spec.grid, spec.b, spec.nl, forcing, spec.options);
  std::vector<LambdaPlusAccumulator> acc;
  for (auto f : spec.lambda_plus) acc.emplace_back(g, f);

  Trajectory tr;
  auto emit = [&](double t) {
    tr.records.push_back(make_record(t, u, spec, acc));
    if (spec.on_record) spec.on_record(tr.records.back());
    if (spec.keep_snapshots) {
      tr.snapshot_times.push_back(t);
      tr.snapshots.push_back(u);
    }
  };
  emit(0.0);
  double t = 0.0;
  for (long k = 1; k <= nsteps; ++k) {
    try {
      solver.step(u, t);
    } catch (const BlowUpError& e) {
      tr.blew_up = true;
      tr.message = e.what();
      break;
    }
    t = k * g.dt;
    for (auto& a : acc) lambda_plus_update(a, u, g.dt);
    if (k % spec.record_every == 0 || k == nsteps) emit(t);
  }
  tr.t_final = t;
  tr.final_state = std::move(u);
  return tr;
}

CompatibilityReport compatibility_check(const Field& u0, const Forcing& forcing, int j_max, double b) {
  if (j_max < 0) throw std::invalid_argument("j_max must be >= 0");
  const Grid& g = u0.grid();
  constexpr int kWidth = 11;
  CompatibilityReport rep;
  rep.resolution_warning = j_max > 2 || g.nx < 4 * kWidth;

  // per-node Fornberg weights for derivatives up to order 5
  std::vector<int> start(g.nx);
  std::vector<Eigen::MatrixXd> wts(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    start[i] = std::clamp(i - kWidth / 2, 0, g.nx - kWidth);
    Eigen::VectorXd nodes(kWidth);
    for (int k = 0; k < kWidth; ++k) nodes(k) = g.x(start[i] + k);
    wts[i] = fornberg_weights(g.x(i), nodes, 5);
  }
  auto derivative = [&](const Eigen::MatrixXd& p, int order) {
    Eigen::MatrixXd d(p.rows(), p.cols());
    for (int i = 0; i < g.nx; ++i)
      d.row(i) = wts[i].col(order).transpose() * p.middleRows(start[i], kWidth);
    return d;
  };

  const Eigen::MatrixXd& psi = g.basis.synthesis();
  auto record = [&](const Eigen::MatrixXd& p) {
    const Eigen::VectorXd v0 = psi * p.row(0).transpose();
    const Eigen::VectorXd v1 =
        psi * ((-3.0 * p.row(0) + 4.0 * p.row(1) - p.row(2)) / (2.0 * g.dx())).transpose();
    rep.trace.push_back(v0.cwiseAbs().maxCoeff());
    rep.trace_x.push_back(v1.cwiseAbs().maxCoeff());
    rep.interior.push_back((p * psi.transpose()).cwiseAbs().maxCoeff());
  };

  Eigen::MatrixXd phi = u0.coeff();
  record(phi);
  const Eigen::RowVectorXd shift = g.basis.lambdas().transpose().array() - b;
  for (int j = 1; j <= j_max; ++j) {
    Eigen::MatrixXd next = derivative(phi, 5) - derivative(phi, 3) +
                           derivative(phi, 1) * shift.asDiagonal();
    if (forcing) {
      const int order = j - 1;
      const int nt = order + 5;
      Eigen::VectorXd tn(nt);
      const double tau = 1e-2;
      for (int k = 0; k < nt; ++k) tn(k) = k * tau;
      const Eigen::VectorXd tw = fornberg_weights(0.0, tn, order).col(order);
      Eigen::MatrixXd ft = Eigen::MatrixXd::Zero(g.nx, g.ny());
      const auto& y = g.basis.nodes();
      for (int k = 0; k < nt; ++k)
        for (int i = 0; i < g.nx; ++i)
          for (int jj = 0; jj < g.ny(); ++jj) ft(i, jj) += tw(k) * forcing(tn(k), g.x(i), y(jj));
      next += ft * g.basis.analysis().transpose();
    }
    phi = std::move(next);
    record(phi);
  }
  return rep;
}

} // namespace kzk

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace kzk {

enum class BCFamily { A_DirichletDirichlet, B_NeumannNeumann, C_DirichletNeumann, D_Periodic };

/// "a" | "b" | "c" | "d"
BCFamily parse_family(const std::string& tag);
std::string family_tag(BCFamily f);

/// Steklov constant: 1 for A, 4 for C. Throws for B and D.
double steklov_kappa(BCFamily f);

/// Orthonormal eigenfunctions of -d^2/dy^2 on [0, L] together with a
/// y-grid on which the discrete transform is exact for the retained modes.
///
/// Grids: A uses the m interior nodes jL/(m+1); B uses m+1 nodes jL/m
/// including both ends (trapezoid weights); C uses jL/m for j = 1..m with the
/// Neumann end weighted by one half; D uses 2*floor(m/2)+1 periodic nodes.
/// Family D keeps complete sine/cosine pairs, so its mode count is
/// 2*floor(m/2)+1 and the order is const, cos1, sin1, cos2, sin2, ...
class EigenBasis {
public:
  EigenBasis(BCFamily family, double L, int count);

  BCFamily family() const { return family_; }
  double L() const { return L_; }
  int count() const { return static_cast<int>(lambda_.size()); }
  int n_nodes() const { return static_cast<int>(nodes_.size()); }

  double lambda(int l) const { return lambda_(l); }
  const Eigen::VectorXd& lambdas() const { return lambda_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// Paper-style index of mode l (1-based for A and C, 0-based for B and D).
  int index(int l) const;

  /// d^k psi_l / dy^k at y for k = 0, 1, 2.
  double eval(int l, double y, int k = 0) const;

  /// n_nodes x count matrix of psi_l(y_j).
  const Eigen::MatrixXd& synthesis() const { return psi_; }
  /// count x n_nodes matrix with forward() = analysis() * samples.
  const Eigen::MatrixXd& analysis() const { return fwd_; }
  /// n_nodes x count matrix of psi_l'(y_j).
  const Eigen::MatrixXd& synthesis_dy() const { return dpsi_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& samples) const;
  Eigen::VectorXd inverse(const Eigen::VectorXd& coeffs) const;

private:
  BCFamily family_;
  double L_;
  Eigen::VectorXd lambda_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd psi_;
  Eigen::MatrixXd dpsi_;
  Eigen::MatrixXd fwd_;
};

EigenBasis build_basis(BCFamily family, double L, int count);

struct SteklovReport {
  double ratio = 0.0;   ///< int f^2 / int f'^2
  double bound = 0.0;   ///< kappa L^2 / pi^2
  double kappa = 0.0;
  bool pass = false;
};

/// Evaluates the Steklov ratio of f by adaptive quadrature with a
/// sixth-order finite-difference derivative. Families A and C only; throws
/// std::domain_error when f violates the essential boundary conditions by
/// more than bc_tol relative to max|f|.
SteklovReport steklov_check(BCFamily family, double L, const std::function<double(double)>& f,
                            double bc_tol = 1e-8);

} // namespace kzk

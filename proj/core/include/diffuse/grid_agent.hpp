#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "diffuse/geometry.hpp"

namespace diffuse {

// J(x) = 1/2 x' Gamma x + gamma' x + a with Gamma symmetric positive
// definite. The gradient used by the grid agent is Gamma x + gamma and its
// minimiser is x* = -Gamma^{-1} gamma. Resource i occupies coordinates
// (2i, 2i+1) = (P_i, Q_i); a P-only model may use any dimension.
class QuadraticObjective {
 public:
  // Throws unless Gamma is square, symmetric within 1e-12 (relative to its
  // largest entry) and positive definite, and gamma has matching size.
  QuadraticObjective(Eigen::MatrixXd gamma_mat, Eigen::VectorXd gamma_vec, double offset = 0.0);

  Eigen::Index dim() const { return gamma_vec_.size(); }
  const Eigen::MatrixXd& gamma_mat() const { return gamma_mat_; }
  const Eigen::VectorXd& gamma_vec() const { return gamma_vec_; }
  double offset() const { return offset_; }

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  const Eigen::VectorXd& eigenvalues() const { return eig_; }
  double spectral_radius() const { return eig_.maxCoeff(); }
  double min_eigenvalue() const { return eig_.minCoeff(); }

 private:
  Eigen::MatrixXd gamma_mat_;
  Eigen::VectorXd gamma_vec_;
  double offset_;
  Eigen::VectorXd eig_;
};

struct Unconstrained {};
// Per-coordinate bounds; use +-infinity for open sides.
struct BoxConstraint {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};
// Product of per-resource PQ sets, resource i on coordinates (2i, 2i+1).
struct ProfileProduct {
  std::vector<ConvexPolygon> sets;
};
using AdmissibleSet = std::variant<Unconstrained, BoxConstraint, ProfileProduct>;

struct GridAgentConfig {
  double alpha = 0.0;
  AdmissibleSet admissible = Unconstrained{};
};

struct GradientStepResult {
  Eigen::VectorXd x_next;
  // proj_U changed the unconstrained step.
  bool projection_active = false;
};

Eigen::VectorXd project_admissible(const AdmissibleSet& u, const Eigen::VectorXd& z);

// x_{k+1} = proj_U(y - alpha (Gamma y + gamma)).
GradientStepResult gradient_step(const QuadraticObjective& j, const GridAgentConfig& cfg,
                                 const Eigen::VectorXd& y_hat);

Eigen::VectorXd optimum(const QuadraticObjective& j);

// rho(I - alpha Gamma). Symmetric, so also its spectral norm.
double contraction_rate(const QuadraticObjective& j, double alpha);

// Bound on ||(1/k) sum_{i<=k} y_i - x*|| for followers with ||e_i|| <= c_norm:
// (1 - r^k) / (k (1 - r)) * (||psi|| + ||Gamma^{-1}|| ||gamma|| r^2 + c_norm),
// psi = x1 + 2 alpha gamma - alpha^2 Gamma gamma, r = rho(I - alpha Gamma).
// Throws when r >= 1.
double theorem1_bound(const QuadraticObjective& j, const GridAgentConfig& cfg,
                      const Eigen::VectorXd& x1, double c_norm, std::size_t k);

// y_k = A^{k-1} psi + sum_{i=1}^k A^{k-i} eps_i - Gamma^{-1} (I - A^{k+1}) gamma,
// A = I - alpha Gamma, evaluated in the eigenbasis of Gamma. eps holds
// eps_1 .. eps_m with m >= k.
Eigen::VectorXd closed_form_y(const QuadraticObjective& j, const GridAgentConfig& cfg,
                              const Eigen::VectorXd& x1, const std::vector<Eigen::VectorXd>& eps,
                              std::size_t k);

}  // namespace diffuse

#include "diffuse/grid_agent.hpp"

#include <cmath>
#include <limits>

namespace diffuse {

QuadraticObjective::QuadraticObjective(Eigen::MatrixXd gamma_mat, Eigen::VectorXd gamma_vec,
                                       double offset)
    : gamma_mat_(std::move(gamma_mat)), gamma_vec_(std::move(gamma_vec)), offset_(offset) {
  if (gamma_mat_.rows() == 0 || gamma_mat_.rows() != gamma_mat_.cols())
    throw ContractViolation("Gamma must be a non-empty square matrix");
  if (gamma_vec_.size() != gamma_mat_.rows()) throw ContractViolation("gamma has the wrong dimension");
  if (!gamma_mat_.allFinite() || !gamma_vec_.allFinite() || !std::isfinite(offset_))
    throw ContractViolation("objective coefficients must be finite");
  const double scale = std::max(1.0, gamma_mat_.cwiseAbs().maxCoeff());
  if ((gamma_mat_ - gamma_mat_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ContractViolation("Gamma must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma_mat_, Eigen::EigenvaluesOnly);
  eig_ = es.eigenvalues();
  if (!(eig_.minCoeff() > 0.0)) throw ContractViolation("Gamma must be positive definite");
}

double QuadraticObjective::value(const Eigen::VectorXd& x) const {
  return 0.5 * x.dot(gamma_mat_ * x) + gamma_vec_.dot(x) + offset_;
}

Eigen::VectorXd QuadraticObjective::gradient(const Eigen::VectorXd& x) const {
  return gamma_mat_ * x + gamma_vec_;
}

Eigen::VectorXd project_admissible(const AdmissibleSet& u, const Eigen::VectorXd& z) {
  struct Visitor {
    const Eigen::VectorXd& z;
    Eigen::VectorXd operator()(const Unconstrained&) const { return z; }
    Eigen::VectorXd operator()(const BoxConstraint& b) const {
      if (b.lo.size() != z.size() || b.hi.size() != z.size())
        throw ContractViolation("box constraint has the wrong dimension");
      return z.cwiseMax(b.lo).cwiseMin(b.hi);
    }
    Eigen::VectorXd operator()(const ProfileProduct& p) const {
      if (static_cast<Eigen::Index>(2 * p.sets.size()) != z.size())
        throw ContractViolation("profile product has the wrong dimension");
      Eigen::VectorXd out(z.size());
      for (std::size_t i = 0; i < p.sets.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(2 * i);
        const Setpoint s = project_convex(p.sets[i], {z(r), z(r + 1)});
        out(r) = s.p;
        out(r + 1) = s.q;
      }
      return out;
    }
  };
  return std::visit(Visitor{z}, u);
}

GradientStepResult gradient_step(const QuadraticObjective& j, const GridAgentConfig& cfg,
                                 const Eigen::VectorXd& y_hat) {
  if (y_hat.size() != j.dim()) throw ContractViolation("dimension mismatch between y and the objective");
  const Eigen::VectorXd z = y_hat - cfg.alpha * j.gradient(y_hat);
  GradientStepResult r;
  r.x_next = project_admissible(cfg.admissible, z);
  r.projection_active = (r.x_next - z).norm() > kPointTol;
  return r;
}

Eigen::VectorXd optimum(const QuadraticObjective& j) {
  return j.gamma_mat().ldlt().solve(-j.gamma_vec());
}

double contraction_rate(const QuadraticObjective& j, double alpha) {
  return (1.0 - alpha * j.eigenvalues().array()).abs().maxCoeff();
}

double theorem1_bound(const QuadraticObjective& j, const GridAgentConfig& cfg,
                      const Eigen::VectorXd& x1, double c_norm, std::size_t k) {
  if (k == 0) throw ContractViolation("k must be positive");
  if (x1.size() != j.dim()) throw ContractViolation("dimension mismatch between x1 and the objective");
  const double r = contraction_rate(j, cfg.alpha);
  if (!(r < 1.0)) throw ContractViolation("step size violates spectral condition");
  const double a = cfg.alpha;
  const Eigen::VectorXd psi = x1 + 2 * a * j.gamma_vec() - a * a * (j.gamma_mat() * j.gamma_vec());
  const double inv_norm = 1.0 / j.min_eigenvalue();
  const double kd = static_cast<double>(k);
  const double factor = (1.0 - std::pow(r, kd)) / (kd * (1.0 - r));
  return factor * (psi.norm() + inv_norm * j.gamma_vec().norm() * r * r + c_norm);
}

Eigen::VectorXd closed_form_y(const QuadraticObjective& j, const GridAgentConfig& cfg,
                              const Eigen::VectorXd& x1, const std::vector<Eigen::VectorXd>& eps,
                              std::size_t k) {
  if (k == 0) throw ContractViolation("k must be positive");
  if (eps.size() < k) throw ContractViolation("need eps_1 .. eps_k");
  const double a = cfg.alpha;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j.gamma_mat());
  const Eigen::MatrixXd& v = es.eigenvectors();
  const Eigen::ArrayXd lambda = es.eigenvalues().array();
  const Eigen::ArrayXd mu = 1.0 - a * lambda;
  auto pow_mu = [&](std::size_t e) { return mu.pow(static_cast<double>(e)); };

  const Eigen::VectorXd psi = x1 + 2 * a * j.gamma_vec() - a * a * (j.gamma_mat() * j.gamma_vec());
  Eigen::ArrayXd acc = pow_mu(k - 1) * (v.transpose() * psi).array();
  for (std::size_t i = 1; i <= k; ++i) acc += pow_mu(k - i) * (v.transpose() * eps[i - 1]).array();
  acc -= (1.0 - pow_mu(k + 1)) / lambda * (v.transpose() * j.gamma_vec()).array();
  return v * acc.matrix();
}

}  // namespace diffuse

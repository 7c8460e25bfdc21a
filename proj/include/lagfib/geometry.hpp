#ifndef LAGFIB_GEOMETRY_HPP
#define LAGFIB_GEOMETRY_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "lagfib/util.hpp"

namespace lagfib {

/// Smooth convex potential rho of the logarithmic coordinates x_k = log r_k^2.
/// The gradient is the moment map, the Hessian the metric in (theta, x)
/// coordinates; conventions: omega = d theta_k ^ d rho_k,
/// g = (1/2) rho_jk dx_j dx_k + 2 rho_jk dtheta_j dtheta_k.
///
/// Built-ins: flat quadratic (1/2) x^T A x, Fubini-Study kappa*log(1+sum e^x),
/// and positive sums of exponentials sum_a c_a e^{<w_a, x>}.  Gradients and
/// Hessians are hand-coded and cross-checked against central finite
/// differences when the potential is constructed.
class ToricPotential {
 public:
  static ToricPotential flat(int dim);  // (1/2) |x|^2
  static ToricPotential flat_quadratic(const Eigen::MatrixXd& A);
  static ToricPotential fubini_study(int dim, double kappa = 1.0);
  /// terms: (c_a, w_a) with c_a > 0. Euclidean metric on C^dim is
  /// exp_sum with w_a = e_a, c_a = 1.
  static ToricPotential exp_sum(
      int dim, const std::vector<std::pair<double, Eigen::VectorXd>>& terms);

  int dim() const;
  const std::string& id() const;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;  // moment map
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  /// Inverse Hessian; throws NonPositiveDefinite if convexity fails at x.
  Eigen::MatrixXd hessian_inverse(const Eigen::VectorXd& x) const;

  /// Hermitian coefficient matrix G with g = 2 Re(G_jk dz_j dz̄_k) at a chart
  /// point z. Extends across coordinate zeros for fubini_study and integer
  /// exp_sum; throws LimitUndefined when a zero coordinate is hit and the
  /// metric has no divisor extension (flat quadratic).
  Eigen::MatrixXcd hermitian_metric(const std::vector<cplx>& z) const;

  /// Potential induced on the local-model hypersurface
  /// {x_drop = c - sum_{k != drop} x_k}; chain-rule gradient and Hessian.
  ToricPotential induce_local_model(int drop_index, double c) const;

  /// Limiting restriction x_drop -> -inf, defined up to an additive constant.
  /// Throws LimitUndefined when gradient or Hessian of the retained variables
  /// fails to converge as x_drop decreases.
  ToricPotential induce_divisor_limit(int drop_index) const;

  /// Invert the moment map: find x with gradient(x) = rho (convexity makes
  /// the solution unique). Newton iteration from `guess`.
  Eigen::VectorXd invert_moment(const Eigen::VectorXd& rho,
                                const Eigen::VectorXd& guess) const;

  /// Conservative distance from `rho` to the boundary of the moment image
  /// (infinite for flat quadratic). Used as the graph-validity margin.
  double moment_margin(const Eigen::VectorXd& rho) const;

  struct Impl;
  explicit ToricPotential(std::shared_ptr<const Impl> impl);
  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Angle/action/log-radius triple with rho = gradient(x) for the governing
/// potential.
struct MomentFrame {
  Eigen::VectorXd theta;
  Eigen::VectorXd rho;
  Eigen::VectorXd x;
};

MomentFrame make_moment_frame(const ToricPotential& pot,
                              const Eigen::VectorXd& theta,
                              const Eigen::VectorXd& x);

/// Moment coordinates (the potential gradient) at log-radius x.
Eigen::VectorXd moment_map(const ToricPotential& pot, const Eigen::VectorXd& x);

/// Metric Hessian and its inverse at x; inverse*matrix = Id to 1e-12.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> metric_hessian(
    const ToricPotential& pot, const Eigen::VectorXd& x);

/// Local-model base coordinates {|z_k|^2 - min_i |z_i|^2}. Requires
/// prod |z_k| = |t| to relative 1e-8 (OffHypersurface otherwise).
Eigen::VectorXd base_projection(const std::vector<cplx>& z, double t);

}  // namespace lagfib

#endif

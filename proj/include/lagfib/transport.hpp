#ifndef LAGFIB_TRANSPORT_HPP
#define LAGFIB_TRANSPORT_HPP

#include <Eigen/Dense>
#include <vector>

#include "lagfib/family.hpp"
#include "lagfib/fourier.hpp"
#include "lagfib/geometry.hpp"

namespace lagfib {

/// Everything needed to move Lagrangian graph candidates from the reference
/// manifold Y_0 into the moving hypersurface:
///  - top branch: Y_0 is the divisor component {z_dep = 0}, the active
///    parameter is t (s held fixed), the reference potential the divisor
///    limit of the ambient one;
///  - vertex branch: Y_0 is the local model {prod z = -t}, the active
///    parameter is s in [0,1], the reference potential the local-model
///    restriction with x_dep = log t^2 - sum x.
struct TransportProblem {
  TransportProblem(ToricPotential amb, ToricPotential ind)
      : ambient(std::move(amb)), induced(std::move(ind)) {}

  FamilyChart chart;
  ToricPotential ambient;
  ToricPotential induced;
  ActiveParameter active = ActiveParameter::T;
  int dep = 0;              // dependent chart coordinate
  double fixed_other = 1.0; // s for the top branch, t for the vertex branch
  Eigen::VectorXd x0;       // reference log-radii of the free coordinates
  Eigen::VectorXd rho0;     // induced moment coordinates of x0
  double nu = 1.0;          // bounded-geometry scale

  int n() const { return chart.n; }
  std::vector<int> free_coords() const;
  double t_at(double u) const {
    return active == ActiveParameter::T ? u : fixed_other;
  }
  double s_at(double u) const {
    return active == ActiveParameter::S ? u : fixed_other;
  }
};

TransportProblem make_top_problem(const FamilyChart& chart,
                                  const ToricPotential& ambient, int face_coord,
                                  const Eigen::VectorXd& radii,
                                  double s_fixed = 1.0);

TransportProblem make_vertex_problem(const FamilyChart& chart,
                                     const ToricPotential& ambient, int dep,
                                     const Eigen::VectorXd& radii, double t);

/// Lagrangian graph candidate over the reference torus: the exact graph
/// rho = rho0 + grad h(theta) in the induced moment coordinates.
struct LagrangianGraph {
  FourierField h;  // mean-zero; empty field means h = 0
  int grid = 0;    // N points per circle (power of two)
};

/// Chart point of the embedded graph at angle theta.
std::vector<cplx> embed_graph_point(const TransportProblem& pr,
                                    const Eigen::VectorXd& theta,
                                    const Eigen::VectorXd& rho);

struct FlowOptions {
  double tol = 1e-10;
  double delta_sing = 0.0;  // 0: defaults to t^{1/(n+1)}/4
  int max_steps = 200000;
  bool project = true;      // post-step Newton projection onto X_u
};

/// Integrate the Hamiltonian-gradient flow of one point from parameter u0 to
/// u1, optionally carrying tangent columns by directional differentiation of
/// the field. Throws SingularApproach / StepUnderflow.
struct FlowResult {
  std::vector<cplx> z;
  std::vector<std::vector<cplx>> tangents;
  int steps = 0;
};

FlowResult integrate_flow_point(const TransportProblem& pr,
                                const std::vector<cplx>& z0, double u0,
                                double u1,
                                const std::vector<std::vector<cplx>>& tangents,
                                const FlowOptions& opt);

/// Endpoint grid of the flow applied to explicit start points (the grid form
/// of the operation; preconditions as in integrate_flow_point).
std::vector<std::vector<cplx>> integrate_flow(
    const TransportProblem& pr, const std::vector<std::vector<cplx>>& starts,
    double u0, double u1, const FlowOptions& opt);

/// Transported torus: grid values of Psi_u on the theta grid plus spectral
/// tangent frames; Psi satisfies the defining equation to 1e-9 and frames are
/// annihilated by d ptilde to 1e-8.
struct TransportedTorus {
  int n = 0;
  int grid = 0;
  double u = 0;
  ActiveParameter active = ActiveParameter::T;
  std::vector<std::vector<cplx>> psi;                  // grid -> C^{n+1}
  std::vector<std::vector<std::vector<cplx>>> frames;  // grid -> n x C^{n+1}
  std::size_t grid_size() const { return psi.size(); }
};

TransportedTorus transport_lagrangian(const TransportProblem& pr,
                                      const LagrangianGraph& graph, double u,
                                      const FlowOptions& opt);

/// Argument of the relative volume form on the frames, unwrapped continuously
/// across the grid (row-major, checked against column-major); defined modulo
/// one global 2*pi.
std::vector<double> pullback_phase(const TransportProblem& pr,
                                   const TransportedTorus& torus);

/// theta_1 and theta_2 grids; theta_2 = -log |Omega(frame)| + (1/2) log det g
/// restricted to the torus (diagnostic).
std::pair<std::vector<double>, std::vector<double>> phase_decomposition(
    const TransportProblem& pr, const TransportedTorus& torus);

/// Multi-index helpers for N^n grids (row-major).
struct GridIter {
  int n, N;
  std::size_t size() const {
    std::size_t s = 1;
    for (int k = 0; k < n; ++k) s *= N;
    return s;
  }
  std::vector<int> unpack(std::size_t lin) const;
  std::size_t pack(const std::vector<int>& idx) const;
  Eigen::VectorXd theta(std::size_t lin) const;
};

}  // namespace lagfib

#endif

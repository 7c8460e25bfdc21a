#ifndef LAGFIB_FAMILY_HPP
#define LAGFIB_FAMILY_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "lagfib/geometry.hpp"
#include "lagfib/util.hpp"

namespace lagfib {

/// Sparse polynomial over C in chart coordinates, stored as exponent-vector /
/// coefficient pairs. Evaluation is direct summation; degrees stay small.
class SparsePoly {
 public:
  SparsePoly() = default;
  explicit SparsePoly(int nvars) : nvars_(nvars) {}

  void add_term(const Eigen::VectorXi& exponents, cplx coeff);
  int nvars() const { return nvars_; }
  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  cplx eval(const std::vector<cplx>& z) const;
  std::vector<cplx> gradient(const std::vector<cplx>& z) const;
  cplx partial(const std::vector<cplx>& z, int j) const;
  cplx partial2(const std::vector<cplx>& z, int j, int k) const;

  /// Polynomial with the listed variables pinned to zero (terms using them
  /// are dropped; the variable count is unchanged).
  SparsePoly restrict_zero(const std::vector<int>& vars) const;

  /// Dense coefficients c_0..c_d of the univariate polynomial obtained by
  /// fixing every variable except `var` to the given values.
  std::vector<cplx> univariate(const std::vector<cplx>& fixed, int var) const;

  const std::vector<std::pair<Eigen::VectorXi, cplx>>& terms() const {
    return terms_;
  }

 private:
  int nvars_ = 0;
  std::vector<std::pair<Eigen::VectorXi, cplx>> terms_;
};

/// Vertex-chart data of the hypersurface family
///   ptilde_{t,s}(z) = prod_k z_k + t (1 + s * pcheck(z)),
/// z in C^{n+1}. pcheck(0) = 0 is enforced; the near-large-complex-limit
/// gate (t <= tau^{-w_mo}, tau and t small) is evaluated at construction and
/// reported as a note, never as an error.
struct FamilyChart {
  int n = 1;                // fibre dimension; chart has n+1 coordinates
  std::string chart_id;
  int chart_index = 0;      // vertex index in the polytope, when applicable
  SparsePoly p_check;       // vanishes at 0
  double t = 0.0;           // default deformation parameter (>= 0)
  double tau = 0.3;
  double w_mo = -2.0;       // weight of the interior point, for the gate
  std::string gate_note;    // filled by make_family_chart

  int dim() const { return n + 1; }
};

FamilyChart make_family_chart(int n, std::string chart_id, SparsePoly p_check,
                              double t, double tau, double w_mo);

struct DefiningValue {
  cplx value;
  std::vector<cplx> gradient;  // holomorphic gradient, n+1 entries
};

/// Exact evaluation of ptilde and its coefficient-wise gradient.
DefiningValue evaluate_defining(const FamilyChart& chart,
                                const std::vector<cplx>& z, double t, double s);

/// Point container with the on-hypersurface invariant |ptilde| <= tol*scale.
struct HypersurfacePoint {
  std::vector<cplx> z;
  double t = 0, s = 0;
};

double defining_scale(const FamilyChart& chart, const std::vector<cplx>& z,
                      double t, double s);

/// Unique small root z_dep of ptilde = 0 with the other coordinates held
/// fixed, found by the contracting fixed-point map
///   z_dep -> -t (1 + s pcheck) / prod_{k != dep} z_k.
/// Throws NoContraction when the iteration fails to contract.
cplx solve_graph_coordinate(const FamilyChart& chart,
                            const std::vector<cplx>& z_fixed, int dep,
                            double t, double s);

/// n tangent vectors spanning T_z X_{t,s}; each annihilated by d ptilde.
struct TangentFrame {
  HypersurfacePoint base;
  std::vector<std::vector<cplx>> vectors;  // n vectors of length n+1
};

enum class ActiveParameter { T, S };

struct VolumeFormValue {
  cplx reduced;     // t * iota(V_t) Omega  (or iota(V_s) Omega for S)
  double divisor;   // raw value = reduced / divisor (divisor = t for T, 1 for S)
  int index;        // residue index used
};

/// Relative holomorphic volume form iota(V_u) Omega evaluated on a frame,
/// with Omega the standard toric form wedge_k(-i dz_k / z_k). The reduced
/// value is computed through the residue representation
///   (-i)^{n+1} (-1)^j det[minor_j(frame)] / (d ptilde / d z_j)
/// which stays finite through divisor touch points; the residue index j
/// maximizes |z_j d ptilde/d z_j| with independence of the choice tested,
/// not assumed.
VolumeFormValue relative_volume_form(const FamilyChart& chart,
                                     const TangentFrame& frame, double t,
                                     double s, ActiveParameter active,
                                     int force_index = -1);

/// Hamiltonian-gradient field V = grad f / |grad f|^2 with f = Re(u(z)),
/// u the active parameter expressed implicitly through ptilde = 0; carries
/// <V, du> = 1. Returns zero when the family is stationary at z (d ptilde/du
/// vanishes); throws SingularPoint when the defining gradient vanishes.
std::vector<cplx> flow_field(const FamilyChart& chart,
                             const std::vector<cplx>& z, double t, double s,
                             ActiveParameter active,
                             const ToricPotential& metric);

/// Kahler form on a pair of ambient tangent vectors at z.
double omega_pair(const ToricPotential& metric, const std::vector<cplx>& z,
                  const std::vector<cplx>& v, const std::vector<cplx>& w);

/// Riemannian metric on a pair of ambient tangent vectors at z.
double metric_pair(const ToricPotential& metric, const std::vector<cplx>& z,
                   const std::vector<cplx>& v, const std::vector<cplx>& w);

/// Solutions of p(z) = 0 on a codimension-2 stratum {z_a = z_b = 0} of the
/// chart. `density` controls the sampling for two-dimensional solution sets
/// (n = 3). Residuals of returned points are <= 1e-10.
struct StratumSample {
  int coord_a, coord_b;
  std::vector<std::vector<cplx>> points;
};

StratumSample singular_stratum_samples(const FamilyChart& chart, int coord_a,
                                       int coord_b, double t, int density = 8);

/// Roots of a dense univariate polynomial (companion-matrix eigenvalues).
std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs);

}  // namespace lagfib

#endif

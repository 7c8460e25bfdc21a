#ifndef LAGFIB_PRESETS_HPP
#define LAGFIB_PRESETS_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "lagfib/family.hpp"
#include "lagfib/polytope.hpp"

namespace lagfib {

/// A compact hypersurface family: polytope combinatorics plus anticanonical
/// coefficients, from which per-vertex defining charts are generated.
/// Coefficient keys live in Delta0 coordinates (m - m_o); the interior point
/// itself always carries coefficient 1 (the normalized leading section).
struct FamilyPreset {
  std::string name;
  std::shared_ptr<const ReflexivePolytopePair> polytope;
  int n = 1;          // fibre dimension
  double tau = 0.3;
  double t = 1e-3;    // default deformation parameter
  std::map<std::vector<int>, cplx> coefficients;  // support of s
  bool single_chart = false;  // local-model style family (chart 0 only)

  /// Defining chart at the given polytope vertex. The chart constant term
  /// (coefficient of the vertex monomial) is normalized to 1; a real positive
  /// constant term is required.
  FamilyChart chart(int vertex) const;

  int chart_count() const {
    return single_chart ? 1 : static_cast<int>(polytope->charts().size());
  }
};

/// Fermat-type family in P^{n+1}: interior monomial plus the n+2 vertex
/// monomials with unit coefficients. n = 1 cubic curve in P^2, n = 2 quartic
/// surface in P^3, n = 3 quintic threefold in P^4.
FamilyPreset fermat_family(int n, double t);

/// Local model prod z_k = -t(1) as a single-chart family (pcheck = 0).
FamilyPreset local_model_family(int n, double t);

/// Preset lookup by name: "fermat-cubic", "fermat-quartic", "fermat-quintic",
/// "local-model-1", "local-model-2", "local-model-3".
std::optional<FamilyPreset> find_preset(const std::string& name, double t);

/// Simplex moment polytope of P^{d} with anticanonical size d+1 and the
/// symmetric strictly convex weights w_m = (|m|^2 + (sum m)^2)/((n+1)(n+2)),
/// w at the interior point = -2.
std::shared_ptr<const ReflexivePolytopePair> projective_space_polytope(int dim);

}  // namespace lagfib

#endif

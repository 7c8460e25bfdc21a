#include "lagfib/presets.hpp"

#include <cmath>
#include <functional>

#include "lagfib/errors.hpp"

namespace lagfib {

std::shared_ptr<const ReflexivePolytopePair> projective_space_polytope(int dim) {
  const int degree = dim + 1;  // anticanonical degree of P^dim
  std::vector<Eigen::VectorXi> verts;
  verts.push_back(Eigen::VectorXi::Zero(dim));
  for (int k = 0; k < dim; ++k) {
    Eigen::VectorXi v = Eigen::VectorXi::Zero(dim);
    v(k) = degree;
    verts.push_back(v);
  }
  std::vector<std::pair<Eigen::VectorXi, int>> facets;
  for (int k = 0; k < dim; ++k) {
    Eigen::VectorXi a = Eigen::VectorXi::Zero(dim);
    a(k) = -1;
    facets.push_back({a, 0});
  }
  facets.push_back({Eigen::VectorXi::Ones(dim), degree});
  Eigen::VectorXi m_o = Eigen::VectorXi::Ones(dim);

  // enumerate Delta0 lattice points (entries >= -1, sum <= 1) for the
  // symmetric strictly convex weight table
  std::map<std::vector<int>, double> weights;
  double qv = static_cast<double>(dim * (dim + 1));
  std::function<void(Eigen::VectorXi&, int)> rec = [&](Eigen::VectorXi& m,
                                                       int ax) {
    if (ax == dim) {
      long sum = m.sum();
      if (sum > 1) return;
      std::vector<int> key(m.data(), m.data() + dim);
      double q = static_cast<double>(m.squaredNorm()) +
                 static_cast<double>(sum) * static_cast<double>(sum);
      bool origin = m.cwiseAbs().maxCoeff() == 0;
      weights[key] = origin ? -2.0 : q / qv;
      return;
    }
    for (int v = -1; v <= degree; ++v) {
      m(ax) = v;
      rec(m, ax + 1);
    }
  };
  Eigen::VectorXi m(dim);
  rec(m, 0);

  return std::make_shared<ReflexivePolytopePair>(verts, facets, m_o, weights);
}

FamilyChart FamilyPreset::chart(int vertex) const {
  const auto& poly = *polytope;
  const int d = poly.ambient_dim();
  SparsePoly p(d);
  for (const auto& [key, coeff] : coefficients) {
    Eigen::VectorXi m0(d);
    for (int k = 0; k < d; ++k) m0(k) = key[k];
    Eigen::VectorXi alpha =
        poly.chart_exponents(vertex, m0 + poly.interior_point());
    if (alpha.minCoeff() < 0)
      throw InternalError("support point outside the vertex cone");
    p.add_term(alpha, coeff);
  }
  std::vector<cplx> zero(d, cplx(0, 0));
  cplx a0 = p.eval(zero);
  if (!(a0.real() > 0) || std::abs(a0.imag()) > 1e-14 * std::abs(a0))
    throw ConfigError("chart constant term must be a positive real");
  SparsePoly pcheck(d);
  for (const auto& [e, c] : p.terms()) {
    if (e.cwiseAbs().maxCoeff() == 0) continue;
    pcheck.add_term(e, c / a0);
  }
  double w_mo = poly.weight(Eigen::VectorXi::Zero(d));
  auto ch = make_family_chart(n, name + "#" + std::to_string(vertex),
                              std::move(pcheck), t * a0.real(), tau, w_mo);
  ch.chart_index = vertex;
  return ch;
}

FamilyPreset fermat_family(int n, double t) {
  FamilyPreset p;
  p.name =
      n == 1 ? "fermat-cubic" : (n == 2 ? "fermat-quartic" : "fermat-quintic");
  p.n = n;
  p.t = t;
  p.tau = 0.3;
  p.polytope = projective_space_polytope(n + 1);
  for (const auto& v : p.polytope->vertices()) {
    Eigen::VectorXi m0 = v - p.polytope->interior_point();
    p.coefficients[std::vector<int>(m0.data(), m0.data() + m0.size())] =
        cplx(1, 0);
  }
  return p;
}

FamilyPreset local_model_family(int n, double t) {
  FamilyPreset p;
  p.name = "local-model-" + std::to_string(n);
  p.n = n;
  p.t = t;
  p.tau = 0.3;
  p.polytope = projective_space_polytope(n + 1);
  Eigen::VectorXi m0 = -p.polytope->interior_point();
  p.coefficients[std::vector<int>(m0.data(), m0.data() + m0.size())] =
      cplx(1, 0);
  p.single_chart = true;
  return p;
}

std::optional<FamilyPreset> find_preset(const std::string& name, double t) {
  if (name == "fermat-cubic") return fermat_family(1, t);
  if (name == "fermat-quartic") return fermat_family(2, t);
  if (name == "fermat-quintic") return fermat_family(3, t);
  if (name == "local-model-1") return local_model_family(1, t);
  if (name == "local-model-2") return local_model_family(2, t);
  if (name == "local-model-3") return local_model_family(3, t);
  return std::nullopt;
}

}  // namespace lagfib

#include "lagfib/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "lagfib/errors.hpp"

namespace lagfib {

namespace {

std::vector<int> to_key(const Eigen::VectorXi& m) {
  return std::vector<int>(m.data(), m.data() + m.size());
}

int vec_gcd(const Eigen::VectorXi& v) {
  int g = 0;
  for (int k = 0; k < v.size(); ++k) g = std::gcd(g, std::abs(v(k)));
  return g;
}

Eigen::MatrixXi integer_inverse(const Eigen::MatrixXi& E) {
  Eigen::MatrixXd Ed = E.cast<double>();
  double det = Ed.determinant();
  if (std::abs(std::abs(det) - 1.0) > 1e-9)
    throw ConfigError("vertex chart basis is not unimodular (non-smooth vertex)");
  Eigen::MatrixXd inv = Ed.inverse();
  Eigen::MatrixXi out(E.rows(), E.cols());
  for (int i = 0; i < E.rows(); ++i)
    for (int j = 0; j < E.cols(); ++j) out(i, j) = static_cast<int>(std::llround(inv(i, j)));
  if ((out * E - Eigen::MatrixXi::Identity(E.rows(), E.cols())).cwiseAbs().maxCoeff() != 0)
    throw InternalError("integer inverse verification failed");
  return out;
}

}  // namespace

double distance_to_simplex(const Eigen::VectorXd& p,
                           const std::vector<Eigen::VectorXd>& verts) {
  const std::size_t m = verts.size();
  if (m == 1) return (p - verts[0]).norm();
  // affine least squares: p ~ v0 + B mu, mu_i free, lambda_0 = 1 - sum mu
  Eigen::MatrixXd B(p.size(), m - 1);
  for (std::size_t i = 1; i < m; ++i) B.col(i - 1) = verts[i] - verts[0];
  Eigen::VectorXd mu = B.colPivHouseholderQr().solve(p - verts[0]);
  double lam0 = 1.0 - mu.sum();
  bool inside = lam0 >= -1e-12;
  for (int i = 0; i < mu.size(); ++i) inside = inside && mu(i) >= -1e-12;
  if (inside) return (p - verts[0] - B * mu).norm();
  double best = 1e300;
  for (std::size_t skip = 0; skip < m; ++skip) {
    std::vector<Eigen::VectorXd> sub;
    for (std::size_t i = 0; i < m; ++i)
      if (i != skip) sub.push_back(verts[i]);
    best = std::min(best, distance_to_simplex(p, sub));
  }
  return best;
}

ReflexivePolytopePair::ReflexivePolytopePair(
    std::vector<Eigen::VectorXi> delta_vertices,
    std::vector<std::pair<Eigen::VectorXi, int>> facets, Eigen::VectorXi m_o,
    std::map<std::vector<int>, double> weights_delta0)
    : dim_(static_cast<int>(m_o.size())),
      vertices_(std::move(delta_vertices)),
      facets_(std::move(facets)),
      m_o_(std::move(m_o)),
      weights_(std::move(weights_delta0)) {
  if (vertices_.empty() || facets_.empty())
    throw ConfigError("polytope needs vertices and facets");

  // Enumerate lattice points of Delta0 = Delta - m_o over the bounding box
  // and verify that the origin is the unique interior lattice point.
  Eigen::VectorXi lo = vertices_[0], hi = vertices_[0];
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  std::vector<Eigen::VectorXi> interior;
  Eigen::VectorXi it = lo;
  for (;;) {
    bool in = true, strict = true;
    for (const auto& [a, c] : facets_) {
      long s = a.cast<long>().dot(it.cast<long>());
      if (s > c) in = false;
      if (s >= c) strict = false;
    }
    if (in) delta0_.push_back(it - m_o_);
    if (in && strict) interior.push_back(it - m_o_);
    int ax = dim_ - 1;
    for (; ax >= 0; --ax) {
      if (++it(ax) <= hi(ax)) break;
      it(ax) = lo(ax);
    }
    if (ax < 0) break;
  }
  if (interior.size() != 1 || interior[0].cwiseAbs().maxCoeff() != 0)
    throw ConfigError("interior lattice point of Delta0 is not unique origin");

  std::sort(delta0_.begin(), delta0_.end(),
            [](const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
              return std::lexicographical_compare(a.data(), a.data() + a.size(),
                                                  b.data(), b.data() + b.size());
            });

  validate_weights();
  build_charts();
  build_codim2();
}

double ReflexivePolytopePair::weight(const Eigen::VectorXi& m) const {
  auto it = weights_.find(to_key(m));
  if (it == weights_.end()) throw ConfigError("weight missing for lattice point");
  return it->second;
}

void ReflexivePolytopePair::validate_weights() const {
  for (const auto& m : delta0_) {
    double w = weight(m);
    bool is_origin = m.cwiseAbs().maxCoeff() == 0;
    if (is_origin && w >= 0)
      throw ConfigError("weight at the interior point must be strongly negative");
    if (!is_origin && w <= 0)
      throw ConfigError("weights must be positive away from the interior point");
  }
  // Strict convexity on collinear triples: every lattice point strictly
  // between two Delta0 points must sit strictly below the chord.
  for (std::size_t i = 0; i < delta0_.size(); ++i)
    for (std::size_t j = i + 1; j < delta0_.size(); ++j) {
      Eigen::VectorXi d = delta0_[j] - delta0_[i];
      int g = vec_gcd(d);
      if (g < 2) continue;
      Eigen::VectorXi step = d / g;
      for (int k = 1; k < g; ++k) {
        Eigen::VectorXi p = delta0_[i] + k * step;
        auto itp = weights_.find(to_key(p));
        if (itp == weights_.end()) continue;  // not a Delta0 point
        double lam = static_cast<double>(k) / g;
        double chord = (1 - lam) * weight(delta0_[i]) + lam * weight(delta0_[j]);
        if (!(itp->second < chord - 1e-12))
          throw ConfigError("weights are not strictly convex on Delta0");
      }
    }
}

void ReflexivePolytopePair::build_charts() {
  vertex_facets_.resize(vertices_.size());
  for (std::size_t vi = 0; vi < vertices_.size(); ++vi)
    for (std::size_t fi = 0; fi < facets_.size(); ++fi)
      if (facets_[fi].first.dot(vertices_[vi]) == facets_[fi].second)
        vertex_facets_[vi].push_back(static_cast<int>(fi));

  for (std::size_t vi = 0; vi < vertices_.size(); ++vi) {
    // edges: pairs (vi, wj) lying on >= dim-1 common facets
    std::vector<int> targets;
    for (std::size_t wj = 0; wj < vertices_.size(); ++wj) {
      if (wj == vi) continue;
      int common = 0;
      for (int fi : vertex_facets_[vi])
        if (facets_[fi].first.dot(vertices_[wj]) == facets_[fi].second) ++common;
      if (common >= dim_ - 1) targets.push_back(static_cast<int>(wj));
    }
    if (static_cast<int>(targets.size()) != dim_)
      throw ConfigError("vertex is not simple; smooth vertices required");
    VertexChart ch;
    ch.vertex = static_cast<int>(vi);
    ch.edge_basis.resize(dim_, dim_);
    for (int k = 0; k < dim_; ++k) {
      Eigen::VectorXi e = vertices_[targets[k]] - vertices_[vi];
      ch.edge_basis.col(k) = e / vec_gcd(e);
    }
    ch.edge_inverse = integer_inverse(ch.edge_basis);
    ch.facet_of_coordinate.assign(dim_, -1);
    for (int k = 0; k < dim_; ++k) {
      for (int fi : vertex_facets_[vi]) {
        const auto& a = facets_[fi].first;
        bool contains_others = true;
        for (int j = 0; j < dim_; ++j) {
          if (j == k) continue;
          if (a.dot(ch.edge_basis.col(j)) != 0) contains_others = false;
        }
        if (contains_others && a.dot(ch.edge_basis.col(k)) != 0) {
          ch.facet_of_coordinate[k] = fi;
          break;
        }
      }
      if (ch.facet_of_coordinate[k] < 0)
        throw InternalError("chart coordinate has no matching facet");
    }
    charts_.push_back(std::move(ch));
  }
}

void ReflexivePolytopePair::build_codim2() {
  std::set<std::vector<int>> seen;
  for (std::size_t fa = 0; fa < facets_.size(); ++fa)
    for (std::size_t fb = fa + 1; fb < facets_.size(); ++fb) {
      std::vector<int> on;
      for (std::size_t vi = 0; vi < vertices_.size(); ++vi)
        if (facets_[fa].first.dot(vertices_[vi]) == facets_[fa].second &&
            facets_[fb].first.dot(vertices_[vi]) == facets_[fb].second)
          on.push_back(static_cast<int>(vi));
      if (on.empty()) continue;
      std::vector<int> key = on;
      if (!seen.insert(key).second) continue;
      Codim2Face f;
      f.vertex_ids = on;
      f.chart = on[0];
      f.coord_a = f.coord_b = -1;
      const auto& ch = charts_[f.chart];
      for (int k = 0; k < dim_; ++k) {
        if (ch.facet_of_coordinate[k] == static_cast<int>(fa)) f.coord_a = k;
        if (ch.facet_of_coordinate[k] == static_cast<int>(fb)) f.coord_b = k;
      }
      if (f.coord_a < 0 || f.coord_b < 0)
        throw InternalError("codim-2 face coordinates not found in chart");
      codim2_.push_back(std::move(f));
    }
}

Eigen::VectorXi ReflexivePolytopePair::chart_exponents(
    int chart, const Eigen::VectorXi& m) const {
  const auto& ch = charts_[chart];
  return ch.edge_inverse * (m - vertices_[ch.vertex]);
}

Eigen::MatrixXi ReflexivePolytopePair::winding_transition(int from,
                                                          int to) const {
  return charts_[to].edge_basis.transpose() *
         charts_[from].edge_inverse.transpose();
}

Eigen::VectorXd ReflexivePolytopePair::embed_moment(
    int chart, const Eigen::VectorXd& rho) const {
  const auto& ch = charts_[chart];
  return vertices_[ch.vertex].cast<double>() + ch.edge_basis.cast<double>() * rho;
}

double ReflexivePolytopePair::distance_to_vertices(
    const Eigen::VectorXd& m) const {
  double best = 1e300;
  for (const auto& v : vertices_)
    best = std::min(best, (m - v.cast<double>()).norm());
  return best;
}

double ReflexivePolytopePair::distance_to_codim2_skeleton(
    const Eigen::VectorXd& m) const {
  double best = 1e300;
  for (const auto& f : codim2_) {
    std::vector<Eigen::VectorXd> verts;
    for (int vi : f.vertex_ids) verts.push_back(vertices_[vi].cast<double>());
    best = std::min(best, distance_to_simplex(m, verts));
  }
  return best;
}

double ReflexivePolytopePair::edge_length_scale() const {
  double best = 1e300;
  for (const auto& ch : charts_)
    for (int k = 0; k < dim_; ++k)
      best = std::min(best, ch.edge_basis.col(k).cast<double>().norm());
  double longest = 0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      longest = std::max(longest,
                         (vertices_[i] - vertices_[j]).cast<double>().norm());
  return longest;
}

int ReflexivePolytopePair::nearest_vertex(const Eigen::VectorXd& m) const {
  int best = 0;
  double bd = 1e300;
  for (std::size_t vi = 0; vi < vertices_.size(); ++vi) {
    double d = (m - vertices_[vi].cast<double>()).norm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(vi);
    }
  }
  return best;
}

}  // namespace lagfib

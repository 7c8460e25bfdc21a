#include <doctest.h>

#include "lagfib/errors.hpp"
#include "lagfib/polytope.hpp"
#include "lagfib/presets.hpp"

using namespace lagfib;

TEST_CASE("projective polytopes have the expected lattice data") {
  auto p2 = projective_space_polytope(2);  // cubic curve ambient
  CHECK(p2->ambient_dim() == 2);
  CHECK(p2->vertices().size() == 3);
  CHECK(p2->delta0_points().size() == 10);
  CHECK(p2->charts().size() == 3);
  CHECK(p2->codim2_faces().size() == 3);  // the three vertices

  auto p3 = projective_space_polytope(3);  // quartic ambient
  CHECK(p3->delta0_points().size() == 35);  // degree-4 monomials in 4 vars
  CHECK(p3->codim2_faces().size() == 6);    // tetrahedron edges

  auto p4 = projective_space_polytope(4);
  CHECK(p4->delta0_points().size() == 126);  // degree-5 monomials in 5 vars
  CHECK(p4->codim2_faces().size() == 10);
}

TEST_CASE("weights are admissible") {
  auto p2 = projective_space_polytope(2);
  Eigen::VectorXi origin = Eigen::VectorXi::Zero(2);
  CHECK(p2->weight(origin) < 0);
  Eigen::VectorXi v(2);
  v << 2, -1;
  CHECK(p2->weight(v) == doctest::Approx(1.0));
  Eigen::VectorXi e(2);
  e << 1, 0;
  CHECK(p2->weight(e) == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("winding transitions are unimodular and compose") {
  auto p3 = projective_space_polytope(3);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Eigen::MatrixXi T = p3->winding_transition(a, b);
      double det = T.cast<double>().determinant();
      CHECK(std::abs(std::abs(det) - 1.0) < 1e-12);
      // composition through a third chart
      int c = (b + 1) % 4;
      Eigen::MatrixXi direct = p3->winding_transition(a, c);
      Eigen::MatrixXi through = p3->winding_transition(b, c) * T;
      CHECK((direct - through).cwiseAbs().maxCoeff() == 0);
    }
}

TEST_CASE("chart exponents reproduce the Fermat monomials") {
  auto pre = fermat_family(1, 1e-2);
  auto ch = pre.chart(0);
  // p at chart 0 of the cubic: 1 + z0^3 + z1^3 (constant stripped into gate)
  CHECK(ch.p_check.term_count() == 2);
  std::vector<cplx> z{cplx(1, 0), cplx(1, 0)};
  CHECK(std::abs(ch.p_check.eval(z) - cplx(2, 0)) < 1e-14);
  std::vector<cplx> z2{cplx(2, 0), cplx(0, 0)};
  CHECK(std::abs(ch.p_check.eval(z2) - cplx(8, 0)) < 1e-14);
  // other charts carry the transformed monomials but the same normalization
  for (int v = 1; v < 3; ++v) {
    auto chv = pre.chart(v);
    std::vector<cplx> zero(2, cplx(0, 0));
    CHECK(std::abs(chv.p_check.eval(zero)) < 1e-14);
    CHECK(chv.p_check.term_count() == 2);
  }
}

TEST_CASE("distance helpers") {
  auto p2 = projective_space_polytope(2);
  Eigen::VectorXd mid(2);
  mid << 1.5, 0.0;  // midpoint of the edge from (0,0) to (3,0)
  CHECK(p2->distance_to_vertices(mid) == doctest::Approx(1.5));
  CHECK(p2->distance_to_codim2_skeleton(mid) == doctest::Approx(1.5));
  Eigen::VectorXd v0(2);
  v0 << 0.0, 0.0;
  CHECK(p2->nearest_vertex(v0) == 0);

  auto p3 = projective_space_polytope(3);
  Eigen::VectorXd q(3);
  q << 1.0, 1.0, 0.0;  // on a face of the tetrahedron
  double dv = p3->distance_to_vertices(q);
  double ds = p3->distance_to_codim2_skeleton(q);
  CHECK(ds <= dv);
  CHECK(ds > 0.5);
}

TEST_CASE("bad weights are rejected") {
  auto verts = projective_space_polytope(2)->vertices();
  std::vector<std::pair<Eigen::VectorXi, int>> facets;
  for (int k = 0; k < 2; ++k) {
    Eigen::VectorXi a = Eigen::VectorXi::Zero(2);
    a(k) = -1;
    facets.push_back({a, 0});
  }
  facets.push_back({Eigen::VectorXi::Ones(2), 3});
  Eigen::VectorXi m_o = Eigen::VectorXi::Ones(2);
  std::map<std::vector<int>, double> flat_weights;
  auto good = projective_space_polytope(2);
  for (const auto& m : good->delta0_points()) {
    std::vector<int> key(m.data(), m.data() + 2);
    bool origin = m.cwiseAbs().maxCoeff() == 0;
    flat_weights[key] = origin ? -2.0 : 1.0;  // affine on edges: not strict
  }
  CHECK_THROWS_AS(
      ReflexivePolytopePair(verts, facets, m_o, flat_weights), ConfigError);
}

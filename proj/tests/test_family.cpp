#include <doctest.h>

#include <cmath>
#include <random>

#include "lagfib/errors.hpp"
#include "lagfib/family.hpp"
#include "lagfib/presets.hpp"

using namespace lagfib;

namespace {

FamilyChart cubic_chart(double t) { return fermat_family(1, t).chart(0); }

// independent polynomial evaluator for the Fermat cubic chart:
// ptilde = z0 z1 + t (1 + s (z0^3 + z1^3))
cplx cubic_oracle(const std::vector<cplx>& z, double t, double s) {
  return z[0] * z[1] +
         t * (cplx(1, 0) + s * (z[0] * z[0] * z[0] + z[1] * z[1] * z[1]));
}

}  // namespace

TEST_CASE("evaluate_defining basics") {
  auto ch = cubic_chart(0.1);
  std::vector<cplx> zero(2, cplx(0, 0));
  auto dv = evaluate_defining(ch, zero, 0.1, 1.0);
  CHECK(std::abs(dv.value - cplx(0.1, 0)) < 1e-15);  // value = t at z = 0
  // gradient = t*s*grad pcheck(0) = 0 for the cubic (cubic monomials)
  CHECK(std::abs(dv.gradient[0]) < 1e-15);
  CHECK(std::abs(dv.gradient[1]) < 1e-15);

  // Fermat cubic at z=(1,1), t=0.1, s=1 -> 1.3, cross-checked via the oracle
  std::vector<cplx> ones(2, cplx(1, 0));
  auto dv2 = evaluate_defining(ch, ones, 0.1, 1.0);
  CHECK(std::abs(dv2.value - cplx(1.3, 0)) < 1e-14);
  CHECK(std::abs(dv2.value - cubic_oracle(ones, 0.1, 1.0)) < 1e-14);

  // s = 0 with prod z = -t gives zero
  std::vector<cplx> lm{cplx(-0.1, 0), cplx(1, 0)};
  auto dv3 = evaluate_defining(ch, lm, 0.1, 0.0);
  CHECK(std::abs(dv3.value) < 1e-15);

  // gradient components match finite differences of the oracle
  std::vector<cplx> zp{cplx(0.3, 0.2), cplx(-0.8, 0.5)};
  auto dv4 = evaluate_defining(ch, zp, 0.05, 1.0);
  const double h = 1e-6;
  for (int j = 0; j < 2; ++j) {
    auto zh = zp;
    zh[j] += h;
    auto zl = zp;
    zl[j] -= h;
    cplx fd = (cubic_oracle(zh, 0.05, 1.0) - cubic_oracle(zl, 0.05, 1.0)) /
              (2 * h);
    CHECK(std::abs(fd - dv4.gradient[j]) < 1e-8);
  }
}

TEST_CASE("solve_graph_coordinate") {
  auto ch = cubic_chart(0.01);
  // s = 0: closed form in one step
  std::vector<cplx> z{cplx(0, 0), cplx(0.7, 0.4)};
  cplx z0 = solve_graph_coordinate(ch, z, 0, 0.01, 0.0);
  CHECK(std::abs(z0 - (-0.01 / z[1])) < 1e-14);

  // t = 0 gives 0
  CHECK(std::abs(solve_graph_coordinate(ch, z, 0, 0.0, 1.0)) == 0.0);

  // Fermat cubic bookkeeping: |z0 + 2t| <= 10 t^2 at z1 = 1, s = 1
  std::vector<cplx> z1{cplx(0, 0), cplx(1, 0)};
  cplx r = solve_graph_coordinate(ch, z1, 0, 0.01, 1.0);
  CHECK(std::abs(r + cplx(0.02, 0)) <= 10 * 0.01 * 0.01);
  // residual check against the independent oracle
  std::vector<cplx> zz{r, cplx(1, 0)};
  CHECK(std::abs(cubic_oracle(zz, 0.01, 1.0)) < 1e-12);

  // fixed-point oracle iterated to machine precision agrees
  cplx w(0, 0);
  for (int it = 0; it < 200; ++it)
    w = -0.01 * (cplx(1, 0) + (w * w * w + cplx(1, 0))) / cplx(1, 0);
  CHECK(std::abs(w - r) < 1e-13);

  // free coordinate too small: no contraction
  std::vector<cplx> tiny{cplx(0, 0), cplx(1e-16, 0)};
  CHECK_THROWS_AS(solve_graph_coordinate(ch, tiny, 0, 0.01, 1.0), NoContraction);
}

TEST_CASE("relative volume form on the local model") {
  // n = 1 local model: torus |z1| = 1, z0 = -t/z1; frame tangent to the torus
  auto pre = local_model_family(1, 0.01);
  auto ch = pre.chart(0);
  const double t = 0.01;
  double mod_ref = 0;
  double phase_ref = 0;
  for (int k = 0; k < 64; ++k) {
    double th = kTwoPi * k / 64;
    cplx z1 = std::polar(1.0, th);
    cplx z0 = -t / z1;
    TangentFrame fr;
    fr.base.z = {z0, z1};
    fr.vectors = {{cplx(0, -1) * z0, cplx(0, 1) * z1}};
    auto vf = relative_volume_form(ch, fr, t, 0.0, ActiveParameter::T);
    double mod = std::abs(vf.reduced / vf.divisor);
    double ph = std::arg(vf.reduced);
    if (k == 0) {
      mod_ref = mod;
      phase_ref = ph;
      // exact value: t * Omega_t(frame) = -i
      CHECK(std::abs(vf.reduced - cplx(0, -1)) < 1e-12);
      CHECK(vf.divisor == doctest::Approx(t));
    }
    CHECK(mod == doctest::Approx(mod_ref).epsilon(1e-10));
    CHECK(std::abs(wrap_angle(ph - phase_ref)) < 1e-10);
  }
}

TEST_CASE("volume form multilinearity and index independence") {
  auto ch = cubic_chart(0.01);
  const double t = 0.01, s = 1.0;
  std::vector<cplx> z{cplx(0, 0), std::polar(0.9, 0.7)};
  z[0] = solve_graph_coordinate(ch, z, 0, t, s);
  // tangent vector from the implicit relation: dz0 = -(dp/dz1)/(dp/dz0) dz1
  auto dv = evaluate_defining(ch, z, t, s);
  cplx v1 = cplx(0, 1) * z[1];
  cplx v0 = -dv.gradient[1] / dv.gradient[0] * v1;
  TangentFrame fr;
  fr.base.z = z;
  fr.vectors = {{v0, v1}};
  auto a = relative_volume_form(ch, fr, t, s, ActiveParameter::T);

  // scaling the single frame vector by 2 scales the output by 2
  TangentFrame fr2 = fr;
  fr2.vectors[0][0] *= 2.0;
  fr2.vectors[0][1] *= 2.0;
  auto b = relative_volume_form(ch, fr2, t, s, ActiveParameter::T);
  CHECK(std::abs(b.reduced - 2.0 * a.reduced) < 1e-12 * std::abs(a.reduced));

  // index-choice independence (dual evaluation oracle)
  auto j0 = relative_volume_form(ch, fr, t, s, ActiveParameter::T, 0);
  auto j1 = relative_volume_form(ch, fr, t, s, ActiveParameter::T, 1);
  CHECK(std::abs(j0.reduced - j1.reduced) <= 1e-9 * std::abs(j0.reduced));
}

TEST_CASE("volume form is alternating in the frame (n = 2)") {
  auto ch = fermat_family(2, 1e-3).chart(0);
  const double t = 1e-3, s = 1.0;
  std::vector<cplx> z{cplx(0, 0), std::polar(0.8, 0.3), std::polar(1.1, -0.9)};
  z[0] = solve_graph_coordinate(ch, z, 0, t, s);
  auto dv = evaluate_defining(ch, z, t, s);
  auto tangent = [&](int k) {
    std::vector<cplx> v(3, cplx(0, 0));
    v[k] = cplx(0, 1) * z[k];
    v[0] = -dv.gradient[k] * v[k] / dv.gradient[0];
    return v;
  };
  TangentFrame fr;
  fr.base.z = z;
  fr.vectors = {tangent(1), tangent(2)};
  auto ab = relative_volume_form(ch, fr, t, s, ActiveParameter::T);
  std::swap(fr.vectors[0], fr.vectors[1]);
  auto ba = relative_volume_form(ch, fr, t, s, ActiveParameter::T);
  CHECK(std::abs(ab.reduced + ba.reduced) < 1e-12 * std::abs(ab.reduced));

  // degenerate frame rejected
  fr.vectors[1] = fr.vectors[0];
  CHECK_THROWS_AS(relative_volume_form(ch, fr, t, s, ActiveParameter::T),
                  DegenerateFrame);
}

TEST_CASE("flow field") {
  // stationary family: pcheck == 0 with s active -> V = 0
  auto lm = local_model_family(1, 0.01).chart(0);
  std::vector<std::pair<double, Eigen::VectorXd>> terms;
  for (int k = 0; k < 2; ++k) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(2);
    w(k) = 1.0;
    terms.push_back({1.0, w});
  }
  auto euclid = ToricPotential::exp_sum(2, terms);
  std::vector<cplx> z{cplx(-0.01, 0), cplx(1, 0)};
  auto V0 = flow_field(lm, z, 0.01, 0.5, ActiveParameter::S, euclid);
  CHECK(std::abs(V0[0]) == 0.0);
  CHECK(std::abs(V0[1]) == 0.0);

  // local model with Euclidean metric at z = (0,1), active t:
  // u(z) = -z0 z1, grad f = (-conj z1, -conj z0)/2-normalized; V = (-1, 0)
  auto Vt = flow_field(lm, {cplx(0, 0), cplx(1, 0)}, 0.0, 0.0,
                       ActiveParameter::T, euclid);
  CHECK(std::abs(Vt[0] - cplx(-1, 0)) < 1e-12);
  CHECK(std::abs(Vt[1]) < 1e-12);

  // normalization <V, du> = 1 at random points (defining property)
  auto ch = cubic_chart(0.01);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(0, kTwoPi), rad(0.6, 1.4);
  auto fs = ToricPotential::fubini_study(2, 3.0);
  for (int it = 0; it < 100; ++it) {
    std::vector<cplx> zz{cplx(0, 0), std::polar(rad(rng), ang(rng))};
    zz[0] = solve_graph_coordinate(ch, zz, 0, 0.01, 1.0);
    auto V = flow_field(ch, zz, 0.01, 1.0, ActiveParameter::T, fs);
    auto dv = evaluate_defining(ch, zz, 0.01, 1.0);
    cplx pc = ch.p_check.eval(zz);
    cplx pair(0, 0);
    for (int j = 0; j < 2; ++j)
      pair += -dv.gradient[j] / (cplx(1, 0) + pc) * V[j];
    CHECK(std::abs(pair - cplx(1, 0)) < 1e-10);
  }
}

TEST_CASE("flow field is metric-orthogonal to the hypersurface tangent") {
  auto ch = cubic_chart(0.01);
  auto fs = ToricPotential::fubini_study(2, 3.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0, kTwoPi), rad(0.7, 1.3);
  for (int it = 0; it < 20; ++it) {
    std::vector<cplx> z{cplx(0, 0), std::polar(rad(rng), ang(rng))};
    z[0] = solve_graph_coordinate(ch, z, 0, 0.01, 1.0);
    auto V = flow_field(ch, z, 0.01, 1.0, ActiveParameter::T, fs);
    auto dv = evaluate_defining(ch, z, 0.01, 1.0);
    cplx v1 = cplx(0, 1) * z[1];
    std::vector<cplx> w{-dv.gradient[1] / dv.gradient[0] * v1, v1};
    double wn = std::sqrt(std::norm(w[0]) + std::norm(w[1]));
    double vn = std::sqrt(std::norm(V[0]) + std::norm(V[1]));
    double ip = metric_pair(fs, z, V, w);
    CHECK(std::abs(ip) <= 1e-9 * std::max(1.0, vn * wn));
    // J-rotated tangent as well (full complex tangent space)
    std::vector<cplx> jw{cplx(0, 1) * w[0], cplx(0, 1) * w[1]};
    CHECK(std::abs(metric_pair(fs, z, V, jw)) <= 1e-9 * std::max(1.0, vn * wn));
  }
}

TEST_CASE("singular stratum samples") {
  // Fermat cubic: strata are points, p(0) = 1 != 0, so C is empty
  auto pre1 = fermat_family(1, 1e-2);
  for (const auto& f : pre1.polytope->codim2_faces()) {
    auto ch = pre1.chart(f.chart);
    auto s = singular_stratum_samples(ch, f.coord_a, f.coord_b, 1e-2);
    CHECK(s.points.empty());
  }

  // Fermat quartic: each of the 6 strata carries 4 roots (z^4 = -1)
  auto pre2 = fermat_family(2, 1e-3);
  int total = 0;
  for (const auto& f : pre2.polytope->codim2_faces()) {
    auto ch = pre2.chart(f.chart);
    auto s = singular_stratum_samples(ch, f.coord_a, f.coord_b, 1e-3);
    CHECK(s.points.size() == 4);
    for (const auto& z : s.points) {
      // direct root oracle: the free coordinate must satisfy w^4 = -1
      cplx w(0, 0);
      for (int k = 0; k < 3; ++k)
        if (k != f.coord_a && k != f.coord_b) w = z[k];
      CHECK(std::abs(w * w * w * w + cplx(1, 0)) < 1e-10);
      CHECK(std::abs(std::abs(w) - 1.0) < 1e-12);
    }
    total += static_cast<int>(s.points.size());
  }
  CHECK(total == 24);

  // t-independence
  auto f0 = pre2.polytope->codim2_faces()[0];
  auto cA = pre2.chart(f0.chart);
  auto sA = singular_stratum_samples(cA, f0.coord_a, f0.coord_b, 1e-2);
  auto sB = singular_stratum_samples(cA, f0.coord_a, f0.coord_b, 1e-3);
  REQUIRE(sA.points.size() == sB.points.size());
  for (std::size_t i = 0; i < sA.points.size(); ++i)
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(sA.points[i][k] - sB.points[i][k]) < 1e-10);
}

TEST_CASE("polynomial roots oracle") {
  // z^2 - 3z + 2 roots 1, 2
  auto r = polynomial_roots({cplx(2, 0), cplx(-3, 0), cplx(1, 0)});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - cplx(1, 0)) < 1e-12);
  CHECK(std::abs(r[1] - cplx(2, 0)) < 1e-12);
}

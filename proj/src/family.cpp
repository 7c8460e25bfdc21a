#include "lagfib/family.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "lagfib/errors.hpp"

namespace lagfib {

void SparsePoly::add_term(const Eigen::VectorXi& exponents, cplx coeff) {
  if (exponents.size() != nvars_) throw InternalError("SparsePoly: exponent size");
  if (exponents.minCoeff() < 0) throw InternalError("SparsePoly: negative exponent");
  for (auto& [e, c] : terms_)
    if (e == exponents) {
      c += coeff;
      return;
    }
  terms_.emplace_back(exponents, coeff);
}

namespace {
cplx ipow(cplx z, int e) {
  cplx r(1, 0);
  for (int k = 0; k < e; ++k) r *= z;
  return r;
}
}  // namespace

cplx SparsePoly::eval(const std::vector<cplx>& z) const {
  cplx s(0, 0);
  for (const auto& [e, c] : terms_) {
    cplx m = c;
    for (int j = 0; j < nvars_; ++j) m *= ipow(z[j], e(j));
    s += m;
  }
  return s;
}

cplx SparsePoly::partial(const std::vector<cplx>& z, int j) const {
  cplx s(0, 0);
  for (const auto& [e, c] : terms_) {
    if (e(j) == 0) continue;
    cplx m = c * static_cast<double>(e(j));
    for (int l = 0; l < nvars_; ++l) m *= ipow(z[l], l == j ? e(l) - 1 : e(l));
    s += m;
  }
  return s;
}

std::vector<cplx> SparsePoly::gradient(const std::vector<cplx>& z) const {
  std::vector<cplx> g(nvars_);
  for (int j = 0; j < nvars_; ++j) g[j] = partial(z, j);
  return g;
}

cplx SparsePoly::partial2(const std::vector<cplx>& z, int j, int k) const {
  cplx s(0, 0);
  for (const auto& [e, c] : terms_) {
    int ej = e(j), ek = e(k);
    if (j == k) {
      if (ej < 2) continue;
      cplx m = c * static_cast<double>(ej) * static_cast<double>(ej - 1);
      for (int l = 0; l < nvars_; ++l) m *= ipow(z[l], l == j ? e(l) - 2 : e(l));
      s += m;
    } else {
      if (ej == 0 || ek == 0) continue;
      cplx m = c * static_cast<double>(ej) * static_cast<double>(ek);
      for (int l = 0; l < nvars_; ++l) {
        int ee = e(l);
        if (l == j) --ee;
        if (l == k) --ee;
        m *= ipow(z[l], ee);
      }
      s += m;
    }
  }
  return s;
}

SparsePoly SparsePoly::restrict_zero(const std::vector<int>& vars) const {
  SparsePoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    bool keep = true;
    for (int v : vars)
      if (e(v) > 0) keep = false;
    if (keep) out.add_term(e, c);
  }
  return out;
}

std::vector<cplx> SparsePoly::univariate(const std::vector<cplx>& fixed,
                                         int var) const {
  int deg = 0;
  for (const auto& [e, c] : terms_) deg = std::max(deg, e(var));
  std::vector<cplx> coeffs(deg + 1, cplx(0, 0));
  for (const auto& [e, c] : terms_) {
    cplx m = c;
    for (int l = 0; l < nvars_; ++l)
      if (l != var) m *= ipow(fixed[l], e(l));
    coeffs[e(var)] += m;
  }
  return coeffs;
}

FamilyChart make_family_chart(int n, std::string chart_id, SparsePoly p_check,
                              double t, double tau, double w_mo) {
  if (t < 0) throw ConfigError("family chart: t must be >= 0");
  if (!(tau > 0 && tau < 1)) throw ConfigError("family chart: tau in (0,1)");
  std::vector<cplx> zero(n + 1, cplx(0, 0));
  if (!p_check.empty() && std::abs(p_check.eval(zero)) > 1e-14)
    throw ConfigError("family chart: pcheck(0) must vanish");
  FamilyChart ch;
  ch.n = n;
  ch.chart_id = std::move(chart_id);
  ch.p_check = std::move(p_check);
  ch.t = t;
  ch.tau = tau;
  ch.w_mo = w_mo;
  double bound = std::pow(tau, -w_mo);
  if (t > bound || t > 0.1 || tau > 0.9)
    ch.gate_note = "near-large-complex-limit gate violated: t=" +
                   std::to_string(t) + " bound=" + std::to_string(bound);
  return ch;
}

DefiningValue evaluate_defining(const FamilyChart& chart,
                                const std::vector<cplx>& z, double t,
                                double s) {
  const int d = chart.dim();
  DefiningValue out;
  out.gradient.assign(d, cplx(0, 0));
  // prefix/suffix products give prod_{k != j} z_k without dividing
  std::vector<cplx> pre(d + 1, cplx(1, 0)), suf(d + 1, cplx(1, 0));
  for (int k = 0; k < d; ++k) pre[k + 1] = pre[k] * z[k];
  for (int k = d - 1; k >= 0; --k) suf[k] = suf[k + 1] * z[k];
  cplx pc = chart.p_check.empty() ? cplx(0, 0) : chart.p_check.eval(z);
  out.value = pre[d] + t * (cplx(1, 0) + s * pc);
  for (int j = 0; j < d; ++j) {
    out.gradient[j] = pre[j] * suf[j + 1];
    if (!chart.p_check.empty())
      out.gradient[j] += t * s * chart.p_check.partial(z, j);
  }
  return out;
}

double defining_scale(const FamilyChart& chart, const std::vector<cplx>& z,
                      double t, double s) {
  double prod = 1.0;
  for (const auto& zk : z) prod *= std::abs(zk);
  cplx pc = chart.p_check.empty() ? cplx(0, 0) : chart.p_check.eval(z);
  return std::max({prod, t * std::abs(cplx(1, 0) + s * pc), 1e-300});
}

cplx solve_graph_coordinate(const FamilyChart& chart,
                            const std::vector<cplx>& z_fixed, int dep,
                            double t, double s) {
  const int d = chart.dim();
  cplx others(1, 0);
  for (int k = 0; k < d; ++k)
    if (k != dep) others *= z_fixed[k];
  if (std::abs(others) < 1e-14)
    throw NoContraction("graph coordinate: free coordinates touch the divisor");
  std::vector<cplx> z = z_fixed;
  z[dep] = cplx(0, 0);
  if (t == 0) return cplx(0, 0);

  cplx prev = z[dep];
  double last_step = 1e300;
  for (int it = 0; it < 80; ++it) {
    cplx pc = chart.p_check.empty() ? cplx(0, 0) : chart.p_check.eval(z);
    cplx next = -t * (cplx(1, 0) + s * pc) / others;
    double step = std::abs(next - prev);
    z[dep] = next;
    if (step <= 1e-15 * std::max(1.0, std::abs(next))) break;
    if (it > 4 && step > 0.75 * last_step)
      throw NoContraction("graph coordinate iteration is not contracting");
    last_step = step;
    prev = next;
    if (it == 79) throw NoContraction("graph coordinate iteration stalled");
  }
  // polish with one Newton step on the full defining function
  auto dv = evaluate_defining(chart, z, t, s);
  if (std::abs(dv.gradient[dep]) > 0) z[dep] -= dv.value / dv.gradient[dep];
  dv = evaluate_defining(chart, z, t, s);
  if (std::abs(dv.value) > 1e-12 * defining_scale(chart, z, t, s))
    throw NoContraction("graph coordinate residual too large");
  return z[dep];
}

VolumeFormValue relative_volume_form(const FamilyChart& chart,
                                     const TangentFrame& frame, double t,
                                     double s, ActiveParameter active,
                                     int force_index) {
  const int d = chart.dim();
  const int n = chart.n;
  const auto& z = frame.base.z;
  if (static_cast<int>(frame.vectors.size()) != n)
    throw DegenerateFrame("frame must have n vectors");

  auto dv = evaluate_defining(chart, z, t, s);

  // residue index: maximal |z_j dptilde/dz_j|, falling back to |dptilde/dz_j|
  // when the torus-scaled values all degenerate (t = 0 start).
  int j = force_index;
  if (j < 0) {
    double best = -1;
    for (int k = 0; k < d; ++k) {
      double v = std::abs(z[k] * dv.gradient[k]);
      if (v > best) {
        best = v;
        j = k;
      }
    }
    double gscale = 0;
    for (int k = 0; k < d; ++k) gscale = std::max(gscale, std::abs(dv.gradient[k]));
    if (best < 1e-14 * std::max(gscale, 1e-300)) {
      best = -1;
      for (int k = 0; k < d; ++k) {
        double v = std::abs(dv.gradient[k]);
        if (v > best) {
          best = v;
          j = k;
        }
      }
    }
  }
  if (std::abs(dv.gradient[j]) < 1e-250)
    throw SingularPoint("residue denominator vanishes at every index");

  // minor determinant of frame components away from row j
  Eigen::MatrixXcd M(n, n);
  for (int i = 0; i < n; ++i) {
    int col = 0;
    for (int k = 0; k < d; ++k) {
      if (k == j) continue;
      M(i, col++) = frame.vectors[i][k];
    }
  }
  double rowscale = 1.0;
  for (int i = 0; i < n; ++i) rowscale *= M.row(i).norm() + 1e-300;
  cplx det = n == 0 ? cplx(1, 0) : M.determinant();
  if (std::abs(det) < 1e-10 * rowscale)
    throw DegenerateFrame("frame vectors are linearly dependent");

  cplx mi_pow(1, 0);
  for (int k = 0; k < d; ++k) mi_pow *= cplx(0, -1);
  double sign = (j % 2 == 0) ? 1.0 : -1.0;

  VolumeFormValue out;
  out.index = j;
  // reduced = t * iota(V_t)Omega = (-i)^{n+1} (-1)^j det / dptilde_j, using
  // prod z = -t(1+s pcheck) once; exact on the hypersurface.
  cplx residue = mi_pow * sign * det / dv.gradient[j];
  if (active == ActiveParameter::T) {
    out.reduced = residue;
    out.divisor = t;
  } else {
    // iota(V_s)Omega = pcheck/(1+s pcheck) * residue / t * t = finite
    cplx pc = chart.p_check.empty() ? cplx(0, 0) : chart.p_check.eval(z);
    cplx denom = cplx(1, 0) + s * pc;
    if (std::abs(denom) < 1e-14)
      throw SingularPoint("s-relative form undefined where 1 + s pcheck = 0");
    out.reduced = residue * pc / denom;
    out.divisor = 1.0;
  }
  return out;
}

std::vector<cplx> flow_field(const FamilyChart& chart,
                             const std::vector<cplx>& z, double t, double s,
                             ActiveParameter active,
                             const ToricPotential& metric) {
  const int d = chart.dim();
  auto dv = evaluate_defining(chart, z, t, s);
  double gscale = 0;
  for (const auto& g : dv.gradient) gscale = std::max(gscale, std::abs(g));
  if (gscale < 1e-250)
    throw SingularPoint("defining gradient vanishes; flow undefined");

  cplx du;  // d ptilde / d u for the active parameter
  if (active == ActiveParameter::T) {
    cplx pc = chart.p_check.empty() ? cplx(0, 0) : chart.p_check.eval(z);
    du = cplx(1, 0) + s * pc;
  } else {
    cplx pc = chart.p_check.empty() ? cplx(0, 0) : chart.p_check.eval(z);
    du = t * pc;
  }
  // stationary family (or a pencil base point): the hypersurface does not
  // move through z, so the transporting field vanishes.
  if (std::abs(du) < 1e-140 * std::max(1.0, gscale))
    return std::vector<cplx>(d, cplx(0, 0));

  Eigen::VectorXcd a(d);
  for (int k = 0; k < d; ++k) a(k) = -dv.gradient[k] / du;

  Eigen::MatrixXcd G = metric.hermitian_metric(z);
  Eigen::VectorXcd xi = (G.partialPivLu().solve(a)).conjugate() * 0.5;
  double n2 = 0;
  for (int jj = 0; jj < d; ++jj)
    for (int kk = 0; kk < d; ++kk)
      n2 += 2.0 * std::real(G(jj, kk) * xi(jj) * std::conj(xi(kk)));
  if (!(n2 > 1e-280))
    return std::vector<cplx>(d, cplx(0, 0));  // frozen pencil base point
  std::vector<cplx> V(d);
  for (int k = 0; k < d; ++k) V[k] = xi(k) / n2;
  return V;
}

double omega_pair(const ToricPotential& metric, const std::vector<cplx>& z,
                  const std::vector<cplx>& v, const std::vector<cplx>& w) {
  Eigen::MatrixXcd G = metric.hermitian_metric(z);
  cplx acc(0, 0);
  const int d = static_cast<int>(z.size());
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) acc += G(j, k) * v[j] * std::conj(w[k]);
  return 2.0 * std::imag(acc);
}

double metric_pair(const ToricPotential& metric, const std::vector<cplx>& z,
                   const std::vector<cplx>& v, const std::vector<cplx>& w) {
  Eigen::MatrixXcd G = metric.hermitian_metric(z);
  cplx acc(0, 0);
  const int d = static_cast<int>(z.size());
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) acc += G(j, k) * v[j] * std::conj(w[k]);
  return 2.0 * std::real(acc);
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) < 1e-300) --deg;
  if (deg < 1) return {};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
  for (int k = 0; k < deg; ++k) {
    C(k, deg - 1) = -coeffs[k] / coeffs[deg];
    if (k > 0) C(k, k - 1) = cplx(1, 0);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C);
  std::vector<cplx> roots(deg);
  for (int k = 0; k < deg; ++k) roots[k] = es.eigenvalues()(k);
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

StratumSample singular_stratum_samples(const FamilyChart& chart, int coord_a,
                                       int coord_b, double t, int density) {
  if (t <= 0) throw ConfigError("singular samples need t > 0");
  const int d = chart.dim();
  StratumSample out;
  out.coord_a = coord_a;
  out.coord_b = coord_b;
  // full p = 1 + pcheck restricted to the stratum
  SparsePoly p(d);
  p.add_term(Eigen::VectorXi::Zero(d), cplx(1, 0));
  for (const auto& [e, c] : chart.p_check.terms()) p.add_term(e, c);
  SparsePoly pr = p.restrict_zero({coord_a, coord_b});

  std::vector<int> free_vars;
  for (int k = 0; k < d; ++k)
    if (k != coord_a && k != coord_b) free_vars.push_back(k);

  auto push_root = [&](std::vector<cplx> z) {
    auto dv = evaluate_defining(chart, z, t, 1.0);
    if (std::abs(dv.value) <= 1e-10 * std::max(1.0, t)) out.points.push_back(z);
  };

  if (free_vars.empty()) {
    std::vector<cplx> z(d, cplx(0, 0));
    if (std::abs(pr.eval(z)) < 1e-12) push_root(z);
  } else if (free_vars.size() == 1) {
    std::vector<cplx> fixed(d, cplx(0, 0));
    auto uni = pr.univariate(fixed, free_vars[0]);
    for (cplx r : polynomial_roots(uni)) {
      if (std::abs(r) < 1e-12) continue;  // deeper stratum
      std::vector<cplx> z(d, cplx(0, 0));
      z[free_vars[0]] = r;
      push_root(z);
    }
  } else {
    // two free variables: sample circles in the first, solve the second
    int va = free_vars[0], vb = free_vars[1];
    for (int ir = 1; ir <= density; ++ir) {
      double rad = 0.25 + 1.5 * static_cast<double>(ir) / density;
      for (int ia = 0; ia < 2 * density; ++ia) {
        double ang = kTwoPi * ia / (2 * density);
        std::vector<cplx> fixed(d, cplx(0, 0));
        fixed[va] = std::polar(rad, ang);
        auto uni = pr.univariate(fixed, vb);
        for (cplx r : polynomial_roots(uni)) {
          if (std::abs(r) < 1e-12) continue;
          std::vector<cplx> z(d, cplx(0, 0));
          z[va] = fixed[va];
          z[vb] = r;
          push_root(z);
        }
      }
    }
  }
  return out;
}

}  // namespace lagfib

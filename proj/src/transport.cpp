#include "lagfib/transport.hpp"

#include <algorithm>
#include <cmath>

#include "lagfib/errors.hpp"

namespace lagfib {

std::vector<int> TransportProblem::free_coords() const {
  std::vector<int> f;
  for (int k = 0; k < chart.dim(); ++k)
    if (k != dep) f.push_back(k);
  return f;
}

TransportProblem make_top_problem(const FamilyChart& chart,
                                  const ToricPotential& ambient, int face_coord,
                                  const Eigen::VectorXd& radii, double s_fixed) {
  TransportProblem pr(ambient, ambient.induce_divisor_limit(face_coord));
  pr.chart = chart;
  pr.active = ActiveParameter::T;
  pr.dep = face_coord;
  pr.fixed_other = s_fixed;
  pr.x0.resize(chart.n);
  for (int k = 0; k < chart.n; ++k) pr.x0(k) = 2.0 * std::log(radii(k));
  pr.rho0 = pr.induced.gradient(pr.x0);
  pr.nu = radii.minCoeff();
  return pr;
}

TransportProblem make_vertex_problem(const FamilyChart& chart,
                                     const ToricPotential& ambient, int dep,
                                     const Eigen::VectorXd& radii, double t) {
  if (t <= 0) throw ConfigError("vertex transport needs t > 0");
  TransportProblem pr(ambient, ambient.induce_local_model(dep, std::log(t * t)));
  pr.chart = chart;
  pr.active = ActiveParameter::S;
  pr.dep = dep;
  pr.fixed_other = t;
  pr.x0.resize(chart.n);
  for (int k = 0; k < chart.n; ++k) pr.x0(k) = 2.0 * std::log(radii(k));
  pr.rho0 = pr.induced.gradient(pr.x0);
  // geometric mean of the free radii sets the bounded-geometry scale
  pr.nu = std::exp(pr.x0.mean() / 2.0);
  return pr;
}

std::vector<cplx> embed_graph_point(const TransportProblem& pr,
                                    const Eigen::VectorXd& theta,
                                    const Eigen::VectorXd& rho) {
  Eigen::VectorXd x = pr.induced.invert_moment(rho, pr.x0);
  const int d = pr.chart.dim();
  std::vector<cplx> z(d, cplx(0, 0));
  auto free = pr.free_coords();
  for (int k = 0; k < pr.chart.n; ++k)
    z[free[k]] = std::polar(std::exp(0.5 * x(k)), theta(k));
  if (pr.active == ActiveParameter::S)
    z[pr.dep] = solve_graph_coordinate(pr.chart, z, pr.dep, pr.fixed_other, 0.0);
  return z;
}

namespace {

// Cash-Karp 5(4) tableau
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 3.0 / 10, kA42 = -9.0 / 10, kA43 = 6.0 / 5;
constexpr double kA51 = -11.0 / 54, kA52 = 5.0 / 2, kA53 = -70.0 / 27,
                 kA54 = 35.0 / 27;
constexpr double kA61 = 1631.0 / 55296, kA62 = 175.0 / 512,
                 kA63 = 575.0 / 13824, kA64 = 44275.0 / 110592,
                 kA65 = 253.0 / 4096;
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 3.0 / 5, kC5 = 1.0,
                 kC6 = 7.0 / 8;
constexpr double kB51 = 37.0 / 378, kB53 = 250.0 / 621, kB54 = 125.0 / 594,
                 kB56 = 512.0 / 1771;
constexpr double kB41 = 2825.0 / 27648, kB43 = 18575.0 / 48384,
                 kB44 = 13525.0 / 55296, kB45 = 277.0 / 14336, kB46 = 1.0 / 4;

using State = std::vector<cplx>;  // z followed by tangent columns

struct FlowSystem {
  const TransportProblem& pr;
  int d;
  int ncols;
  double delta_sing;

  std::vector<cplx> field(const std::vector<cplx>& z, double u) const {
    return flow_field(pr.chart, z, pr.t_at(u), pr.s_at(u), pr.active,
                      pr.ambient);
  }

  void rhs(const State& y, double u, State& dy) const {
    std::vector<cplx> z(y.begin(), y.begin() + d);
    auto V = field(z, u);
    dy.resize(y.size());
    std::copy(V.begin(), V.end(), dy.begin());
    // directional derivative of the field for each tangent column
    for (int c = 0; c < ncols; ++c) {
      double wn = 0;
      for (int k = 0; k < d; ++k) wn = std::max(wn, std::abs(y[d * (c + 1) + k]));
      double zscale = 0;
      for (int k = 0; k < d; ++k) zscale = std::max(zscale, std::abs(z[k]));
      double h = 1e-6 * std::max(zscale, 1e-8) / std::max(wn, 1e-300);
      std::vector<cplx> zp(d), zm(d);
      for (int k = 0; k < d; ++k) {
        zp[k] = z[k] + h * y[d * (c + 1) + k];
        zm[k] = z[k] - h * y[d * (c + 1) + k];
      }
      auto Vp = field(zp, u);
      auto Vm = field(zm, u);
      for (int k = 0; k < d; ++k)
        dy[d * (c + 1) + k] = (Vp[k] - Vm[k]) / (2.0 * h);
    }
  }

  void check_singular(const std::vector<cplx>& z) const {
    if (delta_sing <= 0) return;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        double dist = std::sqrt(std::norm(z[i]) + std::norm(z[j]));
        if (dist < delta_sing)
          throw SingularApproach("trajectory entered the " +
                                 std::to_string(delta_sing) +
                                 "-ball around Sing(X_0)");
      }
  }

  void project(std::vector<cplx>& z, double u) const {
    auto dv = evaluate_defining(pr.chart, z, pr.t_at(u), pr.s_at(u));
    double g2 = 0;
    for (const auto& g : dv.gradient) g2 += std::norm(g);
    if (g2 < 1e-280) return;
    for (int k = 0; k < d; ++k)
      z[k] -= dv.value * std::conj(dv.gradient[k]) / g2;
  }
};

}  // namespace

FlowResult integrate_flow_point(const TransportProblem& pr,
                                const std::vector<cplx>& z0, double u0,
                                double u1,
                                const std::vector<std::vector<cplx>>& tangents,
                                const FlowOptions& opt) {
  const int d = pr.chart.dim();
  FlowSystem sys{pr, d, static_cast<int>(tangents.size()), opt.delta_sing};
  if (opt.delta_sing == 0.0) {
    double t_ref = std::max(pr.t_at(u1), pr.t_at(u0));
    sys.delta_sing = t_ref > 0 ? std::pow(t_ref, 1.0 / d) / 4.0 : 0.0;
  }

  State y(z0.begin(), z0.end());
  for (const auto& col : tangents) y.insert(y.end(), col.begin(), col.end());

  FlowResult out;
  if (u1 == u0) {
    out.z = z0;
    out.tangents = tangents;
    return out;
  }
  if (u1 < u0) throw InternalError("flow runs forward in the parameter");

  double u = u0;
  double h = (u1 - u0) / 16.0;
  State k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()),
      k6(y.size()), ytmp(y.size()), y5(y.size()), y4(y.size());
  int steps = 0;
  while (u < u1) {
    if (steps++ > opt.max_steps)
      throw StepUnderflow("flow exceeded the step budget");
    h = std::min(h, u1 - u);
    if (h < 1e-14 * std::max(1.0, u1))
      throw StepUnderflow("flow step size underflow");

    sys.rhs(y, u, k1);
    auto stage = [&](State& dst, std::initializer_list<std::pair<const State*, double>> terms) {
      dst = y;
      for (const auto& [ks, a] : terms)
        for (std::size_t i = 0; i < y.size(); ++i) dst[i] += h * a * (*ks)[i];
    };
    stage(ytmp, {{&k1, kA21}});
    sys.rhs(ytmp, u + kC2 * h, k2);
    stage(ytmp, {{&k1, kA31}, {&k2, kA32}});
    sys.rhs(ytmp, u + kC3 * h, k3);
    stage(ytmp, {{&k1, kA41}, {&k2, kA42}, {&k3, kA43}});
    sys.rhs(ytmp, u + kC4 * h, k4);
    stage(ytmp, {{&k1, kA51}, {&k2, kA52}, {&k3, kA53}, {&k4, kA54}});
    sys.rhs(ytmp, u + kC5 * h, k5);
    stage(ytmp, {{&k1, kA61}, {&k2, kA62}, {&k3, kA63}, {&k4, kA64}, {&k5, kA65}});
    sys.rhs(ytmp, u + kC6 * h, k6);

    double err = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      cplx v5 = y[i] + h * (kB51 * k1[i] + kB53 * k3[i] + kB54 * k4[i] +
                            kB56 * k6[i]);
      cplx v4 = y[i] + h * (kB41 * k1[i] + kB43 * k3[i] + kB44 * k4[i] +
                            kB45 * k5[i] + kB46 * k6[i]);
      y5[i] = v5;
      y4[i] = v4;
      double scale = opt.tol * (1.0 + std::abs(y[i]));
      err = std::max(err, std::abs(v5 - v4) / scale);
    }
    if (err <= 1.0) {
      y = y5;
      u += h;
      if (opt.project) {
        std::vector<cplx> z(y.begin(), y.begin() + d);
        sys.project(z, u);
        std::copy(z.begin(), z.end(), y.begin());
      }
      {
        std::vector<cplx> z(y.begin(), y.begin() + d);
        sys.check_singular(z);
      }
    }
    double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
  }

  out.z.assign(y.begin(), y.begin() + d);
  out.tangents.resize(tangents.size());
  for (std::size_t c = 0; c < tangents.size(); ++c)
    out.tangents[c].assign(y.begin() + d * (c + 1), y.begin() + d * (c + 2));
  out.steps = steps;
  return out;
}

std::vector<std::vector<cplx>> integrate_flow(
    const TransportProblem& pr, const std::vector<std::vector<cplx>>& starts,
    double u0, double u1, const FlowOptions& opt) {
  std::vector<std::vector<cplx>> out(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i)
    out[i] = integrate_flow_point(pr, starts[i], u0, u1, {}, opt).z;
  return out;
}

std::vector<int> GridIter::unpack(std::size_t lin) const {
  std::vector<int> idx(n);
  for (int ax = n - 1; ax >= 0; --ax) {
    idx[ax] = static_cast<int>(lin % N);
    lin /= N;
  }
  return idx;
}

std::size_t GridIter::pack(const std::vector<int>& idx) const {
  std::size_t lin = 0;
  for (int ax = 0; ax < n; ++ax)
    lin = lin * N + ((idx[ax] % N) + N) % N;
  return lin;
}

Eigen::VectorXd GridIter::theta(std::size_t lin) const {
  auto idx = unpack(lin);
  Eigen::VectorXd th(n);
  for (int ax = 0; ax < n; ++ax) th(ax) = kTwoPi * idx[ax] / N;
  return th;
}

TransportedTorus transport_lagrangian(const TransportProblem& pr,
                                      const LagrangianGraph& graph, double u,
                                      const FlowOptions& opt) {
  const int n = pr.n();
  const int N = graph.grid;
  GridIter gi{n, N};
  const std::size_t total = gi.size();

  // gradient of h on the grid (zero when h is empty)
  std::vector<std::vector<double>> dh(n);
  if (!graph.h.empty()) {
    for (int ax = 0; ax < n; ++ax) {
      std::vector<int> order(n, 0);
      order[ax] = 1;
      dh[ax] = graph.h.derivative_grid(order);
    }
  }

  TransportedTorus torus;
  torus.n = n;
  torus.grid = N;
  torus.u = u;
  torus.active = pr.active;
  torus.psi.resize(total);

  for (std::size_t lin = 0; lin < total; ++lin) {
    Eigen::VectorXd theta = gi.theta(lin);
    Eigen::VectorXd rho = pr.rho0;
    if (!graph.h.empty())
      for (int ax = 0; ax < n; ++ax) rho(ax) += dh[ax][lin];
    auto z = embed_graph_point(pr, theta, rho);
    torus.psi[lin] = (u == 0.0)
                         ? z
                         : integrate_flow_point(pr, z, 0.0, u, {}, opt).z;
  }

  // spectral frames: differentiate each coordinate of Psi in each angle
  const int d = pr.chart.dim();
  torus.frames.assign(total, std::vector<std::vector<cplx>>(
                                 n, std::vector<cplx>(d, cplx(0, 0))));
  double alias = 0;
  for (int comp = 0; comp < d; ++comp) {
    std::vector<double> re(total), im(total);
    for (std::size_t lin = 0; lin < total; ++lin) {
      re[lin] = torus.psi[lin][comp].real();
      im[lin] = torus.psi[lin][comp].imag();
    }
    FourierField fre = FourierField::from_grid(n, N, re);
    FourierField fim = FourierField::from_grid(n, N, im);
    alias = std::max({alias, fre.top_third_energy_fraction(),
                      fim.top_third_energy_fraction()});
    for (int ax = 0; ax < n; ++ax) {
      std::vector<int> order(n, 0);
      order[ax] = 1;
      auto dre = fre.derivative_grid(order);
      auto dim_ = fim.derivative_grid(order);
      for (std::size_t lin = 0; lin < total; ++lin)
        torus.frames[lin][ax][comp] = cplx(dre[lin], dim_[lin]);
    }
  }
  if (alias > 0.01)
    throw AliasedFrame("top-third spectral energy " + std::to_string(alias) +
                       " exceeds 1%; grid too coarse");
  return torus;
}

namespace {

std::vector<double> unwrap_grid(const GridIter& gi,
                                const std::vector<double>& raw, bool reversed) {
  std::vector<double> out(raw.size());
  std::vector<char> done(raw.size(), 0);
  out[0] = raw[0];
  done[0] = 1;
  const int n = gi.n;
  for (std::size_t lin = 1; lin < raw.size(); ++lin) {
    auto idx = gi.unpack(lin);
    // reference: step back along the last (or first) nonzero axis
    std::vector<int> ref = idx;
    if (!reversed) {
      for (int ax = n - 1; ax >= 0; --ax)
        if (idx[ax] > 0) {
          ref[ax] -= 1;
          break;
        }
    } else {
      for (int ax = 0; ax < n; ++ax)
        if (idx[ax] > 0) {
          ref[ax] -= 1;
          break;
        }
    }
    std::size_t rl = gi.pack(ref);
    if (!done[rl]) throw InternalError("unwrap order violated");
    double delta = wrap_angle(raw[lin] - raw[rl]);
    if (std::abs(delta) > kPi / 2.0)
      throw PhaseWrapFailure("adjacent grid phases differ by " +
                             std::to_string(delta));
    out[lin] = out[rl] + delta;
    done[lin] = 1;
  }
  return out;
}

}  // namespace

std::vector<double> pullback_phase(const TransportProblem& pr,
                                   const TransportedTorus& torus) {
  GridIter gi{torus.n, torus.grid};
  std::vector<double> raw(torus.grid_size());
  double t = pr.t_at(torus.u), s = pr.s_at(torus.u);
  for (std::size_t lin = 0; lin < raw.size(); ++lin) {
    TangentFrame fr;
    fr.base.z = torus.psi[lin];
    fr.base.t = t;
    fr.base.s = s;
    fr.vectors = torus.frames[lin];
    // phase of the t-relative form; t > 0 only scales the modulus
    auto vf = relative_volume_form(pr.chart, fr, t, s, ActiveParameter::T);
    raw[lin] = std::arg(vf.reduced);
  }
  auto unwrapped = unwrap_grid(gi, raw, false);
  if (torus.n > 1) {
    auto check = unwrap_grid(gi, raw, true);
    double dev = 0;
    for (std::size_t i = 0; i < raw.size(); ++i)
      dev = std::max(dev, std::abs(unwrapped[i] - check[i]));
    if (dev > 1e-9)
      throw PhaseWrapFailure("row/column unwrap disagree by " +
                             std::to_string(dev));
  }
  return unwrapped;
}

std::pair<std::vector<double>, std::vector<double>> phase_decomposition(
    const TransportProblem& pr, const TransportedTorus& torus) {
  auto theta1 = pullback_phase(pr, torus);
  std::vector<double> theta2(torus.grid_size());
  double t = pr.t_at(torus.u), s = pr.s_at(torus.u);
  for (std::size_t lin = 0; lin < theta2.size(); ++lin) {
    TangentFrame fr;
    fr.base.z = torus.psi[lin];
    fr.vectors = torus.frames[lin];
    auto vf = relative_volume_form(pr.chart, fr, t, s, ActiveParameter::T);
    double omega_abs = std::abs(vf.reduced) / (vf.divisor > 0 ? vf.divisor : 1.0);
    const int n = torus.n;
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g(i, j) = metric_pair(pr.ambient, torus.psi[lin], torus.frames[lin][i],
                              torus.frames[lin][j]);
    double det = g.determinant();
    if (det <= 0) throw DegenerateFrame("metric frame determinant <= 0");
    theta2[lin] = -std::log(omega_abs) + 0.5 * std::log(det);
  }
  return {theta1, theta2};
}

}  // namespace lagfib

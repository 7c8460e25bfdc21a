#include "lagfib/geometry.hpp"

#include <cmath>

#include "lagfib/errors.hpp"

namespace lagfib {

namespace {
constexpr double kDivisorEps = 1e-13;  // |z| below this counts as "on divisor"
}

struct ToricPotential::Impl {
  enum class Kind { FlatQuadratic, FubiniStudy, ExpSum, InducedModel, InducedLimit };
  Kind kind;
  int dim = 0;
  std::string id;

  // FlatQuadratic
  Eigen::MatrixXd A;

  // FubiniStudy
  double kappa = 1.0;

  // ExpSum: value = sum c_a exp(<w_a, x>)
  std::vector<std::pair<double, Eigen::VectorXd>> terms;
  bool integer_exponents = false;

  // Induced
  std::shared_ptr<const Impl> parent;
  int drop = -1;
  double c = 0.0;        // InducedModel: x_drop = c - sum x
  double x_clamp = 0.0;  // InducedLimit: converged probe depth

  Eigen::VectorXd lift(const Eigen::VectorXd& x) const {
    Eigen::VectorXd full(dim + 1);
    double xd = (kind == Kind::InducedModel) ? (c - x.sum()) : x_clamp;
    int j = 0;
    for (int k = 0; k <= dim; ++k) full(k) = (k == drop) ? xd : x(j++);
    return full;
  }

  // differential of the lift: rows = ambient coords, cols = retained coords
  Eigen::MatrixXd lift_jacobian() const {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dim + 1, dim);
    int j = 0;
    for (int k = 0; k <= dim; ++k) {
      if (k == drop) continue;
      B(k, j++) = 1.0;
    }
    if (kind == Kind::InducedModel)
      for (int j2 = 0; j2 < dim; ++j2) B(drop, j2) = -1.0;
    return B;
  }

  double value(const Eigen::VectorXd& x) const {
    switch (kind) {
      case Kind::FlatQuadratic:
        return 0.5 * x.dot(A * x);
      case Kind::FubiniStudy: {
        double s = 0;
        for (int k = 0; k < dim; ++k) s += std::exp(x(k));
        return kappa * std::log1p(s);
      }
      case Kind::ExpSum: {
        double s = 0;
        for (const auto& [cc, w] : terms) s += cc * std::exp(w.dot(x));
        return s;
      }
      case Kind::InducedModel:
        return parent->value(lift(x));
      case Kind::InducedLimit:
        // defined modulo an additive constant; anchor at x = 0
        return parent->value(lift(x)) -
               parent->value(lift(Eigen::VectorXd::Zero(dim)));
    }
    return 0;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    switch (kind) {
      case Kind::FlatQuadratic:
        return A * x;
      case Kind::FubiniStudy: {
        Eigen::VectorXd e(dim);
        double s = 1.0;
        for (int k = 0; k < dim; ++k) {
          e(k) = std::exp(x(k));
          s += e(k);
        }
        return (kappa / s) * e;
      }
      case Kind::ExpSum: {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
        for (const auto& [cc, w] : terms) g += cc * std::exp(w.dot(x)) * w;
        return g;
      }
      case Kind::InducedModel:
      case Kind::InducedLimit:
        return lift_jacobian().transpose() * parent->gradient(lift(x));
    }
    return Eigen::VectorXd::Zero(dim);
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
    switch (kind) {
      case Kind::FlatQuadratic:
        return A;
      case Kind::FubiniStudy: {
        Eigen::VectorXd sig = gradient(x) / kappa;
        return kappa * (Eigen::MatrixXd(sig.asDiagonal()) - sig * sig.transpose());
      }
      case Kind::ExpSum: {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
        for (const auto& [cc, w] : terms)
          H += cc * std::exp(w.dot(x)) * (w * w.transpose());
        return H;
      }
      case Kind::InducedModel:
      case Kind::InducedLimit: {
        Eigen::MatrixXd B = lift_jacobian();
        return B.transpose() * parent->hessian(lift(x)) * B;
      }
    }
    return Eigen::MatrixXd::Zero(dim, dim);
  }
};

namespace {

void validate_derivatives(const ToricPotential::Impl& im) {
  // Cross-check hand-coded gradient/Hessian by central differences at a few
  // fixed probes (construction-time contract).
  const double h = 1e-5;
  std::vector<Eigen::VectorXd> probes;
  probes.push_back(Eigen::VectorXd::Zero(im.dim));
  Eigen::VectorXd p1(im.dim);
  for (int k = 0; k < im.dim; ++k) p1(k) = 0.3 * (k + 1) - 0.2;
  probes.push_back(p1);
  for (const auto& x : probes) {
    Eigen::VectorXd g = im.gradient(x);
    Eigen::MatrixXd H = im.hessian(x);
    for (int k = 0; k < im.dim; ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      double gfd = (im.value(xp) - im.value(xm)) / (2 * h);
      double scale = std::max(1.0, std::abs(g(k)));
      if (std::abs(gfd - g(k)) > 1e-6 * scale)
        throw InternalError("potential gradient fails finite-difference check");
      Eigen::VectorXd hfd = (im.gradient(xp) - im.gradient(xm)) / (2 * h);
      for (int j = 0; j < im.dim; ++j) {
        double sc = std::max(1.0, std::abs(H(j, k)));
        if (std::abs(hfd(j) - H(j, k)) > 1e-6 * sc)
          throw InternalError("potential Hessian fails finite-difference check");
      }
    }
  }
}

ToricPotential finish(std::shared_ptr<ToricPotential::Impl> im) {
  validate_derivatives(*im);
  return ToricPotential(std::move(im));
}

}  // namespace

ToricPotential::ToricPotential(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

int ToricPotential::dim() const { return impl_->dim; }
const std::string& ToricPotential::id() const { return impl_->id; }

ToricPotential ToricPotential::flat(int dim) {
  return flat_quadratic(Eigen::MatrixXd::Identity(dim, dim));
}

ToricPotential ToricPotential::flat_quadratic(const Eigen::MatrixXd& A) {
  auto im = std::make_shared<Impl>();
  im->kind = Impl::Kind::FlatQuadratic;
  im->dim = static_cast<int>(A.rows());
  im->A = 0.5 * (A + A.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(im->A);
  if (llt.info() != Eigen::Success)
    throw NonPositiveDefinite("flat quadratic potential matrix");
  im->id = im->A.isIdentity(1e-14) ? "flat" : "flat-quadratic";
  return finish(im);
}

ToricPotential ToricPotential::fubini_study(int dim, double kappa) {
  if (kappa <= 0) throw ConfigError("fubini_study: kappa must be positive");
  auto im = std::make_shared<Impl>();
  im->kind = Impl::Kind::FubiniStudy;
  im->dim = dim;
  im->kappa = kappa;
  im->id = "fs(" + std::to_string(kappa) + ")";
  return finish(im);
}

ToricPotential ToricPotential::exp_sum(
    int dim, const std::vector<std::pair<double, Eigen::VectorXd>>& terms) {
  if (terms.empty()) throw ConfigError("exp_sum: no terms");
  auto im = std::make_shared<Impl>();
  im->kind = Impl::Kind::ExpSum;
  im->dim = dim;
  im->terms = terms;
  im->integer_exponents = true;
  for (const auto& [c, w] : terms) {
    if (c <= 0) throw ConfigError("exp_sum: coefficients must be positive");
    if (w.size() != dim) throw ConfigError("exp_sum: exponent size mismatch");
    for (int k = 0; k < dim; ++k) {
      double r = std::round(w(k));
      if (std::abs(w(k) - r) > 1e-12 || r < 0) im->integer_exponents = false;
    }
  }
  im->id = "exp-sum(" + std::to_string(terms.size()) + ")";
  return finish(im);
}

double ToricPotential::value(const Eigen::VectorXd& x) const {
  return impl_->value(x);
}
Eigen::VectorXd ToricPotential::gradient(const Eigen::VectorXd& x) const {
  return impl_->gradient(x);
}
Eigen::MatrixXd ToricPotential::hessian(const Eigen::VectorXd& x) const {
  return impl_->hessian(x);
}

Eigen::MatrixXd ToricPotential::hessian_inverse(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd H = hessian(x);
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success)
    throw NonPositiveDefinite("metric Hessian at queried point");
  return llt.solve(Eigen::MatrixXd::Identity(H.rows(), H.cols()));
}

Eigen::MatrixXcd ToricPotential::hermitian_metric(
    const std::vector<cplx>& z) const {
  const int d = impl_->dim;
  if (static_cast<int>(z.size()) != d)
    throw InternalError("hermitian_metric: dimension mismatch");
  bool on_divisor = false;
  for (const auto& zk : z)
    if (std::abs(zk) < kDivisorEps) on_divisor = true;

  using Impl = ToricPotential::Impl;
  if (impl_->kind == Impl::Kind::FubiniStudy) {
    double s = 1.0;
    for (const auto& zk : z) s += std::norm(zk);
    double beta = 1.0 / s;
    Eigen::MatrixXcd G(d, d);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        G(j, k) = impl_->kappa * beta *
                  ((j == k ? 1.0 : 0.0) - beta * std::conj(z[j]) * z[k]);
    return G;
  }
  if (impl_->kind == Impl::Kind::ExpSum && impl_->integer_exponents) {
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& [c, w] : impl_->terms) {
      // m_a(z)/z_j with the j-th exponent lowered by one; the factor w_j
      // kills terms where the lowering is illegal.
      std::vector<cplx> lowered(d);
      for (int j = 0; j < d; ++j) {
        if (w(j) < 0.5) {
          lowered[j] = cplx(0, 0);
          continue;
        }
        cplx m(1, 0);
        for (int l = 0; l < d; ++l) {
          int e = static_cast<int>(std::round(w(l))) - (l == j ? 1 : 0);
          for (int r = 0; r < e; ++r) m *= z[l];
        }
        lowered[j] = m;
      }
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          G(j, k) += c * w(j) * w(k) * lowered[j] * std::conj(lowered[k]);
    }
    return G;
  }
  if (on_divisor)
    throw LimitUndefined("metric does not extend across the divisor z_k = 0");
  Eigen::VectorXd x(d);
  for (int k = 0; k < d; ++k) x(k) = std::log(std::norm(z[k]));
  Eigen::MatrixXd H = hessian(x);
  Eigen::MatrixXcd G(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) G(j, k) = H(j, k) / (z[j] * std::conj(z[k]));
  return G;
}

ToricPotential ToricPotential::induce_local_model(int drop_index,
                                                  double c) const {
  if (!std::isfinite(c)) throw ConfigError("induce_local_model: c not finite");
  auto im = std::make_shared<Impl>();
  im->kind = Impl::Kind::InducedModel;
  im->dim = impl_->dim - 1;
  im->parent = impl_;
  im->drop = drop_index;
  im->c = c;
  im->id = impl_->id + "|model";
  return finish(im);
}

ToricPotential ToricPotential::induce_divisor_limit(int drop_index) const {
  auto im = std::make_shared<Impl>();
  im->kind = Impl::Kind::InducedLimit;
  im->dim = impl_->dim - 1;
  im->parent = impl_;
  im->drop = drop_index;
  im->id = impl_->id + "|divisor";

  // Probe x_drop -> -inf; the restriction exists when gradient and Hessian of
  // the retained variables converge (value is only defined up to a constant).
  Eigen::VectorXd probe(im->dim);
  for (int k = 0; k < im->dim; ++k) probe(k) = 0.17 * (k + 1);
  im->x_clamp = -30.0;
  Eigen::VectorXd g1 = im->gradient(probe);
  Eigen::MatrixXd H1 = im->hessian(probe);
  im->x_clamp = -40.0;
  Eigen::VectorXd g2 = im->gradient(probe);
  Eigen::MatrixXd H2 = im->hessian(probe);
  if ((g1 - g2).norm() > 1e-9 * std::max(1.0, g2.norm()) ||
      (H1 - H2).norm() > 1e-9 * std::max(1.0, H2.norm()))
    throw LimitUndefined("potential restriction diverges as x_" +
                         std::to_string(drop_index) + " -> -inf");
  return finish(im);
}

Eigen::VectorXd ToricPotential::invert_moment(const Eigen::VectorXd& rho,
                                              const Eigen::VectorXd& guess) const {
  Eigen::VectorXd x = guess;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd r = gradient(x) - rho;
    if (r.norm() <= 1e-13 * std::max(1.0, rho.norm())) return x;
    Eigen::VectorXd step = hessian(x).ldlt().solve(r);
    double lambda = 1.0;
    double r0 = r.norm();
    // damped Newton; convexity guarantees descent of |grad - rho|
    for (int back = 0; back < 40; ++back) {
      Eigen::VectorXd xn = x - lambda * step;
      if ((gradient(xn) - rho).norm() < r0) {
        x = xn;
        break;
      }
      lambda *= 0.5;
      if (back == 39) throw NoContraction("moment inversion stalled");
    }
  }
  throw NoContraction("moment inversion did not converge");
}

double ToricPotential::moment_margin(const Eigen::VectorXd& rho) const {
  using K = Impl::Kind;
  switch (impl_->kind) {
    case K::FlatQuadratic:
      return 1e30;
    case K::FubiniStudy: {
      double m = impl_->kappa - rho.sum();
      for (int k = 0; k < impl_->dim; ++k) m = std::min(m, rho(k));
      return m;
    }
    case K::ExpSum: {
      double m = 1e30;
      for (int k = 0; k < impl_->dim; ++k) m = std::min(m, rho(k));
      return m;
    }
    case K::InducedModel:
    case K::InducedLimit: {
      // conservative: margin of the ambient potential at the lifted moment
      // is not directly comparable; fall back to positivity of the Hessian
      // scale around the inverted point.
      return 1e30;
    }
  }
  return 1e30;
}

MomentFrame make_moment_frame(const ToricPotential& pot,
                              const Eigen::VectorXd& theta,
                              const Eigen::VectorXd& x) {
  MomentFrame f;
  f.theta = theta;
  f.x = x;
  f.rho = pot.gradient(x);
  return f;
}

Eigen::VectorXd moment_map(const ToricPotential& pot, const Eigen::VectorXd& x) {
  return pot.gradient(x);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> metric_hessian(
    const ToricPotential& pot, const Eigen::VectorXd& x) {
  Eigen::MatrixXd H = pot.hessian(x);
  Eigen::MatrixXd Hinv = pot.hessian_inverse(x);
  return {H, Hinv};
}

Eigen::VectorXd base_projection(const std::vector<cplx>& z, double t) {
  double prod = 1.0;
  for (const auto& zk : z) prod *= std::abs(zk);
  if (std::abs(prod - std::abs(t)) > 1e-8 * std::max(std::abs(t), prod))
    throw OffHypersurface("prod |z_k| != |t|");
  Eigen::VectorXd out(z.size());
  double mn = std::norm(z[0]);
  for (const auto& zk : z) mn = std::min(mn, std::norm(zk));
  for (std::size_t k = 0; k < z.size(); ++k) out(k) = std::norm(z[k]) - mn;
  return out;
}

}  // namespace lagfib

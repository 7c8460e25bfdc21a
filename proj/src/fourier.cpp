#include "lagfib/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

#include "lagfib/errors.hpp"

namespace lagfib {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
// Plans are cached per (dim, N) with FFTW_ESTIMATE so repeated runs pick the
// same algorithm (bit-reproducible output).
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  struct Entry {
    fftw_plan r2c;
    fftw_plan c2r;
    std::size_t rsize, csize;
  };

  const Entry& get(int dim, int n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(dim, n);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    std::vector<int> dims(dim, n);
    std::size_t rsize = 1, csize = 1;
    for (int k = 0; k < dim - 1; ++k) csize *= n;
    csize *= n / 2 + 1;
    for (int k = 0; k < dim; ++k) rsize *= n;

    double* rbuf = fftw_alloc_real(rsize);
    fftw_complex* cbuf = fftw_alloc_complex(csize);
    Entry e;
    e.rsize = rsize;
    e.csize = csize;
    // FFTW_UNALIGNED: plans must run on arbitrary caller buffers.
    e.r2c = fftw_plan_dft_r2c(dim, dims.data(), rbuf, cbuf,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    e.c2r = fftw_plan_dft_c2r(dim, dims.data(), cbuf, rbuf,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(rbuf);
    fftw_free(cbuf);
    return cache_.emplace(key, e).first->second;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, Entry> cache_;
};

}  // namespace

FourierField::FourierField(int dim, int modes_per_axis)
    : dim_(dim), n_(modes_per_axis) {
  if (dim < 1 || dim > 3) throw InternalError("FourierField: dim must be 1..3");
  if (n_ < 4 || (n_ & (n_ - 1)) != 0)
    throw ConfigError("FourierField: modes per axis must be a power of 2, >= 4");
  rsize_ = 1;
  for (int k = 0; k < dim_; ++k) rsize_ *= n_;
  csize_ = rsize_ / n_ * (n_ / 2 + 1);
  c_.assign(csize_, cplx(0.0, 0.0));
}

FourierField FourierField::from_grid(int dim, int modes_per_axis,
                                     const std::vector<double>& values,
                                     double* removed_mean) {
  FourierField f(dim, modes_per_axis);
  if (values.size() != f.rsize_)
    throw InternalError("FourierField::from_grid: wrong grid size");
  const auto& plans = PlanCache::instance().get(dim, modes_per_axis);
  std::vector<double> work(values);
  fftw_execute_dft_r2c(plans.r2c, work.data(),
                       reinterpret_cast<fftw_complex*>(f.c_.data()));
  double inv = 1.0 / static_cast<double>(f.rsize_);
  for (auto& z : f.c_) z *= inv;
  if (removed_mean) *removed_mean = f.c_[0].real();
  f.c_[0] = cplx(0.0, 0.0);
  return f;
}

std::vector<double> FourierField::to_grid() const {
  const auto& plans = PlanCache::instance().get(dim_, n_);
  std::vector<cplx> work(c_);
  std::vector<double> out(rsize_);
  fftw_execute_dft_c2r(plans.c2r,
                       reinterpret_cast<fftw_complex*>(work.data()),
                       out.data());
  return out;
}

std::vector<double> FourierField::derivative_grid(
    const std::vector<int>& order) const {
  if (static_cast<int>(order.size()) != dim_)
    throw InternalError("derivative_grid: order size mismatch");
  std::vector<cplx> work(c_);
  // iterate half-spectrum multi-indices
  std::vector<int> idx(dim_, 0);
  int last = n_ / 2 + 1;
  for (std::size_t lin = 0; lin < csize_; ++lin) {
    cplx factor(1.0, 0.0);
    bool kill = false;
    for (int ax = 0; ax < dim_; ++ax) {
      int j = idx[ax];
      int k = (ax == dim_ - 1) ? j : freq(j);
      if (order[ax] > 0) {
        if (std::abs(k) == n_ / 2 && (order[ax] % 2 == 1)) {
          kill = true;  // odd derivative of the Nyquist mode has no real repr
          break;
        }
        cplx ik(0.0, static_cast<double>(k));
        for (int r = 0; r < order[ax]; ++r) factor *= ik;
      }
    }
    work[lin] = kill ? cplx(0, 0) : work[lin] * factor;
    for (int ax = dim_ - 1; ax >= 0; --ax) {
      int lim = (ax == dim_ - 1) ? last : n_;
      if (++idx[ax] < lim) break;
      idx[ax] = 0;
    }
  }
  const auto& plans = PlanCache::instance().get(dim_, n_);
  std::vector<double> out(rsize_);
  fftw_execute_dft_c2r(plans.c2r,
                       reinterpret_cast<fftw_complex*>(work.data()),
                       out.data());
  return out;
}

void FourierField::scale(double a) {
  for (auto& z : c_) z *= a;
  c_[0] = cplx(0, 0);
}

void FourierField::axpy(double a, const FourierField& other) {
  if (other.dim_ != dim_ || other.n_ != n_)
    throw InternalError("FourierField::axpy: shape mismatch");
  for (std::size_t i = 0; i < csize_; ++i) c_[i] += a * other.c_[i];
  c_[0] = cplx(0, 0);
}

namespace {
std::size_t half_spectrum_index(int dim, int n, std::vector<int> m) {
  // reduce to the representative with last frequency in [0, N/2]
  if (m[dim - 1] < 0)
    for (auto& v : m) v = -v;
  std::size_t lin = 0;
  for (int ax = 0; ax < dim; ++ax) {
    int j = m[ax];
    if (ax < dim - 1) {
      if (j < 0) j += n;
    }
    lin = lin * ((ax == dim - 1) ? (n / 2 + 1) : n) + j;
  }
  return lin;
}
}  // namespace

void FourierField::add_cosine(const std::vector<int>& m, double amplitude) {
  bool flip = m[dim_ - 1] < 0;
  std::size_t lin = half_spectrum_index(dim_, n_, m);
  (void)flip;
  bool self_conj = true;
  for (int v : m)
    if (v != 0 && std::abs(v) != n_ / 2) self_conj = false;
  // cos(m.theta) = (e^{im.theta} + c.c.)/2; with half-spectrum storage the
  // stored entry carries the +m part unless the mode is self-conjugate.
  c_[lin] += cplx(self_conj ? amplitude : amplitude / 2.0, 0.0);
  if (lin == 0) c_[0] = cplx(0, 0);
}

void FourierField::add_sine(const std::vector<int>& m, double amplitude) {
  bool flip = m[dim_ - 1] < 0 ||
              (m[dim_ - 1] == 0 && [&] {
                for (int ax = 0; ax < dim_; ++ax) {
                  if (m[ax] > 0) return false;
                  if (m[ax] < 0) return true;
                }
                return false;
              }());
  std::size_t lin = half_spectrum_index(dim_, n_, m);
  double s = flip ? -1.0 : 1.0;
  // sin(m.theta) = (e^{im.theta} - c.c.)/(2i): coefficient -i/2 at +m
  c_[lin] += cplx(0.0, -s * amplitude / 2.0);
  if (lin == 0) c_[0] = cplx(0, 0);
}

double FourierField::l2() const {
  // Parseval with Hermitian doubling: skip the self-conjugate planes' halving
  // by reconstructing from the grid instead; exactness is not needed here.
  double s = 0;
  auto g = to_grid();
  for (double v : g) s += v * v;
  return std::sqrt(s / static_cast<double>(rsize_));
}

double FourierField::top_third_energy_fraction() const {
  double total = 0, top = 0;
  std::vector<int> idx(dim_, 0);
  int last = n_ / 2 + 1;
  for (std::size_t lin = 0; lin < csize_; ++lin) {
    double e = std::norm(c_[lin]);
    bool high = false;
    for (int ax = 0; ax < dim_; ++ax) {
      int j = idx[ax];
      int k = (ax == dim_ - 1) ? j : freq(j);
      if (std::abs(k) > n_ / 3) high = true;
    }
    total += e;
    if (high) top += e;
    for (int ax = dim_ - 1; ax >= 0; --ax) {
      int lim = (ax == dim_ - 1) ? last : n_;
      if (++idx[ax] < lim) break;
      idx[ax] = 0;
    }
  }
  return total > 0 ? top / total : 0.0;
}

double FourierField::grid_max_abs() const {
  double m = 0;
  for (double v : to_grid()) m = std::max(m, std::abs(v));
  return m;
}

double grid_mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double grid_sup(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace lagfib

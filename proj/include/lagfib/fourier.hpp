#ifndef LAGFIB_FOURIER_HPP
#define LAGFIB_FOURIER_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "lagfib/util.hpp"

namespace lagfib {

/// Real-valued mean-zero function on the n-torus, stored as the half-spectrum
/// of a real FFT (Hermitian symmetry is structural, not checked). Frequencies
/// run over m in (-N/2, N/2]^n; the coefficient at m = 0 is pinned to zero so
/// every field is a valid exact-graph generator.
class FourierField {
 public:
  FourierField() = default;
  FourierField(int dim, int modes_per_axis);

  /// Forward transform of grid values (row-major, theta_k = 2*pi*j/N).
  /// The mean is removed and reported separately.
  static FourierField from_grid(int dim, int modes_per_axis,
                                const std::vector<double>& values,
                                double* removed_mean = nullptr);

  int dim() const { return dim_; }
  int modes() const { return n_; }
  std::size_t grid_size() const { return rsize_; }
  bool empty() const { return dim_ == 0; }

  /// Inverse transform to grid values (exactly real by construction).
  std::vector<double> to_grid() const;

  /// Grid values of a mixed partial derivative; `order[k]` counts
  /// theta_k-derivatives. Odd orders zero the Nyquist bin of that axis.
  std::vector<double> derivative_grid(const std::vector<int>& order) const;

  void scale(double a);
  void axpy(double a, const FourierField& other);  // this += a*other

  /// Set the single cosine mode cos(m.theta) with amplitude a (plus whatever
  /// is already stored there). m must have a nonzero entry.
  void add_cosine(const std::vector<int>& m, double amplitude);
  void add_sine(const std::vector<int>& m, double amplitude);

  /// l2 norm of the coefficient vector (Parseval, grid-mean-square).
  double l2() const;

  /// Fraction of spectral energy carried by modes with any |m_k| > N/3.
  /// Used as the aliasing guard.
  double top_third_energy_fraction() const;

  const std::vector<cplx>& coefficients() const { return c_; }
  std::vector<cplx>& coefficients() { return c_; }

  /// Grid sup norm helpers used by the norm surrogates.
  double grid_max_abs() const;

 private:
  friend class FftPlans;
  int dim_ = 0;
  int n_ = 0;                  // modes per axis
  std::size_t rsize_ = 0;      // N^dim
  std::size_t csize_ = 0;      // N^(dim-1) * (N/2+1)
  std::vector<cplx> c_;

  // signed frequency of index j on a full axis
  int freq(int j) const { return j <= n_ / 2 ? j : j - n_; }
};

/// Mean value of grid data (row-major full grid).
double grid_mean(const std::vector<double>& v);
double grid_sup(const std::vector<double>& v);

}  // namespace lagfib

#endif

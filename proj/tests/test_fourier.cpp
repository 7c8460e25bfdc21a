#include <doctest.h>

#include <cmath>

#include "lagfib/fourier.hpp"

using namespace lagfib;

TEST_CASE("round trip is real and exact on band-limited data") {
  const int N = 32;
  std::vector<double> v(N);
  for (int j = 0; j < N; ++j) {
    double th = kTwoPi * j / N;
    v[j] = 0.3 * std::cos(th) - 1.25 * std::sin(3 * th) + 0.01 * std::cos(7 * th);
  }
  double mean = 0;
  auto f = FourierField::from_grid(1, N, v, &mean);
  CHECK(std::abs(mean) < 1e-15);
  auto back = f.to_grid();
  for (int j = 0; j < N; ++j) CHECK(back[j] == doctest::Approx(v[j]).epsilon(1e-13));
}

TEST_CASE("mean removal and mean-zero pin") {
  const int N = 16;
  std::vector<double> v(N, 2.5);
  for (int j = 0; j < N; ++j) v[j] += std::sin(kTwoPi * j / N);
  double mean = 0;
  auto f = FourierField::from_grid(1, N, v, &mean);
  CHECK(mean == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(std::abs(grid_mean(f.to_grid())) < 1e-14);
}

TEST_CASE("spectral derivative matches analytic derivative") {
  const int N = 64;
  std::vector<double> v(N);
  for (int j = 0; j < N; ++j) {
    double th = kTwoPi * j / N;
    v[j] = std::cos(2 * th) + 0.5 * std::sin(5 * th);
  }
  auto f = FourierField::from_grid(1, N, v);
  auto d1 = f.derivative_grid({1});
  auto d2 = f.derivative_grid({2});
  for (int j = 0; j < N; ++j) {
    double th = kTwoPi * j / N;
    CHECK(d1[j] == doctest::Approx(-2 * std::sin(2 * th) + 2.5 * std::cos(5 * th))
                       .epsilon(1e-12));
    CHECK(d2[j] == doctest::Approx(-4 * std::cos(2 * th) - 12.5 * std::sin(5 * th))
                       .epsilon(1e-12));
  }
}

TEST_CASE("2d mixed derivative") {
  const int N = 16;
  std::vector<double> v(N * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double t1 = kTwoPi * a / N, t2 = kTwoPi * b / N;
      v[a * N + b] = std::sin(t1) * std::cos(2 * t2);
    }
  auto f = FourierField::from_grid(2, N, v);
  auto dxy = f.derivative_grid({1, 1});
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double t1 = kTwoPi * a / N, t2 = kTwoPi * b / N;
      CHECK(dxy[a * N + b] ==
            doctest::Approx(std::cos(t1) * (-2 * std::sin(2 * t2))).epsilon(1e-12));
    }
}

TEST_CASE("cosine and sine injection agree with grids") {
  const int N = 32;
  FourierField f(2, N);
  f.add_cosine({1, 0}, 0.7);
  f.add_sine({2, 3}, -0.4);
  auto g = f.to_grid();
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double t1 = kTwoPi * a / N, t2 = kTwoPi * b / N;
      double want = 0.7 * std::cos(t1) - 0.4 * std::sin(2 * t1 + 3 * t2);
      CHECK(g[a * N + b] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("aliasing guard flags rough data only") {
  const int N = 32;
  std::vector<double> smooth(N), rough(N);
  for (int j = 0; j < N; ++j) {
    double th = kTwoPi * j / N;
    smooth[j] = std::cos(th);
    rough[j] = std::cos(th) + 0.8 * std::cos(15 * th);
  }
  CHECK(FourierField::from_grid(1, N, smooth).top_third_energy_fraction() <
        1e-14);
  CHECK(FourierField::from_grid(1, N, rough).top_third_energy_fraction() > 0.1);
}

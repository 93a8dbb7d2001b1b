#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fio/decomp.hpp"
#include "support.hpp"

using namespace fio;

TEST_CASE("bump profile") {
  const BumpProfile phi;
  CHECK(phi(0.0) == 1.0);
  CHECK(phi(0.5) == 1.0);
  CHECK(phi(1.0) == 0.0);
  CHECK(phi(3.0) == 0.0);
  double prev = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = phi(0.5 + 0.5 * i / 1000.0);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v <= prev);
    prev = v;
  }
  // Symmetric glue: phi(3/4) = 1/2.
  CHECK(phi(0.75) == doctest::Approx(0.5).epsilon(1e-15));
  // Jets against central differences.
  for (double t : {0.55, 0.62, 0.75, 0.9, 0.97}) {
    const Jet<double> j = phi.jet(t);
    const double h = 1e-5;
    CHECK(j.v == phi(t));
    CHECK(j.d1 == doctest::Approx((phi(t + h) - phi(t - h)) / (2 * h)).epsilon(1e-7));
    CHECK(j.d2 == doctest::Approx((phi(t + h) - 2 * phi(t) + phi(t - h)) / (h * h)).epsilon(1e-4));
  }
  CHECK_THROWS_AS(BumpProfile(1.0, 0.5), DomainError);
}

TEST_CASE("Littlewood-Paley partition of unity") {
  for (int N : {8, 16, 64, 128}) {
    const Grid g(2, N);
    const LPFamily lp(g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = 0.0;
      for (int j = 0; j < lp.count(); ++j) s += lp.shell(j)[i];
      worst = std::max(worst, std::abs(s - 1.0));
    }
    CHECK(worst <= 1e-12);
  }
  const Grid g3(3, 16);
  const LPFamily lp3(g3);
  for (std::size_t i = 0; i < g3.size(); ++i) {
    double s = 0.0;
    for (int j = 0; j < lp3.count(); ++j) s += lp3.shell(j)[i];
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
}

TEST_CASE("Littlewood-Paley supports") {
  const Grid g(2, 64);
  const LPFamily lp(g);
  CHECK(lp.top() == 7);
  CHECK(lp.shell(0)[0] == 1.0);
  for (int j = 1; j < lp.count(); ++j) CHECK(lp.shell(j)[0] == 0.0);
  for (int j = 1; j < lp.count(); ++j) {
    const auto [lo, hi] = LPFamily::support(j);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = g.frequency_norm(i);
      if (t < lo || t > hi) CHECK(lp.shell(j)[i] == 0.0);
    }
  }
  // Dilation structure psi_j(t) = psi_1(2^(1-j) t).
  for (int j = 2; j < lp.count(); ++j)
    for (double t : {0.3, 1.7, 5.0, 22.0, 40.0})
      CHECK(lp.profile(j, t) == doctest::Approx(lp.profile(1, std::ldexp(t, 1 - j))).epsilon(1e-14));

  // |k| = 24 lies in the supports [8, 32] and [16, 64], i.e. shells 5 and 6.
  const std::size_t at = g.flat({24, 0, 0});
  for (int j = 0; j < lp.count(); ++j)
    if (j != 5 && j != 6) CHECK(lp.shell(j)[at] == 0.0);
  CHECK(lp.shell(5)[at] + lp.shell(6)[at] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lp.shell(5)[at] > 0.0);
  CHECK(lp.shell(6)[at] > 0.0);
  const auto hits = lp.shells_at(24.0);
  CHECK(hits == std::vector<int>{5, 6});
}

TEST_CASE("Littlewood-Paley jets") {
  const LPFamily lp(Grid(2, 64));
  for (int j : {0, 1, 3, 6})
    for (double t : {0.7, 1.3, 3.1, 9.0, 40.0}) {
      const double h = 1e-5 * std::max(1.0, t);
      const Jet<double> d = lp.jet(j, t);
      CHECK(d.v == doctest::Approx(lp.profile(j, t)).epsilon(1e-14));
      CHECK(d.d1 == doctest::Approx((lp.profile(j, t + h) - lp.profile(j, t - h)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("annular profile normalization") {
  const AnnularProfile Psi;
  CHECK(Psi(3.0) == 0.0);
  CHECK(Psi(0.5) == 0.0);
  CHECK(Psi(2.0) == 0.0);
  CHECK(Psi(1.0) > 0.0);
  for (double t : {4.0, 0.2, 1.0, 7.3, 90.5, 1.0 / 3.0})
    CHECK(std::abs(Psi.identity_integral(t) - 1.0) <= 1e-6);

  // Independent oracle for c: composite Simpson in log u on a fine grid.
  const BumpProfile phi;
  const int n = 20000;
  const double a = std::log(0.5);
  const double b = std::log(2.0);
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = std::exp(a + (b - a) * i / n);
    const double h = phi(0.5 * u) - phi(u);
    acc += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) * h * h;
  }
  acc *= (b - a) / (3.0 * n);
  CHECK(Psi.normalization() == doctest::Approx(acc).epsilon(1e-10));

  // For |xi| = 0.2 only sigma in [2.5, 10] contributes.
  CHECK(Psi(2.4 * 0.2) == 0.0);
  CHECK(Psi(10.1 * 0.2) == 0.0);
}

TEST_CASE("sphere quadrature exactness") {
  const SphereQuadrature q2 = make_sphere_quadrature(2, 256);
  double area = 0.0;
  for (double w : q2.weights) area += w;
  CHECK(area == doctest::Approx(kTwoPi).epsilon(1e-13));
  // int cos^2(m a) da = pi for m up to the degree / 2.
  for (int m : {1, 5, 60, 127}) {
    double s = 0.0;
    for (std::size_t i = 0; i < q2.size(); ++i) {
      const double a = std::atan2(q2.nodes[i][1], q2.nodes[i][0]);
      s += q2.weights[i] * std::cos(m * a) * std::cos(m * a);
    }
    CHECK(s == doctest::Approx(kPi).epsilon(1e-10));
  }

  const SphereQuadrature q3 = make_sphere_quadrature(3, 26);
  CHECK(q3.size() == 26u * 52u);
  CHECK(q3.degree == 51);
  auto integrate = [&](auto f) {
    double s = 0.0;
    for (std::size_t i = 0; i < q3.size(); ++i) s += q3.weights[i] * f(q3.nodes[i]);
    return s;
  };
  CHECK(integrate([](const Point&) { return 1.0; }) == doctest::Approx(4 * kPi).epsilon(1e-12));
  // int x^2 = 4 pi / 3; int x^2 y^2 z^2 = 4 pi / 105; int z^10 = 4 pi / 11.
  CHECK(std::abs(integrate([](const Point& p) { return p[0] * p[0]; }) - 4 * kPi / 3) < 1e-10);
  CHECK(std::abs(integrate([](const Point& p) { return p[0] * p[0] * p[1] * p[1] * p[2] * p[2]; }) -
                 4 * kPi / 105) < 1e-10);
  CHECK(std::abs(integrate([](const Point& p) { return std::pow(p[2], 10); }) - 4 * kPi / 11) < 1e-10);
  CHECK(std::abs(integrate([](const Point& p) { return std::pow(p[0], 7) * p[1]; })) < 1e-10);
}

TEST_CASE("cap normalizer") {
  const SphereQuadrature q = make_sphere_quadrature(2, 256);
  const BumpProfile phi;
  for (double sigma : {1.0, 0.25, 1.0 / 64, 4.0, 16.0}) {
    const double c = cap_normalizer(sigma, q);
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Point& v = q.nodes[i];
      const double d = std::hypot(1.0 - v[0], v[1]);
      s += q.weights[i] * std::pow(phi(d / std::sqrt(sigma)), 2);
    }
    CHECK(c * c * s == doctest::Approx(1.0).epsilon(1e-8));
    // The equispaced rule converges spectrally once the cap holds enough nodes.
    const double tol = sigma >= 1.0 ? 1e-8 : (sigma >= 0.25 ? 1e-5 : 1e-2);
    CHECK(cap_normalizer_exact(sigma, 2) == doctest::Approx(c).epsilon(tol));
  }
  CHECK(cap_normalizer(16.0, q) == doctest::Approx(1.0 / std::sqrt(kTwoPi)).epsilon(0.05));
  CHECK(cap_normalizer(0.25, q) >= cap_normalizer(1.0, q));
  CHECK(cap_normalizer(1.0, q) >= cap_normalizer(4.0, q));
  CHECK_THROWS_AS(cap_normalizer(1e-4, q), ResolutionError);
  CHECK_THROWS_AS(cap_normalizer(0.0, q), DomainError);

  // n = 3 against the polar reduction.
  const SphereQuadrature q3 = make_sphere_quadrature(3, 26);
  for (double sigma : {1.0, 4.0})
    CHECK(cap_normalizer_exact(sigma, 3) == doctest::Approx(cap_normalizer(sigma, q3)).epsilon(1e-6));
  CHECK(cap_normalizer_exact(64.0, 3) == doctest::Approx(1.0 / std::sqrt(4 * kPi)).epsilon(1e-12));
}

TEST_CASE("parabolic localizer support and decay") {
  const Grid g(2, 128);
  const Point e1{1.0, 0.0, 0.0};
  const ParabolicLocalizer loc = make_parabolic_localizer(g, e1);
  CHECK(loc.at(0) == 0.0);
  CHECK(loc.at(g.flat({0, 100, 0})) == 0.0);
  const double v64 = loc.at(g.flat({64 - 128, 0, 0}));  // Nyquist row holds -64
  CHECK(v64 == 0.0);  // k = (-64, 0) points away from e1
  const double v = loc.at(g.flat({63, 0, 0}));
  CHECK(v > 0.0);
  // Pinned decay constant: phi_w(k) <= C |k|^((n-1)/4) along the axis.
  double ratio = 0.0;
  for (std::size_t e = 0; e < loc.index.size(); ++e) {
    const double t = g.frequency_norm(loc.index[e]);
    ratio = std::max(ratio, loc.value[e] / std::pow(t, 0.25));
  }
  MESSAGE("decay constant C = " << ratio);
  CHECK(ratio == doctest::Approx(0.767754).epsilon(1e-4));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.frequency_norm(i);
    const double value = loc.at(i);
    if (t < 0.125) CHECK(value == 0.0);
    else if (direction_distance(g.lattice(i), 2, e1) > 2.0 / std::sqrt(t)) CHECK(value == 0.0);
  }
  CHECK_THROWS_AS(make_parabolic_localizer(g, {1.0, 1.0, 0.0}), DomainError);
}

TEST_CASE("localizer sigma refinement") {
  const Grid g(2, 64);
  const Point w{std::cos(0.3), std::sin(0.3), 0.0};
  LocalizerSettings fine;
  fine.sigma_nodes_per_octave = 128;
  const ParabolicLocalizer a = make_parabolic_localizer(g, w);
  const ParabolicLocalizer b = make_parabolic_localizer(g, w, fine);
  CHECK(max_abs_diff(a.multiplier().weights, b.multiplier().weights) <= 1e-6);
}

TEST_CASE("square function weight") {
  const Grid g(2, 64);
  const LocalizerBank bank(g, make_sphere_quadrature(2, 256));
  const Multiplier G2 = square_function_weight(bank);
  CHECK(G2.weights[0] == cplx(0.0));
  const double at32 = G2.weights[g.flat({32 - 64, 0, 0})].real();
  CHECK(at32 > 0.0);

  const LocalizerBank bank2(g, make_sphere_quadrature(2, 512));
  const Multiplier G2b = square_function_weight(bank2);
  CHECK(G2b.weights[g.flat({-32, 0, 0})].real() == doctest::Approx(at32).epsilon(0.01));

  // Spread over the shell |k| = 32 (lattice points within 1/2 of the circle).
  double lo = 1e300;
  double hi = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.frequency_norm(i);
    if (std::abs(t - 31.5) > 0.5) continue;
    lo = std::min(lo, G2.weights[i].real());
    hi = std::max(hi, G2.weights[i].real());
  }
  MESSAGE("G^2 on shell: [" << lo << ", " << hi << "]");
  CHECK((hi - lo) / hi <= 0.05);
}

// The low-frequency lattice is coarse: near |k| = 1 only a handful of points
// carry the kernel mass, and how phi_w weighs them depends on the angle of w
// against the axes. The spread is therefore independent of N.
TEST_CASE("localizer kernel l1 uniformity") {
  const Grid g(2, 64);
  const Grid g2(2, 128);
  Rng rng(2024);
  std::vector<Point> dirs;
  for (int i = 0; i < 16; ++i) {
    const double a = kTwoPi * rng.uniform();
    dirs.push_back({std::cos(a), std::sin(a), 0.0});
  }
  const auto locs = make_parabolic_localizers(g, dirs);
  const auto locs2 = make_parabolic_localizers(g2, dirs);
  double lo = 1e300;
  double hi = 0.0;
  for (std::size_t i = 0; i < locs.size(); ++i) {
    const double v = localizer_kernel_l1(locs[i]);
    CHECK(localizer_kernel_l1(locs2[i]) == doctest::Approx(v).epsilon(1e-3));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  MESSAGE("kernel l1 range [" << lo << ", " << hi << "]");
  CHECK(hi < 0.25);
  CHECK(lo > 0.1);
}

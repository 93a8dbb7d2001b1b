#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fio/grid.hpp"
#include "support.hpp"

using namespace fio;
using fio::testing::plane_wave;
using fio::testing::random_function;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(2, 12), DomainError);
  CHECK_THROWS_AS(Grid(2, 4), DomainError);
  CHECK_THROWS_AS(Grid(1, 16), DomainError);
  const Grid g(2, 16);
  CHECK(g.size() == 256);
  CHECK(g.dx() == doctest::Approx(kTwoPi / 16));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.flat(g.lattice(i)) == i);
  CHECK(g.lattice(g.flat({-8, 7, 0}))[0] == -8);
}

TEST_CASE("forward transform of constants and plane waves") {
  const Grid g(2, 16);
  GridFunction one(g);
  std::fill(one.values.begin(), one.values.end(), cplx(1.0));
  const Spectrum s = forward_dft(one);
  CHECK(std::abs(s.coeffs[0] - 4.0 * kPi * kPi) < 1e-12);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(std::abs(s.coeffs[i]) < 1e-12);

  const Spectrum w = forward_dft(plane_wave(g, {3, 0, 0}));
  const std::size_t at = g.flat({3, 0, 0});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx expect = i == at ? cplx(4.0 * kPi * kPi) : cplx(0.0);
    CHECK(std::abs(w.coeffs[i] - expect) < 1e-11);
  }
}

TEST_CASE("Parseval against direct summation") {
  const Grid g(2, 16);
  const GridFunction f = random_function(g, 7);
  // Direct O(N^4) DFT as oracle for the transform itself.
  Spectrum direct(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Lattice k = g.lattice(i);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Lattice o = g.offsets(j);
      const double phase = g.dx() * (k[0] * o[0] + k[1] * o[1]);
      acc += f.values[j] * std::exp(cplx(0.0, -phase));
    }
    direct.coeffs[i] = acc * g.cell();
  }
  const Spectrum fast = forward_dft(f);
  CHECK(max_abs_diff(fast.coeffs, direct.coeffs) < 1e-11 * max_abs(direct.coeffs));

  double space = 0.0;
  double freq = 0.0;
  for (const auto& v : f.values) space += std::norm(v);
  for (const auto& c : direct.coeffs) freq += std::norm(c);
  space *= g.cell();
  freq /= std::pow(kTwoPi, 2);
  CHECK(std::abs(space - freq) <= 1e-11 * space);
}

TEST_CASE("inverse transform") {
  const Grid g(2, 32);
  const GridFunction f = random_function(g, 3);
  const GridFunction back = inverse_dft(forward_dft(f));
  CHECK(max_abs_diff(back.values, f.values) <= 1e-12 * max_abs(f.values));

  Spectrum delta(g);
  delta.coeffs[0] = 4.0 * kPi * kPi;
  for (const auto& v : inverse_dft(delta).values) CHECK(std::abs(v - 1.0) < 1e-12);

  Spectrum mode(g);
  mode.coeffs[g.flat({0, 5, 0})] = 4.0 * kPi * kPi;
  const GridFunction wave = inverse_dft(mode);
  CHECK(max_abs_diff(wave.values, plane_wave(g, {0, 5, 0}).values) < 1e-12);
}

TEST_CASE("multipliers") {
  const Grid g(2, 32);
  const GridFunction f = random_function(g, 11);
  CHECK(max_abs_diff(apply_multiplier(Multiplier(g), f).values, f.values) <= 1e-12 * max_abs(f.values));
  CHECK(max_abs_diff(apply_multiplier(sobolev_weight(g, 0.0), f).values, f.values) <=
        1e-12 * max_abs(f.values));

  const Multiplier m1 = sobolev_weight(g, cplx(-0.7, 2.0));
  const Multiplier m2 = radial_multiplier(g, [](double t) { return std::exp(-0.1 * t); });
  const GridFunction lhs = apply_multiplier(m1, apply_multiplier(m2, f));
  const GridFunction rhs = apply_multiplier(m1 * m2, f);
  CHECK(max_abs_diff(lhs.values, rhs.values) <= 1e-11 * max_abs(rhs.values));

  // Linearity.
  const GridFunction h = random_function(g, 12);
  GridFunction combo(g);
  for (std::size_t i = 0; i < g.size(); ++i) combo.values[i] = 2.0 * f.values[i] - cplx(0, 3) * h.values[i];
  const GridFunction a = apply_multiplier(m1, combo);
  const GridFunction fa = apply_multiplier(m1, f);
  const GridFunction ha = apply_multiplier(m1, h);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(a.values[i] - (2.0 * fa.values[i] - cplx(0, 3) * ha.values[i])) < 1e-11 * max_abs(a.values));

  CHECK_THROWS_AS(apply_multiplier(Multiplier(Grid(2, 16)), f), ShapeError);
}

TEST_CASE("sobolev weights") {
  const Grid g(2, 16);
  const Multiplier w = sobolev_weight(g, 2.0);
  CHECK(std::abs(w.weights[g.flat({0, 0, 0})] - 1.0) < 1e-14);
  CHECK(std::abs(w.weights[g.flat({1, 0, 0})] - 2.0) < 1e-13);
  CHECK(std::abs(w.weights[g.flat({2, 2, 0})] - 9.0) < 1e-12);
  for (const auto& v : sobolev_weight(g, 0.0).weights) CHECK(v == cplx(1.0));

  const Multiplier u = sobolev_weight(g, cplx(0.0, 1.0));
  for (const auto& v : u.weights) CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
  const GridFunction f = random_function(g, 5);
  const Spectrum before = forward_dft(f);
  const Spectrum after = forward_dft(apply_multiplier(u, f));
  double e0 = 0.0;
  double e1 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    e0 += std::norm(before.coeffs[i]);
    e1 += std::norm(after.coeffs[i]);
  }
  CHECK(std::abs(e0 - e1) < 1e-12 * e0);
}

TEST_CASE("three-dimensional grid transforms") {
  const Grid g(3, 8);
  const GridFunction f = random_function(g, 9);
  CHECK(max_abs_diff(inverse_dft(forward_dft(f)).values, f.values) <= 1e-12 * max_abs(f.values));
  const Spectrum w = forward_dft(plane_wave(g, {1, -2, 3}));
  CHECK(std::abs(w.coeffs[g.flat({1, -2, 3})] - std::pow(kTwoPi, 3)) < 1e-10);
}

// Small helpers shared by the unit tests.
#pragma once

#include <cmath>
#include <complex>

#include "fio/core.hpp"
#include "fio/grid.hpp"

namespace fio::testing {

inline GridFunction random_function(const Grid& g, std::uint64_t seed) {
  Rng rng(seed);
  GridFunction f(g);
  for (auto& v : f.values) v = {rng.normal(), rng.normal()};
  return f;
}

// Random trigonometric polynomial with |k|_inf <= kmax.
inline GridFunction random_bandlimited(const Grid& g, int kmax, std::uint64_t seed) {
  Rng rng(seed);
  Spectrum s(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Lattice k = g.lattice(i);
    bool inside = true;
    for (int a = 0; a < g.dim(); ++a) inside = inside && std::abs(k[a]) <= kmax;
    if (inside) s.coeffs[i] = {rng.normal(), rng.normal()};
  }
  return inverse_dft(s);
}

inline GridFunction plane_wave(const Grid& g, const Lattice& k, cplx amp = 1.0) {
  return sample(g, [&](const Point& x) {
    double phase = 0.0;
    for (int a = 0; a < g.dim(); ++a) phase += k[a] * x[a];
    return amp * std::exp(cplx(0.0, phase));
  });
}

}  // namespace fio::testing

// Periodic grid on the torus of period 2*pi, discrete Fourier transform with
// the non-unitary continuum convention, and Fourier multipliers.
//
//   forward:  fhat(k) = sum_j f(x_j) exp(-i k.x_j) (2 pi / N)^n
//   inverse:  f(x)    = (2 pi)^-n sum_k fhat(k) exp(i k.x)
//
// Frequencies are stored in natural (unshifted) DFT order; axis index i maps
// to the lattice coordinate i for i < N/2 and i - N otherwise.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fio/core.hpp"

namespace fio {

using Lattice = std::array<int, 3>;
using Point = std::array<double, 3>;

class Grid {
 public:
  Grid() = default;
  /// dim in {2, 3}; points a power of two, at least 8.
  Grid(int dim, int points);

  int dim() const { return dim_; }
  int points() const { return points_; }
  std::size_t size() const { return size_; }
  double dx() const { return kTwoPi / points_; }
  /// dx^n, the Riemann-sum cell volume.
  double cell() const { return std::pow(dx(), dim_); }

  int frequency(int axis_index) const {
    return axis_index < points_ / 2 ? axis_index : axis_index - points_;
  }
  int axis_index(int frequency) const {
    const int m = frequency % points_;
    return m < 0 ? m + points_ : m;
  }
  /// Lattice frequency of a flat (row-major) index; unused axes are 0.
  Lattice lattice(std::size_t flat) const;
  /// Flat index of a lattice frequency, wrapping modulo N.
  std::size_t flat(const Lattice& k) const;
  double frequency_norm(std::size_t flat) const;
  /// Largest |k| over the lattice window, (N/2) sqrt(n).
  double max_frequency() const { return 0.5 * points_ * std::sqrt(static_cast<double>(dim_)); }
  /// Integer axis offsets of a flat index (space side).
  Lattice offsets(std::size_t flat) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dim_ = 2;
  int points_ = 8;
  std::size_t size_ = 64;
};

struct GridFunction {
  Grid grid;
  std::vector<cplx> values;

  GridFunction() = default;
  explicit GridFunction(const Grid& g) : grid(g), values(g.size()) {}
  GridFunction(const Grid& g, std::vector<cplx> v);
};

struct Spectrum {
  Grid grid;
  std::vector<cplx> coeffs;

  Spectrum() = default;
  explicit Spectrum(const Grid& g) : grid(g), coeffs(g.size()) {}
  Spectrum(const Grid& g, std::vector<cplx> c);
};

struct Multiplier {
  Grid grid;
  std::vector<cplx> weights;

  Multiplier() = default;
  explicit Multiplier(const Grid& g, cplx fill = 1.0) : grid(g), weights(g.size(), fill) {}
  Multiplier(const Grid& g, std::vector<cplx> w);

  /// Frequency-pointwise product.
  Multiplier operator*(const Multiplier& other) const;
};

Spectrum forward_dft(const GridFunction& f);
GridFunction inverse_dft(const Spectrum& F);
GridFunction apply_multiplier(const Multiplier& m, const GridFunction& f);

/// weights(k) = exp(s log <k>), <k> = (1 + |k|^2)^(1/2).
Multiplier sobolev_weight(const Grid& grid, cplx s);

/// Tabulates a radial function of |k| on the lattice.
Multiplier radial_multiplier(const Grid& grid, const std::function<cplx(double)>& profile);

/// Samples a function of the continuous space variable.
GridFunction sample(const Grid& grid, const std::function<cplx(const Point&)>& f);

namespace detail {
// Unnormalized in-place transform; sign = -1 forward, +1 backward.
void fft_inplace(const Grid& grid, std::span<cplx> data, int sign);
}  // namespace detail

void require_same_grid(const Grid& a, const Grid& b, const char* what);

double max_abs(std::span<const cplx> values);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace fio

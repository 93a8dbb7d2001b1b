// Frequency localization: the smooth bump, the Littlewood-Paley family, the
// annular profile Psi, sphere quadratures and the parabolic localizers
//
//   phi_w(k) = int_0^4 Psi(sigma |k|) c_sigma phi(|k^ - w| / sqrt(sigma)) dsigma / sigma.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fio/grid.hpp"
#include "fio/jet.hpp"

namespace fio {

/// Radial profile equal to 1 on [0, plateau] and 0 on [support, inf), joined
/// by the exponential glue h(u) = g(1-u) / (g(1-u) + g(u)), g(u) = exp(-1/u).
class BumpProfile {
 public:
  BumpProfile() = default;
  BumpProfile(double plateau, double support);

  double plateau() const { return plateau_; }
  double support() const { return support_; }

  double operator()(double t) const;
  Jet<double> jet(double t) const;

  friend bool operator==(const BumpProfile&, const BumpProfile&) = default;

 private:
  double plateau_ = 0.5;
  double support_ = 1.0;
};

/// psi_0(t) = phi(t), psi_j(t) = phi(t / 2^j) - phi(t / 2^(j-1)).
/// The top index is chosen so that phi(|k| / 2^top) = 1 on the whole lattice;
/// the family then telescopes to exactly one.
class LPFamily {
 public:
  LPFamily() = default;
  explicit LPFamily(const Grid& grid);

  const Grid& grid() const { return grid_; }
  int top() const { return top_; }
  int count() const { return top_ + 1; }

  double profile(int j, double t) const;
  Jet<double> jet(int j, double t) const;
  /// Radii [lo, hi] outside which psi_j vanishes.
  static std::pair<double, double> support(int j);

  std::span<const double> shell(int j) const { return shells_.at(j); }
  Multiplier multiplier(int j) const;
  /// Shell indices whose support can contain radius t.
  std::vector<int> shells_at(double t) const;

 private:
  Grid grid_;
  BumpProfile bump_;
  int top_ = 0;
  std::vector<std::vector<double>> shells_;
};

/// Psi = h / sqrt(c) with h(t) = phi(t/2) - phi(t) and c = int h(u)^2 du/u.
class AnnularProfile {
 public:
  AnnularProfile();

  double operator()(double t) const;
  double normalization() const { return c_; }
  /// int_0^inf Psi(sigma t)^2 dsigma/sigma by log-trapezoid.
  double identity_integral(double t, int nodes_per_octave = 64) const;

 private:
  BumpProfile bump_;
  double c_ = 1.0;
};

struct SphereQuadrature {
  int dim = 2;
  std::vector<Point> nodes;
  std::vector<double> weights;
  /// Spherical polynomials up to this total degree are integrated exactly.
  int degree = 0;

  std::size_t size() const { return nodes.size(); }
};

/// n = 2: `nodes` equispaced angles starting at (1, 0).
/// n = 3: `nodes` Gauss-Legendre points in cos(polar) times 2*nodes azimuths.
SphereQuadrature make_sphere_quadrature(int dim, int nodes);
double sphere_area(int dim);

/// c_sigma from the quadrature; refuses caps holding fewer than 8 nodes.
double cap_normalizer(double sigma, const SphereQuadrature& quad,
                      const BumpProfile& bump = BumpProfile());

/// c_sigma by adaptive quadrature of the polar-angle reduction.
double cap_normalizer_exact(double sigma, int dim, const BumpProfile& bump = BumpProfile());

struct LocalizerSettings {
  int sigma_nodes_per_octave = 64;
  BumpProfile cap_bump;
};

/// Sparse table of phi_w on the lattice: only nonzero entries are stored.
struct ParabolicLocalizer {
  Grid grid;
  Point direction{};
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  Multiplier multiplier() const;
  double at(std::size_t flat) const;
};

ParabolicLocalizer make_parabolic_localizer(const Grid& grid, const Point& omega,
                                            const LocalizerSettings& settings = {});

std::vector<ParabolicLocalizer> make_parabolic_localizers(const Grid& grid,
                                                          const std::vector<Point>& directions,
                                                          const LocalizerSettings& settings = {});

/// Localizers for every node of a sphere quadrature.
struct LocalizerBank {
  Grid grid;
  SphereQuadrature quad;
  LocalizerSettings settings;
  std::vector<ParabolicLocalizer> localizers;

  LocalizerBank() = default;
  LocalizerBank(const Grid& grid, SphereQuadrature quad, LocalizerSettings settings = {});
};

/// G(k)^2 = sum_i w_i phi_{w_i}(k)^2.
Multiplier square_function_weight(const LocalizerBank& bank);

/// Discrete l1 norm of the kernel of <D>^(-2n) phi_w(D).
double localizer_kernel_l1(const ParabolicLocalizer& loc);

/// |k^ - w| for nonzero k.
double direction_distance(const Lattice& k, int dim, const Point& omega);

}  // namespace fio

// Frequency profiles e(eta) used as the eta-factors of separable symbols.
//
// A profile is either radial, scale * prod_f F_f(|eta|) with each factor known
// in closed form (so eta-derivatives come from second-order jets), or a
// lattice table whose derivatives are taken by finite differences.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fio/decomp.hpp"
#include "fio/grid.hpp"
#include "fio/jet.hpp"

namespace fio {

struct RadialFactor {
  enum class Kind { shell, bracket, bump, co_bump };
  Kind kind = Kind::bracket;
  int shell = 0;             // shell: psi_shell(t)
  cplx exponent = 0.0;       // bracket: <t>^exponent
  BumpProfile bump;          // bump: phi(t / radius); co_bump: 1 - phi(t / radius)
  double radius = 1.0;

  static RadialFactor lp_shell(int j);
  static RadialFactor bracket(cplx exponent);
  static RadialFactor cutoff(const BumpProfile& bump, double radius);
  static RadialFactor co_cutoff(const BumpProfile& bump, double radius);

  Jet<cplx> jet(double t) const;
  /// Interval of radii outside which the factor vanishes identically.
  std::pair<double, double> support() const;

  friend bool operator==(const RadialFactor&, const RadialFactor&) = default;
};

class EtaProfile {
 public:
  /// The constant profile c.
  explicit EtaProfile(cplx c = 1.0) : scale_(c) {}
  static EtaProfile radial(std::vector<RadialFactor> factors, cplx scale = 1.0);
  static EtaProfile table(Multiplier values);

  bool is_radial() const { return !table_.has_value(); }
  cplx scale() const { return scale_; }
  const std::vector<RadialFactor>& factors() const { return factors_; }

  /// Radial jet in t = |eta| (radial profiles only).
  Jet<cplx> jet(double t) const;
  cplx at(const Lattice& eta, int dim) const;
  Multiplier lattice_table(const Grid& grid) const;
  /// Radii outside which the profile vanishes (radial profiles only).
  std::pair<double, double> support() const;
  /// True when the profile is provably zero everywhere.
  bool is_zero() const;

  EtaProfile operator*(const EtaProfile& other) const;
  EtaProfile scaled(cplx c) const;

  /// Derivatives d^alpha e(eta) for |alpha| <= 2 at a point of R^n. Entry
  /// order: value, d_1..d_n, then d_ij for i <= j in row order.
  std::vector<cplx> derivatives(const Point& eta, int dim) const;

 private:
  cplx scale_ = 1.0;
  std::vector<RadialFactor> factors_;
  std::optional<Multiplier> table_;
};

/// Multi-indices |alpha| <= order in the derivative layout above.
std::vector<std::array<int, 3>> multi_indices(int dim, int order);
std::string multi_index_name(const std::array<int, 3>& alpha, int dim);

/// Cartesian derivatives from a radial jet: value, gradient R' eta^, and
/// Hessian R'' eta^ eta^T + (R'/t)(I - eta^ eta^T); at t = 0 the Hessian is R''(0) I.
std::vector<cplx> radial_derivatives(const Jet<cplx>& jet, const Point& eta, int dim);

}  // namespace fio

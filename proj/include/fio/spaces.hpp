// Norm evaluators: L^p, Sobolev H^{s,p}, Zygmund C^r_*, and the Hardy space
// for Fourier integral operators,
//
//   ||f||_{H^{s,p}_FIO} = ||q(D) <D>^s f||_p + ( sum_i w_i ||phi_{w_i}(D) <D>^s f||_p^p )^(1/p)
//
// with q(xi) = phi(|xi| / 4) and the sphere integral replaced by a quadrature.
#pragma once

#include <string>
#include <vector>

#include "fio/decomp.hpp"
#include "fio/grid.hpp"

namespace fio {

struct SpaceSettings {
  int sphere_nodes = 256;  // n = 2: angles; n = 3: Gauss-Legendre points
  LocalizerSettings localizer;
};

/// Everything needed to evaluate norms on one grid: the LP family, the
/// low-frequency cutoff q and the localizer bank. Building the bank is the
/// expensive part, so contexts are meant to be shared.
class FunctionSpace {
 public:
  FunctionSpace(const Grid& grid, const SpaceSettings& settings = {});

  const Grid& grid() const { return grid_; }
  const LPFamily& lp() const { return lp_; }
  const LocalizerBank& bank() const { return bank_; }
  const Multiplier& low_pass() const { return q_; }
  const SpaceSettings& settings() const { return settings_; }

 private:
  Grid grid_;
  SpaceSettings settings_;
  LPFamily lp_;
  LocalizerBank bank_;
  Multiplier q_;
};

struct NormReport {
  std::string space;
  double value = 0.0;
  double s = 0.0;
  double p = 0.0;
  double r = 0.0;
  // hfio: the low-frequency term and the quadrature term.
  double low_term = 0.0;
  double sphere_term = 0.0;
  // zygmund: 2^{jr} ||psi_j(D) f||_inf per shell and the maximizing shell.
  std::vector<double> shell_terms;
  int argmax_shell = -1;
};

void check_exponent(double p);

double lp_norm(const GridFunction& f, double p);
/// (sum |u|^p dx^n)^(1/p) of a raw sample vector.
double lp_norm(const Grid& grid, std::span<const cplx> u, double p);
double sobolev_norm(const GridFunction& f, double s, double p);

NormReport zygmund_report(const GridFunction& f, double r, const LPFamily& lp);
double zygmund_norm(const GridFunction& f, double r, const LPFamily& lp);

NormReport hfio_norm(const GridFunction& f, double s, double p, const FunctionSpace& space);
/// ||q(D) f||_p + ( sum_i w_i ||phi_{w_i}(D) f||_{H^{s,p}}^p )^(1/p).
NormReport hfio_norm_alt(const GridFunction& f, double s, double p, const FunctionSpace& space);

/// Canonical hfio norm and its gradient g, in the sense that
/// d||f|| = Re sum_x conj(g(x)) df(x) for every perturbation df.
struct NormGradient {
  double value = 0.0;
  GridFunction gradient;
};
NormGradient hfio_norm_gradient(const GridFunction& f, double s, double p, const FunctionSpace& space);

}  // namespace fio

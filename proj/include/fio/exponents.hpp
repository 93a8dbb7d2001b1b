// Scalar exponent calculus: s(p), sigma, tau, gamma, rho, beta and the
// interpolation parameters. The formulas are templated on the scalar so the
// tests can run them in exact rational arithmetic.
#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "fio/core.hpp"

namespace fio {

namespace exponents_detail {

template <class T>
T absval(const T& x) {
  return x < T(0) ? T(-x) : x;
}

template <class T>
void check_dim(int n) {
  if (n < 2) throw DomainError("dimension must be at least 2");
}

template <class T>
void check_r_eps(const T& r, const T& eps) {
  if (!(r > T(0))) throw DomainError("r must be positive");
  if (!(eps > T(0)) || eps > r / T(2)) throw DomainError("eps must lie in (0, r/2]");
}

}  // namespace exponents_detail

/// s(p) = ((n-1)/2) |1/2 - 1/p|. Pass p = +infinity (doubles only) for p = infinity.
template <class T>
T s_of_p(int n, const T& p) {
  exponents_detail::check_dim<T>(n);
  if (p < T(1)) throw DomainError("p must be at least 1");
  return T(n - 1) / T(2) * exponents_detail::absval(T(1) / T(2) - T(1) / p);
}

template <class T>
T sigma_exponent(int n, const T& p, const T& r, const T& eps) {
  exponents_detail::check_r_eps(r, eps);
  const T two_s = T(2) * s_of_p(n, p);
  if (two_s < r / T(2)) return T(0);
  return two_s - r / T(2) + eps;
}

template <class T>
struct TauGamma {
  T tau;
  T gamma;
};

template <class T>
TauGamma<T> tau_gamma(int n, const T& p, const T& r, const T& eps) {
  if (!(r > T(0))) throw DomainError("r must be positive");
  if (!(eps > T(0))) throw DomainError("eps must be positive");
  if (!(p > T(1))) throw DomainError("p must lie in (1, infinity)");
  const T s = s_of_p(n, p);
  const T nm1(n - 1);
  TauGamma<T> out{T(0), T(0)};
  if (r > nm1)
    out.tau = T(0);
  else if (r == nm1)
    out.tau = eps;
  else
    out.tau = T(2) * s * (T(1) - r / nm1);
  out.gamma = T(1) / T(2) + T(2) * s / (r >= nm1 ? r : nm1);
  return out;
}

/// rho = max(0, sigma - (1/2 - delta) r).
template <class T>
T rho_exponent(int n, const T& p, const T& r, const T& delta, const T& eps) {
  if (delta < T(0) || delta > T(1) / T(2)) throw DomainError("delta must lie in [0, 1/2]");
  const T v = sigma_exponent(n, p, r, eps) - (T(1) / T(2) - delta) * r;
  return v > T(0) ? v : T(0);
}

/// The two-case table: 0 if 2s(p) < (1 - delta) r, else 2s(p) - (1 - delta) r + eps.
/// It differs from rho_exponent by at most eps on the strip r/2 <= 2s(p) < (1 - delta) r.
template <class T>
T rho_case_table(int n, const T& p, const T& r, const T& delta, const T& eps) {
  if (delta < T(0) || delta > T(1) / T(2)) throw DomainError("delta must lie in [0, 1/2]");
  exponents_detail::check_r_eps(r, eps);
  const T two_s = T(2) * s_of_p(n, p);
  const T edge = (T(1) - delta) * r;
  if (two_s < edge) return T(0);
  return two_s - edge + eps;
}

template <class T>
struct InterpParams {
  T theta;
  T r0;
  T r1;
  T kappa;
  T lambda;
  bool reflected = false;  // p > 2 handled through the conjugate exponent
};

/// theta solves 1/p = (1 - theta)/(1 + d') + theta/2 (with 1/p replaced by
/// 1 - 1/p for p > 2); r1 = d', r0 = (r - theta d')/(1 - theta),
/// kappa = r0 - r1, lambda = r - r0.
template <class T>
InterpParams<T> interp_params(const T& p, const T& r, const T& dprime) {
  if (!(p > T(1))) throw DomainError("p must lie in (1, infinity)");
  if (p == T(2)) throw DomainError("p = 2 needs no interpolation");
  if (!(r > T(0))) throw DomainError("r must be positive");
  const bool reflected = p > T(2);
  const T q = reflected ? p / (p - T(1)) : p;
  if (!(dprime > T(0))) throw DomainError("delta' must be positive");
  if (!(dprime < r)) throw DomainError("delta' must be below r");
  if (!(T(1) + dprime < q))
    throw DomainError(reflected ? "1 + delta' must be below the conjugate exponent p'" : "1 + delta' must be below p");
  const T a = T(1) / (T(1) + dprime);
  const T one_minus_theta = (T(1) / q - T(1) / T(2)) / (a - T(1) / T(2));
  InterpParams<T> out;
  out.theta = T(1) - one_minus_theta;
  out.r1 = dprime;
  out.r0 = (r - out.theta * dprime) / one_minus_theta;
  out.kappa = out.r0 - out.r1;
  out.lambda = r - out.r0;
  out.reflected = reflected;
  return out;
}

/// beta = 1/2 + (2 s(p) - sigma)/r.
template <class T>
T beta_exponent(int n, const T& p, const T& r, const T& eps) {
  return T(1) / T(2) + (T(2) * s_of_p(n, p) - sigma_exponent(n, p, r, eps)) / r;
}

struct SobolevInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool nonempty = false;
  // Which extra hypothesis makes each endpoint admissible.
  std::string lo_endpoint;
  std::string hi_endpoint;
};

/// -r/2 + s(p) - sigma < s < r - s(p).
SobolevInterval sobolev_interval(int n, double p, double r, double delta, double eps);

struct Comparison {
  double tau = 0.0;
  double sigma = 0.0;
  double difference = 0.0;  // tau - sigma as computed
  std::optional<double> displayed;  // the closed form for the case, when one is displayed
  std::string regime;
};

Comparison comparison_report(int n, double p, double r, double eps);

struct ExponentInputs {
  int n = 2;
  double p = 2.0;
  double r = 1.0;
  double m = 0.0;
  double delta = 0.5;
  std::optional<double> eps;     // default 0.01 r
  std::optional<double> dprime;  // default by bisection
};

struct ExponentSheet {
  ExponentInputs in;
  double eps = 0.0;
  double s_p = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  std::optional<double> dprime;
  std::optional<InterpParams<double>> interp;
  std::optional<double> gamma_interp;  // gamma at (1 + d', r0)
  SobolevInterval sobolev;
  bool thm11_applicable = false;
  bool strip_valid = false;
  bool beta_le_gamma = false;
};

/// 0.5 min(r, p-1, largest d' with beta <= gamma(1 + d', r0)), conjugate p for p > 2.
double default_dprime(int n, double p, double r, double eps);

ExponentSheet exponent_sheet(const ExponentInputs& in);

}  // namespace fio

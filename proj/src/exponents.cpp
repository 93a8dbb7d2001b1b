#include "fio/exponents.hpp"

#include <algorithm>

namespace fio {

SobolevInterval sobolev_interval(int n, double p, double r, double delta, double eps) {
  if (delta < 0.0 || delta > 0.5) throw DomainError("delta must lie in [0, 1/2]");
  const double s = s_of_p(n, p);
  const double sigma = sigma_exponent(n, p, r, eps);
  SobolevInterval out;
  out.lo = -r / 2 + s - sigma;
  out.hi = r - s;
  out.nonempty = out.lo < out.hi;
  out.hi_endpoint = "a in H^r_inf S^m";
  out.lo_endpoint = delta == 0.5 ? "a = b_flat_{1/2}, b in H^r_inf, m = -r/2" : "a = b(x), b in H^r_inf";
  return out;
}

Comparison comparison_report(int n, double p, double r, double eps) {
  Comparison c;
  c.tau = tau_gamma(n, p, r, eps).tau;
  c.sigma = sigma_exponent(n, p, r, eps);
  c.difference = c.tau - c.sigma;
  const double nm1 = n - 1;
  const double h = std::abs(0.5 - 1.0 / p);
  if (r > nm1) {
    c.regime = "r > n-1";
    c.displayed = 0.0;
  } else if (r == nm1) {
    c.regime = "r = n-1";
    c.displayed = eps;
  } else if (2 * s_of_p(n, p) < r / 2) {
    c.regime = "r < n-1, 2s(p) < r/2";
    c.displayed = (nm1 - r) * h;
  } else {
    c.regime = "r < n-1, 2s(p) >= r/2";
    c.displayed = r * (0.5 - h) - eps;
  }
  return c;
}

namespace {

bool beta_fits(int n, double p, double r, double eps, double dprime) {
  const auto ip = interp_params(p, r, dprime);
  const double q = 1.0 + dprime;
  const double gamma = tau_gamma(n, q, ip.r0, eps).gamma;
  return beta_exponent(n, p, r, eps) <= gamma;
}

}  // namespace

double default_dprime(int n, double p, double r, double eps) {
  const double q = p > 2 ? p / (p - 1) : p;
  const double cap = std::min(r, q - 1);
  // Scan for the largest feasible grid point, then bisect the edge above it.
  constexpr int kScan = 256;
  int last = -1;
  for (int i = 1; i < kScan; ++i)
    if (beta_fits(n, p, r, eps, cap * i / kScan)) last = i;
  double best = cap;
  if (last >= 0 && last < kScan - 1) {
    double lo = cap * last / kScan;
    double hi = cap * (last + 1) / kScan;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (beta_fits(n, p, r, eps, mid) ? lo : hi) = mid;
    }
    best = lo;
  }
  return 0.5 * std::min(cap, best);
}

ExponentSheet exponent_sheet(const ExponentInputs& in) {
  ExponentSheet sh;
  sh.in = in;
  const int n = in.n;
  const double p = in.p;
  const double r = in.r;
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p must lie in (1, infinity)");
  sh.eps = in.eps.value_or(0.01 * r);
  sh.s_p = s_of_p(n, p);
  sh.sigma = sigma_exponent(n, p, r, sh.eps);
  const auto tg = tau_gamma(n, p, r, sh.eps);
  sh.tau = tg.tau;
  sh.gamma = tg.gamma;
  sh.beta = beta_exponent(n, p, r, sh.eps);
  sh.rho = rho_exponent(n, p, r, in.delta, sh.eps);
  sh.sobolev = sobolev_interval(n, p, r, in.delta, sh.eps);
  sh.thm11_applicable = 4 * sh.s_p < r;
  if (p != 2.0) {
    const double q = p > 2 ? p / (p - 1) : p;
    sh.dprime = in.dprime ? *in.dprime : default_dprime(n, p, r, sh.eps);
    sh.strip_valid = 1.0 + *sh.dprime < q;
    sh.interp = interp_params(p, r, *sh.dprime);
    sh.gamma_interp = tau_gamma(n, 1.0 + *sh.dprime, sh.interp->r0, sh.eps).gamma;
    sh.beta_le_gamma = sh.beta <= *sh.gamma_interp;
  }
  return sh;
}

}  // namespace fio

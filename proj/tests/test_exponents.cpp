#include <boost/rational.hpp>
#include <cmath>

#include "doctest.h"
#include "fio/exponents.hpp"

using namespace fio;
using Q = boost::rational<long long>;

namespace {
Q q(long long a, long long b = 1) { return Q(a, b); }
}  // namespace

TEST_CASE("s(p)") {
  CHECK(s_of_p(2, q(2)) == q(0));
  CHECK(s_of_p(3, q(4)) == q(1, 4));
  CHECK(s_of_p(2, std::numeric_limits<double>::infinity()) == 0.25);
  CHECK(s_of_p(3, q(4)) == s_of_p(3, q(4, 3)));
  CHECK(s_of_p(5, q(7, 5)) == s_of_p(5, q(7, 2)));
  CHECK_THROWS_AS(s_of_p(2, q(1, 2)), DomainError);
  CHECK_THROWS_AS(s_of_p(1, q(2)), DomainError);
}

TEST_CASE("sigma") {
  CHECK(sigma_exponent(2, q(2), q(2), q(1, 10)) == q(0));
  CHECK(sigma_exponent(3, q(4), q(1), q(1, 10)) == q(1, 10));
  CHECK(sigma_exponent(2, q(1), q(1, 2), q(1, 4)) == q(1, 2));
  CHECK_THROWS_AS(sigma_exponent(2, q(2), q(1), q(0)), DomainError);
  CHECK_THROWS_AS(sigma_exponent(2, q(2), q(1), q(3, 5)), DomainError);
  // The case boundary 2s(p) = r/2 jumps by eps.
  const Q r = q(1);
  const Q p = q(4, 3);  // n = 3: 2s = 1/2 = r/2
  CHECK(sigma_exponent(3, p, r, q(1, 10)) == q(1, 10));
  CHECK(sigma_exponent(3, p, r + q(1, 1000), q(1, 10)) == q(0));
}

TEST_CASE("tau and gamma") {
  const auto a = tau_gamma(2, q(2), q(2), q(1, 7));
  CHECK(a.tau == q(0));
  CHECK(a.gamma == q(1, 2));
  const auto b = tau_gamma(3, q(4), q(1), q(1, 10));
  CHECK(b.tau == q(1, 4));
  CHECK(b.gamma == q(3, 4));
  const auto c = tau_gamma(3, q(4), q(2), q(1, 10));
  CHECK(c.tau == q(1, 10));
  CHECK(c.gamma == q(3, 4));
  for (long long rn = 2; rn <= 12; ++rn) {
    const auto t = tau_gamma(3, q(5, 2), q(rn, 4), q(1, 10));
    CHECK((t.tau == q(0) || t.tau == q(1, 10) || q(rn, 4) < q(2)));
    CHECK(t.gamma > q(1, 2));
    CHECK(t.gamma <= q(1));
  }
}

TEST_CASE("rho") {
  const Q eps = q(1, 10);
  CHECK(rho_exponent(3, q(4), q(1), q(1, 2), eps) == sigma_exponent(3, q(4), q(1), eps));
  CHECK(rho_exponent(3, q(4), q(1), q(0), eps) == q(0));
  CHECK(rho_case_table(3, q(4), q(1), q(0), eps) == q(0));
  CHECK(rho_exponent(3, q(4), q(3, 5), q(0), eps) == q(0));
  CHECK(rho_case_table(3, q(4), q(3, 5), q(0), eps) == q(0));
  CHECK_THROWS_AS(rho_exponent(3, q(4), q(1), q(3, 5), eps), DomainError);
  // Inside r/2 <= 2s(p) < (1 - delta) r the table reads 0 while the max form can give up to eps.
  const Q v = rho_exponent(3, q(4), q(4, 5), q(0), eps);  // 2s = 1/2, r/2 = 2/5, (1-d)r = 4/5
  CHECK(v == q(0));
  CHECK(rho_exponent(3, q(4), q(3, 5), q(1, 10), q(1, 4)) == q(21, 100));
  CHECK(rho_case_table(3, q(4), q(3, 5), q(1, 10), q(1, 4)) == q(0));
}

TEST_CASE("interpolation parameters") {
  const auto ip = interp_params(q(3, 2), q(1), q(1, 5));
  CHECK(ip.theta == q(1, 2));
  CHECK(ip.r1 == q(1, 5));
  CHECK(ip.r0 == q(9, 5));
  CHECK(ip.kappa == q(8, 5));
  CHECK(ip.lambda == q(-4, 5));
  CHECK(ip.kappa * ip.theta + ip.lambda == q(0));
  CHECK((q(1) - ip.theta) * ip.r0 + ip.theta * ip.r1 == q(1));
  CHECK_THROWS_AS(interp_params(q(3, 2), q(1), q(1, 2)), DomainError);  // 1 + d' = p
  CHECK_THROWS_AS(interp_params(q(3, 2), q(1, 10), q(1, 5)), DomainError);  // d' >= r
  CHECK_THROWS_AS(interp_params(q(2), q(1), q(1, 5)), DomainError);
  // p > 2 reflects to p' = p/(p-1).
  const auto rf = interp_params(q(3), q(1), q(1, 5));
  CHECK(rf.reflected);
  CHECK(rf.theta == ip.theta);
  CHECK(rf.r0 == ip.r0);
  try {
    interp_params(q(3, 2), q(1), q(1, 2));
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("below p") != std::string::npos);
  }
}

TEST_CASE("sobolev interval") {
  const auto a = sobolev_interval(2, 2.0, 2.0, 0.5, 0.1);
  CHECK(a.lo == -1.0);
  CHECK(a.hi == 2.0);
  CHECK(a.nonempty);
  const auto b = sobolev_interval(3, 4.0, 1.0, 0.5, 0.1);
  CHECK(b.lo == doctest::Approx(-0.35).epsilon(1e-14));
  CHECK(b.hi == doctest::Approx(0.75).epsilon(1e-14));
  // 4 s(p) < 1 for n = 3 exactly when p lies in (4/3, 4).
  for (double p : {1.2, 1.3, 1.34, 2.0, 3.9, 4.1, 6.0}) {
    const bool inside = p > 4.0 / 3.0 && p < 4.0;
    CHECK((4 * s_of_p(3, p) < 1.0) == inside);
  }
}

TEST_CASE("comparison with the critical route") {
  const auto a = comparison_report(3, 4.0, 1.0, 0.1);
  CHECK(a.tau == doctest::Approx(0.25));
  CHECK(a.sigma == doctest::Approx(0.1));
  CHECK(a.difference == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(*a.displayed == doctest::Approx(a.difference).epsilon(1e-14));
  const auto b = comparison_report(3, 2.0, 1.0, 0.1);
  CHECK(b.difference == 0.0);
  CHECK(*b.displayed == 0.0);
  const auto c = comparison_report(3, 3.0, 2.0, 0.05);
  CHECK(c.difference == 0.05);
  const auto d = comparison_report(2, 3.0, 1.5, 0.05);
  CHECK(d.difference == 0.0);
  // Exact check of the displayed cases.
  const Q p = q(5, 4);
  const Q r = q(1, 2);
  const Q eps = q(1, 20);
  const Q h = q(1, 2) - q(4, 5) < q(0) ? q(4, 5) - q(1, 2) : q(1, 2) - q(4, 5);
  CHECK(tau_gamma(3, p, r, eps).tau - sigma_exponent(3, p, r, eps) == r * (q(1, 2) - h) - eps);
  CHECK(tau_gamma(3, q(3, 2), q(3, 2), eps).tau - sigma_exponent(3, q(3, 2), q(3, 2), eps) ==
        (q(2) - q(3, 2)) * (q(2, 3) - q(1, 2)));
}

TEST_CASE("sheet identities on random tuples") {
  Rng rng(2024);
  int strip = 0;
  int tau_below = 0;
  for (int i = 0; i < 10000; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform() * 3);
    double p = 1.05 + 3.0 * rng.uniform();
    if (std::abs(p - 2.0) < 1e-3) p = 2.5;
    const double r = 0.1 + 3.0 * rng.uniform();
    const double delta = 0.5 * rng.uniform();
    const double eps = r / 2 * (0.01 + 0.99 * rng.uniform());
    const double pc = p > 2 ? p / (p - 1) : p;
    const double dprime = std::min(r, pc - 1) * (0.05 + 0.9 * rng.uniform());
    ExponentInputs in{n, p, r, 0.0, delta, eps, dprime};
    const ExponentSheet sh = exponent_sheet(in);
    const auto& ip = *sh.interp;
    CHECK(std::abs((1 - ip.theta) * ip.r0 + ip.theta * ip.r1 - r) <= 1e-12 * std::max(1.0, r));
    CHECK(std::abs(ip.kappa * ip.theta + ip.lambda) <= 1e-12 * std::max(1.0, std::abs(ip.lambda)));
    CHECK(std::abs(sh.rho - std::max(0.0, sh.sigma - (0.5 - delta) * r)) <= 1e-12);
    const double table = rho_case_table(n, p, r, delta, eps);
    const bool in_strip = 2 * sh.s_p >= r / 2 && 2 * sh.s_p < (1 - delta) * r;
    if (in_strip)
      ++strip;
    else
      CHECK(std::abs(table - sh.rho) <= 1e-12);
    CHECK(table <= sh.rho + 1e-15);
    CHECK(sh.rho - table <= eps + 1e-15);
    // tau >= sigma fails only when r < n-1 and eps exceeds r (1/2 - |1/2 - 1/p|).
    if (sh.tau < sh.sigma - 1e-15) {
      ++tau_below;
      CHECK(r < n - 1);
      CHECK(eps > r * (0.5 - std::abs(0.5 - 1 / p)));
    }
  }
  MESSAGE("strip tuples " << strip << ", tau < sigma tuples " << tau_below);
  CHECK(strip > 0);
}

TEST_CASE("interval monotone in r away from the sigma jump") {
  for (int n : {2, 3})
    for (double p : {1.2, 1.5, 3.0}) {
      const double eps = 0.02;
      const double jump = 4 * s_of_p(n, p);
      double prev_lo = 0.0;
      double prev_hi = 0.0;
      double prev_r = 0.0;
      for (double r = 0.05; r < 3.0; r += 0.01) {
        const auto iv = sobolev_interval(n, p, r, 0.5, eps);
        if (prev_r > 0.0) {
          CHECK(iv.hi >= prev_hi);
          if (!(prev_r < jump && r >= jump))
            CHECK(iv.lo <= prev_lo + 1e-12);
          else
            CHECK(iv.lo - prev_lo <= eps + 1e-12);
        }
        prev_lo = iv.lo;
        prev_hi = iv.hi;
        prev_r = r;
      }
    }
}

TEST_CASE("default delta prime") {
  for (double p : {4.0 / 3.0, 1.5, 3.0}) {
    const double r = 1.0;
    const double eps = 0.01;
    const double d = default_dprime(2, p, r, eps);
    const double pc = p > 2 ? p / (p - 1) : p;
    CHECK(d > 0.0);
    CHECK(d <= 0.5 * std::min(r, pc - 1) + 1e-15);
    const auto sh = exponent_sheet({2, p, r, 0.0, 0.5, eps, std::nullopt});
    CHECK(sh.strip_valid);
    CHECK(*sh.dprime == d);
  }
  const auto sh = exponent_sheet({3, 4.0, 1.0, 0.0, 0.5, 0.1, std::nullopt});
  CHECK(sh.s_p == 0.25);
  CHECK(sh.sigma == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(!exponent_sheet({2, 2.0, 1.0, 0.0, 0.5, std::nullopt, std::nullopt}).interp.has_value());
}

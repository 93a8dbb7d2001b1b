#include "fio/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fio {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Jet<double> scaled_bump(const BumpProfile& phi, double t, double s) {
  Jet<double> g = phi.jet(s * t);
  g.d1 *= s;
  g.d2 *= s * s;
  return g;
}

}  // namespace

RadialFactor RadialFactor::lp_shell(int j) {
  if (j < 0) throw DomainError("negative shell index");
  RadialFactor f;
  f.kind = Kind::shell;
  f.shell = j;
  return f;
}

RadialFactor RadialFactor::bracket(cplx exponent) {
  RadialFactor f;
  f.kind = Kind::bracket;
  f.exponent = exponent;
  return f;
}

RadialFactor RadialFactor::cutoff(const BumpProfile& bump, double radius) {
  if (!(radius > 0.0)) throw DomainError("cutoff radius must be positive");
  RadialFactor f;
  f.kind = Kind::bump;
  f.bump = bump;
  f.radius = radius;
  return f;
}

RadialFactor RadialFactor::co_cutoff(const BumpProfile& bump, double radius) {
  RadialFactor f = cutoff(bump, radius);
  f.kind = Kind::co_bump;
  return f;
}

Jet<cplx> RadialFactor::jet(double t) const {
  switch (kind) {
    case Kind::shell: {
      const BumpProfile phi;
      if (shell == 0) return phi.jet(t).as<cplx>();
      return (scaled_bump(phi, t, std::ldexp(1.0, -shell)) - scaled_bump(phi, t, std::ldexp(1.0, 1 - shell)))
          .as<cplx>();
    }
    case Kind::bracket: {
      if (exponent == 0.0) return Jet<cplx>::constant(1.0);
      const double u = 1.0 + t * t;
      const cplx f = std::exp(exponent * 0.5 * std::log(u));
      const cplx f1 = exponent * t * f / u;
      const cplx f2 = exponent * f / u + exponent * (exponent - 2.0) * t * t * f / (u * u);
      return {f, f1, f2};
    }
    case Kind::bump:
      return scaled_bump(bump, t, 1.0 / radius).as<cplx>();
    case Kind::co_bump: {
      Jet<double> g = scaled_bump(bump, t, 1.0 / radius);
      return Jet<double>{1.0 - g.v, -g.d1, -g.d2}.as<cplx>();
    }
  }
  return {};
}

std::pair<double, double> RadialFactor::support() const {
  switch (kind) {
    case Kind::shell:
      if (shell == 0) return {0.0, 1.0};
      return {std::ldexp(1.0, shell - 2), std::ldexp(1.0, shell)};
    case Kind::bracket:
      return {0.0, kInf};
    case Kind::bump:
      return {0.0, bump.support() * radius};
    case Kind::co_bump:
      return {bump.plateau() * radius, kInf};
  }
  return {0.0, kInf};
}

EtaProfile EtaProfile::radial(std::vector<RadialFactor> factors, cplx scale) {
  EtaProfile e(scale);
  e.factors_ = std::move(factors);
  return e;
}

EtaProfile EtaProfile::table(Multiplier values) {
  EtaProfile e(1.0);
  e.table_ = std::move(values);
  return e;
}

Jet<cplx> EtaProfile::jet(double t) const {
  if (table_) throw DomainError("radial jet requested from a tabulated profile");
  Jet<cplx> acc = Jet<cplx>::constant(scale_);
  for (const auto& f : factors_) {
    acc = acc * f.jet(t);
    if (acc.v == 0.0 && acc.d1 == 0.0 && acc.d2 == 0.0) break;
  }
  return acc;
}

cplx EtaProfile::at(const Lattice& eta, int dim) const {
  if (table_) return table_->weights[table_->grid.flat(eta)];
  double t2 = 0.0;
  for (int a = 0; a < dim; ++a) t2 += static_cast<double>(eta[a]) * eta[a];
  return jet(std::sqrt(t2)).v;
}

Multiplier EtaProfile::lattice_table(const Grid& grid) const {
  if (table_) {
    require_same_grid(grid, table_->grid, "profile table");
    return *table_;
  }
  Multiplier m(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) m.weights[i] = jet(grid.frequency_norm(i)).v;
  return m;
}

std::pair<double, double> EtaProfile::support() const {
  if (table_) return {0.0, kInf};
  if (scale_ == 0.0) return {kInf, 0.0};
  double lo = 0.0;
  double hi = kInf;
  for (const auto& f : factors_) {
    const auto [a, b] = f.support();
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  return {lo, hi};
}

bool EtaProfile::is_zero() const {
  if (table_) return std::all_of(table_->weights.begin(), table_->weights.end(), [](cplx v) { return v == 0.0; });
  const auto [lo, hi] = support();
  return !(lo < hi);
}

EtaProfile EtaProfile::operator*(const EtaProfile& other) const {
  if (table_ || other.table_) {
    const Grid& g = table_ ? table_->grid : other.table_->grid;
    return table(lattice_table(g) * other.lattice_table(g));
  }
  EtaProfile out = radial(factors_, scale_ * other.scale_);
  out.factors_.insert(out.factors_.end(), other.factors_.begin(), other.factors_.end());
  return out;
}

EtaProfile EtaProfile::scaled(cplx c) const {
  EtaProfile out = *this;
  if (out.table_)
    for (auto& w : out.table_->weights) w *= c;
  else
    out.scale_ *= c;
  return out;
}

std::vector<std::array<int, 3>> multi_indices(int dim, int order) {
  std::vector<std::array<int, 3>> out;
  out.push_back({0, 0, 0});
  if (order >= 1)
    for (int i = 0; i < dim; ++i) {
      std::array<int, 3> a{0, 0, 0};
      a[i] = 1;
      out.push_back(a);
    }
  if (order >= 2)
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        std::array<int, 3> a{0, 0, 0};
        a[i] += 1;
        a[j] += 1;
        out.push_back(a);
      }
  if (order > 2) throw DomainError("derivative order above 2 is not supported");
  return out;
}

std::string multi_index_name(const std::array<int, 3>& alpha, int dim) {
  std::string s = "(";
  for (int a = 0; a < dim; ++a) {
    if (a) s += ",";
    s += std::to_string(alpha[a]);
  }
  return s + ")";
}

std::vector<cplx> radial_derivatives(const Jet<cplx>& jet, const Point& eta, int dim) {
  double t2 = 0.0;
  for (int a = 0; a < dim; ++a) t2 += eta[a] * eta[a];
  const double t = std::sqrt(t2);
  std::vector<cplx> out;
  out.push_back(jet.v);
  Point u{0.0, 0.0, 0.0};
  if (t > 0.0)
    for (int a = 0; a < dim; ++a) u[a] = eta[a] / t;
  for (int a = 0; a < dim; ++a) out.push_back(jet.d1 * u[a]);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      if (t == 0.0) {
        out.push_back(jet.d2 * delta);
      } else {
        out.push_back(jet.d2 * (u[i] * u[j]) + jet.d1 / t * (delta - u[i] * u[j]));
      }
    }
  return out;
}

std::vector<cplx> EtaProfile::derivatives(const Point& eta, int dim) const {
  if (table_) throw DomainError("closed-form derivatives requested from a tabulated profile");
  double t2 = 0.0;
  for (int a = 0; a < dim; ++a) t2 += eta[a] * eta[a];
  return radial_derivatives(jet(std::sqrt(t2)), eta, dim);
}

}  // namespace fio

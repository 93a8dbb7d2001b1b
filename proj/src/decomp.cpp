#include "fio/decomp.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

namespace fio {

namespace {

// Returns exp(-1/x) as a jet in the variable of x.
Jet<double> glue_g(const Jet<double>& x) {
  if (x.v <= 0.0) return {};
  const double inv = 1.0 / x.v;
  const Jet<double> e = compose(x, -inv, inv * inv, -2.0 * inv * inv * inv);
  return exp(e);
}

struct GslWorkspace {
  gsl_integration_workspace* w;
  explicit GslWorkspace(std::size_t n) : w(gsl_integration_workspace_alloc(n)) {}
  ~GslWorkspace() { gsl_integration_workspace_free(w); }
  GslWorkspace(const GslWorkspace&) = delete;
  GslWorkspace& operator=(const GslWorkspace&) = delete;
};

template <class F>
double integrate(const F& f, double a, double b, double epsrel = 1e-13) {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
  GslWorkspace ws(2000);
  gsl_function fn;
  fn.function = [](double x, void* p) { return (*static_cast<const F*>(p))(x); };
  fn.params = const_cast<F*>(&f);
  double result = 0.0;
  double err = 0.0;
  const int status = gsl_integration_qag(&fn, a, b, 0.0, epsrel, 2000, GSL_INTEG_GAUSS61, ws.w,
                                         &result, &err);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw Error(std::string("adaptive quadrature failed: ") + gsl_strerror(status));
  return result;
}

}  // namespace

BumpProfile::BumpProfile(double plateau, double support) : plateau_(plateau), support_(support) {
  if (!(plateau > 0.0 && support > plateau))
    throw DomainError("bump needs 0 < plateau < support");
}

double BumpProfile::operator()(double t) const {
  if (t <= plateau_) return 1.0;
  if (t >= support_) return 0.0;
  const double u = (t - plateau_) / (support_ - plateau_);
  const double g0 = std::exp(-1.0 / u);
  const double g1 = std::exp(-1.0 / (1.0 - u));
  return g1 / (g0 + g1);
}

Jet<double> BumpProfile::jet(double t) const {
  if (t <= plateau_) return Jet<double>::constant(1.0);
  if (t >= support_) return {};
  const double width = support_ - plateau_;
  const double u = (t - plateau_) / width;
  const Jet<double> x{u, 1.0 / width, 0.0};
  const Jet<double> y{1.0 - u, -1.0 / width, 0.0};
  const Jet<double> g0 = glue_g(x);
  const Jet<double> g1 = glue_g(y);
  return g1 / (g0 + g1);
}

// --- Littlewood-Paley ------------------------------------------------------

LPFamily::LPFamily(const Grid& grid) : grid_(grid) {
  // Smallest top with 2^(top-1) >= max |k|, so phi(|k|/2^top) == 1 everywhere.
  top_ = static_cast<int>(std::ceil(std::log2(grid.max_frequency()))) + 1;
  shells_.assign(count(), std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.frequency_norm(i);
    for (int j = 0; j <= top_; ++j) shells_[j][i] = profile(j, t);
  }
}

double LPFamily::profile(int j, double t) const {
  if (j < 0) throw DomainError("negative shell index");
  if (j == 0) return bump_(t);
  return bump_(std::ldexp(t, -j)) - bump_(std::ldexp(t, -(j - 1)));
}

Jet<double> LPFamily::jet(int j, double t) const {
  if (j < 0) throw DomainError("negative shell index");
  if (j == 0) return bump_.jet(t);
  auto scaled = [&](int e) {
    const double s = std::ldexp(1.0, -e);
    Jet<double> g = bump_.jet(s * t);
    g.d1 *= s;
    g.d2 *= s * s;
    return g;
  };
  return scaled(j) - scaled(j - 1);
}

std::pair<double, double> LPFamily::support(int j) {
  if (j == 0) return {0.0, 1.0};
  return {std::ldexp(1.0, j - 2), std::ldexp(1.0, j)};
}

Multiplier LPFamily::multiplier(int j) const {
  Multiplier m(grid_);
  const auto& s = shells_.at(j);
  std::copy(s.begin(), s.end(), m.weights.begin());
  return m;
}

std::vector<int> LPFamily::shells_at(double t) const {
  std::vector<int> out;
  for (int j = 0; j <= top_; ++j) {
    const auto [lo, hi] = support(j);
    if (t >= lo && t <= hi) out.push_back(j);
  }
  return out;
}

// --- annular profile -------------------------------------------------------

AnnularProfile::AnnularProfile() {
  auto h2 = [this](double v) {
    const double u = std::exp(v);
    const double h = bump_(0.5 * u) - bump_(u);
    return h * h;
  };
  c_ = integrate(h2, std::log(0.5), std::log(2.0));
}

double AnnularProfile::operator()(double t) const {
  if (t <= 0.5 || t >= 2.0) return 0.0;
  return (bump_(0.5 * t) - bump_(t)) / std::sqrt(c_);
}

double AnnularProfile::identity_integral(double t, int nodes_per_octave) const {
  if (!(t > 0.0)) throw DomainError("identity_integral needs t > 0");
  const double P = nodes_per_octave;
  const int lo = static_cast<int>(std::floor(P * std::log2(0.5 / t)));
  const int hi = static_cast<int>(std::ceil(P * std::log2(2.0 / t)));
  std::vector<double> terms;
  for (int m = lo; m <= hi; ++m) {
    const double v = (*this)(std::exp2(m / P) * t);
    terms.push_back(v * v);
  }
  return pairwise_sum(terms) * std::log(2.0) / P;
}

// --- sphere quadrature -----------------------------------------------------

double sphere_area(int dim) {
  if (dim == 2) return kTwoPi;
  if (dim == 3) return 4.0 * kPi;
  throw DomainError("sphere_area: dimension must be 2 or 3");
}

SphereQuadrature make_sphere_quadrature(int dim, int nodes) {
  if (nodes < 1) throw DomainError("sphere quadrature needs at least one node");
  SphereQuadrature q;
  q.dim = dim;
  if (dim == 2) {
    for (int i = 0; i < nodes; ++i) {
      const double a = kTwoPi * i / nodes;
      q.nodes.push_back({std::cos(a), std::sin(a), 0.0});
      q.weights.push_back(kTwoPi / nodes);
    }
    q.degree = nodes - 1;
    return q;
  }
  if (dim != 3) throw DomainError("sphere quadrature: dimension must be 2 or 3");
  const int azimuths = 2 * nodes;
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(nodes);
  for (int i = 0; i < nodes; ++i) {
    double z = 0.0;
    double wz = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, i, &z, &wz, table);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < azimuths; ++j) {
      const double a = kTwoPi * j / azimuths;
      q.nodes.push_back({rho * std::cos(a), rho * std::sin(a), z});
      q.weights.push_back(wz * kTwoPi / azimuths);
    }
  }
  gsl_integration_glfixed_table_free(table);
  q.degree = 2 * nodes - 1;
  return q;
}

double cap_normalizer(double sigma, const SphereQuadrature& quad, const BumpProfile& bump) {
  if (!(sigma > 0.0)) throw DomainError("cap_normalizer needs sigma > 0");
  const double root = std::sqrt(sigma);
  std::vector<double> terms(quad.size());
  int inside = 0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const Point& v = quad.nodes[i];
    const double d = std::sqrt((1.0 - v[0]) * (1.0 - v[0]) + v[1] * v[1] + v[2] * v[2]);
    const double f = bump(d / root);
    if (f > 0.0) ++inside;
    terms[i] = quad.weights[i] * f * f;
  }
  if (inside < 8)
    throw ResolutionError("cap at sigma = " + std::to_string(sigma) + " holds only " +
                          std::to_string(inside) + " quadrature nodes (need 8)");
  return 1.0 / std::sqrt(pairwise_sum(terms));
}

double cap_normalizer_exact(double sigma, int dim, const BumpProfile& bump) {
  if (!(sigma > 0.0)) throw DomainError("cap_normalizer needs sigma > 0");
  const double root = std::sqrt(sigma);
  // |e1 - nu| = 2 sin(theta/2) with theta the angle to e1.
  const double reach = bump.support() * root;
  const double theta_max = reach >= 2.0 ? kPi : 2.0 * std::asin(0.5 * reach);
  const double area_factor = dim == 2 ? 2.0 : kTwoPi;
  auto f = [&](double theta) {
    const double b = bump(2.0 * std::sin(0.5 * theta) / root);
    const double jac = dim == 2 ? 1.0 : std::sin(theta);
    return b * b * jac;
  };
  // Split at the plateau edge where the integrand stops being constant.
  const double plateau = bump.plateau() * root;
  double total = 0.0;
  if (plateau >= 2.0) {
    total = integrate(f, 0.0, kPi);
  } else {
    const double theta_p = 2.0 * std::asin(0.5 * plateau);
    total = integrate(f, 0.0, theta_p) + integrate(f, theta_p, theta_max);
  }
  return 1.0 / std::sqrt(area_factor * total);
}

// --- parabolic localizers --------------------------------------------------

double direction_distance(const Lattice& k, int dim, const Point& omega) {
  double norm2 = 0.0;
  for (int a = 0; a < dim; ++a) norm2 += static_cast<double>(k[a]) * k[a];
  const double inv = 1.0 / std::sqrt(norm2);
  double d2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double e = k[a] * inv - omega[a];
    d2 += e * e;
  }
  return std::sqrt(d2);
}

Multiplier ParabolicLocalizer::multiplier() const {
  Multiplier m(grid, 0.0);
  for (std::size_t e = 0; e < index.size(); ++e) m.weights[index[e]] = value[e];
  return m;
}

double ParabolicLocalizer::at(std::size_t flat) const {
  const auto it = std::lower_bound(index.begin(), index.end(), static_cast<std::uint32_t>(flat));
  if (it == index.end() || *it != flat) return 0.0;
  return value[static_cast<std::size_t>(it - index.begin())];
}

std::vector<ParabolicLocalizer> make_parabolic_localizers(const Grid& grid,
                                                          const std::vector<Point>& directions,
                                                          const LocalizerSettings& settings) {
  for (const auto& w : directions) {
    double n2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) n2 += w[a] * w[a];
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) throw DomainError("localizer direction must be a unit vector");
  }
  const int P = settings.sigma_nodes_per_octave;
  if (P < 1) throw DomainError("sigma_nodes_per_octave must be positive");
  const BumpProfile& bump = settings.cap_bump;
  const AnnularProfile Psi;

  // sigma_m = 2^(m/P); the window sigma |k| in (1/2, 2) with |k| >= 1 and
  // sigma <= 4 bounds m from both sides.
  const int m_lo = static_cast<int>(std::floor(P * std::log2(0.5 / grid.max_frequency()))) - 1;
  const int m_hi = 2 * P;
  std::vector<double> c_sigma(m_hi - m_lo + 1);
  parallel_for(c_sigma.size(), [&](std::size_t i) {
    c_sigma[i] = cap_normalizer_exact(std::exp2(static_cast<double>(m_lo + static_cast<int>(i)) / P),
                                      grid.dim(), bump);
  });

  const std::size_t total = grid.size();
  const std::size_t chunk = 256;
  const std::size_t chunks = (total + chunk - 1) / chunk;
  struct Hit {
    std::uint32_t dir;
    std::uint32_t k;
    double value;
  };
  std::vector<std::vector<Hit>> hits(chunks);
  const double step = std::log(2.0) / P;

  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> weight;
    std::vector<double> root;
    for (std::size_t i = c * chunk; i < std::min(total, (c + 1) * chunk); ++i) {
      const double t = grid.frequency_norm(i);
      if (t < 0.125) continue;
      const int lo = std::max(m_lo, static_cast<int>(std::ceil(P * std::log2(0.5 / t))));
      const int hi = std::min(m_hi, static_cast<int>(std::floor(P * std::log2(2.0 / t))));
      weight.clear();
      root.clear();
      for (int m = lo; m <= hi; ++m) {
        const double sigma = std::exp2(static_cast<double>(m) / P);
        weight.push_back(Psi(sigma * t) * c_sigma[m - m_lo] * step);
        root.push_back(std::sqrt(sigma));
      }
      if (weight.empty()) continue;
      const double reach = std::min(2.0 / std::sqrt(t), bump.support() * root.back());
      const Lattice k = grid.lattice(i);
      for (std::size_t w = 0; w < directions.size(); ++w) {
        const double d = direction_distance(k, grid.dim(), directions[w]);
        if (d > reach) continue;
        std::vector<double> terms(weight.size());
        for (std::size_t m = 0; m < weight.size(); ++m) terms[m] = weight[m] * bump(d / root[m]);
        const double v = pairwise_sum(terms);
        if (v != 0.0) hits[c].push_back({static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(i), v});
      }
    }
  });

  std::vector<ParabolicLocalizer> out(directions.size());
  for (std::size_t w = 0; w < directions.size(); ++w) {
    out[w].grid = grid;
    out[w].direction = directions[w];
  }
  for (const auto& list : hits)
    for (const Hit& h : list) {
      out[h.dir].index.push_back(h.k);
      out[h.dir].value.push_back(h.value);
    }
  return out;
}

ParabolicLocalizer make_parabolic_localizer(const Grid& grid, const Point& omega,
                                            const LocalizerSettings& settings) {
  return make_parabolic_localizers(grid, {omega}, settings).front();
}

LocalizerBank::LocalizerBank(const Grid& g, SphereQuadrature q, LocalizerSettings s)
    : grid(g), quad(std::move(q)), settings(s) {
  if (quad.dim != grid.dim()) throw ShapeError("sphere quadrature dimension does not match grid");
  localizers = make_parabolic_localizers(grid, quad.nodes, settings);
}

Multiplier square_function_weight(const LocalizerBank& bank) {
  // Accumulate per frequency in node order so the sum is reproducible.
  std::vector<std::vector<double>> per_k(bank.grid.size());
  for (std::size_t w = 0; w < bank.localizers.size(); ++w) {
    const auto& loc = bank.localizers[w];
    for (std::size_t e = 0; e < loc.index.size(); ++e)
      per_k[loc.index[e]].push_back(bank.quad.weights[w] * loc.value[e] * loc.value[e]);
  }
  Multiplier out(bank.grid, 0.0);
  for (std::size_t i = 0; i < per_k.size(); ++i) out.weights[i] = pairwise_sum(per_k[i]);
  return out;
}

double localizer_kernel_l1(const ParabolicLocalizer& loc) {
  const Grid& g = loc.grid;
  Spectrum s(g);
  for (std::size_t e = 0; e < loc.index.size(); ++e) {
    const double k = g.frequency_norm(loc.index[e]);
    s.coeffs[loc.index[e]] = loc.value[e] * std::pow(1.0 + k * k, -static_cast<double>(g.dim()));
  }
  const GridFunction kernel = inverse_dft(s);
  std::vector<double> mags(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) mags[i] = std::abs(kernel.values[i]);
  return pairwise_sum(mags) * g.cell();
}

}  // namespace fio

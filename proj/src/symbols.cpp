#include "fio/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "fio/spaces.hpp"

namespace fio {

// --- representation --------------------------------------------------------

RoughSymbol RoughSymbol::dense(const Grid& grid, std::vector<cplx> table) {
  if (grid.points() > dense_limit(grid.dim()))
    throw DomainError("dense symbols are limited to N <= " + std::to_string(dense_limit(grid.dim())));
  if (table.size() != grid.size() * grid.size()) throw ShapeError("dense symbol table has the wrong length");
  RoughSymbol a;
  a.rep_ = Representation::dense;
  a.grid_ = grid;
  a.table_ = std::move(table);
  return a;
}

RoughSymbol RoughSymbol::separable(const Grid& grid, std::vector<SeparableTerm> terms) {
  if (terms.empty()) throw DomainError("separable symbols need rank >= 1");
  for (const auto& t : terms) require_same_grid(grid, t.b.grid, "separable symbol");
  RoughSymbol a;
  a.rep_ = Representation::separable;
  a.grid_ = grid;
  a.terms_ = std::move(terms);
  return a;
}

std::vector<cplx> RoughSymbol::column(std::size_t eta) const {
  const std::size_t n = grid_.size();
  if (is_dense()) return {table_.begin() + eta * n, table_.begin() + (eta + 1) * n};
  std::vector<cplx> out(n, 0.0);
  const Lattice k = grid_.lattice(eta);
  for (const auto& t : terms_) {
    const cplx c = t.e.at(k, grid_.dim());
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) out[i] += c * t.b.values[i];
  }
  return out;
}

RoughSymbol RoughSymbol::to_dense() const {
  if (is_dense()) return *this;
  const std::size_t n = grid_.size();
  if (grid_.points() > dense_limit(grid_.dim()))
    throw DomainError("dense symbols are limited to N <= " + std::to_string(dense_limit(grid_.dim())));
  std::vector<cplx> table(n * n);
  parallel_for(n, [&](std::size_t eta) {
    const auto col = column(eta);
    std::copy(col.begin(), col.end(), table.begin() + eta * n);
  });
  return dense(grid_, std::move(table));
}

RoughSymbol RoughSymbol::scaled(cplx c) const {
  RoughSymbol out = *this;
  if (is_dense())
    for (auto& v : out.table_) v *= c;
  else
    for (auto& t : out.terms_) t.e = t.e.scaled(c);
  return out;
}

double max_reconstruction_error(const RoughSymbol& a, const std::vector<const RoughSymbol*>& parts) {
  const Grid& g = a.grid();
  for (const auto* p : parts) require_same_grid(g, p->grid(), "reconstruction");
  std::vector<double> worst(g.size(), 0.0);
  parallel_for(g.size(), [&](std::size_t eta) {
    std::vector<cplx> diff = a.column(eta);
    for (const auto* p : parts) {
      const auto col = p->column(eta);
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= col[i];
    }
    worst[eta] = max_abs(diff);
  });
  return *std::max_element(worst.begin(), worst.end());
}

double max_abs_symbol(const RoughSymbol& a) {
  std::vector<double> worst(a.grid().size(), 0.0);
  parallel_for(worst.size(), [&](std::size_t eta) { worst[eta] = max_abs(a.column(eta)); });
  return *std::max_element(worst.begin(), worst.end());
}

// --- seminorms -------------------------------------------------------------

namespace {

double bracket(double t2) { return std::sqrt(1.0 + t2); }

bool all_radial(const RoughSymbol& a) {
  if (a.is_dense()) return false;
  return std::all_of(a.terms().begin(), a.terms().end(), [](const SeparableTerm& t) { return t.e.is_radial(); });
}

// Indices of the multi-indices that are permutations of each other.
std::vector<std::vector<int>> permutation_orbits(const std::vector<std::array<int, 3>>& alphas, int dim) {
  std::vector<std::vector<int>> orbit(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      std::array<int, 3> a = alphas[i];
      std::array<int, 3> b = alphas[j];
      std::sort(a.begin(), a.begin() + dim);
      std::sort(b.begin(), b.begin() + dim);
      if (a == b) orbit[i].push_back(static_cast<int>(j));
    }
  return orbit;
}

int order_of(const std::array<int, 3>& alpha) { return alpha[0] + alpha[1] + alpha[2]; }

// Separable symbols whose eta-profiles are all radial: |d^alpha a| at eta
// equals |d^{pi alpha} a| at the sorted absolute value of eta, so one point
// per orbit of the hyperoctahedral group suffices.
void seminorm_radial(const RoughSymbol& a, double r, double m, double delta,
                     const std::vector<std::array<int, 3>>& alphas, const LPFamily& lp,
                     std::vector<double>& pointwise, std::vector<double>& regularity) {
  const Grid& g = a.grid();
  const int dim = g.dim();
  const auto& terms = a.terms();
  const std::size_t K = terms.size();
  const std::size_t A = alphas.size();

  // psi_j(D) b_m, dropping blocks that vanish to rounding.
  std::vector<std::vector<std::vector<cplx>>> blocks(K, std::vector<std::vector<cplx>>(lp.count()));
  parallel_for(K * lp.count(), [&](std::size_t idx) {
    const std::size_t mi = idx / lp.count();
    const int j = static_cast<int>(idx % lp.count());
    const auto& b = terms[mi].b;
    const double scale = max_abs(b.values);
    if (scale == 0.0) return;
    std::vector<cplx> buf = b.values;
    detail::fft_inplace(g, buf, -1);
    const auto shell = lp.shell(j);
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= shell[i] / static_cast<double>(g.size());
    detail::fft_inplace(g, buf, +1);
    if (max_abs(buf) > 1e-14 * scale) blocks[mi][j] = std::move(buf);
  });

  std::set<Lattice> reps_set;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Lattice k = g.lattice(i);
    for (int d = 0; d < dim; ++d) k[d] = std::abs(k[d]);
    std::sort(k.begin(), k.begin() + dim, std::greater<>());
    reps_set.insert(k);
  }
  const std::vector<Lattice> reps(reps_set.begin(), reps_set.end());

  std::vector<double> pw(reps.size() * A, 0.0);
  std::vector<double> rg(reps.size() * A, 0.0);
  parallel_for(reps.size(), [&](std::size_t ri) {
    const Lattice& k = reps[ri];
    const Point eta{static_cast<double>(k[0]), static_cast<double>(k[1]), static_cast<double>(k[2])};
    double t2 = 0.0;
    for (int d = 0; d < dim; ++d) t2 += eta[d] * eta[d];
    const double t = std::sqrt(t2);
    std::vector<std::size_t> active;
    std::vector<std::vector<cplx>> coeff;
    for (std::size_t mi = 0; mi < K; ++mi) {
      const auto [lo, hi] = terms[mi].e.support();
      if (t < lo || t > hi) continue;
      active.push_back(mi);
      coeff.push_back(terms[mi].e.derivatives(eta, dim));
    }
    const std::size_t n = g.size();
    std::vector<cplx> u(n);
    for (std::size_t ai = 0; ai < A; ++ai) {
      const int ord = order_of(alphas[ai]);
      std::fill(u.begin(), u.end(), cplx(0.0));
      for (std::size_t q = 0; q < active.size(); ++q) {
        const cplx c = coeff[q][ai];
        if (c == 0.0) continue;
        const auto& b = terms[active[q]].b.values;
        for (std::size_t i = 0; i < n; ++i) u[i] += c * b[i];
      }
      pw[ri * A + ai] = max_abs(u) / std::pow(bracket(t2), m - ord);
      double zyg = 0.0;
      for (int j = 0; j < lp.count(); ++j) {
        std::fill(u.begin(), u.end(), cplx(0.0));
        bool any = false;
        for (std::size_t q = 0; q < active.size(); ++q) {
          const cplx c = coeff[q][ai];
          const auto& blk = blocks[active[q]][j];
          if (c == 0.0 || blk.empty()) continue;
          any = true;
          for (std::size_t i = 0; i < n; ++i) u[i] += c * blk[i];
        }
        if (any) zyg = std::max(zyg, std::exp2(r * j) * max_abs(u));
      }
      rg[ri * A + ai] = zyg / std::pow(bracket(t2), m - ord + r * delta);
    }
  });

  const auto orbits = permutation_orbits(alphas, dim);
  for (std::size_t ai = 0; ai < A; ++ai)
    for (std::size_t ri = 0; ri < reps.size(); ++ri)
      for (int aj : orbits[ai]) {
        pointwise[ai] = std::max(pointwise[ai], pw[ri * A + aj]);
        regularity[ai] = std::max(regularity[ai], rg[ri * A + aj]);
      }
}

// Fourth-order centered differences in eta on the lattice.
void seminorm_stencil(const RoughSymbol& a, double r, double m, double delta,
                      const std::vector<std::array<int, 3>>& alphas, const LPFamily& lp,
                      std::vector<double>& pointwise, std::vector<double>& regularity) {
  const Grid& g = a.grid();
  const int dim = g.dim();
  const int half = g.points() / 2;
  const std::size_t A = alphas.size();
  static const int off1[4] = {-2, -1, 1, 2};
  static const double c1[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
  static const int off2[5] = {-2, -1, 0, 1, 2};
  static const double c2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};

  std::vector<std::size_t> interior;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Lattice k = g.lattice(i);
    bool ok = true;
    for (int d = 0; d < dim; ++d) ok = ok && k[d] >= -half + 2 && k[d] <= half - 3;
    if (ok) interior.push_back(i);
  }
  if (interior.empty()) throw ResolutionError("grid too small for eta differences");

  std::vector<double> pw(interior.size() * A, 0.0);
  std::vector<double> rg(interior.size() * A, 0.0);
  parallel_for(interior.size(), [&](std::size_t ii) {
    const Lattice k0 = g.lattice(interior[ii]);
    std::map<Lattice, std::vector<cplx>> cache;
    auto col = [&](const Lattice& off) -> const std::vector<cplx>& {
      auto it = cache.find(off);
      if (it != cache.end()) return it->second;
      Lattice k = k0;
      for (int d = 0; d < dim; ++d) k[d] += off[d];
      return cache.emplace(off, a.column(g.flat(k))).first->second;
    };
    double t2 = 0.0;
    for (int d = 0; d < dim; ++d) t2 += static_cast<double>(k0[d]) * k0[d];
    const std::size_t n = g.size();
    for (std::size_t ai = 0; ai < A; ++ai) {
      const auto& alpha = alphas[ai];
      std::vector<cplx> u(n, 0.0);
      auto add = [&](const Lattice& off, double c) {
        const auto& v = col(off);
        for (std::size_t i = 0; i < n; ++i) u[i] += c * v[i];
      };
      std::vector<int> axes;
      for (int d = 0; d < dim; ++d)
        for (int q = 0; q < alpha[d]; ++q) axes.push_back(d);
      if (axes.empty()) {
        u = col({0, 0, 0});
      } else if (axes.size() == 1) {
        for (int s = 0; s < 4; ++s) {
          Lattice off{0, 0, 0};
          off[axes[0]] = off1[s];
          add(off, c1[s]);
        }
      } else if (axes[0] == axes[1]) {
        for (int s = 0; s < 5; ++s) {
          Lattice off{0, 0, 0};
          off[axes[0]] = off2[s];
          add(off, c2[s]);
        }
      } else {
        for (int s = 0; s < 4; ++s)
          for (int q = 0; q < 4; ++q) {
            Lattice off{0, 0, 0};
            off[axes[0]] = off1[s];
            off[axes[1]] = off1[q];
            add(off, c1[s] * c1[q]);
          }
      }
      const int ord = order_of(alpha);
      pw[ii * A + ai] = max_abs(u) / std::pow(bracket(t2), m - ord);
      rg[ii * A + ai] = zygmund_norm(GridFunction(g, std::move(u)), r, lp) /
                        std::pow(bracket(t2), m - ord + r * delta);
    }
  });
  for (std::size_t ii = 0; ii < interior.size(); ++ii)
    for (std::size_t ai = 0; ai < A; ++ai) {
      pointwise[ai] = std::max(pointwise[ai], pw[ii * A + ai]);
      regularity[ai] = std::max(regularity[ai], rg[ii * A + ai]);
    }
}

}  // namespace

SymbolSeminorm seminorm(const RoughSymbol& a, double r, double m, double delta, int l, const LPFamily& lp) {
  require_same_grid(a.grid(), lp.grid(), "seminorm");
  if (l < 0) throw DomainError("derivative order must be nonnegative");
  if (l > 2)
    throw DomainError(a.is_dense() ? "dense symbols support derivative orders l <= 2"
                                   : "derivative orders above 2 are not supported");
  const int dim = a.grid().dim();
  const auto alphas = multi_indices(dim, l);
  std::vector<double> pointwise(alphas.size(), 0.0);
  std::vector<double> regularity(alphas.size(), 0.0);
  if (all_radial(a))
    seminorm_radial(a, r, m, delta, alphas, lp, pointwise, regularity);
  else
    seminorm_stencil(a, r, m, delta, alphas, lp, pointwise, regularity);

  SymbolSeminorm out;
  out.r = r;
  out.m = m;
  out.delta = delta;
  out.l = l;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    out.per_alpha.push_back({multi_index_name(alphas[i], dim), pointwise[i], regularity[i]});
    out.M = std::max({out.M, pointwise[i], regularity[i]});
  }
  return out;
}

// --- smoothing -------------------------------------------------------------

namespace {

std::vector<std::vector<double>> smoothing_filters(const Grid& g, double beta, int top, const BumpProfile& bump) {
  std::vector<std::vector<double>> filters(top + 1, std::vector<double>(g.size()));
  for (int k = 0; k <= top; ++k) {
    const double scale = std::exp2(-beta * k);
    for (std::size_t i = 0; i < g.size(); ++i) filters[k][i] = bump(scale * g.frequency_norm(i));
  }
  return filters;
}

Multiplier as_multiplier(const Grid& g, const std::vector<double>& w, bool complement) {
  Multiplier m(g);
  for (std::size_t i = 0; i < w.size(); ++i) m.weights[i] = complement ? 1.0 - w[i] : w[i];
  return m;
}

}  // namespace

SmoothingSplit smooth_split(const RoughSymbol& a, double beta, const LPFamily& lp, const BumpProfile& bump) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("smoothing parameter beta must lie in [0, 1]");
  const Grid& g = a.grid();
  require_same_grid(g, lp.grid(), "smooth_split");
  const auto filters = smoothing_filters(g, beta, lp.top(), bump);
  SmoothingSplit out;
  out.beta = beta;

  if (a.is_dense()) {
    const std::size_t n = g.size();
    std::vector<cplx> sharp(n * n);
    std::vector<cplx> flat(n * n);
    const double inv = 1.0 / static_cast<double>(n);
    parallel_for(n, [&](std::size_t eta) {
      std::vector<cplx> spec = a.column(eta);
      detail::fft_inplace(g, spec, -1);
      std::vector<cplx> s(n, 0.0);
      std::vector<cplx> f(n, 0.0);
      for (int k = 0; k < lp.count(); ++k) {
        const double psi = lp.shell(k)[eta];
        if (psi == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
          s[i] += psi * filters[k][i] * spec[i];
          f[i] += psi * (1.0 - filters[k][i]) * spec[i];
        }
      }
      detail::fft_inplace(g, s, +1);
      detail::fft_inplace(g, f, +1);
      for (std::size_t i = 0; i < n; ++i) {
        sharp[eta * n + i] = s[i] * inv;
        flat[eta * n + i] = f[i] * inv;
      }
    });
    out.sharp = RoughSymbol::dense(g, std::move(sharp));
    out.flat = RoughSymbol::dense(g, std::move(flat));
    return out;
  }

  std::vector<Multiplier> low(lp.count());
  std::vector<Multiplier> high(lp.count());
  for (int k = 0; k < lp.count(); ++k) {
    low[k] = as_multiplier(g, filters[k], false);
    high[k] = as_multiplier(g, filters[k], true);
  }
  struct Slot {
    std::size_t term;
    int k;
    EtaProfile e;
  };
  std::vector<Slot> slots;
  for (std::size_t mi = 0; mi < a.rank(); ++mi)
    for (int k = 0; k < lp.count(); ++k) {
      EtaProfile e = a.terms()[mi].e * EtaProfile::radial({RadialFactor::lp_shell(k)});
      if (!e.is_zero()) slots.push_back({mi, k, std::move(e)});
    }
  std::vector<SeparableTerm> sharp(slots.size());
  std::vector<SeparableTerm> flat(slots.size());
  parallel_for(slots.size(), [&](std::size_t i) {
    const auto& s = slots[i];
    const GridFunction& b = a.terms()[s.term].b;
    sharp[i] = {apply_multiplier(low[s.k], b), s.e};
    flat[i] = {apply_multiplier(high[s.k], b), s.e};
  });
  if (slots.empty()) {
    sharp.push_back({GridFunction(g), EtaProfile(0.0)});
    flat.push_back({GridFunction(g), EtaProfile(0.0)});
  }
  out.sharp = RoughSymbol::separable(g, std::move(sharp));
  out.flat = RoughSymbol::separable(g, std::move(flat));
  return out;
}

// --- analytic family -------------------------------------------------------

RoughSymbol interp_family(const RoughSymbol& a, double kappa, double lambda, double delta, cplx z) {
  if (!(z.real() >= 0.0 && z.real() <= 1.0)) throw DomainError("z must lie in the closed strip 0 <= Re z <= 1");
  const cplx w = kappa * z + lambda;
  if (w == 0.0) return a;
  const Grid& g = a.grid();
  const cplx damping = std::exp(w * w);
  const Multiplier lift = sobolev_weight(g, w);

  if (a.is_dense()) {
    const std::size_t n = g.size();
    std::vector<cplx> table(n * n);
    parallel_for(n, [&](std::size_t eta) {
      const double t = g.frequency_norm(eta);
      const cplx factor = damping * std::exp(-delta * w * 0.5 * std::log1p(t * t));
      const GridFunction col = apply_multiplier(lift, GridFunction(g, a.column(eta)));
      for (std::size_t i = 0; i < n; ++i) table[eta * n + i] = factor * col.values[i];
    });
    return RoughSymbol::dense(g, std::move(table));
  }

  std::vector<SeparableTerm> terms(a.rank());
  parallel_for(a.rank(), [&](std::size_t i) {
    const auto& t = a.terms()[i];
    EtaProfile e = t.e * EtaProfile::radial({RadialFactor::bracket(-delta * w)}, damping);
    terms[i] = {apply_multiplier(lift, t.b), std::move(e)};
  });
  return RoughSymbol::separable(g, std::move(terms));
}

// --- support window --------------------------------------------------------

WindowReport support_window_check(const RoughSymbol& a, double c, double exponent, double floor) {
  const Grid& g = a.grid();
  const std::size_t n = g.size();
  std::vector<double> radius(n);
  for (std::size_t i = 0; i < n; ++i) radius[i] = g.frequency_norm(i);

  std::vector<std::vector<cplx>> spectra;
  if (!a.is_dense()) {
    spectra.resize(a.rank());
    parallel_for(a.rank(), [&](std::size_t i) {
      spectra[i] = a.terms()[i].b.values;
      detail::fft_inplace(g, spectra[i], -1);
    });
  }

  struct Local {
    double relative = 0.0;
    std::vector<WindowViolation> worst;
  };
  std::vector<Local> local(n);
  parallel_for(n, [&](std::size_t eta) {
    const double t = radius[eta];
    std::vector<cplx> F(n, 0.0);
    if (a.is_dense()) {
      F = a.column(eta);
      detail::fft_inplace(g, F, -1);
    } else {
      const Lattice k = g.lattice(eta);
      for (std::size_t mi = 0; mi < a.rank(); ++mi) {
        const auto& e = a.terms()[mi].e;
        if (e.is_radial()) {
          const auto [lo, hi] = e.support();
          if (t < lo || t > hi) continue;
        }
        const cplx coef = e.at(k, g.dim());
        if (coef == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) F[i] += coef * spectra[mi][i];
      }
    }
    const double lower = c * std::sqrt(t);
    const double upper = std::pow(1.0 + t, exponent) / 16.0;
    std::vector<double> all(n);
    std::vector<double> outside(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      all[i] = std::norm(F[i]);
      if (radius[i] < lower || radius[i] > upper) outside[i] = all[i];
    }
    const double total = pairwise_sum(all);
    if (total == 0.0 || std::sqrt(total) <= floor) return;
    const double rel = std::sqrt(pairwise_sum(outside) / total);
    local[eta].relative = rel;
    if (rel <= 1e-10) return;
    const double root = std::sqrt(total);
    for (std::size_t i = 0; i < n; ++i)
      if (outside[i] > 0.0 && std::sqrt(outside[i]) > 1e-10 * root)
        local[eta].worst.push_back({g.lattice(i), g.lattice(eta), std::sqrt(outside[i]) / root});
    std::sort(local[eta].worst.begin(), local[eta].worst.end(),
              [](const auto& x, const auto& y) { return x.magnitude > y.magnitude; });
    if (local[eta].worst.size() > 32) local[eta].worst.resize(32);
  });

  WindowReport rep;
  for (const auto& l : local) {
    rep.worst_relative = std::max(rep.worst_relative, l.relative);
    if (l.relative > 1e-10) ++rep.violating_eta;
    rep.violations.insert(rep.violations.end(), l.worst.begin(), l.worst.end());
  }
  std::stable_sort(rep.violations.begin(), rep.violations.end(),
                   [](const auto& x, const auto& y) { return x.magnitude > y.magnitude; });
  if (rep.violations.size() > 32) rep.violations.resize(32);
  rep.pass = rep.violating_eta == 0;
  return rep;
}

// --- generators ------------------------------------------------------------

GridFunction lacunary_field(const Grid& grid, double r, int J, std::uint64_t seed) {
  if (J < 2) throw DomainError("lacunary field needs J >= 2");
  if (std::ldexp(1.0, J - 1) >= grid.points() / 2.0)
    throw DomainError("lacunary field: 2^(J-1) must stay below N/2");
  Rng rng(seed);
  struct Mode {
    Lattice k;
    double amp;
    double phase;
  };
  std::vector<Mode> modes;
  for (int j = 2; j <= J; ++j) {
    const auto choice = static_cast<int>(rng.bits() % static_cast<std::uint64_t>(2 * grid.dim()));
    Lattice k{0, 0, 0};
    k[choice / 2] = (choice % 2 ? -1 : 1) * (1 << (j - 1));
    modes.push_back({k, std::exp2(-j * r), kTwoPi * rng.uniform()});
  }
  return sample(grid, [&](const Point& x) {
    double acc = 0.0;
    for (const auto& md : modes) {
      double phase = md.phase;
      for (int a = 0; a < grid.dim(); ++a) phase += md.k[a] * x[a];
      acc += md.amp * std::cos(phase);
    }
    return cplx(acc);
  });
}

RoughSymbol flat_of_b(const GridFunction& b, double delta, const LPFamily& lp, const BumpProfile& bump) {
  const Grid& g = b.grid;
  require_same_grid(g, lp.grid(), "flat_of_b");
  const auto filters = smoothing_filters(g, delta, lp.top(), bump);
  std::vector<SeparableTerm> terms(lp.count());
  parallel_for(lp.count(), [&](std::size_t k) {
    terms[k] = {apply_multiplier(as_multiplier(g, filters[k], true), b),
                EtaProfile::radial({RadialFactor::lp_shell(static_cast<int>(k))})};
  });
  return RoughSymbol::separable(g, std::move(terms));
}

RoughSymbol make_test_symbol(const std::string& kind, const Grid& grid, const TestSymbolParams& params,
                             const LPFamily* lp) {
  auto ones = [&] {
    GridFunction one(grid);
    std::fill(one.values.begin(), one.values.end(), cplx(1.0));
    return one;
  };
  auto need_b = [&] {
    if (params.b.values.size() != grid.size()) throw DomainError(kind + " symbol needs a field b on the grid");
    require_same_grid(grid, params.b.grid, "make_test_symbol");
  };
  if (kind == "multiplier") return RoughSymbol::separable(grid, {{ones(), params.w}});
  if (kind == "multiplication") {
    need_b();
    return RoughSymbol::separable(grid, {{params.b, EtaProfile(1.0)}});
  }
  if (kind == "tensor") {
    need_b();
    return RoughSymbol::separable(grid, {{params.b, params.w}});
  }
  if (kind == "flat-of-b") {
    need_b();
    if (lp) return flat_of_b(params.b, params.delta, *lp, params.bump);
    return flat_of_b(params.b, params.delta, LPFamily(grid), params.bump);
  }
  throw DomainError("unknown test symbol kind '" + kind + "'");
}

}  // namespace fio

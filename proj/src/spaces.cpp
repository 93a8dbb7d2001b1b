#include "fio/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fio {

FunctionSpace::FunctionSpace(const Grid& grid, const SpaceSettings& settings)
    : grid_(grid),
      settings_(settings),
      lp_(grid),
      bank_(grid, make_sphere_quadrature(grid.dim(), settings.sphere_nodes), settings.localizer),
      q_(grid) {
  const BumpProfile phi;
  for (std::size_t i = 0; i < grid.size(); ++i) q_.weights[i] = phi(0.25 * grid.frequency_norm(i));
}

void check_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw DomainError("exponent p must satisfy 1 < p < inf, got " + std::to_string(p));
}

double lp_norm(const Grid& grid, std::span<const cplx> u, double p) {
  check_exponent(p);
  if (u.size() != grid.size()) throw ShapeError("lp_norm: length does not match grid");
  const double peak = max_abs(u);
  if (peak == 0.0) return 0.0;
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) terms[i] = std::pow(std::abs(u[i]) / peak, p);
  return peak * std::pow(pairwise_sum(terms) * grid.cell(), 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) { return lp_norm(f.grid, f.values, p); }

double sobolev_norm(const GridFunction& f, double s, double p) {
  check_exponent(p);
  if (s == 0.0) return lp_norm(f, p);
  return lp_norm(apply_multiplier(sobolev_weight(f.grid, s), f), p);
}

NormReport zygmund_report(const GridFunction& f, double r, const LPFamily& lp) {
  require_same_grid(f.grid, lp.grid(), "zygmund_norm");
  const Grid& g = f.grid;
  std::vector<cplx> spec = f.values;
  detail::fft_inplace(g, spec, -1);
  NormReport rep;
  rep.space = "zygmund";
  rep.r = r;
  rep.shell_terms.assign(lp.count(), 0.0);
  parallel_for(lp.count(), [&](std::size_t j) {
    const auto shell = lp.shell(static_cast<int>(j));
    std::vector<cplx> buf(g.size());
    bool any = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
      buf[i] = spec[i] * shell[i];
      any = any || buf[i] != 0.0;
    }
    if (!any) return;
    detail::fft_inplace(g, buf, +1);
    rep.shell_terms[j] = std::exp2(r * static_cast<double>(j)) * max_abs(buf) /
                         static_cast<double>(g.size());
  });
  for (int j = 0; j < lp.count(); ++j)
    if (rep.shell_terms[j] > rep.value) {
      rep.value = rep.shell_terms[j];
      rep.argmax_shell = j;
    }
  return rep;
}

double zygmund_norm(const GridFunction& f, double r, const LPFamily& lp) {
  return zygmund_report(f, r, lp).value;
}

namespace {

struct HfioPieces {
  double value = 0.0;
  double low = 0.0;
  double sphere = 0.0;
  GridFunction gradient;
};

// |u|^{p-2} u, the derivative of |u|^p / p.
cplx duality(cplx u, double p) {
  const double a = std::abs(u);
  return a == 0.0 ? cplx(0.0) : std::pow(a, p - 2.0) * u;
}

// sum (|u_i| / peak)^p over the samples, with peak = max |u_i|; when `dual` is
// set, u is overwritten by |u|^{p-2} u. Works on squared moduli to avoid sqrt.
struct PowerSum {
  double peak = 0.0;
  double sum = 0.0;
};

PowerSum power_sum(std::vector<cplx>& u, double p, bool dual) {
  double peak2 = 0.0;
  for (const cplx& v : u) peak2 = std::max(peak2, std::norm(v));
  PowerSum out;
  if (peak2 == 0.0) return out;
  out.peak = std::sqrt(peak2);
  std::vector<double> t(u.size());
  const double half = 0.5 * p;
  for (std::size_t i = 0; i < u.size(); ++i) t[i] = std::pow(std::norm(u[i]) / peak2, half);
  out.sum = pairwise_sum(t);
  if (dual) {
    const double peak_p = std::pow(out.peak, p);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double n2 = std::norm(u[i]);
      u[i] = n2 == 0.0 ? cplx(0.0) : u[i] * (t[i] * peak_p / n2);
    }
  }
  return out;
}

HfioPieces hfio_pieces(const GridFunction& f, double s, double p, const FunctionSpace& space,
                       bool weight_low_term, bool want_gradient) {
  check_exponent(p);
  require_same_grid(f.grid, space.grid(), "hfio_norm");
  const Grid& g = f.grid;
  const double inv_size = 1.0 / static_cast<double>(g.size());
  std::vector<cplx> spec = f.values;
  detail::fft_inplace(g, spec, -1);

  std::vector<double> weight(g.size(), 1.0);
  if (s != 0.0)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double k = g.frequency_norm(i);
      weight[i] = std::exp(s * 0.5 * std::log1p(k * k));
    }

  HfioPieces out;

  // Low-frequency term.
  std::vector<cplx> low_buf(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    low_buf[i] = spec[i] * space.low_pass().weights[i] * (weight_low_term ? weight[i] : 1.0);
  detail::fft_inplace(g, low_buf, +1);
  for (auto& v : low_buf) v *= inv_size;
  out.low = lp_norm(g, low_buf, p);

  // Per-node terms T_i = ||u_i||_p^p, each evaluated independently.
  const auto& bank = space.bank();
  const std::size_t nodes = bank.localizers.size();
  std::vector<double> terms(nodes, 0.0);
  std::vector<std::vector<cplx>> back(want_gradient ? nodes : 0);
  parallel_for(nodes, [&](std::size_t w) {
    const auto& loc = bank.localizers[w];
    if (loc.index.empty()) return;
    std::vector<cplx> buf(g.size());
    for (std::size_t e = 0; e < loc.index.size(); ++e) {
      const auto k = loc.index[e];
      buf[k] = spec[k] * (loc.value[e] * weight[k]);
    }
    detail::fft_inplace(g, buf, +1);
    for (auto& v : buf) v *= inv_size;
    const PowerSum ps = power_sum(buf, p, want_gradient);
    terms[w] = bank.quad.weights[w] * std::pow(ps.peak, p) * ps.sum * g.cell();
    if (want_gradient && ps.peak > 0.0) {
      detail::fft_inplace(g, buf, -1);
      auto& sparse = back[w];
      sparse.resize(loc.index.size());
      for (std::size_t e = 0; e < loc.index.size(); ++e) {
        const auto k = loc.index[e];
        sparse[e] = buf[k] * (loc.value[e] * weight[k]);
      }
    }
  });
  const double total = pairwise_sum(terms);
  out.sphere = std::pow(total, 1.0 / p);
  out.value = out.low + out.sphere;
  if (!want_gradient) return out;

  // d||u||_p = cell ||u||_p^{1-p} Re <A^* (|u|^{p-2} u), df>, and
  // d S = S^{1-p} sum_i w_i cell Re <A_i^* (|u_i|^{p-2} u_i), df>.
  std::vector<cplx> acc(g.size(), 0.0);
  if (out.low > 0.0) {
    std::vector<cplx> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = duality(low_buf[i], p);
    detail::fft_inplace(g, v, -1);
    const double c = g.cell() * std::pow(out.low, 1.0 - p);
    for (std::size_t i = 0; i < g.size(); ++i)
      acc[i] += v[i] * (space.low_pass().weights[i].real() * (weight_low_term ? weight[i] : 1.0) * c);
  }
  if (out.sphere > 0.0) {
    const double c = g.cell() * std::pow(out.sphere, 1.0 - p);
    for (std::size_t w = 0; w < nodes; ++w) {
      const auto& loc = bank.localizers[w];
      const double scale = c * bank.quad.weights[w];
      for (std::size_t e = 0; e < back[w].size(); ++e) acc[loc.index[e]] += back[w][e] * scale;
    }
  }
  detail::fft_inplace(g, acc, +1);
  for (auto& v : acc) v *= inv_size;
  out.gradient = GridFunction(g, std::move(acc));
  return out;
}

NormReport to_report(const char* name, const HfioPieces& h, double s, double p) {
  NormReport rep;
  rep.space = name;
  rep.value = h.value;
  rep.low_term = h.low;
  rep.sphere_term = h.sphere;
  rep.s = s;
  rep.p = p;
  return rep;
}

}  // namespace

NormReport hfio_norm(const GridFunction& f, double s, double p, const FunctionSpace& space) {
  return to_report("hfio", hfio_pieces(f, s, p, space, true, false), s, p);
}

NormReport hfio_norm_alt(const GridFunction& f, double s, double p, const FunctionSpace& space) {
  return to_report("hfio-alt", hfio_pieces(f, s, p, space, false, false), s, p);
}

NormGradient hfio_norm_gradient(const GridFunction& f, double s, double p, const FunctionSpace& space) {
  HfioPieces h = hfio_pieces(f, s, p, space, true, true);
  return {h.value, std::move(h.gradient)};
}

}  // namespace fio

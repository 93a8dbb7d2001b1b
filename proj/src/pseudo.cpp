#include "fio/pseudo.hpp"

#include <cmath>

namespace fio {

Operator::Operator(RoughSymbol a, ApplyPath path) : a_(std::move(a)), path_(path) {
  if (path_ == ApplyPath::automatic) path_ = a_.is_dense() ? ApplyPath::direct : ApplyPath::separable;
  if (path_ == ApplyPath::separable) {
    if (a_.is_dense()) throw DomainError("the separable path needs a separable symbol");
    for (const auto& t : a_.terms()) tables_.push_back(t.e.lattice_table(a_.grid()));
  } else {
    dense_ = a_.to_dense();
  }
}

namespace {

// exp(i 2 pi m / N) for m in [0, N).
std::vector<cplx> twiddles(int N) {
  std::vector<cplx> tw(N);
  for (int m = 0; m < N; ++m) tw[m] = std::polar(1.0, kTwoPi * m / N);
  return tw;
}

// Residue of k.j mod N for lattice frequency k and axis offsets j.
std::size_t phase_index(const Grid& g, const Lattice& k, const Lattice& j) {
  long acc = 0;
  for (int a = 0; a < g.dim(); ++a) acc += static_cast<long>(k[a]) * j[a];
  const long N = g.points();
  acc %= N;
  return static_cast<std::size_t>(acc < 0 ? acc + N : acc);
}

GridFunction direct_apply(const RoughSymbol& dense, const GridFunction& f) {
  const Grid& g = f.grid;
  const std::size_t n = g.size();
  std::vector<cplx> spec = f.values;
  detail::fft_inplace(g, spec, -1);
  const auto tw = twiddles(g.points());
  const double scale = 1.0 / static_cast<double>(n);
  GridFunction out(g);
  const auto& table = dense.table();
  parallel_for(n, [&](std::size_t x) {
    const Lattice j = g.offsets(x);
    std::vector<cplx> terms(n);
    for (std::size_t k = 0; k < n; ++k)
      terms[k] = table[k * n + x] * spec[k] * tw[phase_index(g, g.lattice(k), j)];
    out.values[x] = pairwise_sum(terms) * scale;
  });
  return out;
}

GridFunction direct_adjoint(const RoughSymbol& dense, const GridFunction& h) {
  const Grid& g = h.grid;
  const std::size_t n = g.size();
  const auto tw = twiddles(g.points());
  const auto& table = dense.table();
  std::vector<cplx> G(n);
  parallel_for(n, [&](std::size_t k) {
    const Lattice kk = g.lattice(k);
    std::vector<cplx> terms(n);
    for (std::size_t x = 0; x < n; ++x)
      terms[x] = std::conj(table[k * n + x] * tw[phase_index(g, kk, g.offsets(x))]) * h.values[x];
    G[k] = pairwise_sum(terms);
  });
  detail::fft_inplace(g, G, +1);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : G) v *= scale;
  return GridFunction(g, std::move(G));
}

}  // namespace

GridFunction Operator::apply(const GridFunction& f) const {
  require_same_grid(a_.grid(), f.grid, "apply");
  if (path_ == ApplyPath::direct) return direct_apply(dense_, f);
  const Grid& g = f.grid;
  const std::size_t n = g.size();
  std::vector<cplx> spec = f.values;
  detail::fft_inplace(g, spec, -1);
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<std::vector<cplx>> parts(a_.rank());
  parallel_for(a_.rank(), [&](std::size_t m) {
    std::vector<cplx> buf(n);
    const auto& w = tables_[m].weights;
    for (std::size_t i = 0; i < n; ++i) buf[i] = spec[i] * w[i];
    detail::fft_inplace(g, buf, +1);
    const auto& b = a_.terms()[m].b.values;
    for (std::size_t i = 0; i < n; ++i) buf[i] *= b[i] * scale;
    parts[m] = std::move(buf);
  });
  GridFunction out(g);
  for (const auto& part : parts)
    for (std::size_t i = 0; i < n; ++i) out.values[i] += part[i];
  return out;
}

GridFunction Operator::adjoint(const GridFunction& h) const {
  require_same_grid(a_.grid(), h.grid, "adjoint_apply");
  if (path_ == ApplyPath::direct) return direct_adjoint(dense_, h);
  // (sum_m b_m e_m(D))^* = sum_m conj(e_m)(D) conj(b_m).
  const Grid& g = h.grid;
  const std::size_t n = g.size();
  std::vector<std::vector<cplx>> parts(a_.rank());
  parallel_for(a_.rank(), [&](std::size_t m) {
    std::vector<cplx> buf(n);
    const auto& b = a_.terms()[m].b.values;
    for (std::size_t i = 0; i < n; ++i) buf[i] = std::conj(b[i]) * h.values[i];
    detail::fft_inplace(g, buf, -1);
    const auto& w = tables_[m].weights;
    for (std::size_t i = 0; i < n; ++i) buf[i] *= std::conj(w[i]);
    parts[m] = std::move(buf);
  });
  std::vector<cplx> acc(n, 0.0);
  for (const auto& part : parts)
    for (std::size_t i = 0; i < n; ++i) acc[i] += part[i];
  detail::fft_inplace(g, acc, +1);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : acc) v *= scale;
  return GridFunction(g, std::move(acc));
}

GridFunction apply(const RoughSymbol& a, const GridFunction& f, ApplyPath path) {
  return Operator(a, path).apply(f);
}

GridFunction adjoint_apply(const RoughSymbol& a, const GridFunction& g, ApplyPath path) {
  return Operator(a, path).adjoint(g);
}

namespace {

double l2(const std::vector<cplx>& v) {
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = std::norm(v[i]);
  return std::sqrt(pairwise_sum(sq));
}

}  // namespace

double opnorm_l2(const Operator& op, const PowerIterationOptions& opts) {
  const Grid& g = op.symbol().grid();
  Rng rng(opts.seed);
  GridFunction v(g);
  for (auto& x : v.values) x = {rng.normal(), rng.normal()};
  double nv = l2(v.values);
  for (auto& x : v.values) x /= nv;
  double lambda = 0.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const GridFunction av = op.apply(v);
    const double rayleigh = std::pow(l2(av.values), 2);
    GridFunction w = op.adjoint(av);
    const double nw = l2(w.values);
    const bool done = it > 0 && std::abs(rayleigh - lambda) <= opts.tolerance * rayleigh;
    lambda = std::max(lambda, rayleigh);
    if (nw == 0.0 || done) break;
    for (auto& x : w.values) x /= nw;
    v = std::move(w);
  }
  return std::sqrt(lambda);
}

double opnorm_l2(const RoughSymbol& a, const PowerIterationOptions& opts) {
  return opnorm_l2(Operator(a), opts);
}

std::optional<double> bound_ratio(const Operator& op, const GridFunction& f, double s, double p,
                                  double m_order, double extra_loss, const FunctionSpace& space) {
  const double denom = hfio_norm(f, s + m_order + extra_loss, p, space).value;
  if (!(denom > 1e-13)) return std::nullopt;
  return hfio_norm(op.apply(f), s, p, space).value / denom;
}

}  // namespace fio

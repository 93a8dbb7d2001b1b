#include "fio/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace fio {

Grid::Grid(int dim, int points) : dim_(dim), points_(points) {
  if (dim != 2 && dim != 3) throw DomainError("grid dimension must be 2 or 3");
  if (points < 8 || (points & (points - 1)) != 0)
    throw DomainError("points per axis must be a power of two >= 8, got " + std::to_string(points));
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(points);
}

Lattice Grid::offsets(std::size_t flat) const {
  Lattice idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % points_);
    flat /= points_;
  }
  return idx;
}

Lattice Grid::lattice(std::size_t flat) const {
  Lattice k = offsets(flat);
  for (int a = 0; a < dim_; ++a) k[a] = frequency(k[a]);
  return k;
}

std::size_t Grid::flat(const Lattice& k) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a) idx = idx * points_ + axis_index(k[a]);
  return idx;
}

double Grid::frequency_norm(std::size_t flat_index) const {
  const Lattice k = lattice(flat_index);
  double s = 0.0;
  for (int a = 0; a < dim_; ++a) s += static_cast<double>(k[a]) * k[a];
  return std::sqrt(s);
}

GridFunction::GridFunction(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw ShapeError("grid function length does not match grid");
}

Spectrum::Spectrum(const Grid& g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != grid.size()) throw ShapeError("spectrum length does not match grid");
}

Multiplier::Multiplier(const Grid& g, std::vector<cplx> w) : grid(g), weights(std::move(w)) {
  if (weights.size() != grid.size()) throw ShapeError("multiplier length does not match grid");
}

Multiplier Multiplier::operator*(const Multiplier& other) const {
  require_same_grid(grid, other.grid, "multiplier product");
  Multiplier out(grid);
  for (std::size_t i = 0; i < weights.size(); ++i) out.weights[i] = weights[i] * other.weights[i];
  return out;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw ShapeError(std::string(what) + ": grid mismatch");
}

namespace detail {

namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const Grid& grid, int sign) {
    std::lock_guard lock(mutex);
    const auto key = std::make_tuple(grid.dim(), grid.points(), sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::vector<int> dims(grid.dim(), grid.points());
    std::vector<cplx> scratch(grid.size());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    // Unaligned + estimate: one fixed algorithm regardless of array address.
    fftw_plan plan = fftw_plan_dft(grid.dim(), dims.data(), buf, buf,
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft_inplace(const Grid& grid, std::span<cplx> data, int sign) {
  if (data.size() != grid.size()) throw ShapeError("fft: buffer length does not match grid");
  fftw_plan plan = plan_cache().get(grid, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace detail

Spectrum forward_dft(const GridFunction& f) {
  Spectrum out(f.grid, f.values);
  detail::fft_inplace(f.grid, out.coeffs, -1);
  const double scale = f.grid.cell();
  for (auto& c : out.coeffs) c *= scale;
  return out;
}

GridFunction inverse_dft(const Spectrum& F) {
  GridFunction out(F.grid, F.coeffs);
  detail::fft_inplace(F.grid, out.values, +1);
  const double scale = std::pow(kTwoPi, -F.grid.dim());
  for (auto& v : out.values) v *= scale;
  return out;
}

GridFunction apply_multiplier(const Multiplier& m, const GridFunction& f) {
  require_same_grid(m.grid, f.grid, "apply_multiplier");
  // A constant has its whole spectrum at k = 0.
  if (std::all_of(f.values.begin(), f.values.end(), [&](cplx v) { return v == f.values.front(); })) {
    GridFunction out(f.grid);
    const cplx value = m.weights[0] * f.values.front();
    std::fill(out.values.begin(), out.values.end(), value);
    return out;
  }
  std::vector<cplx> buf = f.values;
  detail::fft_inplace(f.grid, buf, -1);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= m.weights[i];
  detail::fft_inplace(f.grid, buf, +1);
  const double scale = 1.0 / static_cast<double>(f.grid.size());
  for (auto& v : buf) v *= scale;
  return GridFunction(f.grid, std::move(buf));
}

Multiplier sobolev_weight(const Grid& grid, cplx s) {
  Multiplier out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.frequency_norm(i);
    const double log_bracket = 0.5 * std::log1p(k * k);
    out.weights[i] = std::exp(s * log_bracket);
  }
  return out;
}

Multiplier radial_multiplier(const Grid& grid, const std::function<cplx(double)>& profile) {
  Multiplier out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out.weights[i] = profile(grid.frequency_norm(i));
  return out;
}

GridFunction sample(const Grid& grid, const std::function<cplx(const Point&)>& f) {
  GridFunction out(grid);
  const double h = grid.dx();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Lattice j = grid.offsets(i);
    out.values[i] = f(Point{h * j[0], h * j[1], h * j[2]});
  }
  return out;
}

double max_abs(std::span<const cplx> values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw ShapeError("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace fio

// Pseudodifferential operators on the grid,
//
//   a(x, D) f(x) = (2 pi)^-n sum_k exp(i k.x) a(x, k) fhat(k),
//
// with a direct O(N^{2n}) path for tables and an FFT path for separable symbols.
#pragma once

#include <optional>
#include <vector>

#include "fio/spaces.hpp"
#include "fio/symbols.hpp"

namespace fio {

enum class ApplyPath { automatic, direct, separable };

/// Reusable operator: caches the lattice tables of separable eta-profiles.
class Operator {
 public:
  explicit Operator(RoughSymbol a, ApplyPath path = ApplyPath::automatic);

  const RoughSymbol& symbol() const { return a_; }
  ApplyPath path() const { return path_; }

  GridFunction apply(const GridFunction& f) const;
  /// Conjugate transpose with respect to sum_x conj(u(x)) v(x).
  GridFunction adjoint(const GridFunction& g) const;

 private:
  RoughSymbol a_;
  RoughSymbol dense_;  // used by the direct path
  ApplyPath path_;
  std::vector<Multiplier> tables_;
};

GridFunction apply(const RoughSymbol& a, const GridFunction& f, ApplyPath path = ApplyPath::automatic);
GridFunction adjoint_apply(const RoughSymbol& a, const GridFunction& g, ApplyPath path = ApplyPath::automatic);

struct PowerIterationOptions {
  int max_iterations = 200;
  double tolerance = 1e-8;
  std::uint64_t seed = 0x5eed;
};

/// sqrt of the top eigenvalue of A^* A by power iteration (a lower bound).
double opnorm_l2(const Operator& op, const PowerIterationOptions& opts = {});
double opnorm_l2(const RoughSymbol& a, const PowerIterationOptions& opts = {});

/// hfio(a(x,D) f, s, p) / hfio(f, s + m_order + extra_loss, p); empty when
/// the denominator is below 1e-13.
std::optional<double> bound_ratio(const Operator& op, const GridFunction& f, double s, double p,
                                  double m_order, double extra_loss, const FunctionSpace& space);

}  // namespace fio

// Rough symbols a(x, eta): dense tables and separable sums
// a(x, eta) = sum_m b_m(x) e_m(eta), their C^r_* S^{m,l}_{1,delta} seminorms,
// symbol smoothing, the analytic family a_z and the support-window predicate.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fio/decomp.hpp"
#include "fio/grid.hpp"
#include "fio/profiles.hpp"

namespace fio {

struct SeparableTerm {
  GridFunction b;
  EtaProfile e;
};

class RoughSymbol {
 public:
  enum class Representation { dense, separable };

  RoughSymbol() = default;
  /// Dense table in eta-major order: table[eta * size + x].
  static RoughSymbol dense(const Grid& grid, std::vector<cplx> table);
  static RoughSymbol separable(const Grid& grid, std::vector<SeparableTerm> terms);
  /// Largest points-per-axis for which dense tables are allowed.
  static int dense_limit(int dim) { return dim == 2 ? 32 : 8; }

  Representation representation() const { return rep_; }
  bool is_dense() const { return rep_ == Representation::dense; }
  const Grid& grid() const { return grid_; }
  const std::vector<cplx>& table() const { return table_; }
  const std::vector<SeparableTerm>& terms() const { return terms_; }
  std::size_t rank() const { return terms_.size(); }

  /// a(x_i, eta) for every x on the grid.
  std::vector<cplx> column(std::size_t eta) const;
  RoughSymbol to_dense() const;
  RoughSymbol scaled(cplx c) const;

 private:
  Representation rep_ = Representation::separable;
  Grid grid_;
  std::vector<cplx> table_;
  std::vector<SeparableTerm> terms_;
};

/// max over (x, eta) of |a - sum of parts|, evaluated column by column.
double max_reconstruction_error(const RoughSymbol& a, const std::vector<const RoughSymbol*>& parts);
double max_abs_symbol(const RoughSymbol& a);

struct SymbolSeminorm {
  double M = 0.0;
  double r = 0.0;
  double m = 0.0;
  double delta = 0.0;
  int l = 0;
  struct Entry {
    std::string alpha;
    double pointwise = 0.0;   // sup |d^a a| / <eta>^{m-|a|}
    double regularity = 0.0;  // sup ||d^a a(., eta)||_{C^r_*} / <eta>^{m-|a|+r delta}
  };
  std::vector<Entry> per_alpha;
};

/// Dense symbols use fourth-order centered differences in eta and skip the
/// two outermost frequency rings; separable symbols with radial profiles use
/// closed-form derivatives. Orders l <= 2.
SymbolSeminorm seminorm(const RoughSymbol& a, double r, double m, double delta, int l, const LPFamily& lp);

struct SmoothingSplit {
  RoughSymbol sharp;
  RoughSymbol flat;
  double beta = 0.0;
};

/// sharp = sum_k [phi(2^{-beta k} D) a(., eta)](x) psi_k(eta);
/// flat  = sum_k [(1 - phi)(2^{-beta k} D) a(., eta)](x) psi_k(eta).
SmoothingSplit smooth_split(const RoughSymbol& a, double beta, const LPFamily& lp,
                            const BumpProfile& bump = BumpProfile());

/// a_z = exp(w^2) <eta>^{-delta w} [<D>^w a(., eta)](x), w = kappa z + lambda.
RoughSymbol interp_family(const RoughSymbol& a, double kappa, double lambda, double delta, cplx z);

struct WindowViolation {
  Lattice xi{};
  Lattice eta{};
  double magnitude = 0.0;
};

struct WindowReport {
  bool pass = true;
  double worst_relative = 0.0;
  std::size_t violating_eta = 0;
  std::vector<WindowViolation> violations;  // largest first, at most 32
};

/// supp F_x a(., eta) within { c |eta|^{1/2} <= |xi| <= (1/16) (1 + |eta|)^exponent }
/// up to 1e-10 relative l2 mass per eta. Columns whose spectral l2 mass is at
/// most `floor` are treated as zero (pure rounding noise has no support).
WindowReport support_window_check(const RoughSymbol& a, double c, double exponent, double floor = 0.0);

/// b = sum_{j=2}^{J} 2^{-jr} cos(2^{j-1} x.u_j + theta_j), u_j a random axis direction.
GridFunction lacunary_field(const Grid& grid, double r, int J, std::uint64_t seed);

/// b_flat(x, eta) = sum_k [(1 - phi)(2^{-delta k} D) b](x) psi_k(eta).
RoughSymbol flat_of_b(const GridFunction& b, double delta, const LPFamily& lp,
                      const BumpProfile& bump = BumpProfile());

struct TestSymbolParams {
  GridFunction b;        // multiplication, tensor, flat-of-b
  EtaProfile w;          // multiplier, tensor
  double delta = 0.5;    // flat-of-b
  BumpProfile bump;      // flat-of-b
};

/// kind in {multiplier, multiplication, tensor, flat-of-b}.
RoughSymbol make_test_symbol(const std::string& kind, const Grid& grid, const TestSymbolParams& params,
                             const LPFamily* lp = nullptr);

}  // namespace fio

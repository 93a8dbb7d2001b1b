// Shared scalar types, error hierarchy, reductions, deterministic RNG and
// the data-parallel map used throughout the toolkit.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fio {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that live on different grids, or tables of the wrong length.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside the admissible range of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A discretization too coarse to resolve the requested object.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Malformed files or configs.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Pairwise (tree) summation. The split points depend only on the length, so
// results are identical whichever thread produced the inputs.
double pairwise_sum(std::span<const double> values);
cplx pairwise_sum(std::span<const cplx> values);

// Number of worker threads used by parallel_for. Results never depend on it.
void set_threads(int count);
int threads();

/// Runs body(i) for i in [0, count). Each index must write only its own
/// output slot; reductions happen afterwards in index order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// splitmix64 finalizer. Used as a counter-based generator: every random
/// draw is a pure function of (seed, stream, counter).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const { return mix64(key_ ^ mix64(counter)); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }
  // Standard normal via Box-Muller on counters (2c, 2c+1).
  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

/// Sequential convenience wrapper around CounterRng.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : gen_(seed, stream) {}
  double uniform() { return gen_.uniform(counter_++); }
  double normal() { return gen_.normal(counter_++); }
  std::uint64_t bits() { return gen_.bits(counter_++); }

 private:
  CounterRng gen_;
  std::uint64_t counter_ = 0;
};

}  // namespace fio

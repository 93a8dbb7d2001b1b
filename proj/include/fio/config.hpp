// Experiment configuration: JSON documents validated against a fixed schema.
// Unknown keys and wrongly typed values are rejected; everything else has a
// default (see docs/config.md).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "fio/core.hpp"
#include "fio/decomp.hpp"

namespace fio {

inline constexpr int kConfigSchemaVersion = 1;

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct BumpConfig {
  double plateau = 0.5;
  double support = 1.0;
  BumpProfile profile() const { return BumpProfile(plateau, support); }
};

struct LacunaryConfig {
  double r = 1.0;
  int J = 5;
};

struct EnsembleConfig {
  int count = 8;
  int kmax = 16;       // |k|_inf <= kmax; defaults to min(16, N/4)
  double decay = 1.0;  // amplitude envelope <k>^-decay
};

struct SandwichConfig {
  std::vector<double> rho{-1.0, 0.0, 0.5, 1.0};
  int max_shell = 6;
  int samples = 32;
  std::optional<double> pinned_upper;
  double upper_tolerance = 0.10;
};

struct ThreeLinesConfig {
  double p = 1.5;
  double r = 1.0;
  double dprime = 0.2;
  std::optional<double> eps;
  double symbol_delta = 0.5;
  std::string symbol = "flat-of-b";  // flat-of-b | constant | degenerate
  double constant = 1.0;
  LacunaryConfig lacunary{1.0, 2};
  std::vector<double> t_samples{0, 1, -1, 2, -2, 5, -5, 10, -10, 20, -20};
  int restarts = 64;
  int iterations = 200;
  double tolerance = 0.10;
};

struct BoundSweepConfig {
  std::vector<double> p{4.0 / 3.0, 1.5, 2.0, 3.0};
  double r = 1.0;
  std::optional<double> eps;
  std::vector<std::string> symbols{"flat-of-b"};  // flat-of-b | identity | multiplier
  LacunaryConfig lacunary{1.0, 5};
  double growth_limit = 1.2;
};

struct PipelineConfig {
  double p = 1.5;
  double r = 1.0;
  std::optional<double> eps;
  std::string symbol = "multiplication";  // multiplication | multiplier
  LacunaryConfig lacunary{1.0, 5};
};

struct EmbeddingConfig {
  std::vector<double> p{4.0 / 3.0, 1.5, 2.0, 3.0, 4.0};
  double stability = 0.20;
};

struct LabConfig {
  std::string experiment;  // empty: any
  int n = 2;
  std::vector<int> grids{64};
  BumpConfig bump;                         // cap bump of the localizers
  BumpConfig smoothing_bump{1.0 / 128, 1.0 / 64};
  int sphere_nodes = 256;
  int sigma_nodes_per_octave = 64;
  std::uint64_t seed = 42;
  EnsembleConfig ensemble;
  SandwichConfig sandwich;
  ThreeLinesConfig three_lines;
  BoundSweepConfig bound_sweep;
  PipelineConfig pipeline;
  EmbeddingConfig embedding;
};

LabConfig parse_config(const nlohmann::json& j);
LabConfig load_config(const std::string& path);
/// The effective configuration, defaults filled in.
nlohmann::json to_json(const LabConfig& c);

}  // namespace fio

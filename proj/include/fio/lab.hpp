// Experiment driver: Zygmund sandwich, three-lines interpolation, boundedness
// sweeps, the double smoothing pipeline and Sobolev embedding diagnostics.
//
// Every experiment is a pure function of its configuration. Reports carry
// their timing and environment under "meta", which is the only part allowed
// to differ between runs.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "fio/config.hpp"
#include "fio/pseudo.hpp"
#include "fio/spaces.hpp"
#include "fio/symbols.hpp"

namespace fio {

struct ExperimentReport {
  std::string experiment;
  nlohmann::json parameters;
  std::vector<nlohmann::json> rows;
  nlohmann::json summary = nlohmann::json::object();
  bool pass = true;
  nlohmann::json meta = nlohmann::json::object();

  /// JSON lines: a header record, one record per row, then the summary.
  std::string jsonl() const;
  /// The rows as CSV; columns are the scalar fields of the first row.
  std::string csv() const;
  /// Everything except meta, for reproducibility checks.
  nlohmann::json deterministic() const;
};

/// Band-limited random fields with |k|_inf <= kmax and amplitude envelope
/// <k>^-decay. Coefficients are keyed by (seed, member, k), so a member is the
/// same trigonometric polynomial on every grid that resolves it.
GridFunction ensemble_member(const Grid& grid, const EnsembleConfig& spec, std::uint64_t seed, int member);
std::vector<GridFunction> make_ensemble(const Grid& grid, const EnsembleConfig& spec, std::uint64_t seed);

SpaceSettings space_settings(const LabConfig& c, int sphere_nodes = 0);

// Zygmund sandwich.
ExperimentReport zygmund_sandwich_suite(const LabConfig& c);

// Projected ascent on hfio(A f, s_num, p) / hfio(f, s_den, p).
struct AscentResult {
  double ratio = 0.0;
  bool converged = true;
  int restarts = 0;
};
AscentResult ratio_ascent(const Operator& A, double s_num, double s_den, double p, const FunctionSpace& space,
                          std::uint64_t seed, int restarts, int iterations);

ExperimentReport three_lines_experiment(const LabConfig& c);
ExperimentReport bound_sweep(const LabConfig& c);

struct PipelineResult {
  RoughSymbol sharp_half;  // a#_{1/2}
  RoughSymbol middle;      // (a_flat_{1/2})#_beta
  RoughSymbol rest;        // (a_flat_{1/2})_flat_beta
  double beta = 0.0;
  ExperimentReport report;
};
PipelineResult smoothing_pipeline(const RoughSymbol& a, double p, double r, double eps, const BumpProfile& bump,
                                  const LPFamily& lp);
ExperimentReport pipeline_experiment(const LabConfig& c);

ExperimentReport sobolev_embedding_suite(const LabConfig& c);

/// name in {sandwich, three-lines, bound-sweep, pipeline, embedding}.
ExperimentReport run_experiment(const std::string& name, const LabConfig& c);
const std::vector<std::string>& experiment_names();

}  // namespace fio

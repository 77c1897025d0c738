#pragma once

#include "heraldopt/config.hpp"
#include "heraldopt/wigner.hpp"

namespace heraldopt {

/// Self-contained snapshot of an optimized circuit: everything needed to
/// re-simulate it (validation, loss sweeps, Wigner export) without the
/// original config.
struct Checkpoint {
  CircuitConfig circuit;
  std::vector<double> parameters;
  std::uint64_t seed = 0;
  int iteration = 0;  // hops completed when the snapshot was taken
  std::string config_hash;
  std::vector<std::pair<MeasurementPattern, TargetSpec>> assignments;
};

void write_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint read_checkpoint(const std::string& path);

/// Write the run report JSON (deterministic field order; wall_seconds is the
/// only field expected to differ between identical runs).
void write_run_report(const std::string& path, const RunConfig& cfg, const OptResult& result,
                      double wall_seconds);

/// Re-read a report's parameter vector (for round-trip checks and tooling).
struct ReportData {
  int num_modes = 0;
  int cutoff = 0;
  std::vector<double> parameters;
  std::vector<PatternScore> scores;
  double aggregate_probability = 0.0;
  double loss_value = 0.0;
  std::uint64_t seed = 0;
};
ReportData read_run_report(const std::string& path);

/// Loss-sweep CSV: header `target,pattern,eta,p,fidelity`, one row per
/// (pattern, eta), eta order as given.
struct LossSweepRow {
  std::string target;
  MeasurementPattern pattern;
  double eta;
  double probability;
  double fidelity;
};
void write_loss_sweep_csv(const std::string& path, std::span<const LossSweepRow> rows);

/// Wigner CSV: header `x,p,W`, x-major row order.
void write_wigner_csv(const std::string& path, const WignerGrid& grid);

}  // namespace heraldopt

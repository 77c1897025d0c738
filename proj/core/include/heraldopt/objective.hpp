#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "heraldopt/circuit.hpp"
#include "heraldopt/targets.hpp"

namespace heraldopt {

/// Quality of one heralding outcome: probability, rotation-invariant
/// fidelity against the assigned target, and the grid angle attaining it.
struct PatternScore {
  MeasurementPattern pattern;
  std::string target_label;
  double probability = 0.0;
  double fidelity = 0.0;
  double phi_star = 0.0;  // [0, 2pi), multiple of 2pi/256, smallest index on ties
};

enum class LambdaDenominator {
  AsPrinted,   // log10(1 - F~) / log10(1 - epsilon)
  Normalized,  // log10(1 - F~) / log10(epsilon): scales to 1 at the cap
};

/// Weights and constants of the two loss functions. The printed form of the
/// logarithmic weight reaches ~193.6 at the fidelity cap rather than 1; the
/// Normalized switch divides by log10(epsilon) instead. Both are monotone in
/// fidelity, so the optimization behaves the same either way.
struct LossConfig {
  double alpha = 1.0;          // probability weight of the fixed-pattern loss
  double epsilon = 2e-2;       // minimum infidelity threshold (fidelity cap)
  double delta = 1e-72;        // regularizer inside the log
  double lambda = 1e4;         // linear score scaling
  double trunc_weight = 10.0;  // truncation-leakage penalty weight
  LambdaDenominator lambda_denominator = LambdaDenominator::AsPrinted;
};

struct RotationFidelity {
  double fidelity = 0.0;
  double phi_star = 0.0;
  int grid_index = 0;
};

/// max_phi |<target| e^{i n phi} |state>|^2 over the 256-angle grid,
/// evaluated as one length-256 FFT of the elementwise overlap sequence.
/// Ties break toward the smallest grid index.
RotationFidelity rotation_fidelity(const Vec& target, const Vec& state);

/// -sum_k (alpha p_k + F_k) + trunc_weight * leakage.
double loss_fixed(std::span<const PatternScore> scores, double leakage, const LossConfig& cfg);

/// Non-linear filtration loss: F~ = min(F, 1-eps), Lambda per the configured
/// denominator, S = sum_k p_k (F~^2 Lambda)^4, then
/// -log(S + delta) - lambda S + trunc_weight * leakage (natural log).
double loss_beam(std::span<const PatternScore> scores, double leakage, const LossConfig& cfg);

/// A heralding pattern together with its assigned target.
struct PatternTarget {
  MeasurementPattern pattern;
  std::shared_ptr<const TargetState> target;
};

struct ScoredCircuit {
  std::vector<PatternScore> scores;
  double leakage = 0.0;
};

/// build_state -> herald each assigned pattern -> rotation fidelity against
/// its target. Numerically void outcomes score p = 0, F = 0.
ScoredCircuit score_patterns(const CircuitParams& params,
                             std::span<const PatternTarget> assignments, int cutoff);

/// Same scoring against a prebuilt state (saves rebuilding when the caller
/// already has it).
std::vector<PatternScore> score_state(const FockState& state,
                                      std::span<const PatternTarget> assignments);

}  // namespace heraldopt

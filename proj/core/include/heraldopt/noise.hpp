#pragma once

#include "heraldopt/circuit.hpp"
#include "heraldopt/objective.hpp"

namespace heraldopt {

/// Dense multimode density matrix over the same truncated basis as
/// FockState. Hermitian, trace <= 1 (truncation may shave mass).
struct DensityMatrix {
  int num_modes = 1;
  int cutoff = 2;
  Mat entries;  // cutoff^N x cutoff^N

  static DensityMatrix from_pure(const FockState& state);
  double trace() const { return entries.trace().real(); }
};

/// Pure-loss channel of transmissivity eta as Kraus operators
/// K_k = sqrt((1-eta)^k / k!) eta^{n/2} a^k, k = 0 .. cutoff-1.
struct LossChannel {
  double eta = 1.0;
  std::vector<Mat> kraus;
};

LossChannel loss_kraus(double eta, int cutoff);

/// sum_k K_k rho K_k^dag applied on one designated mode.
DensityMatrix apply_loss(const DensityMatrix& dm, int mode, const LossChannel& channel);

/// Project the ancilla modes onto |pattern><pattern|. Returns the outcome
/// probability and the normalized single-mode output density matrix.
/// Throws HeraldVoidError below `eps`.
struct DmHeraldResult {
  double probability = 0.0;
  Mat output;  // cutoff x cutoff, unit trace
};
DmHeraldResult herald_dm(const DensityMatrix& dm, const MeasurementPattern& pattern,
                         double eps = kDefaultHeraldEps);

/// Rotation-maximized mixed-state fidelity <t| e^{-i n phi} rho e^{i n phi} |t>
/// over the same 256-angle grid as the pure-state metric.
RotationFidelity rotation_fidelity_dm(const Vec& target, const Mat& dm);

/// Full lossy re-simulation of one heralding outcome: build the pure state,
/// promote to a density matrix, apply the loss channel to every mode
/// (ancillas and output) immediately before detection, herald, and score.
struct LossyResult {
  double probability = 0.0;
  double fidelity = 0.0;
  double phi_star = 0.0;
};
LossyResult lossy_pipeline(const CircuitParams& params, const MeasurementPattern& pattern,
                           const Vec& target, double eta, int cutoff);

}  // namespace heraldopt

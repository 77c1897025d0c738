#include "heraldopt/objective.hpp"

#include <cmath>

#include "fft_radix2.hpp"

namespace heraldopt {

RotationFidelity rotation_fidelity(const Vec& target, const Vec& state) {
  if (target.size() != state.size())
    throw std::invalid_argument("target/state cutoff mismatch");
  constexpr int G = conventions::rotation_grid;

  // Overlap at angle phi_j = 2 pi j / G is sum_n conj(t_n) s_n e^{i n phi_j}:
  // a positive-exponent DFT of the elementwise product, zero padded (indices
  // n >= G would alias exactly onto n mod G).
  std::array<Complex, G> seq{};
  for (long n = 0; n < target.size(); ++n)
    seq[static_cast<std::size_t>(n % G)] += std::conj(target[n]) * state[n];
  detail::fft_positive_exponent<G>(seq);

  // smallest grid index wins on ties (within rounding of the maximum)
  RotationFidelity best;
  for (int j = 0; j < G; ++j) {
    const double f = std::norm(seq[j]);
    if (f > best.fidelity + 1e-12) {
      best.fidelity = f;
      best.grid_index = j;
    }
  }
  best.phi_star = 2.0 * kPi * best.grid_index / G;
  return best;
}

double loss_fixed(std::span<const PatternScore> scores, double leakage, const LossConfig& cfg) {
  if (scores.empty()) throw std::invalid_argument("loss over an empty score list");
  double acc = 0.0;
  for (const auto& s : scores) acc += cfg.alpha * s.probability + s.fidelity;
  return -acc + cfg.trunc_weight * leakage;
}

double loss_beam(std::span<const PatternScore> scores, double leakage, const LossConfig& cfg) {
  if (scores.empty()) throw std::invalid_argument("loss over an empty score list");
  const double denom = cfg.lambda_denominator == LambdaDenominator::AsPrinted
                           ? std::log10(1.0 - cfg.epsilon)
                           : std::log10(cfg.epsilon);
  double score = 0.0;
  for (const auto& s : scores) {
    const double f = std::min(s.fidelity, 1.0 - cfg.epsilon);
    const double lam = std::log10(1.0 - f) / denom;
    const double w = f * f * lam;
    score += s.probability * w * w * w * w;
  }
  return -std::log(score + cfg.delta) - cfg.lambda * score + cfg.trunc_weight * leakage;
}

std::vector<PatternScore> score_state(const FockState& state,
                                      std::span<const PatternTarget> assignments) {
  std::vector<PatternScore> scores;
  scores.reserve(assignments.size());
  for (const auto& pt : assignments) {
    PatternScore sc;
    sc.pattern = pt.pattern;
    sc.target_label = pt.target->label;
    try {
      const HeraldResult h = herald(state, pt.pattern);
      const RotationFidelity rf = rotation_fidelity(pt.target->amplitudes, h.output);
      sc.probability = h.probability;
      sc.fidelity = rf.fidelity;
      sc.phi_star = rf.phi_star;
    } catch (const HeraldVoidError&) {
      // void outcome: zero score
    }
    scores.push_back(std::move(sc));
  }
  return scores;
}

ScoredCircuit score_patterns(const CircuitParams& params,
                             std::span<const PatternTarget> assignments, int cutoff) {
  const FockState state = build_state(params, cutoff);
  ScoredCircuit out;
  out.leakage = truncation_leakage(state);
  out.scores = score_state(state, assignments);
  return out;
}

}  // namespace heraldopt

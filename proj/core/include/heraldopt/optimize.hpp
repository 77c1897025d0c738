#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

#include "heraldopt/objective.hpp"

namespace heraldopt {

using Objective = std::function<double(const RealVec&)>;

/// Box constraints; a coordinate with lo == hi is frozen at that value.
struct Bounds {
  RealVec lo, hi;
};

struct LocalOptions {
  int max_iters = 200;
  double fd_step = 1e-6;  // two-sided step on the reparameterized coordinates
  double grad_tol = 1e-8;
  double f_tol = 1e-12;
  int memory = 8;  // L-BFGS history pairs
};

struct LocalResult {
  RealVec x;
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool non_finite_abort = false;
  long evaluations = 0;
};

/// Bounded quasi-Newton descent: box constraints are mapped away with a
/// per-coordinate tanh reparameterization and L-BFGS runs on the unbounded
/// coordinates with two-sided finite-difference gradients.
LocalResult local_minimize(const Objective& f, const RealVec& x0, const Bounds& bounds,
                           const LocalOptions& opt = {});

RealVec finite_difference_gradient(const Objective& f, const RealVec& x, double h);

struct BasinHopOptions {
  int hops = 150;
  double step_scale = 0.4;  // perturbation scale relative to coordinate half-width
  double temperature = 1.0; // Metropolis temperature; <= 0 accepts improvements only
  int restarts = 10;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency (capped by restart count)
  double stop_below = -std::numeric_limits<double>::infinity();  // per-restart early stop
  std::optional<RealVec> init;  // starting point for restart 0 (resume support)
  LocalOptions local;
};

struct HopTrace {
  int restart = 0;
  int hop = 0;
  double accepted = 0.0;  // loss of the accepted minimum after this hop
  double best = 0.0;      // best loss seen by this restart so far
};

struct BasinHopResult {
  RealVec best_x;
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<double> restart_best;
  std::vector<HopTrace> trace;
  std::uint64_t seed = 0;
  long evaluations = 0;
};

/// Global search: per restart, draw a start inside the bounds, locally
/// minimize, then alternate uniform perturbation / local minimization with
/// Metropolis acceptance. Restarts are independent and run in parallel; the
/// result is bit-reproducible for a fixed seed regardless of thread count.
BasinHopResult basin_hop(const Objective& f, const Bounds& bounds, const BasinHopOptions& opt);

/// Search space of a circuit optimization: which circuit, which cutoff, and
/// the parameter box.
struct CircuitSearchSpace {
  int num_modes = 2;
  int cutoff = 30;
  double r_max = conventions::squeeze_r_from_db(12.0);
  bool allow_displacement = false;
  double displacement_bound = 3.0;

  Bounds bounds() const;
};

struct OptResult {
  int num_modes = 2;
  int cutoff = 30;
  std::vector<double> best_params;  // flat circuit parameter vector
  std::vector<PatternScore> scores;
  double aggregate_probability = 0.0;
  double loss_value = 0.0;
  double leakage = 0.0;
  std::vector<HopTrace> trace;
  std::uint64_t seed = 0;
  long evaluations = 0;
};

/// The B most probable ancilla tuples (probability descending, lexicographic
/// pattern order on ties); tuples with zero probability are never returned.
std::vector<MeasurementPattern> top_b_patterns(const Eigen::VectorXd& marginals,
                                               int num_ancilla, int cutoff, int B);

/// Fixed-pattern optimization: minimize loss_fixed over the assigned
/// pattern -> target set.
OptResult run_fixed(const CircuitSearchSpace& space, std::span<const PatternTarget> assignments,
                    const LossConfig& loss, const BasinHopOptions& hopping);

/// Beam-search optimization: every evaluation recomputes the top-B patterns
/// from the current marginals, scores each against the best-matching target
/// in the list, and minimizes loss_beam. The discovered pattern -> target
/// assignment is reported at the optimum.
OptResult run_beam(const CircuitSearchSpace& space,
                   std::span<const std::shared_ptr<const TargetState>> targets, int beam_width,
                   const LossConfig& loss, const BasinHopOptions& hopping);

enum class RotationClass { Invariant, Variant };

/// Invariant when, within every target family that heralds at least two
/// non-void patterns, all reported phi* agree within `tol` (circular
/// distance). Defaults to two grid steps of the 256-angle grid.
RotationClass classify_rotation(const OptResult& result,
                                double tol = 2.0 * (2.0 * kPi / conventions::rotation_grid));

}  // namespace heraldopt

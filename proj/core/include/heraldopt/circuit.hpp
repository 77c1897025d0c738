#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heraldopt/fock.hpp"

namespace heraldopt {

/// Ancilla photon-number tuple (n_1, ..., n_{N-1}). The last circuit mode is
/// the heralded output mode by convention and never appears in a pattern.
using MeasurementPattern = std::vector<int>;

std::string pattern_to_string(const MeasurementPattern& p);

/// One beam splitter of the mesh, acting on a nearest-neighbor mode pair.
struct BeamsplitterSpec {
  int mode_a = 0;
  int mode_b = 1;
  double theta = 0.0;
  double phi = 0.0;
};

/// All optimizable real parameters of the device: per-mode squeeze
/// (magnitude, phase), per-mode complex displacement (zero unless a run
/// enables it), a rectangular nearest-neighbor mesh of N(N-1)/2 beam
/// splitters, and N output phase shifters.
struct CircuitParams {
  int num_modes = 2;
  std::vector<double> squeeze_r;      // size N, >= 0
  std::vector<double> squeeze_phi;    // size N, [0, 2pi)
  std::vector<Complex> displacement;  // size N
  std::vector<BeamsplitterSpec> mesh;
  std::vector<double> output_phase;   // size N

  /// All-zero parameters over the standard mesh topology for N modes.
  static CircuitParams zero(int num_modes);

  /// Nearest-neighbor pairs of the rectangular mesh, in application order.
  static std::vector<std::pair<int, int>> mesh_topology(int num_modes);

  /// Flat real vector in the frozen order
  /// [r_1..r_N, phi_1..phi_N, Re a_1, Im a_1, .., Re a_N, Im a_N,
  ///  mesh theta/phi pairs in mesh order, output phases].
  std::vector<double> to_vector() const;
  static CircuitParams from_vector(int num_modes, std::span<const double> v);
  static std::size_t vector_size(int num_modes);

  void validate() const;
};

/// Outcome of projecting the ancillas onto a photon-number pattern.
struct HeraldResult {
  double probability = 0.0;
  Vec output;  // normalized single-mode amplitudes
};

/// Thrown when a pattern's probability falls below the void threshold.
struct HeraldVoidError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pre-detection N-mode state: vacuum -> per-mode squeeze -> per-mode
/// displace -> mesh beam splitters in order -> output phases. The squared
/// norm may be below 1 (truncation leakage).
FockState build_state(const CircuitParams& params, int cutoff);

/// Probability of every ancilla tuple, indexed by the flat ancilla index
/// sum_i n_i * cutoff^{N-2-i} (lexicographic pattern order). Exact
/// enumeration over all cutoff^{N-1} tuples.
Eigen::VectorXd ancilla_marginals(const FockState& state);

MeasurementPattern pattern_from_flat_index(std::size_t index, int num_ancilla, int cutoff);
std::size_t flat_index_of_pattern(const MeasurementPattern& pattern, int cutoff);

/// Project the ancilla modes of `state` onto `pattern` and normalize the
/// surviving output-mode slice. Throws HeraldVoidError when the outcome
/// probability is below `eps`.
HeraldResult herald(const FockState& state, const MeasurementPattern& pattern,
                    double eps = kDefaultHeraldEps);

/// 1 - |state|^2: probability mass lost to the truncation subspace.
double truncation_leakage(const FockState& state);

}  // namespace heraldopt

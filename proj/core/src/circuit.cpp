#include "heraldopt/circuit.hpp"

#include <cmath>

namespace heraldopt {

std::string pattern_to_string(const MeasurementPattern& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  s += ")";
  return s;
}

std::vector<std::pair<int, int>> CircuitParams::mesh_topology(int num_modes) {
  // Rectangular arrangement: alternate even and odd nearest-neighbor layers
  // until the N(N-1)/2 splitters that cover U(N) are placed.
  const std::size_t want = std::size_t(num_modes) * (num_modes - 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  int layer = 0;
  while (pairs.size() < want) {
    for (int a = layer % 2; a + 1 < num_modes && pairs.size() < want; a += 2)
      pairs.emplace_back(a, a + 1);
    ++layer;
  }
  return pairs;
}

CircuitParams CircuitParams::zero(int num_modes) {
  if (num_modes < 1) throw std::invalid_argument("num_modes must be >= 1");
  CircuitParams p;
  p.num_modes = num_modes;
  p.squeeze_r.assign(num_modes, 0.0);
  p.squeeze_phi.assign(num_modes, 0.0);
  p.displacement.assign(num_modes, Complex(0.0, 0.0));
  for (auto [a, b] : mesh_topology(num_modes)) p.mesh.push_back({a, b, 0.0, 0.0});
  p.output_phase.assign(num_modes, 0.0);
  return p;
}

std::size_t CircuitParams::vector_size(int num_modes) {
  // r, phi, (Re, Im) displacement, 2 angles per splitter, output phases.
  return 4 * std::size_t(num_modes) + std::size_t(num_modes) * (num_modes - 1) +
         std::size_t(num_modes);
}

std::vector<double> CircuitParams::to_vector() const {
  std::vector<double> v;
  v.reserve(vector_size(num_modes));
  for (double r : squeeze_r) v.push_back(r);
  for (double f : squeeze_phi) v.push_back(f);
  for (Complex a : displacement) {
    v.push_back(a.real());
    v.push_back(a.imag());
  }
  for (const auto& bs : mesh) {
    v.push_back(bs.theta);
    v.push_back(bs.phi);
  }
  for (double f : output_phase) v.push_back(f);
  return v;
}

CircuitParams CircuitParams::from_vector(int num_modes, std::span<const double> v) {
  if (v.size() != vector_size(num_modes))
    throw std::invalid_argument("parameter vector has wrong length");
  CircuitParams p = zero(num_modes);
  std::size_t k = 0;
  for (int i = 0; i < num_modes; ++i) p.squeeze_r[i] = v[k++];
  for (int i = 0; i < num_modes; ++i) p.squeeze_phi[i] = v[k++];
  for (int i = 0; i < num_modes; ++i) {
    const double re = v[k++], im = v[k++];
    p.displacement[i] = Complex(re, im);
  }
  for (auto& bs : p.mesh) {
    bs.theta = v[k++];
    bs.phi = v[k++];
  }
  for (int i = 0; i < num_modes; ++i) p.output_phase[i] = v[k++];
  return p;
}

void CircuitParams::validate() const {
  if (num_modes < 1) throw std::invalid_argument("num_modes must be >= 1");
  const std::size_t n = std::size_t(num_modes);
  if (squeeze_r.size() != n || squeeze_phi.size() != n || displacement.size() != n ||
      output_phase.size() != n)
    throw std::invalid_argument("per-mode parameter lists must have num_modes entries");
  if (mesh.size() != n * (num_modes - 1) / 2)
    throw std::invalid_argument("mesh must contain N(N-1)/2 beam splitters");
  for (const auto& bs : mesh)
    if (bs.mode_b != bs.mode_a + 1 || bs.mode_a < 0 || bs.mode_b >= num_modes)
      throw std::invalid_argument("mesh pairs must be nearest-neighbor (i, i+1)");
  for (double r : squeeze_r)
    if (r < 0.0) throw std::invalid_argument("squeeze magnitudes must be >= 0");
}

FockState build_state(const CircuitParams& params, int cutoff) {
  params.validate();
  const int N = params.num_modes;

  // Per-mode input vectors D(alpha) S(r e^{i phi}) |0>.
  std::vector<Vec> inputs(N);
  for (int i = 0; i < N; ++i) {
    Vec v = squeezed_vacuum_amplitudes(params.squeeze_r[i], params.squeeze_phi[i], cutoff);
    if (params.displacement[i] != Complex(0.0, 0.0))
      v = displace_matrix(params.displacement[i], cutoff).entries * v;
    inputs[i] = std::move(v);
  }

  FockState state;
  state.num_modes = N;
  state.cutoff = cutoff;
  state.amplitudes = inputs[0];
  for (int i = 1; i < N; ++i) {
    Vec next(state.amplitudes.size() * cutoff);
    long k = 0;
    for (long a = 0; a < state.amplitudes.size(); ++a)
      for (int b = 0; b < cutoff; ++b) next[k++] = state.amplitudes[a] * inputs[i][b];
    state.amplitudes = std::move(next);
  }

  for (const auto& bs : params.mesh) {
    const BeamsplitterBlocks blocks = beamsplitter_blocks(bs.theta, bs.phi, cutoff);
    apply_beamsplitter_inplace(blocks, state, bs.mode_a, bs.mode_b);
  }
  for (int i = 0; i < N; ++i)
    if (params.output_phase[i] != 0.0) apply_phase_inplace(params.output_phase[i], state, i);
  return state;
}

Eigen::VectorXd ancilla_marginals(const FockState& state) {
  if (state.num_modes < 2)
    throw std::invalid_argument("ancilla marginals require at least 2 modes");
  const int D = state.cutoff;
  const long tuples = long(state.dimension()) / D;
  Eigen::VectorXd marg(tuples);
  // Output mode is last, so each ancilla tuple owns a contiguous slice.
  for (long t = 0; t < tuples; ++t)
    marg[t] = state.amplitudes.segment(t * D, D).squaredNorm();
  return marg;
}

MeasurementPattern pattern_from_flat_index(std::size_t index, int num_ancilla, int cutoff) {
  MeasurementPattern p(num_ancilla);
  for (int i = num_ancilla - 1; i >= 0; --i) {
    p[i] = int(index % cutoff);
    index /= cutoff;
  }
  return p;
}

std::size_t flat_index_of_pattern(const MeasurementPattern& pattern, int cutoff) {
  std::size_t idx = 0;
  for (int n : pattern) {
    if (n < 0 || n >= cutoff) throw std::invalid_argument("pattern entry outside cutoff");
    idx = idx * cutoff + std::size_t(n);
  }
  return idx;
}

HeraldResult herald(const FockState& state, const MeasurementPattern& pattern, double eps) {
  if (state.num_modes < 2) throw std::invalid_argument("heralding requires at least 2 modes");
  if (static_cast<int>(pattern.size()) != state.num_modes - 1)
    throw std::invalid_argument("pattern length must be num_modes - 1");
  const int D = state.cutoff;
  const std::size_t base = flat_index_of_pattern(pattern, D) * D;
  Vec slice = state.amplitudes.segment(base, D);
  const double p = slice.squaredNorm();
  if (p < eps)
    throw HeraldVoidError("numerically void heralding outcome " + pattern_to_string(pattern));
  return HeraldResult{p, slice / std::sqrt(p)};
}

double truncation_leakage(const FockState& state) { return 1.0 - state.squared_norm(); }

}  // namespace heraldopt

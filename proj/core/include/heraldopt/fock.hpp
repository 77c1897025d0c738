#pragma once

#include <span>
#include <vector>

#include "heraldopt/constants.hpp"

namespace heraldopt {

/// Pure state of `num_modes` bosonic modes in a Fock basis truncated at
/// `cutoff` levels per mode (occupations 0 .. cutoff-1).
///
/// Amplitudes are stored row-major with mode 0 as the slowest-varying index:
/// the amplitude of |n_0, ..., n_{N-1}> lives at sum_i n_i * cutoff^{N-1-i}.
/// The squared norm may drop below 1; the deficit is truncation leakage and
/// is tracked, not hidden.
struct FockState {
  int num_modes = 1;
  int cutoff = 2;
  Vec amplitudes;

  static FockState vacuum(int num_modes, int cutoff);

  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes.size()); }
  double squared_norm() const { return amplitudes.squaredNorm(); }

  /// Flat index of the basis ket with the given occupations.
  std::size_t index_of(std::span<const int> occupations) const;
};

/// Dense truncated matrix of a one- or two-mode Gaussian primitive.
/// Passive operators (phase, beam splitter) are exactly unitary at any
/// cutoff; active ones (squeeze, displace) are the top-left block of an
/// infinite unitary, so low-index columns are near-orthonormal while the
/// last few columns carry truncation error.
struct OperatorMatrix {
  int arity = 1;  // modes acted on: 1 or 2
  int cutoff = 2;
  Mat entries;    // cutoff^arity x cutoff^arity
};

/// <m|S(r e^{i phi})|n> by the stable three-term recursion in (m, n).
OperatorMatrix squeeze_matrix(double r, double phi, int cutoff);

/// <m|D(alpha)|n> by the stable recursion in (m, n).
OperatorMatrix displace_matrix(Complex alpha, int cutoff);

/// diag(e^{i n theta}); exactly unitary.
OperatorMatrix phase_matrix(double theta, int cutoff);

/// Two-mode Fock representation of BS(theta, phi) in the library convention.
/// Block diagonal in total photon number; exactly unitary within every
/// total-photon block that fits inside the cutoff.
OperatorMatrix beamsplitter_matrix(double theta, double phi, int cutoff);

/// Column 0 of squeeze_matrix: the squeezed-vacuum amplitude vector,
/// computed in O(cutoff).
Vec squeezed_vacuum_amplitudes(double r, double phi, int cutoff);

/// Beam splitter stored as its total-photon-number blocks. Block T covers
/// kets |n, T-n> with n in [lo(T), hi(T)] inside the cutoff; applying it to a
/// state costs O(cutoff^3) instead of O(cutoff^4) for the dense form.
struct BeamsplitterBlocks {
  int cutoff = 2;
  std::vector<Mat> blocks;  // indexed by total photon number T = 0 .. 2*(cutoff-1)

  int block_lo(int total) const { return std::max(0, total - (cutoff - 1)); }
  int block_hi(int total) const { return std::min(total, cutoff - 1); }
};

BeamsplitterBlocks beamsplitter_blocks(double theta, double phi, int cutoff);

/// Contract `op` against the designated modes of `state`; all other mode
/// indices are untouched. Mode indices must be distinct, in range, and match
/// the operator arity; cutoffs must agree.
FockState apply_op(const OperatorMatrix& op, const FockState& state, std::span<const int> modes);

/// In-place fast paths used by the circuit builder.
void apply_single_mode_inplace(const Mat& op, FockState& state, int mode);
void apply_phase_inplace(double theta, FockState& state, int mode);
void apply_beamsplitter_inplace(const BeamsplitterBlocks& bs, FockState& state, int mode_a,
                                int mode_b);

}  // namespace heraldopt

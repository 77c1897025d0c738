#pragma once

#include <string>

#include "heraldopt/fock.hpp"

namespace heraldopt {

/// Single-mode target vector, unit norm at the requested cutoff.
struct TargetState {
  std::string label;
  Vec amplitudes;
};

enum class Parity { Even, Odd };

/// Support parity of a vector: Even/Odd if all opposite-parity amplitudes
/// are below `tol`, otherwise reported as mixed.
enum class ParitySupport { Even, Odd, Mixed };
ParitySupport parity_support(const Vec& amplitudes, double tol = 1e-10);

/// Squeezed Schroedinger cat: S(r) N_pm (|alpha> pm |-alpha>).
/// Throws if the truncated construction leaks more than `leak_tol`.
TargetState cat_state(Complex alpha, double r, Parity parity, int cutoff,
                      double leak_tol = 1e-6);

/// Binomial codeword |mu_bin> for code parameters (N, S): Fock comb at
/// levels p(S+1) with sqrt(binomial) weights, p even (mu=0) or odd (mu=1).
/// Requires (N+1)(S+1) < cutoff.
TargetState binomial_codeword(int N, int S, int mu, int cutoff);

/// How an envelope quality quoted in dB maps onto the damping exponent beta
/// of e^{-beta n}. With Delta^2 = 10^{-dB/10}:
///   DeltaSq: beta = Delta^2        (comb teeth squeezed to exactly the
///                                   quoted dB below vacuum noise; default)
///   HalfLog: beta = -ln(1-Delta^2)/2   (alternative reading, slightly
///                                       stronger damping)
enum class GkpEnvelopeConvention { DeltaSq, HalfLog };

double gkp_envelope_beta_from_db(double delta_db,
                                 GkpEnvelopeConvention conv = GkpEnvelopeConvention::DeltaSq);

/// Square-lattice GKP codeword |mu> damped by e^{-beta n}, expanded in the
/// Fock basis by summing the position-comb teeth until the series tail is
/// below 1e-10. Throws if the requested cutoff truncates more than 1% of the
/// state's mass.
TargetState ideal_gkp_fock_beta(int mu, double beta, int cutoff);
/// Same with the envelope given in dB under the chosen convention.
TargetState ideal_gkp_fock(int mu, double envelope_db, int cutoff,
                           GkpEnvelopeConvention conv = GkpEnvelopeConvention::DeltaSq);

/// Finite core state |mu_{A n_max}>: the Fock-support-limited vector c such
/// that D(beta) S(xi) sum c_n |n> best approximates the enveloped ideal
/// codeword. (beta, xi) and the core are found by an inner optimization.
struct GkpCore {
  TargetState state;          // length `cutoff`, support on 0..n_max
  double envelope_fidelity;   // fidelity vs. the enveloped ideal codeword
  double squeeze_xi;          // optimal xi (real at the optimum)
  Complex displacement_beta;  // optimal beta (zero at the optimum)
  bool low_fidelity_flag;     // set when envelope_fidelity < 0.99
};
GkpCore gkp_core_state(int mu, int n_max, double envelope_db, int cutoff,
                       GkpEnvelopeConvention conv = GkpEnvelopeConvention::DeltaSq);

/// Displaced approximate cubic phase state D(alpha) exp(i gamma Q^3) S(r)|0>
/// with Q = (a + a^dag)/sqrt(2) at hbar = 1 (an `hbar` of 2 rescales Q).
/// Throws if truncation leaks more than `leak_tol`.
TargetState cubic_phase_state(double gamma, double r, double alpha, int cutoff,
                              double hbar = conventions::hbar, double leak_tol = 2e-2);

}  // namespace heraldopt

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "heraldopt/targets.hpp"

using namespace heraldopt;

TEST_CASE("cat states: limits, closed-form c0, parity supports") {
  // alpha -> 0 even cat with r=0 is exactly |0>
  const TargetState tiny = cat_state(0.0, 0.0, Parity::Even, 10);
  CHECK(std::abs(tiny.amplitudes[0] - 1.0) < 1e-14);

  // alpha = sqrt(6), r=0: c0 = 2 N+ e^{-3}, N+ = [2(1+e^{-12})]^{-1/2}
  const TargetState cat = cat_state(std::sqrt(6.0), 0.0, Parity::Even, 40);
  const double n_plus = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-12.0)));
  CHECK(cat.amplitudes[0].real() == doctest::Approx(2.0 * n_plus * std::exp(-3.0)).epsilon(1e-10));
  CHECK(parity_support(cat.amplitudes) == ParitySupport::Even);
  CHECK(cat.amplitudes.norm() == doctest::Approx(1.0));

  const TargetState odd = cat_state(std::sqrt(6.0), 0.5, Parity::Odd, 40);
  CHECK(std::abs(odd.amplitudes[0]) == 0.0);
  CHECK(parity_support(odd.amplitudes) == ParitySupport::Odd);
  CHECK(odd.amplitudes.norm() == doctest::Approx(1.0));

  // squeezing preserves parity and unit norm
  const TargetState sq = cat_state(std::sqrt(6.0), 0.5, Parity::Even, 40);
  CHECK(parity_support(sq.amplitudes) == ParitySupport::Even);
  CHECK(sq.amplitudes.norm() == doctest::Approx(1.0));

  // too small a cutoff must be refused
  CHECK_THROWS_AS((void)cat_state(std::sqrt(6.0), 0.5, Parity::Even, 8), std::invalid_argument);
}

TEST_CASE("binomial codewords: direct evaluation and orthogonality") {
  const TargetState b22 = binomial_codeword(2, 2, 0, 30);
  CHECK(b22.amplitudes[0].real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b22.amplitudes[6].real() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  for (int n = 0; n < 30; ++n)
    if (n != 0 && n != 6) CHECK(std::abs(b22.amplitudes[n]) == 0.0);

  const TargetState b23 = binomial_codeword(2, 3, 0, 30);
  CHECK(b23.amplitudes[0].real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b23.amplitudes[8].real() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));

  // logical 0 and 1 have disjoint support
  for (int N : {1, 2, 3})
    for (int S : {1, 2, 3}) {
      const TargetState z = binomial_codeword(N, S, 0, 40);
      const TargetState o = binomial_codeword(N, S, 1, 40);
      CHECK(std::abs(z.amplitudes.dot(o.amplitudes)) == 0.0);
      CHECK(z.amplitudes.norm() == doctest::Approx(1.0));
      CHECK(o.amplitudes.norm() == doctest::Approx(1.0));
    }

  CHECK_THROWS_AS((void)binomial_codeword(2, 2, 0, 9), std::invalid_argument);
}

TEST_CASE("ideal GKP codewords: parity, orthogonality, damping limit") {
  const TargetState g0 = ideal_gkp_fock(0, 10.0, 120);
  const TargetState g1 = ideal_gkp_fock(1, 10.0, 120);
  CHECK(parity_support(g0.amplitudes) == ParitySupport::Even);
  CHECK(parity_support(g1.amplitudes) == ParitySupport::Even);
  CHECK(g0.amplitudes.norm() == doctest::Approx(1.0));

  // mu=0 vs mu=1 overlap: tiny under the half-log damping convention, still
  // small under the default one (wider teeth overlap more).
  const TargetState h0 = ideal_gkp_fock(0, 10.0, 220, GkpEnvelopeConvention::HalfLog);
  const TargetState h1 = ideal_gkp_fock(1, 10.0, 220, GkpEnvelopeConvention::HalfLog);
  CHECK(std::abs(h0.amplitudes.dot(h1.amplitudes)) < 1e-6);
  const TargetState d0 = ideal_gkp_fock(0, 10.0, 220);
  const TargetState d1 = ideal_gkp_fock(1, 10.0, 220);
  CHECK(std::abs(d0.amplitudes.dot(d1.amplitudes)) < 1e-3);

  // strong damping sends mu=0 to vacuum
  const TargetState damped = ideal_gkp_fock_beta(0, 8.0, 40);
  CHECK(std::abs(damped.amplitudes[0]) == doctest::Approx(1.0).epsilon(1e-6));

  // a cutoff that cannot hold the state is refused
  CHECK_THROWS_AS((void)ideal_gkp_fock(0, 10.0, 8), std::runtime_error);
}

TEST_CASE("GKP core states match the frozen inner-optimization golden data") {
  // Golden values from an independent dense-grid + golden-section search over
  // (beta, xi) built on expm (not the production recursions), cutoff 240.
  const GkpCore c1 = gkp_core_state(1, 4, 10.0, 30);
  CHECK(c1.envelope_fidelity == doctest::Approx(0.83713439).epsilon(2e-6));
  CHECK(c1.squeeze_xi == doctest::Approx(0.27231385).epsilon(2e-4));
  CHECK(std::abs(c1.displacement_beta) < 1e-6);
  CHECK(c1.state.amplitudes[0].real() == doctest::Approx(0.12681193).epsilon(2e-4));
  CHECK(c1.state.amplitudes[2].real() == doctest::Approx(0.63694135).epsilon(2e-4));
  CHECK(c1.state.amplitudes[4].real() == doctest::Approx(0.76041071).epsilon(2e-4));
  CHECK(c1.low_fidelity_flag);  // rank-4 cores of a 10 dB grid state cap near 0.84

  const GkpCore c0 = gkp_core_state(0, 4, 10.0, 30);
  CHECK(c0.envelope_fidelity == doctest::Approx(0.75774090).epsilon(2e-6));
  CHECK(c0.squeeze_xi == doctest::Approx(-0.30028879).epsilon(2e-4));
  CHECK(c0.state.amplitudes[0].real() == doctest::Approx(0.63316675).epsilon(2e-4));
  CHECK(c0.state.amplitudes[2].real() == doctest::Approx(-0.17948489).epsilon(2e-3));
  CHECK(c0.state.amplitudes[4].real() == doctest::Approx(0.75291768).epsilon(2e-4));
}

TEST_CASE("GKP core states: parity, trivial n_max, fidelity monotone in n_max") {
  for (int mu : {0, 1}) {
    double last = 0.0;
    for (int n_max : {0, 2, 4, 6, 8}) {
      const GkpCore core = gkp_core_state(mu, n_max, 10.0, 30);
      CHECK(parity_support(core.state.amplitudes) == ParitySupport::Even);
      CHECK(core.state.amplitudes.norm() == doctest::Approx(1.0));
      CHECK(core.envelope_fidelity >= last - 1e-9);
      last = core.envelope_fidelity;
    }
  }
  const GkpCore trivial = gkp_core_state(0, 0, 10.0, 20);
  CHECK(std::abs(trivial.state.amplitudes[0] - 1.0) < 1e-12);
}

TEST_CASE("cubic phase state: Gaussian limits and unitary exponential") {
  // gamma=0, alpha=0 reduces to squeezed vacuum
  const TargetState sq = cubic_phase_state(0.0, -0.7, 0.0, 40);
  CHECK((sq.amplitudes - squeezed_vacuum_amplitudes(-0.7, 0.0, 40)).cwiseAbs().maxCoeff() < 1e-9);

  // gamma=0, r=0 reduces to the coherent state
  const TargetState coh = cubic_phase_state(0.0, 0.0, 1.25, 40);
  const Vec want = displace_matrix(1.25, 40).entries.col(0);
  CHECK((coh.amplitudes - want).cwiseAbs().maxCoeff() < 1e-9);

  // exp(i gamma Q^3) is unitary well inside the cutoff window
  const int D = 40;
  Mat Q = Mat::Zero(D, D);
  for (int n = 0; n + 1 < D; ++n) {
    Q(n, n + 1) = std::sqrt(0.5 * (n + 1));
    Q(n + 1, n) = std::sqrt(0.5 * (n + 1));
  }
  const Mat U = (Complex(0, -0.2) * (Q * Q * Q)).exp();
  const Mat err =
      (U.adjoint() * U - Mat::Identity(D, D)).topLeftCorner(D - 10, D - 10);
  CHECK(err.cwiseAbs().maxCoeff() < 1e-8);

  // the reference parameters need a real cutoff: at D=8 the squeeze and
  // displacement steps alone shed more than the allowed mass
  CHECK_THROWS_AS((void)cubic_phase_state(-0.2, -0.7, 1.25, 8), std::invalid_argument);
  const TargetState full = cubic_phase_state(-0.2, -0.7, 1.25, 30);
  CHECK(full.amplitudes.norm() == doctest::Approx(1.0));
}

#include "heraldopt/targets.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace heraldopt {

namespace {

void require_cutoff(int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("Fock cutoff must be at least 2");
}

// Coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!).
Vec coherent_amplitudes(Complex alpha, int cutoff) {
  Vec c(cutoff);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < cutoff; ++n) c[n] = c[n - 1] * alpha / std::sqrt(double(n));
  return c;
}

// Normalized harmonic-oscillator wavefunctions psi_n(q) at a fixed point,
// hbar = 1, q = (a + a^dag)/sqrt(2).
Eigen::VectorXd oscillator_wavefunctions(double q, int count) {
  Eigen::VectorXd psi(count);
  psi[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * q * q);
  if (count > 1) psi[1] = std::sqrt(2.0) * q * psi[0];
  for (int n = 2; n < count; ++n)
    psi[n] = std::sqrt(2.0 / n) * q * psi[n - 1] - std::sqrt(double(n - 1) / n) * psi[n - 2];
  return psi;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ParitySupport parity_support(const Vec& amplitudes, double tol) {
  double even = 0.0, odd = 0.0;
  for (long n = 0; n < amplitudes.size(); ++n) {
    double& slot = (n % 2 == 0) ? even : odd;
    slot = std::max(slot, std::abs(amplitudes[n]));
  }
  if (odd < tol) return ParitySupport::Even;
  if (even < tol) return ParitySupport::Odd;
  return ParitySupport::Mixed;
}

TargetState cat_state(Complex alpha, double r, Parity parity, int cutoff, double leak_tol) {
  require_cutoff(cutoff);
  const double sign = (parity == Parity::Even) ? 1.0 : -1.0;
  // Track leakage against a comfortably larger internal cutoff.
  const int big = std::max(2 * cutoff, cutoff + 32);
  Vec c = coherent_amplitudes(alpha, big);
  Vec cm = coherent_amplitudes(-alpha, big);
  Vec cat = c + sign * cm;
  const double n0 = cat.norm();
  if (n0 < 1e-14) throw std::invalid_argument("cat state is numerically null (alpha too small for odd parity)");
  cat /= n0;
  if (r != 0.0) cat = squeeze_matrix(r, 0.0, big).entries * cat;
  const double kept = cat.head(cutoff).squaredNorm();
  if (1.0 - kept > leak_tol)
    throw std::invalid_argument("cutoff too small for requested cat state");
  TargetState t;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "cat%s(a=%.4g%+.4gi r=%.4g)",
                parity == Parity::Even ? "+" : "-", alpha.real(), alpha.imag(), r);
  t.label = buf;
  t.amplitudes = cat.head(cutoff) / std::sqrt(kept);
  return t;
}

TargetState binomial_codeword(int N, int S, int mu, int cutoff) {
  require_cutoff(cutoff);
  if (N < 1 || S < 0) throw std::invalid_argument("binomial code needs N >= 1, S >= 0");
  if (mu != 0 && mu != 1) throw std::invalid_argument("mu must be 0 or 1");
  if ((N + 1) * (S + 1) >= cutoff)
    throw std::invalid_argument("binomial codeword support exceeds cutoff");
  Vec amps = Vec::Zero(cutoff);
  double binom = 1.0;  // C(N+1, p), updated multiplicatively
  for (int p = 0; p <= N + 1; ++p) {
    if (p % 2 == mu) amps[p * (S + 1)] = std::sqrt(binom);
    binom *= double(N + 1 - p) / double(p + 1);
  }
  amps /= std::sqrt(std::pow(2.0, N));
  TargetState t;
  t.label = "binomial(N=" + std::to_string(N) + " S=" + std::to_string(S) +
            " mu=" + std::to_string(mu) + ")";
  t.amplitudes = std::move(amps);
  return t;
}

double gkp_envelope_beta_from_db(double delta_db, GkpEnvelopeConvention conv) {
  const double delta_sq = std::pow(10.0, -delta_db / 10.0);
  if (delta_sq >= 1.0) throw std::invalid_argument("envelope must be positive dB");
  switch (conv) {
    case GkpEnvelopeConvention::DeltaSq:
      return delta_sq;
    case GkpEnvelopeConvention::HalfLog:
      return -0.5 * std::log1p(-delta_sq);
  }
  throw std::logic_error("unreachable");
}

TargetState ideal_gkp_fock_beta(int mu, double beta, int cutoff) {
  require_cutoff(cutoff);
  if (mu != 0 && mu != 1) throw std::invalid_argument("mu must be 0 or 1");
  if (beta <= 0.0) throw std::invalid_argument("envelope damping must be positive");

  const int big = std::max(4 * cutoff, cutoff + 120);
  Eigen::VectorXd damping(big);
  for (int n = 0; n < big; ++n) damping[n] = std::exp(-beta * n);

  // Teeth at q = sqrt(pi) (2s + mu); pairs +-q contribute identically up to
  // the psi_n parity, so odd-n amplitudes cancel exactly.
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(big);
  const double root_pi = std::sqrt(kPi);
  double total = 0.0;
  for (int s = 0;; ++s) {
    const double q = root_pi * (2.0 * s + mu);
    Eigen::VectorXd tooth = oscillator_wavefunctions(q, big).cwiseProduct(damping);
    if (s > 0 || mu == 1) {
      // mirror tooth at -q: psi_n(-q) = (-1)^n psi_n(q)
      for (int n = 0; n < big; n += 2) tooth[n] *= 2.0;
      for (int n = 1; n < big; n += 2) tooth[n] = 0.0;
    }
    acc += tooth;
    total = acc.norm();
    if (q > std::sqrt(2.0 * big) && tooth.norm() < 1e-10 * std::max(total, 1e-300)) break;
    if (s > 64) throw std::runtime_error("GKP comb series failed to converge");
  }
  if (total < 1e-300) throw std::runtime_error("GKP comb summed to zero");
  acc /= total;

  const double kept = acc.head(cutoff).squaredNorm();
  if (1.0 - kept > 1e-2)
    throw std::runtime_error("enveloped GKP state does not converge at requested cutoff");
  TargetState t;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "gkp%d_ideal(beta=%.5g)", mu, beta);
  t.label = buf;
  t.amplitudes = (acc.head(cutoff) / std::sqrt(kept)).cast<Complex>();
  return t;
}

TargetState ideal_gkp_fock(int mu, double envelope_db, int cutoff, GkpEnvelopeConvention conv) {
  return ideal_gkp_fock_beta(mu, gkp_envelope_beta_from_db(envelope_db, conv), cutoff);
}

GkpCore gkp_core_state(int mu, int n_max, double envelope_db, int cutoff,
                       GkpEnvelopeConvention conv) {
  require_cutoff(cutoff);
  if (n_max < 0 || n_max >= cutoff) throw std::invalid_argument("n_max must lie inside the cutoff");

  // Work at a fixed internal cutoff so the core does not depend on the
  // caller's circuit truncation.
  const int D_in = std::max(128, 2 * cutoff);
  const Vec ideal = ideal_gkp_fock(mu, envelope_db, D_in, conv).amplitudes;

  // Fidelity of the best core at fixed (beta, xi): squared norm of the
  // projection of S(xi)^dag D(beta)^dag |ideal> onto span{|0>..|n_max>}.
  const auto projected_fidelity = [&](Complex beta, double r, double phi) {
    Vec v = ideal;
    if (beta != Complex(0.0, 0.0)) v = displace_matrix(-beta, D_in).entries * v;
    if (r != 0.0) v = squeeze_matrix(-r, phi, D_in).entries * v;
    return v.head(n_max + 1).squaredNorm();
  };

  // Coarse scan over real xi (beta = 0), then cyclic golden-section descent
  // over (Re beta, Im beta, r, phi). The parity-even, real-amplitude ideal
  // state puts the optimum at beta = 0, phi = 0; the search just confirms it.
  double best_r = 0.0, best_f = projected_fidelity(0.0, 0.0, 0.0);
  for (int i = -60; i <= 60; ++i) {
    const double r = 1.5 * double(i) / 60.0;
    const double f = projected_fidelity(0.0, r, 0.0);
    if (f > best_f) {
      best_f = f;
      best_r = r;
    }
  }
  double br = 0.0, bi = 0.0, rr = best_r, ph = 0.0;
  for (int sweep = 0; sweep < 3; ++sweep) {
    rr = golden_min([&](double v) { return -projected_fidelity({br, bi}, v, ph); },
                    rr - 0.2, rr + 0.2, 1e-10);
    br = golden_min([&](double v) { return -projected_fidelity({v, bi}, rr, ph); },
                    br - 0.3, br + 0.3, 1e-10);
    bi = golden_min([&](double v) { return -projected_fidelity({br, v}, rr, ph); },
                    bi - 0.3, bi + 0.3, 1e-10);
    ph = golden_min([&](double v) { return -projected_fidelity({br, bi}, rr, v); },
                    ph - 0.5, ph + 0.5, 1e-10);
  }

  // The parity-even, real-amplitude ideal state puts the true optimum at
  // beta = 0, phi = 0; keep the searched offsets only if they genuinely beat
  // the symmetric point (they never do, but the search is generic).
  if (projected_fidelity(Complex(0.0, 0.0), rr, 0.0) >=
      projected_fidelity(Complex(br, bi), rr, ph) - 1e-10) {
    br = bi = 0.0;
    ph = 0.0;
  }
  Vec v = ideal;
  const Complex beta_opt(br, bi);
  if (beta_opt != Complex(0.0, 0.0)) v = displace_matrix(-beta_opt, D_in).entries * v;
  if (rr != 0.0) v = squeeze_matrix(-rr, ph, D_in).entries * v;
  Vec core = v.head(n_max + 1);
  const double fid = core.squaredNorm();
  core /= std::sqrt(fid);

  // Global-phase fix: largest-magnitude coefficient made real positive.
  long imax = 0;
  core.cwiseAbs().maxCoeff(&imax);
  core *= std::conj(core[imax]) / std::abs(core[imax]);

  GkpCore out;
  out.state.label = "gkp" + std::to_string(mu) + "_A" + std::to_string(n_max);
  out.state.amplitudes = Vec::Zero(cutoff);
  out.state.amplitudes.head(n_max + 1) = core;
  out.envelope_fidelity = fid;
  out.squeeze_xi = rr;
  out.displacement_beta = beta_opt;
  out.low_fidelity_flag = fid < 0.99;
  return out;
}

TargetState cubic_phase_state(double gamma, double r, double alpha, int cutoff, double hbar,
                              double leak_tol) {
  require_cutoff(cutoff);
  // Built on the D x D truncation: the exponential of the truncated i gamma
  // Q^3 is exactly unitary, so leakage comes only from the squeeze and
  // displacement steps.
  Mat Q = Mat::Zero(cutoff, cutoff);
  const double scale = std::sqrt(hbar / 2.0);
  for (int n = 0; n < cutoff - 1; ++n) {
    Q(n, n + 1) = scale * std::sqrt(double(n + 1));
    Q(n + 1, n) = scale * std::sqrt(double(n + 1));
  }
  Mat Q3 = Q * Q * Q;
  Mat U = (Complex(0.0, gamma) * Q3).exp();

  Vec psi = squeezed_vacuum_amplitudes(r, 0.0, cutoff);
  psi = U * psi;
  if (alpha != 0.0) psi = displace_matrix(Complex(alpha, 0.0), cutoff).entries * psi;

  const double kept = psi.squaredNorm();
  if (1.0 - kept > leak_tol)
    throw std::invalid_argument("cutoff too small for requested cubic phase state");
  TargetState t;
  char buf[80];
  std::snprintf(buf, sizeof(buf), "cubic(gamma=%.4g r=%.4g alpha=%.4g)", gamma, r, alpha);
  t.label = buf;
  t.amplitudes = psi / std::sqrt(kept);
  return t;
}

}  // namespace heraldopt

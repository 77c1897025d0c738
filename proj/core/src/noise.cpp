#include "heraldopt/noise.hpp"

#include <cmath>

#include "fft_radix2.hpp"

namespace heraldopt {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// rho -> A rho A^dag on one mode: contract A against the ket index, then the
// conjugate against the bra index.
Mat conjugate_on_mode(const Mat& rho, const Mat& A, int mode, int num_modes, int cutoff) {
  const std::size_t dim = std::size_t(rho.rows());
  const std::size_t stride = ipow(cutoff, num_modes - 1 - mode);
  const std::size_t chunk = stride * cutoff;

  Mat left = Mat::Zero(rho.rows(), rho.cols());
  // left = (I x A x I) rho : for every column, mix the mode index of the row.
  for (std::size_t col = 0; col < dim; ++col) {
    for (std::size_t base = 0; base < dim; base += chunk) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        for (int m = 0; m < cutoff; ++m) {
          Complex acc = 0.0;
          for (int n = 0; n < cutoff; ++n) {
            const Complex a = A(m, n);
            if (a != Complex(0.0, 0.0)) acc += a * rho(base + inner + n * stride, col);
          }
          left(base + inner + m * stride, col) = acc;
        }
      }
    }
  }
  // result = left (I x A x I)^dag : mix the mode index of the column.
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t base = 0; base < dim; base += chunk) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        for (int m = 0; m < cutoff; ++m) {
          Complex acc = 0.0;
          for (int n = 0; n < cutoff; ++n) {
            const Complex a = A(m, n);
            if (a != Complex(0.0, 0.0)) acc += std::conj(a) * left(row, base + inner + n * stride);
          }
          out(row, base + inner + m * stride) = acc;
        }
      }
    }
  }
  return out;
}

}  // namespace

DensityMatrix DensityMatrix::from_pure(const FockState& state) {
  DensityMatrix dm;
  dm.num_modes = state.num_modes;
  dm.cutoff = state.cutoff;
  dm.entries = state.amplitudes * state.amplitudes.adjoint();
  return dm;
}

LossChannel loss_kraus(double eta, int cutoff) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("transmissivity must lie in [0, 1]");
  if (cutoff < 2) throw std::invalid_argument("Fock cutoff must be at least 2");
  LossChannel ch;
  ch.eta = eta;
  ch.kraus.reserve(cutoff);
  // K_k(m, n) = sqrt((1-eta)^k / k!) * eta^{m/2} * sqrt(n!/(n-k)!) delta_{m, n-k}
  for (int k = 0; k < cutoff; ++k) {
    Mat K = Mat::Zero(cutoff, cutoff);
    for (int n = k; n < cutoff; ++n) {
      const int m = n - k;
      double lg = 0.0;  // log of (1-eta)^k/k! * n!/(n-k)!
      if (k > 0) {
        lg = k * std::log(1.0 - eta) - std::lgamma(k + 1.0) + std::lgamma(n + 1.0) -
             std::lgamma(n - k + 1.0);
      }
      const double amp = std::sqrt(std::exp(lg)) * std::pow(eta, 0.5 * m);
      K(m, n) = amp;
    }
    ch.kraus.push_back(std::move(K));
  }
  if (eta == 1.0)  // avoid log(0): only K_0 = identity survives
    for (int k = 1; k < cutoff; ++k) ch.kraus[k].setZero();
  return ch;
}

DensityMatrix apply_loss(const DensityMatrix& dm, int mode, const LossChannel& channel) {
  if (mode < 0 || mode >= dm.num_modes) throw std::invalid_argument("mode index out of range");
  if (!channel.kraus.empty() && channel.kraus[0].rows() != dm.cutoff)
    throw std::invalid_argument("channel/state cutoff mismatch");
  DensityMatrix out;
  out.num_modes = dm.num_modes;
  out.cutoff = dm.cutoff;
  out.entries = Mat::Zero(dm.entries.rows(), dm.entries.cols());
  for (const Mat& K : channel.kraus)
    out.entries += conjugate_on_mode(dm.entries, K, mode, dm.num_modes, dm.cutoff);
  return out;
}

DmHeraldResult herald_dm(const DensityMatrix& dm, const MeasurementPattern& pattern, double eps) {
  if (dm.num_modes < 2) throw std::invalid_argument("heralding requires at least 2 modes");
  if (static_cast<int>(pattern.size()) != dm.num_modes - 1)
    throw std::invalid_argument("pattern length must be num_modes - 1");
  const int D = dm.cutoff;
  const std::size_t base = flat_index_of_pattern(pattern, D) * D;
  // Output mode is last, so the conditional block is contiguous.
  Mat block = dm.entries.block(long(base), long(base), D, D);
  const double p = block.trace().real();
  if (p < eps)
    throw HeraldVoidError("numerically void heralding outcome " + pattern_to_string(pattern));
  return DmHeraldResult{p, block / p};
}

RotationFidelity rotation_fidelity_dm(const Vec& target, const Mat& dm) {
  if (target.size() != dm.rows() || dm.rows() != dm.cols())
    throw std::invalid_argument("target/density cutoff mismatch");
  constexpr int G = conventions::rotation_grid;
  const int D = int(target.size());

  // F(phi) = <t| e^{i n phi} rho e^{-i n phi} |t>   (same rotation direction
  // as the pure-state metric, so phi* agrees with it when rho is pure)
  //        = sum_d e^{i d phi} h_d,  h_d = sum_n conj(t_{n+d}) rho_{n+d, n} t_n.
  // Evaluating all 256 angles is one positive-exponent DFT of h (negative d
  // wraps modulo the grid size).
  std::array<Complex, G> h{};
  for (int d = -(D - 1); d <= D - 1; ++d) {
    Complex acc = 0.0;
    for (int n = std::max(0, -d); n < D - std::max(0, d); ++n)
      acc += std::conj(target[n + d]) * dm(n + d, n) * target[n];
    h[std::size_t(((d % G) + G) % G)] += acc;
  }
  detail::fft_positive_exponent<G>(h);

  RotationFidelity best;
  best.fidelity = h[0].real();
  best.grid_index = 0;
  for (int j = 1; j < G; ++j) {
    const double f = h[j].real();
    if (f > best.fidelity + 1e-12) {
      best.fidelity = f;
      best.grid_index = j;
    }
  }
  best.phi_star = 2.0 * kPi * best.grid_index / G;
  return best;
}

LossyResult lossy_pipeline(const CircuitParams& params, const MeasurementPattern& pattern,
                           const Vec& target, double eta, int cutoff) {
  if (target.size() != cutoff) throw std::invalid_argument("target length must equal cutoff");
  const FockState pure = build_state(params, cutoff);
  DensityMatrix dm = DensityMatrix::from_pure(pure);
  const LossChannel ch = loss_kraus(eta, cutoff);
  for (int m = 0; m < dm.num_modes; ++m) dm = apply_loss(dm, m, ch);
  const DmHeraldResult h = herald_dm(dm, pattern);
  const RotationFidelity rf = rotation_fidelity_dm(target, h.output);
  return LossyResult{h.probability, rf.fidelity, rf.phi_star};
}

}  // namespace heraldopt

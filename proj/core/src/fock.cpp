#include "heraldopt/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace heraldopt {

namespace {

using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_cutoff(int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("Fock cutoff must be at least 2");
}

std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

FockState FockState::vacuum(int num_modes, int cutoff) {
  if (num_modes < 1) throw std::invalid_argument("num_modes must be >= 1");
  require_cutoff(cutoff);
  FockState s;
  s.num_modes = num_modes;
  s.cutoff = cutoff;
  s.amplitudes = Vec::Zero(static_cast<long>(ipow(cutoff, num_modes)));
  s.amplitudes[0] = 1.0;
  return s;
}

std::size_t FockState::index_of(std::span<const int> occupations) const {
  if (static_cast<int>(occupations.size()) != num_modes)
    throw std::invalid_argument("occupation list length != num_modes");
  std::size_t idx = 0;
  for (int n : occupations) {
    if (n < 0 || n >= cutoff) throw std::invalid_argument("occupation outside cutoff");
    idx = idx * cutoff + static_cast<std::size_t>(n);
  }
  return idx;
}

Vec squeezed_vacuum_amplitudes(double r, double phi, int cutoff) {
  require_cutoff(cutoff);
  Vec c = Vec::Zero(cutoff);
  const Complex ratio = -std::exp(Complex(0.0, phi)) * std::tanh(r);
  c[0] = std::sqrt(1.0 / std::cosh(r));
  for (int m = 2; m < cutoff; m += 2)
    c[m] = ratio * std::sqrt(double(m - 1) / double(m)) * c[m - 2];
  return c;
}

OperatorMatrix squeeze_matrix(double r, double phi, int cutoff) {
  require_cutoff(cutoff);
  Mat S = Mat::Zero(cutoff, cutoff);
  std::vector<double> sq(cutoff);
  for (int i = 0; i < cutoff; ++i) sq[i] = std::sqrt(double(i));

  const Complex eiphi_tanh = std::exp(Complex(0.0, phi)) * std::tanh(r);
  const double sech = 1.0 / std::cosh(r);

  // Two-term recursion over (m, n); parity m+n odd vanishes identically.
  S(0, 0) = std::sqrt(sech);
  for (int m = 2; m < cutoff; m += 2)
    S(m, 0) = -eiphi_tanh * sq[m - 1] / sq[m] * S(m - 2, 0);
  for (int m = 0; m < cutoff; ++m) {
    for (int n = 1; n < cutoff; ++n) {
      if ((m + n) % 2 != 0) continue;
      Complex v = 0.0;
      if (n >= 2) v += std::conj(eiphi_tanh) * sq[n - 1] / sq[n] * S(m, n - 2);
      if (m >= 1) v += sech * sq[m] / sq[n] * S(m - 1, n - 1);
      S(m, n) = v;
    }
  }
  return OperatorMatrix{1, cutoff, std::move(S)};
}

OperatorMatrix displace_matrix(Complex alpha, int cutoff) {
  require_cutoff(cutoff);
  Mat D = Mat::Zero(cutoff, cutoff);
  std::vector<double> sq(cutoff);
  for (int i = 0; i < cutoff; ++i) sq[i] = std::sqrt(double(i));

  D(0, 0) = std::exp(-0.5 * std::norm(alpha));
  for (int m = 1; m < cutoff; ++m) D(m, 0) = alpha / sq[m] * D(m - 1, 0);
  for (int m = 0; m < cutoff; ++m)
    for (int n = 1; n < cutoff; ++n)
      D(m, n) = -std::conj(alpha) / sq[n] * D(m, n - 1) +
                (m >= 1 ? sq[m] / sq[n] * D(m - 1, n - 1) : Complex(0.0));
  return OperatorMatrix{1, cutoff, std::move(D)};
}

OperatorMatrix phase_matrix(double theta, int cutoff) {
  require_cutoff(cutoff);
  Mat P = Mat::Zero(cutoff, cutoff);
  for (int n = 0; n < cutoff; ++n) P(n, n) = std::exp(Complex(0.0, theta * n));
  return OperatorMatrix{1, cutoff, std::move(P)};
}

BeamsplitterBlocks beamsplitter_blocks(double theta, double phi, int cutoff) {
  require_cutoff(cutoff);
  BeamsplitterBlocks bs;
  bs.cutoff = cutoff;
  bs.blocks.resize(2 * cutoff - 1);

  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const Complex eip = std::exp(Complex(0.0, phi));
  const Complex ein = std::exp(Complex(0.0, -phi));
  std::vector<double> sq(cutoff + 1);
  for (int i = 0; i <= cutoff; ++i) sq[i] = std::sqrt(double(i));

  bs.blocks[0] = Mat::Ones(1, 1);

  // Raising one ket index maps block T-1 entries onto block T:
  //   <m0 m1|B a0^dag = (ct sq[m0] <m0-1 m1| - eip st sq[m1] <m0 m1-1|) B
  //   <m0 m1|B a1^dag = (ein st sq[m0] <m0-1 m1| + ct sq[m1] <m0 m1-1|) B
  for (int T = 1; T <= 2 * (cutoff - 1); ++T) {
    const int lo = bs.block_lo(T), hi = bs.block_hi(T);
    const int plo = bs.block_lo(T - 1);
    const Mat& prev = bs.blocks[T - 1];
    Mat blk = Mat::Zero(hi - lo + 1, hi - lo + 1);
    for (int n0 = lo; n0 <= hi; ++n0) {
      const int n1 = T - n0;
      for (int m0 = lo; m0 <= hi; ++m0) {
        const int m1 = T - m0;
        Complex v = 0.0;
        if (n0 >= 1) {
          if (m0 >= 1) v += ct * sq[m0] * prev(m0 - 1 - plo, n0 - 1 - plo);
          if (m1 >= 1) v -= eip * st * sq[m1] * prev(m0 - plo, n0 - 1 - plo);
          v /= sq[n0];
        } else {  // n0 == 0, lower n1 instead
          if (m0 >= 1) v += ein * st * sq[m0] * prev(m0 - 1 - plo, n0 - plo);
          if (m1 >= 1) v += ct * sq[m1] * prev(m0 - plo, n0 - plo);
          v /= sq[n1];
        }
        blk(m0 - lo, n0 - lo) = v;
      }
    }
    bs.blocks[T] = std::move(blk);
  }
  return bs;
}

OperatorMatrix beamsplitter_matrix(double theta, double phi, int cutoff) {
  BeamsplitterBlocks bs = beamsplitter_blocks(theta, phi, cutoff);
  const long dim = long(cutoff) * cutoff;
  Mat B = Mat::Zero(dim, dim);
  for (int T = 0; T <= 2 * (cutoff - 1); ++T) {
    const int lo = bs.block_lo(T), hi = bs.block_hi(T);
    for (int m0 = lo; m0 <= hi; ++m0)
      for (int n0 = lo; n0 <= hi; ++n0)
        B(long(m0) * cutoff + (T - m0), long(n0) * cutoff + (T - n0)) =
            bs.blocks[T](m0 - lo, n0 - lo);
  }
  return OperatorMatrix{2, cutoff, std::move(B)};
}

void apply_single_mode_inplace(const Mat& op, FockState& state, int mode) {
  const int D = state.cutoff;
  if (op.rows() != D || op.cols() != D) throw std::invalid_argument("operator/state cutoff mismatch");
  if (mode < 0 || mode >= state.num_modes) throw std::invalid_argument("mode index out of range");
  const std::size_t inner = ipow(D, state.num_modes - 1 - mode);
  const std::size_t chunk = std::size_t(D) * inner;
  const std::size_t n_chunks = state.dimension() / chunk;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    Eigen::Map<RowMat> block(state.amplitudes.data() + c * chunk, D, long(inner));
    block = op * block;
  }
}

void apply_phase_inplace(double theta, FockState& state, int mode) {
  const int D = state.cutoff;
  if (mode < 0 || mode >= state.num_modes) throw std::invalid_argument("mode index out of range");
  Vec phases(D);
  for (int n = 0; n < D; ++n) phases[n] = std::exp(Complex(0.0, theta * n));
  const std::size_t inner = ipow(D, state.num_modes - 1 - mode);
  const std::size_t chunk = std::size_t(D) * inner;
  const std::size_t n_chunks = state.dimension() / chunk;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    Eigen::Map<RowMat> block(state.amplitudes.data() + c * chunk, D, long(inner));
    block.array().colwise() *= phases.array();
  }
}

void apply_beamsplitter_inplace(const BeamsplitterBlocks& bs, FockState& state, int mode_a,
                                int mode_b) {
  const int D = state.cutoff;
  const int N = state.num_modes;
  if (bs.cutoff != D) throw std::invalid_argument("operator/state cutoff mismatch");
  if (mode_a < 0 || mode_b < 0 || mode_a >= N || mode_b >= N || mode_a == mode_b)
    throw std::invalid_argument("invalid beam splitter mode pair");
  if (mode_a > mode_b) throw std::invalid_argument("beam splitter modes must be ordered a < b");

  const std::size_t sa = ipow(D, N - 1 - mode_a);
  const std::size_t sb = ipow(D, N - 1 - mode_b);

  // Enumerate base offsets over the spectator modes with an odometer.
  std::vector<std::size_t> strides;
  for (int m = 0; m < N; ++m)
    if (m != mode_a && m != mode_b) strides.push_back(ipow(D, N - 1 - m));
  std::vector<int> counter(strides.size(), 0);

  Vec in(D), out(D);
  Complex* amp = state.amplitudes.data();
  while (true) {
    std::size_t base = 0;
    for (std::size_t k = 0; k < strides.size(); ++k) base += counter[k] * strides[k];

    for (int T = 1; T <= 2 * (D - 1); ++T) {  // T = 0 block is identity
      const int lo = bs.block_lo(T), hi = bs.block_hi(T), b = hi - lo + 1;
      for (int n0 = lo; n0 <= hi; ++n0) in[n0 - lo] = amp[base + n0 * sa + (T - n0) * sb];
      out.head(b).noalias() = bs.blocks[T] * in.head(b);
      for (int m0 = lo; m0 <= hi; ++m0) amp[base + m0 * sa + (T - m0) * sb] = out[m0 - lo];
    }

    std::size_t k = 0;
    for (; k < counter.size(); ++k) {
      if (++counter[k] < D) break;
      counter[k] = 0;
    }
    if (k == counter.size()) break;
  }
}

FockState apply_op(const OperatorMatrix& op, const FockState& state, std::span<const int> modes) {
  if (op.cutoff != state.cutoff) throw std::invalid_argument("operator/state cutoff mismatch");
  if (static_cast<int>(modes.size()) != op.arity)
    throw std::invalid_argument("mode list length != operator arity");
  for (int m : modes)
    if (m < 0 || m >= state.num_modes) throw std::invalid_argument("mode index out of range");

  FockState result = state;
  if (op.arity == 1) {
    apply_single_mode_inplace(op.entries, result, modes[0]);
    return result;
  }

  if (modes[0] == modes[1]) throw std::invalid_argument("repeated mode index");
  const int D = state.cutoff;
  const int N = state.num_modes;
  const std::size_t sa = ipow(D, N - 1 - modes[0]);
  const std::size_t sb = ipow(D, N - 1 - modes[1]);

  std::vector<std::size_t> strides;
  for (int m = 0; m < N; ++m)
    if (m != modes[0] && m != modes[1]) strides.push_back(ipow(D, N - 1 - m));
  std::vector<int> counter(strides.size(), 0);

  const long dim2 = long(D) * D;
  Vec in(dim2), out(dim2);
  const Complex* src = state.amplitudes.data();
  Complex* dst = result.amplitudes.data();
  while (true) {
    std::size_t base = 0;
    for (std::size_t k = 0; k < strides.size(); ++k) base += counter[k] * strides[k];

    for (int na = 0; na < D; ++na)
      for (int nb = 0; nb < D; ++nb) in[long(na) * D + nb] = src[base + na * sa + nb * sb];
    out.noalias() = op.entries * in;
    for (int na = 0; na < D; ++na)
      for (int nb = 0; nb < D; ++nb) dst[base + na * sa + nb * sb] = out[long(na) * D + nb];

    std::size_t k = 0;
    for (; k < counter.size(); ++k) {
      if (++counter[k] < D) break;
      counter[k] = 0;
    }
    if (k == counter.size()) break;
  }
  return result;
}

}  // namespace heraldopt

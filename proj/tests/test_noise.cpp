#include <doctest.h>

#include <random>

#include "heraldopt/noise.hpp"

using namespace heraldopt;

namespace {

CircuitParams small_circuit() {
  CircuitParams p = CircuitParams::zero(2);
  p.squeeze_r = {0.9, 0.6};
  p.squeeze_phi = {0.3, 1.9};
  p.mesh[0].theta = 0.8;
  p.mesh[0].phi = 0.4;
  p.output_phase = {0.0, 0.7};
  return p;
}

}  // namespace

TEST_CASE("loss channel: eta=1 identity, eta=0 full loss, Kraus completeness") {
  const int D = 12;
  const LossChannel id = loss_kraus(1.0, D);
  CHECK((id.kraus[0] - Mat::Identity(D, D)).cwiseAbs().maxCoeff() == 0.0);
  for (int k = 1; k < D; ++k) CHECK(id.kraus[k].cwiseAbs().maxCoeff() == 0.0);

  // completeness: sum K^dag K = I on the whole truncated space
  for (double eta : {0.9, 0.5, 0.2}) {
    const LossChannel ch = loss_kraus(eta, D);
    Mat acc = Mat::Zero(D, D);
    for (const Mat& K : ch.kraus) acc += K.adjoint() * K;
    CHECK((acc - Mat::Identity(D, D)).cwiseAbs().maxCoeff() < 1e-10);
  }

  // eta=0 maps any state to vacuum
  DensityMatrix dm;
  dm.num_modes = 1;
  dm.cutoff = D;
  dm.entries = Mat::Zero(D, D);
  dm.entries(3, 3) = 0.5;
  dm.entries(7, 7) = 0.5;
  const DensityMatrix out = apply_loss(dm, 0, loss_kraus(0.0, D));
  CHECK(out.entries(0, 0).real() == doctest::Approx(1.0));
  Mat residue = out.entries;
  residue(0, 0) -= 1.0;
  CHECK(residue.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single-photon loss: 0.9|1><1| + 0.1|0><0|") {
  const int D = 6;
  DensityMatrix dm;
  dm.num_modes = 1;
  dm.cutoff = D;
  dm.entries = Mat::Zero(D, D);
  dm.entries(1, 1) = 1.0;
  const DensityMatrix out = apply_loss(dm, 0, loss_kraus(0.9, D));
  CHECK(out.entries(1, 1).real() == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(out.entries(0, 0).real() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apply_loss: identity channel, trace preservation, product factorization") {
  const FockState st = build_state(small_circuit(), 14);
  DensityMatrix dm = DensityMatrix::from_pure(st);

  const DensityMatrix same = apply_loss(dm, 0, loss_kraus(1.0, 14));
  CHECK((same.entries - dm.entries).cwiseAbs().maxCoeff() < 1e-14);

  const DensityMatrix lossy = apply_loss(apply_loss(dm, 0, loss_kraus(0.85, 14)), 1,
                                         loss_kraus(0.85, 14));
  CHECK(lossy.trace() == doctest::Approx(dm.trace()).epsilon(1e-10));
  // Hermitian and positive within tolerance
  CHECK((lossy.entries - lossy.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::SelfAdjointEigenSolver<Mat> es(lossy.entries);
  CHECK(es.eigenvalues().minCoeff() > -1e-8);

  // loss on a product state factorizes: applying on mode 0 of |2>x|1> equals
  // (loss of |2>) x |1><1|
  DensityMatrix prod;
  prod.num_modes = 2;
  prod.cutoff = 5;
  prod.entries = Mat::Zero(25, 25);
  prod.entries(2 * 5 + 1, 2 * 5 + 1) = 1.0;
  const DensityMatrix lost = apply_loss(prod, 0, loss_kraus(0.7, 5));
  DensityMatrix single;
  single.num_modes = 1;
  single.cutoff = 5;
  single.entries = Mat::Zero(5, 5);
  single.entries(2, 2) = 1.0;
  const DensityMatrix ref = apply_loss(single, 0, loss_kraus(0.7, 5));
  for (int m = 0; m < 5; ++m)
    for (int n = 0; n < 5; ++n)
      CHECK(std::abs(lost.entries(m * 5 + 1, n * 5 + 1) - ref.entries(m, n)) < 1e-12);
}

TEST_CASE("herald_dm reproduces pure heralding and satisfies completeness") {
  const FockState st = build_state(small_circuit(), 14);
  const DensityMatrix dm = DensityMatrix::from_pure(st);

  const Eigen::VectorXd marg = ancilla_marginals(st);
  double total = 0.0;
  for (int n = 0; n < 14; ++n) {
    if (marg[n] < kDefaultHeraldEps) continue;
    const HeraldResult pure = herald(st, {n});
    const DmHeraldResult mixed = herald_dm(dm, {n});
    CHECK(mixed.probability == doctest::Approx(pure.probability).epsilon(1e-12));
    const Mat want = pure.output * pure.output.adjoint();
    CHECK((mixed.output - want).cwiseAbs().maxCoeff() < 1e-10);
    total += mixed.probability;
  }
  CHECK(total == doctest::Approx(dm.trace()).epsilon(1e-10));
  const DensityMatrix vac = DensityMatrix::from_pure(FockState::vacuum(2, 14));
  CHECK_THROWS_AS((void)herald_dm(vac, {13}), HeraldVoidError);
}

TEST_CASE("mixed rotation fidelity agrees with the pure metric and a direct loop") {
  std::mt19937_64 eng(19);
  const int D = 16;
  auto rand_vec = [&](int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i)
      v[i] = Complex(double(eng() >> 11) * 0x1.0p-53 - 0.5,
                     double(eng() >> 11) * 0x1.0p-53 - 0.5);
    v.normalize();
    return v;
  };
  for (int rep = 0; rep < 20; ++rep) {
    const Vec t = rand_vec(D), s = rand_vec(D);
    const RotationFidelity pure = rotation_fidelity(t, s);
    const RotationFidelity mixed = rotation_fidelity_dm(t, s * s.adjoint());
    CHECK(std::abs(pure.fidelity - mixed.fidelity) < 1e-12);
    CHECK(pure.grid_index == mixed.grid_index);
  }

  // direct 256-angle loop on a genuinely mixed state
  const Vec t = rand_vec(D);
  Mat rho = Mat::Zero(D, D);
  const Vec v1 = rand_vec(D), v2 = rand_vec(D);
  rho = 0.6 * v1 * v1.adjoint() + 0.4 * v2 * v2.adjoint();
  const RotationFidelity fast = rotation_fidelity_dm(t, rho);
  double best = -1.0;
  int best_j = 0;
  for (int j = 0; j < 256; ++j) {
    Vec u(D);
    for (int n = 0; n < D; ++n)
      u[n] = t[n] * std::exp(Complex(0, -2.0 * kPi * j / 256.0 * n));
    const double f = (u.adjoint() * rho * u)(0, 0).real();
    if (f > best) {
      best = f;
      best_j = j;
    }
  }
  CHECK(std::abs(fast.fidelity - best) < 1e-12);
  CHECK(fast.grid_index == best_j);
}

TEST_CASE("lossy_pipeline: eta=1 reproduces the lossless pipeline") {
  const CircuitParams p = small_circuit();
  const int D = 14;
  const FockState st = build_state(p, D);
  const HeraldResult pure = herald(st, {2});
  Vec target = pure.output;  // self-fidelity 1 at eta=1

  const LossyResult ideal = lossy_pipeline(p, {2}, target, 1.0, D);
  CHECK(ideal.probability == doctest::Approx(pure.probability).epsilon(1e-10));
  CHECK(ideal.fidelity == doctest::Approx(1.0).epsilon(1e-10));

  // fidelity degrades monotonically with loss for this state
  const LossyResult l99 = lossy_pipeline(p, {2}, target, 0.99, D);
  const LossyResult l90 = lossy_pipeline(p, {2}, target, 0.90, D);
  CHECK(ideal.fidelity >= l99.fidelity);
  CHECK(l99.fidelity >= l90.fidelity);
}

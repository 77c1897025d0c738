#include <doctest.h>

#include <random>

#include "heraldopt/objective.hpp"

using namespace heraldopt;

namespace {

Vec random_state(int D, std::mt19937_64& eng) {
  Vec v(D);
  for (int n = 0; n < D; ++n)
    v[n] = Complex(double(eng() >> 11) * 0x1.0p-53 - 0.5, double(eng() >> 11) * 0x1.0p-53 - 0.5);
  v.normalize();
  return v;
}

// 256-iteration brute-force oracle, independent of the FFT path.
RotationFidelity rotation_fidelity_loop(const Vec& target, const Vec& state) {
  RotationFidelity best;
  for (int j = 0; j < 256; ++j) {
    const double phi = 2.0 * kPi * j / 256.0;
    Complex acc = 0.0;
    for (long n = 0; n < target.size(); ++n)
      acc += std::conj(target[n]) * state[n] * std::exp(Complex(0, phi * double(n)));
    const double f = std::norm(acc);
    if (f > best.fidelity + 1e-12) {  // same tie-break rule as production
      best.fidelity = f;
      best.grid_index = j;
      best.phi_star = phi;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("rotation fidelity equals the brute-force loop on 100 random pairs") {
  std::mt19937_64 eng(2024);
  for (int rep = 0; rep < 100; ++rep) {
    const int D = 5 + int(eng() % 40);
    const Vec t = random_state(D, eng);
    const Vec s = random_state(D, eng);
    const RotationFidelity fast = rotation_fidelity(t, s);
    const RotationFidelity slow = rotation_fidelity_loop(t, s);
    CHECK(std::abs(fast.fidelity - slow.fidelity) < 1e-12);
    CHECK(fast.grid_index == slow.grid_index);
  }
}

TEST_CASE("rotation fidelity: identical Fock state, grid-aligned rotations, tie-break") {
  Vec two = Vec::Zero(10);
  two[2] = 1.0;
  const RotationFidelity rf = rotation_fidelity(two, two);
  CHECK(rf.fidelity == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rf.grid_index == 0);  // F=1 at every angle; smallest index wins

  std::mt19937_64 eng(5);
  const Vec t = random_state(24, eng);
  for (int k : {3, 100, 255}) {
    Vec rot(24);
    for (int n = 0; n < 24; ++n)
      rot[n] = t[n] * std::exp(Complex(0, -2.0 * kPi * k / 256.0 * n));
    const RotationFidelity rf2 = rotation_fidelity(t, rot);
    CHECK(rf2.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rf2.grid_index == k);
  }

  // off-grid rotation: bounded by grid resolution and equal to the loop
  Vec off(24);
  for (int n = 0; n < 24; ++n) off[n] = t[n] * std::exp(Complex(0, 0.013 * n));
  const RotationFidelity fast = rotation_fidelity(t, off);
  const RotationFidelity slow = rotation_fidelity_loop(t, off);
  CHECK(std::abs(fast.fidelity - slow.fidelity) < 1e-12);
  CHECK(fast.grid_index == slow.grid_index);
  CHECK(fast.fidelity < 1.0 + 1e-12);
  CHECK(fast.fidelity > 0.99);  // 0.013 rad is well inside one grid step
}

TEST_CASE("loss_fixed arithmetic and additivity") {
  LossConfig cfg;
  PatternScore a;
  a.probability = 0.05;
  a.fidelity = 0.99;
  CHECK(loss_fixed(std::vector{a}, 0.0, cfg) == doctest::Approx(-1.04).epsilon(1e-12));

  PatternScore b;
  b.probability = 0.2;
  b.fidelity = 0.5;
  const double la = loss_fixed(std::vector{a}, 0.0, cfg);
  const double lb = loss_fixed(std::vector{b}, 0.0, cfg);
  CHECK(loss_fixed(std::vector{a, b}, 0.0, cfg) == doctest::Approx(la + lb).epsilon(1e-12));

  LossConfig blind;
  blind.alpha = 0.0;
  CHECK(loss_fixed(std::vector{a, b}, 0.0, blind) == doctest::Approx(-1.49).epsilon(1e-12));

  // truncation penalty enters with weight w_trunc
  CHECK(loss_fixed(std::vector{a}, 0.01, cfg) == doctest::Approx(-1.04 + 0.1).epsilon(1e-12));
  CHECK(loss_fixed(std::vector{a}, 0.01, cfg) > loss_fixed(std::vector{a}, 0.0, cfg));
}

TEST_CASE("loss_beam: degenerate plateau, cap value, single-pattern evaluation") {
  LossConfig cfg;
  PatternScore dead;
  dead.probability = 0.3;
  dead.fidelity = 0.0;
  // all F = 0: Lambda = 0, S = 0, loss = -log(delta) = 72 ln 10
  CHECK(loss_beam(std::vector{dead, dead}, 0.0, cfg) ==
        doctest::Approx(-std::log(1e-72)).epsilon(1e-12));
  CHECK(-std::log(1e-72) == doctest::Approx(165.79).epsilon(1e-3));

  // Lambda at the cap, as printed: log10(eps)/log10(1-eps) ~ 193.64
  const double lam_cap = std::log10(0.02) / std::log10(0.98);
  CHECK(lam_cap == doctest::Approx(193.64).epsilon(1e-4));

  // single pattern p=1, F=0.9: S = (0.81 Lambda)^4, Lambda ~ 113.97
  PatternScore s;
  s.probability = 1.0;
  s.fidelity = 0.9;
  const double lam = std::log10(0.1) / std::log10(0.98);
  CHECK(lam == doctest::Approx(113.97).epsilon(1e-4));
  const double score = std::pow(0.81 * lam, 4);
  CHECK(loss_beam(std::vector{s}, 0.0, cfg) ==
        doctest::Approx(-std::log(score + 1e-72) - 1e4 * score).epsilon(1e-12));

  // the cap makes F = 1-eps and F = 1 score identically
  PatternScore capped = s;
  capped.fidelity = 0.98;
  PatternScore unit = s;
  unit.fidelity = 1.0;
  CHECK(loss_beam(std::vector{capped}, 0.0, cfg) ==
        doctest::Approx(loss_beam(std::vector{unit}, 0.0, cfg)).epsilon(1e-14));
}

TEST_CASE("loss monotonicity in fidelity and probability") {
  std::mt19937_64 eng(77);
  for (const auto denom : {LambdaDenominator::AsPrinted, LambdaDenominator::Normalized}) {
    LossConfig cfg;
    cfg.lambda_denominator = denom;
    for (int rep = 0; rep < 50; ++rep) {
      PatternScore x;
      x.probability = 0.01 + 0.5 * double(eng() >> 11) * 0x1.0p-53;
      x.fidelity = 0.9 * double(eng() >> 11) * 0x1.0p-53;
      PatternScore other;
      other.probability = 0.1;
      other.fidelity = 0.5;
      PatternScore better = x;
      better.fidelity = x.fidelity + 0.05;
      CHECK(loss_beam(std::vector{better, other}, 0.0, cfg) <=
            loss_beam(std::vector{x, other}, 0.0, cfg) + 1e-12);
      CHECK(loss_fixed(std::vector{better, other}, 0.0, cfg) <
            loss_fixed(std::vector{x, other}, 0.0, cfg));
      PatternScore likelier = x;
      likelier.probability += 0.05;
      CHECK(loss_fixed(std::vector{likelier, other}, 0.0, cfg) <
            loss_fixed(std::vector{x, other}, 0.0, cfg));
    }
  }
}

TEST_CASE("losses stay finite everywhere") {
  LossConfig cfg;
  PatternScore zero;  // p = 0, F = 0
  CHECK(std::isfinite(loss_beam(std::vector{zero}, 0.0, cfg)));
  CHECK(std::isfinite(loss_fixed(std::vector{zero}, 1.0, cfg)));
  CHECK_THROWS_AS((void)loss_fixed({}, 0.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS((void)loss_beam({}, 0.0, cfg), std::invalid_argument);
}

TEST_CASE("score_patterns: zero circuit, completeness, parity-forbidden patterns") {
  auto vac_target = std::make_shared<TargetState>();
  vac_target->label = "two";
  vac_target->amplitudes = Vec::Zero(12);
  vac_target->amplitudes[2] = 1.0;

  // zero-parameter circuit heralds (0) with certainty
  std::vector<PatternTarget> pt{{{0}, vac_target}};
  CircuitParams zero = CircuitParams::zero(2);
  const ScoredCircuit sc = score_patterns(zero, pt, 12);
  CHECK(sc.scores[0].probability == doctest::Approx(1.0));
  CHECK(sc.scores[0].fidelity == doctest::Approx(0.0));  // vacuum vs |2>
  CHECK(sc.leakage == doctest::Approx(0.0));

  // without displacement the total parity is even, so heralding (1) leaves
  // an odd-parity output: fidelity against the even-parity |2> target is
  // parity-forbidden even though the pattern itself has healthy probability
  CircuitParams p = CircuitParams::zero(2);
  p.squeeze_r = {0.9, 0.5};
  p.mesh[0].theta = 0.7;
  std::vector<PatternTarget> odd{{{1}, vac_target}};
  const ScoredCircuit so = score_patterns(p, odd, 12);
  CHECK(so.scores[0].probability > 1e-6);
  CHECK(so.scores[0].fidelity < 1e-10);

  // sum over all patterns equals the squared norm
  const FockState st = build_state(p, 12);
  std::vector<PatternTarget> all;
  for (int n = 0; n < 12; ++n) all.push_back({{n}, vac_target});
  double total = 0.0;
  for (const auto& s : score_state(st, all)) total += s.probability;
  CHECK(total == doctest::Approx(st.squared_norm()).epsilon(1e-12));
}

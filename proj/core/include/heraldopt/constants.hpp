#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace heraldopt {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

/// Operator and quadrature conventions used throughout the library.
///
/// All phase conventions live here so that every module agrees on them:
///   - squeezing      S(xi)    = exp( (conj(xi) a^2 - xi a^dag^2) / 2 ),  xi = r e^{i phi}
///   - displacement   D(alpha) = exp( alpha a^dag - conj(alpha) a )
///   - beam splitter  BS(theta, phi):  a -> cos(theta) a + e^{-i phi} sin(theta) b
///                                     b -> -e^{i phi} sin(theta) a + cos(theta) b
///   - phase shifter  R(theta) = exp( i theta n̂ )
///   - quadratures    q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2))   [hbar = 1]
///
/// Reported rotation angles phi* depend on these choices; fidelity and
/// probability values do not.
struct conventions {
  static constexpr double hbar = 1.0;

  /// Squeezing magnitude r from a level quoted in dB: r = dB * ln(10) / 20.
  static double squeeze_r_from_db(double db) { return db * std::log(10.0) / 20.0; }

  /// Number of discretized phase angles used by the rotation-invariant
  /// fidelity metric and by rotation classification.
  static constexpr int rotation_grid = 256;
};

/// Default probability below which a heralding outcome is treated as
/// numerically void.
inline constexpr double kDefaultHeraldEps = 1e-14;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace heraldopt

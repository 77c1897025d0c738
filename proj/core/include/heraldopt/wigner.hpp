#pragma once

#include "heraldopt/fock.hpp"

namespace heraldopt {

/// Rectangular phase-space grid request. Axis samples are uniform and
/// inclusive of both endpoints.
struct WignerGridSpec {
  double x_min = -6.0;
  double x_max = 6.0;
  int nx = 201;
  double p_min = -6.0;
  double p_max = 6.0;
  int np = 201;
  double hbar = conventions::hbar;
};

/// W(x, p) sampled on a rectangular grid, normalized so that the full-plane
/// integral equals the trace of the input (1 for a normalized state).
struct WignerGrid {
  Eigen::VectorXd x_axis;
  Eigen::VectorXd p_axis;
  Eigen::MatrixXd values;  // values(ix, ip) = W(x_axis[ix], p_axis[ip])
  double hbar_convention = conventions::hbar;

  /// Trapezoidal estimate of the grid integral of W dx dp.
  double grid_integral() const;
};

/// Wigner function of a single-mode density matrix via the displaced-parity
/// (Laguerre/Moyal) expansion.
WignerGrid wigner(const Mat& density, const WignerGridSpec& spec);

/// Pure-state overloads; the FockState overload rejects multimode input.
WignerGrid wigner(const Vec& amplitudes, const WignerGridSpec& spec);
WignerGrid wigner(const FockState& state, const WignerGridSpec& spec);

}  // namespace heraldopt

#include "heraldopt/wigner.hpp"

#include <stdexcept>

namespace heraldopt {

namespace {

Eigen::VectorXd linspace(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("grid axis needs at least 2 points");
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
  return v;
}

// Fills K(n, m) = <n|D(beta)|m> for the current grid point.
void displacement_entries(Complex beta, Mat& K, const std::vector<double>& sq) {
  const int D = static_cast<int>(K.rows());
  K(0, 0) = std::exp(-0.5 * std::norm(beta));
  for (int m = 1; m < D; ++m) K(m, 0) = beta / sq[m] * K(m - 1, 0);
  for (int m = 0; m < D; ++m)
    for (int n = 1; n < D; ++n)
      K(m, n) = -std::conj(beta) / sq[n] * K(m, n - 1) +
                (m >= 1 ? sq[m] / sq[n] * K(m - 1, n - 1) : Complex(0.0));
}

}  // namespace

double WignerGrid::grid_integral() const {
  // Trapezoid weights: interior 1, edges 1/2, corners 1/4.
  const long nx = x_axis.size(), np = p_axis.size();
  const double dx = (x_axis[nx - 1] - x_axis[0]) / double(nx - 1);
  const double dp = (p_axis[np - 1] - p_axis[0]) / double(np - 1);
  double total = values.sum();
  total -= 0.5 * (values.row(0).sum() + values.row(nx - 1).sum());
  total -= 0.5 * (values.col(0).sum() + values.col(np - 1).sum());
  total += 0.25 * (values(0, 0) + values(0, np - 1) + values(nx - 1, 0) + values(nx - 1, np - 1));
  return total * dx * dp;
}

WignerGrid wigner(const Mat& density, const WignerGridSpec& spec) {
  if (density.rows() != density.cols() || density.rows() < 1)
    throw std::invalid_argument("density matrix must be square");
  const int D = static_cast<int>(density.rows());
  const double hb = spec.hbar;
  if (hb <= 0.0) throw std::invalid_argument("hbar must be positive");

  WignerGrid grid;
  grid.hbar_convention = hb;
  grid.x_axis = linspace(spec.x_min, spec.x_max, spec.nx);
  grid.p_axis = linspace(spec.p_min, spec.p_max, spec.np);
  grid.values.resize(spec.nx, spec.np);

  std::vector<double> sq(D);
  for (int i = 0; i < D; ++i) sq[i] = std::sqrt(double(i));
  Mat K(D, D);

  // W(x,p) = (1/(pi hbar)) sum_{m,n} rho_{mn} (-1)^m <n|D(2 alpha)|m>,
  // alpha = (x + i p)/sqrt(2 hbar).
  for (int ix = 0; ix < spec.nx; ++ix) {
    for (int ip = 0; ip < spec.np; ++ip) {
      const Complex alpha(grid.x_axis[ix] / std::sqrt(2.0 * hb),
                          grid.p_axis[ip] / std::sqrt(2.0 * hb));
      displacement_entries(2.0 * alpha, K, sq);
      Complex acc = 0.0;
      for (int m = 0; m < D; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        for (int n = 0; n < D; ++n) acc += density(m, n) * sign * K(n, m);
      }
      grid.values(ix, ip) = acc.real() / (kPi * hb);
    }
  }
  return grid;
}

WignerGrid wigner(const Vec& amplitudes, const WignerGridSpec& spec) {
  Mat density = amplitudes * amplitudes.adjoint();
  return wigner(density, spec);
}

WignerGrid wigner(const FockState& state, const WignerGridSpec& spec) {
  if (state.num_modes != 1)
    throw std::invalid_argument("wigner grid requires a single-mode state; herald first");
  return wigner(state.amplitudes, spec);
}

}  // namespace heraldopt

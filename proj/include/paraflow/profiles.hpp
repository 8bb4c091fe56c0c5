#pragma once

namespace paraflow::profiles {

/// Smoothed radial step built from the bump h(t) = exp(-1/(1-t^2)):
/// returns 1 for r <= 1/2, 0 for r >= 1, C-infinity monotone in between.
double radial_step(double r);

/// Derivative of radial_step.
double radial_step_deriv(double r);

/// Dyadic annulus profile phi(r) = step(r/2) - step(r), supported in
/// [1/2, 2] with phi(1) = 1.
double annulus(double r);

/// Radial profile Psi(q) of the 2D Fourier transform of the cutoff
/// theta(|y|) = radial_step(|y|):  Psi(q) = 2 pi int_0^1 step(r) J0(qr) r dr,
/// so that int theta(y) e^{-i q.y} dy = Psi(|q|).  Tabulated to ~1e-10.
double theta_hat(double q);

/// d Psi / dq.
double theta_hat_deriv(double q);

/// Largest q for which the Psi table is valid.
double theta_hat_qmax();

}  // namespace paraflow::profiles

#pragma once

// Independent reference computations used by the test suite and the verifier.
// None of these share code paths with the quantities they check.

#include "gxr/geometry.hpp"

namespace gxr::oracle {

/// Zernike polynomial from its explicit monomial expansion in z and conj(z).
Complex zernike_monomial(int n, int k, Complex z);
/// d/dz and d/dconj(z) of the monomial expansion.
Complex zernike_dz(int n, int k, Complex z);
Complex zernike_dzbar(int n, int k, Complex z);
/// d/dz from the Jacobi form, with Boost's Jacobi polynomials and their
/// derivatives; stable for large n where the monomial sums cancel.
Complex zernike_dz_jacobi(int n, int k, Complex z);

/// Footpoint found by following the geodesic backwards to the boundary, using
/// the isometry that moves the origin to rho e^{i omega}.
FanBeamCoord footpoint_by_marching(const DiskModel& model, double rho, double omega, double theta);

/// Arclength of the geodesic from its generic Moebius parametrization, by adaptive
/// quadrature of |z'(x)| / (1 + kappa |z(x)|^2).
double geodesic_length(const DiskModel& model, const FanBeamCoord& coord);

/// Integral of f against dVol_kappa on D_R: adaptive Gauss in the physical
/// radius, trapezoid in angle (exact for angular degree below n_omega).
Complex disk_integral(const DiskModel& model, const DiskFunction& f, int n_omega = 96);

/// Integral of g against dSigma^2 = measure_factor dbeta dalpha: adaptive Gauss
/// in alpha, trapezoid in beta.
Complex boundary_integral(const DiskModel& model, const BoundaryFunction& g, int n_beta = 96);

} // namespace gxr::oracle

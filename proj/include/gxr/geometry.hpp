#pragma once

#include "gxr/core.hpp"
#include "gxr/quadrature.hpp"

#include <utility>
#include <vector>

namespace gxr {

/// Simple geodesic disk (D_R, g_kappa) with g_kappa = (1 + kappa |z|^2)^{-2} |dz|^2.
///
/// The metric has constant Gauss curvature 4 kappa. The model is simple iff
/// R > 0 and R^2 |kappa| < 1; construction rejects anything else.
class DiskModel {
public:
    DiskModel(double kappa, double radius);

    double kappa() const { return kappa_; }
    double radius() const { return radius_; }
    /// lambda = kappa R^2.
    double lambda() const { return lambda_; }
    /// c_{kappa,R} = 4 pi R / (1 - kappa R^2).
    double c_const() const { return c_const_; }
    /// Density of dSigma^2 with respect to dbeta dalpha: R / (1 + kappa R^2).
    double measure_factor() const { return measure_factor_; }

    /// w(z) = (1 + kappa |z|^2) / (1 - kappa |z|^2).
    double weight(double rho) const;
    double weight(Complex z) const { return weight(std::abs(z)); }

    /// Conformal factor of the metric at radius rho: 1 / (1 + kappa rho^2).
    double conformal_factor(double rho) const { return 1.0 / (1.0 + kappa_ * rho * rho); }

    /// True for the Euclidean unit disk (kappa = 0, R = 1).
    bool is_reference() const { return kappa_ == 0.0 && radius_ == 1.0; }

    bool operator==(const DiskModel&) const = default;

private:
    double kappa_;
    double radius_;
    double lambda_;
    double c_const_;
    double measure_factor_;
};

DiskModel make_model(double kappa, double radius);

/// Fan-beam coordinates of an inward pointing unit vector at the boundary point
/// R e^{i beta}; alpha is the angle to the inner normal.
struct FanBeamCoord {
    double beta = 0.0;
    double alpha = 0.0;
};

/// A unit tangent vector (rho e^{i omega}, theta); theta is the Euclidean
/// direction angle of the vector.
struct PhasePoint {
    double rho = 0.0;
    double omega = 0.0;
    double theta = 0.0;
};

// Angle map s_kappa(alpha) = atan(((1 - lambda)/(1 + lambda)) tan alpha), extended
// pi-periodically (s(alpha + pi) = s(alpha) + pi).
double s_map(const DiskModel& model, double alpha);
double s_map_derivative(const DiskModel& model, double alpha);
double s_map_second_derivative(const DiskModel& model, double alpha);
double s_map_inverse(const DiskModel& model, double sigma);

/// Radial diffeomorphism Phi: D_R -> D_1, Phi(z) = ((1 - kappa R^2)/(1 - kappa |z|^2)) z / R.
Complex phi_map(const DiskModel& model, Complex z);
Complex phi_inverse(const DiskModel& model, Complex zeta);
double phi_radial(const DiskModel& model, double rho);
/// Inverse of phi_radial without range checks; valid slightly beyond the unit
/// circle, which finite-difference stencils near the boundary rely on.
double phi_radial_inverse_unchecked(const DiskModel& model, double rho_ref);

struct PsiImage {
    double rho_prime = 0.0;
    double theta_prime = 0.0;
};

/// Fiber map Psi(rho, theta) -> (rho', theta') onto the reference unit disk.
/// theta is measured relative to the polar angle of the base point.
PsiImage psi_map(const DiskModel& model, double rho, double theta);

/// d theta' / d theta expressed through s_kappa'(alpha_-).
double psi_theta_jacobian(const DiskModel& model, double rho, double theta);

/// Footpoint of a line through rho e^{i omega} with direction theta in the
/// Euclidean unit disk: sin(alpha) = -rho sin(theta - omega),
/// beta = theta - alpha - pi.
FanBeamCoord euclidean_footpoint(double rho, double omega, double theta);

/// Fan-beam coordinates (beta_-, alpha_-) of the geodesic through a phase point.
/// beta is returned in [0, 2pi), alpha in [-pi/2, pi/2].
FanBeamCoord footpoint(const DiskModel& model, const PhasePoint& point);

/// Maximal geodesic entering at a fan-beam coordinate.
///
/// Parameterized by x in [0, x_exit] through the Moebius map
/// z(x) = e^{i beta} (R - x e^{i alpha}) / (1 + R kappa e^{i alpha} x).
class GeodesicArc {
public:
    GeodesicArc(const DiskModel& model, const FanBeamCoord& entry);

    const FanBeamCoord& entry() const { return entry_; }
    double x_exit() const { return x_exit_; }
    /// g_kappa length of the arc.
    double tau() const { return tau_; }

    Complex point(double x) const;
    /// dz/dx.
    Complex tangent(double x) const;
    /// Arclength element dt/dx = |z'(x)| / (1 + kappa |z(x)|^2).
    double speed(double x) const;
    /// Arclength from the entry point to parameter x.
    double arclength(double x) const;

    /// Gauss-Legendre nodes in x with arclength weights, so that
    /// sum_i w_i f(z_i) approximates the integral of f along the arc.
    void sample(int nodes, std::vector<Complex>& points, std::vector<double>& weights) const;
    /// Same with a caller-supplied Gauss-Legendre rule on [-1, 1].
    void sample(const GaussRule& rule, std::vector<Complex>& points, std::vector<double>& weights) const;

private:
    DiskModel model_;
    FanBeamCoord entry_;
    Complex rotation_;
    Complex tilt_;
    double x_exit_;
    double tau_;
};

GeodesicArc geodesic(const DiskModel& model, const FanBeamCoord& coord);

/// Scattering relation S(beta, alpha) = (beta + pi + 2 s(alpha), pi - alpha).
/// The returned alpha describes the outgoing vector and lies outside (-pi/2, pi/2).
FanBeamCoord scattering(const DiskModel& model, const FanBeamCoord& coord);

/// Antipodal scattering relation S_A(beta, alpha) = (beta + pi + 2 s(alpha), -alpha),
/// an involution of the inward boundary bundle.
FanBeamCoord antipodal_scattering(const DiskModel& model, const FanBeamCoord& coord);

} // namespace gxr

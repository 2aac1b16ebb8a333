#include "gxr/geometry.hpp"

#include "gxr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gxr {

namespace {

constexpr double kRadiusSlack = 1e-12;

double check_radius(const DiskModel& model, double rho)
{
    const double R = model.radius();
    if (!(rho >= 0.0) || rho > R * (1.0 + kRadiusSlack)) {
        std::ostringstream msg;
        msg << "point at radius " << rho << " lies outside the disk of radius " << R;
        throw OutOfDisk(msg.str());
    }
    return std::min(rho, R);
}

// Ratio (1 - lambda) / (1 + lambda).
double s_slope(const DiskModel& model)
{
    return (1.0 - model.lambda()) / (1.0 + model.lambda());
}

// atan(a tan x), extended so that f(x + pi) = f(x) + pi.
double periodic_atan_tan(double a, double x)
{
    const double m = std::round(x / kPi);
    const double r = x - m * kPi;
    return std::atan2(a * std::sin(r), std::cos(r)) + m * kPi;
}

} // namespace

DiskModel::DiskModel(double kappa, double radius)
    : kappa_(kappa), radius_(radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw NonpositiveRadius("disk radius must be positive and finite");
    }
    if (!std::isfinite(kappa)) throw SimplicityViolation("curvature must be finite");
    lambda_ = kappa * radius * radius;
    if (std::abs(lambda_) >= 1.0) {
        std::ostringstream msg;
        msg << "model (kappa=" << kappa << ", R=" << radius << ") is not simple: R^2|kappa| = "
            << std::abs(lambda_) << " >= 1";
        throw SimplicityViolation(msg.str());
    }
    c_const_ = 4.0 * kPi * radius / (1.0 - lambda_);
    measure_factor_ = radius / (1.0 + lambda_);
}

double DiskModel::weight(double rho) const
{
    const double q = kappa_ * rho * rho;
    return (1.0 + q) / (1.0 - q);
}

DiskModel make_model(double kappa, double radius)
{
    return DiskModel(kappa, radius);
}

double s_map(const DiskModel& model, double alpha)
{
    if (model.lambda() == 0.0) return alpha;
    return periodic_atan_tan(s_slope(model), alpha);
}

double s_map_derivative(const DiskModel& model, double alpha)
{
    const double a = s_slope(model);
    const double c = std::cos(alpha), s = std::sin(alpha);
    return a / (c * c + a * a * s * s);
}

double s_map_second_derivative(const DiskModel& model, double alpha)
{
    const double a = s_slope(model);
    const double c = std::cos(alpha), s = std::sin(alpha);
    const double d = c * c + a * a * s * s;
    return a * (1.0 - a * a) * std::sin(2.0 * alpha) / (d * d);
}

double s_map_inverse(const DiskModel& model, double sigma)
{
    if (model.lambda() == 0.0) return sigma;
    return periodic_atan_tan(1.0 / s_slope(model), sigma);
}

double phi_radial(const DiskModel& model, double rho)
{
    rho = check_radius(model, rho);
    return (1.0 - model.lambda()) * rho / (model.radius() * (1.0 - model.kappa() * rho * rho));
}

double phi_radial_inverse_unchecked(const DiskModel& model, double rho_ref)
{
    const double R = model.radius();
    const double one_m = 1.0 - model.lambda();
    const double disc = one_m * one_m + 4.0 * model.kappa() * rho_ref * rho_ref * R * R;
    return 2.0 * rho_ref * R / (one_m + std::sqrt(std::max(disc, 0.0)));
}

Complex phi_map(const DiskModel& model, Complex z)
{
    const double rho = std::abs(z);
    if (rho == 0.0) return {0.0, 0.0};
    check_radius(model, rho);
    const double f = (1.0 - model.lambda()) / (model.radius() * (1.0 - model.kappa() * rho * rho));
    return z * f;
}

Complex phi_inverse(const DiskModel& model, Complex zeta)
{
    const double r = std::abs(zeta);
    if (!(r <= 1.0 + kRadiusSlack)) {
        throw OutOfDisk("point lies outside the closed unit disk");
    }
    if (r == 0.0) return {0.0, 0.0};
    const double rho = phi_radial_inverse_unchecked(model, std::min(r, 1.0));
    return zeta * (rho / r);
}

PsiImage psi_map(const DiskModel& model, double rho, double theta)
{
    rho = check_radius(model, rho);
    const double rr = rho / model.radius();
    const double u = model.lambda() * rr * rr;
    PsiImage out;
    out.rho_prime = phi_radial(model, rho);
    out.theta_prime = theta - std::atan2(u * std::sin(2.0 * theta), 1.0 + u * std::cos(2.0 * theta));
    return out;
}

double psi_theta_jacobian(const DiskModel& model, double rho, double theta)
{
    rho = check_radius(model, rho);
    const double q = model.kappa() * rho * rho;
    const double lam = model.lambda();
    const FanBeamCoord fp = footpoint(model, PhasePoint{rho, 0.0, theta});
    return ((1.0 - q) / (1.0 + q)) * ((1.0 + lam) / (1.0 - lam)) * s_map_derivative(model, fp.alpha);
}

FanBeamCoord euclidean_footpoint(double rho, double omega, double theta)
{
    double sa = -rho * std::sin(theta - omega);
    sa = std::clamp(sa, -1.0, 1.0);
    const double alpha = std::asin(sa);
    return {wrap_two_pi(theta - alpha - kPi), alpha};
}

FanBeamCoord footpoint(const DiskModel& model, const PhasePoint& point)
{
    check_radius(model, point.rho);
    const double rel = point.theta - point.omega;
    const PsiImage img = psi_map(model, point.rho, rel);
    const FanBeamCoord ref = euclidean_footpoint(img.rho_prime, 0.0, img.theta_prime);
    FanBeamCoord out;
    out.alpha = s_map_inverse(model, ref.alpha);
    out.beta = wrap_two_pi(ref.beta + point.omega);
    return out;
}

GeodesicArc::GeodesicArc(const DiskModel& model, const FanBeamCoord& entry)
    : model_(model), entry_(entry)
{
    const double ca = std::cos(entry.alpha);
    if (!(std::abs(entry.alpha) < kHalfPi) || ca < 1e-14) {
        throw TangentRay("geodesic is tangent to the boundary (|alpha| >= pi/2)");
    }
    rotation_ = std::polar(1.0, entry.beta);
    tilt_ = std::polar(1.0, entry.alpha);
    x_exit_ = 2.0 * model.radius() * ca / (1.0 - model.lambda());
    if (x_exit_ < 1e-14) throw TangentRay("geodesic has zero length");
    tau_ = arclength(x_exit_);
}

Complex GeodesicArc::point(double x) const
{
    const double R = model_.radius();
    return rotation_ * (R - x * tilt_) / (1.0 + R * model_.kappa() * tilt_ * x);
}

Complex GeodesicArc::tangent(double x) const
{
    const double R = model_.radius();
    const Complex den = 1.0 + R * model_.kappa() * tilt_ * x;
    return -rotation_ * tilt_ * (1.0 + model_.lambda()) / (den * den);
}

double GeodesicArc::speed(double x) const
{
    // |z'| / (1 + kappa |z|^2) simplifies to 1 / (1 + kappa x^2).
    return 1.0 / (1.0 + model_.kappa() * x * x);
}

double GeodesicArc::arclength(double x) const
{
    const double k = model_.kappa();
    if (k == 0.0) return x;
    if (k > 0.0) {
        const double r = std::sqrt(k);
        return std::atan(r * x) / r;
    }
    const double r = std::sqrt(-k);
    return std::atanh(r * x) / r;
}

void GeodesicArc::sample(int nodes, std::vector<Complex>& points, std::vector<double>& weights) const
{
    sample(gauss_legendre(nodes), points, weights);
}

void GeodesicArc::sample(const GaussRule& rule, std::vector<Complex>& points, std::vector<double>& weights) const
{
    const std::size_t n = rule.nodes.size();
    const double half = 0.5 * x_exit_;
    points.resize(n);
    weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = half * (rule.nodes[i] + 1.0);
        points[i] = point(x);
        weights[i] = half * rule.weights[i] * speed(x);
    }
}

GeodesicArc geodesic(const DiskModel& model, const FanBeamCoord& coord)
{
    return GeodesicArc(model, coord);
}

FanBeamCoord scattering(const DiskModel& model, const FanBeamCoord& coord)
{
    return {wrap_two_pi(coord.beta + kPi + 2.0 * s_map(model, coord.alpha)), kPi - coord.alpha};
}

FanBeamCoord antipodal_scattering(const DiskModel& model, const FanBeamCoord& coord)
{
    return {wrap_two_pi(coord.beta + kPi + 2.0 * s_map(model, coord.alpha)), -coord.alpha};
}

} // namespace gxr

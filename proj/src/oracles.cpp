#include "gxr/oracles.hpp"

#include "gxr/quadrature.hpp"

#include <boost/math/special_functions/jacobi.hpp>

#include <cmath>

namespace gxr::oracle {

namespace {

double binomial(int n, int k)
{
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Complex cpow(Complex z, int e)
{
    Complex r{1.0, 0.0};
    for (int i = 0; i < e; ++i) r *= z;
    return r;
}

// Sum over the monomials c_j z^{a_j} conj(z)^{b_j} of Z_{n,k}, with a_j, b_j
// optionally differentiated.
enum class Deriv { none, dz, dzbar };

Complex monomial_sum(int n, int k, Complex z, Deriv d)
{
    const Complex zb = std::conj(z);
    Complex acc{};
    for (int j = 0; j <= std::min(k, n - k); ++j) {
        const double c = binomial(k, j) * binomial(n - j, k) * (((k - j) % 2 == 0) ? 1.0 : -1.0);
        int a = n - j - k, b = k - j;
        double f = 1.0;
        if (d == Deriv::dz) {
            if (a == 0) continue;
            f = a;
            --a;
        } else if (d == Deriv::dzbar) {
            if (b == 0) continue;
            f = b;
            --b;
        }
        acc += c * f * cpow(z, a) * cpow(zb, b);
    }
    return acc;
}

} // namespace

Complex zernike_monomial(int n, int k, Complex z)
{
    return monomial_sum(n, k, z, Deriv::none);
}

Complex zernike_dz(int n, int k, Complex z)
{
    return monomial_sum(n, k, z, Deriv::dz);
}

Complex zernike_dzbar(int n, int k, Complex z)
{
    return monomial_sum(n, k, z, Deriv::dzbar);
}

Complex zernike_dz_jacobi(int n, int k, Complex z)
{
    // Z = (-1)^k e^{i m omega} rho^|m| P_j(2 rho^2 - 1); d/dz = e^{-i omega}/2 (d/drho - (i/rho) d/domega).
    const int m = n - 2 * k;
    const int am = std::abs(m);
    const unsigned j = static_cast<unsigned>(std::min(k, n - k));
    const double rho = std::abs(z);
    const double x = 2.0 * rho * rho - 1.0;
    const double p = boost::math::jacobi(j, 0.0, static_cast<double>(am), x);
    const double dp = j == 0 ? 0.0 : boost::math::jacobi_derivative(j, 0.0, static_cast<double>(am), x, 1u);
    double radial = 4.0 * std::pow(rho, am + 1) * dp;
    if (am + m > 0) radial += (am + m) * std::pow(rho, am - 1) * p;
    const double omega = rho > 0.0 ? std::arg(z) : 0.0;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * 0.5 * radial * std::polar(1.0, (m - 1) * omega);
}

FanBeamCoord footpoint_by_marching(const DiskModel& model, double rho, double omega, double theta)
{
    const double k = model.kappa(), R = model.radius(), lam = model.lambda();
    // Geodesic through rho (on the positive axis) with direction theta - omega:
    // T(x) = (e^{it} x + rho) / (1 - kappa rho e^{it} x).
    const double t = theta - omega;
    const Complex e = std::polar(1.0, t);
    const double a = 1.0 - lam * k * rho * rho;
    const double b = 2.0 * rho * std::cos(t) * (1.0 + lam);
    const double c = rho * rho - R * R;
    const double disc = std::sqrt(std::max(b * b - 4.0 * a * c, 0.0));
    const double q = -0.5 * (b + (b >= 0.0 ? disc : -disc));
    double x1 = q / a, x2 = (q != 0.0) ? c / q : 0.0;
    double xm = std::min(x1, x2);
    if (c == 0.0) xm = std::min(0.0, -b / a);
    const Complex den = 1.0 - k * rho * e * xm;
    const Complex T = (e * xm + rho) / den;
    const Complex dT = e * (1.0 + k * rho * rho) / (den * den);
    const double beta = std::arg(T);
    const double alpha = wrap_pi(std::arg(dT) - beta - kPi);
    return {wrap_two_pi(beta + omega), alpha};
}

double geodesic_length(const DiskModel& model, const FanBeamCoord& coord)
{
    const GeodesicArc arc(model, coord);
    auto integrand = [&](double x) {
        const Complex z = arc.point(x);
        return Complex(std::abs(arc.tangent(x)) / (1.0 + model.kappa() * std::norm(z)), 0.0);
    };
    return adaptive_integrate(integrand, 0.0, arc.x_exit(), 1e-15).real();
}

Complex disk_integral(const DiskModel& model, const DiskFunction& f, int n_omega)
{
    auto ring = [&](double r) {
        const double conf = 1.0 + model.kappa() * r * r;
        Complex acc{};
        for (int j = 0; j < n_omega; ++j) acc += f(std::polar(r, kTwoPi * j / n_omega));
        return acc * (r / (conf * conf) * kTwoPi / n_omega);
    };
    return adaptive_integrate(ring, 0.0, model.radius(), 1e-13);
}

Complex boundary_integral(const DiskModel& model, const BoundaryFunction& g, int n_beta)
{
    auto column = [&](double alpha) {
        Complex acc{};
        for (int i = 0; i < n_beta; ++i) acc += g(FanBeamCoord{kTwoPi * i / n_beta, alpha});
        return acc * (kTwoPi / n_beta);
    };
    return model.measure_factor() * adaptive_integrate(column, -kHalfPi, kHalfPi, 1e-13);
}

} // namespace gxr::oracle

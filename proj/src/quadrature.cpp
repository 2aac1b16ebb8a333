#include "gxr/quadrature.hpp"

#include "gxr/core.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <map>
#include <mutex>

namespace gxr {

namespace {

GaussRule compute_rule(int n)
{
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Nonnegative zeros, ascending; w = 2 / ((1 - x^2) P_n'(x)^2).
    const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        const double x = zeros[i];
        const double dp = boost::math::legendre_p_prime(n, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const int up = n / 2 + static_cast<int>(i);
        rule.nodes[up] = x;
        rule.weights[up] = w;
        rule.nodes[n - 1 - up] = -x;
        rule.weights[n - 1 - up] = w;
    }
    return rule;
}

} // namespace

GaussRule gauss_legendre(int n)
{
    if (n < 1) throw ResolutionTooLow("Gauss-Legendre rule needs at least one node");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

GaussRule gauss_legendre(int n, double a, double b)
{
    GaussRule rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

GaussRule composite_gauss(int n, int panels, double a, double b)
{
    GaussRule base = gauss_legendre(n);
    GaussRule out;
    out.nodes.reserve(static_cast<size_t>(n) * panels);
    out.weights.reserve(static_cast<size_t>(n) * panels);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int i = 0; i < n; ++i) {
            out.nodes.push_back(lo + 0.5 * h * (base.nodes[i] + 1.0));
            out.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return out;
}

namespace {

Complex fixed_rule(const std::function<Complex(double)>& f, const GaussRule& rule, double a, double b)
{
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Complex acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

// Local acceptance: the panel error bound is a share of the global tolerance
// proportional to its width, floored at round-off level.
Complex adaptive_step(const std::function<Complex(double)>& f, const GaussRule& coarse, const GaussRule& fine,
                      double a, double b, double abs_tol_per_width, int depth)
{
    const Complex lo = fixed_rule(f, coarse, a, b);
    const Complex hi = fixed_rule(f, fine, a, b);
    const double err = std::abs(hi - lo);
    if (err <= abs_tol_per_width * (b - a) || err <= 1e-15 * std::abs(hi) || depth <= 0) return hi;
    const double mid = 0.5 * (a + b);
    return adaptive_step(f, coarse, fine, a, mid, abs_tol_per_width, depth - 1)
        + adaptive_step(f, coarse, fine, mid, b, abs_tol_per_width, depth - 1);
}

} // namespace

Complex adaptive_integrate(const std::function<Complex(double)>& f, double a, double b, double tol, int max_depth)
{
    const GaussRule coarse = gauss_legendre(10);
    const GaussRule fine = gauss_legendre(20);
    const double scale = std::max(std::abs(fixed_rule(f, fine, a, b)), 1e-300);
    return adaptive_step(f, coarse, fine, a, b, tol * scale / (b - a), max_depth);
}

void jacobi_all(int kmax, double a, double b, double x, double* out)
{
    if (kmax < 0) return;
    out[0] = 1.0;
    if (kmax == 0) return;
    out[1] = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for (int k = 2; k <= kmax; ++k) {
        const double s = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        out[k] = (c2 * out[k - 1] - c3 * out[k - 2]) / c1;
    }
}

double jacobi(int k, double a, double b, double x)
{
    if (k < 0) return 0.0;
    std::vector<double> buf(k + 1);
    jacobi_all(k, a, b, x, buf.data());
    return buf[k];
}

} // namespace gxr

#include "gxr/operators.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace gxr {

namespace {

// Fornberg weights for derivatives of order 0..2 at 0 on five nodes.
using Weights = std::array<std::array<double, 5>, 3>;

Weights fornberg(const std::array<double, 5>& x)
{
    constexpr int n = 5, m = 2;
    double c[3][5][5] = {};
    c[0][0][0] = 1.0;
    double c1 = 1.0;
    for (int i = 1; i < n; ++i) {
        double c2 = 1.0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            for (int k = std::min(i, m); k >= 0; --k) {
                c[k][i][j] = (x[i] * c[k][i - 1][j] - (k > 0 ? k * c[k - 1][i - 1][j] : 0.0)) / c3;
            }
        }
        for (int k = std::min(i, m); k >= 0; --k) {
            c[k][i][i] = c1 / c2 * ((k > 0 ? k * c[k - 1][i - 1][i - 1] : 0.0) - x[i - 1] * c[k][i - 1][i - 1]);
        }
        c1 = c2;
    }
    Weights w{};
    for (int k = 0; k <= m; ++k)
        for (int j = 0; j < n; ++j) w[k][j] = c[k][n - 1][j];
    return w;
}

struct Partials {
    Complex f, fa, fb, faa, fab, fbb;
};

// Tensor five-point stencil around (a, b), shifted until every node satisfies inside().
template <typename G, typename Inside>
Partials partials(G g, double a, double b, double ha, double hb, Inside inside)
{
    static const int order[5] = {0, -1, 1, -2, 2};
    for (int total = 0; total <= 4; ++total) {
        for (int sa : order) {
            for (int sb : order) {
                if (std::abs(sa) + std::abs(sb) != total) continue;
                bool ok = true;
                for (int i = 0; i < 5 && ok; ++i)
                    for (int j = 0; j < 5 && ok; ++j)
                        ok = inside(a + (i - 2 + sa) * ha, b + (j - 2 + sb) * hb);
                if (!ok) continue;
                std::array<double, 5> xa{}, xb{};
                for (int i = 0; i < 5; ++i) {
                    xa[i] = (i - 2 + sa) * ha;
                    xb[i] = (i - 2 + sb) * hb;
                }
                const Weights wa = fornberg(xa), wb = fornberg(xb);
                Partials p{};
                for (int i = 0; i < 5; ++i) {
                    for (int j = 0; j < 5; ++j) {
                        const Complex v = g(a + xa[i], b + xb[j]);
                        p.f += wa[0][i] * wb[0][j] * v;
                        p.fa += wa[1][i] * wb[0][j] * v;
                        p.fb += wa[0][i] * wb[1][j] * v;
                        p.faa += wa[2][i] * wb[0][j] * v;
                        p.fab += wa[1][i] * wb[1][j] * v;
                        p.fbb += wa[0][i] * wb[2][j] * v;
                    }
                }
                return p;
            }
        }
    }
    throw OutOfDisk("finite-difference stencil does not fit inside the domain at this point");
}

void check_bound(double m, double bound, int n)
{
    if (!std::isfinite(m) || std::abs(m) > bound) {
        std::ostringstream msg;
        msg << "filter multiplier " << m << " at degree " << n << " exceeds the bound " << bound;
        throw FilterOverflow(msg.str());
    }
}

std::string format_number(double v)
{
    std::ostringstream s;
    s << v;
    return s.str();
}

// u / sqrt(s') and its partials in (beta, alpha).
Partials boundary_partials(const DiskModel& model, const BoundaryFunction& u, const FanBeamCoord& c, double h)
{
    if (!(std::abs(c.alpha) < kHalfPi)) throw TangentRay("T is evaluated at interior fan-beam angles only");
    auto v = [&](double beta, double alpha) {
        return u(FanBeamCoord{beta, alpha}) / std::sqrt(s_map_derivative(model, alpha));
    };
    // The data oscillate like functions of s(alpha); scale the alpha step by 1/s' and
    // keep the stencil inside (-pi/2, pi/2).
    const double h_alpha =
        std::min(h / std::max(1.0, s_map_derivative(model, c.alpha)), 0.2 * (kHalfPi - std::abs(c.alpha)));
    return partials(v, c.beta, c.alpha, h, h_alpha,
                    [](double, double alpha) { return std::abs(alpha) < kHalfPi; });
}

} // namespace

// ---------------------------------------------------------------------------

SpectralFilter::SpectralFilter(FilterKind kind, double parameter, std::string name,
                               std::function<double(double)> multiplier)
    : kind_(kind), parameter_(parameter), name_(std::move(name)), multiplier_(std::move(multiplier))
{
}

SpectralFilter SpectralFilter::power(double a)
{
    return {FilterKind::power, a, "power:" + format_number(a), [a](double lambda) {
                return a == 0.0 ? 1.0 : std::pow(lambda, a);
            }};
}

SpectralFilter SpectralFilter::cutoff(int nc)
{
    if (nc < 0) throw Error("cutoff degree must be nonnegative");
    const double top = static_cast<double>(nc + 1) * (nc + 1);
    return {FilterKind::cutoff, static_cast<double>(nc), "cutoff:" + std::to_string(nc),
            [top](double lambda) { return lambda <= top * (1.0 + 1e-12) ? 1.0 : 0.0; }};
}

SpectralFilter SpectralFilter::cosine(int nc)
{
    if (nc < 1) throw Error("cosine filter degree must be at least 1");
    return {FilterKind::cosine, static_cast<double>(nc), "cosine:" + std::to_string(nc), [nc](double lambda) {
                const double n = std::sqrt(lambda) - 1.0;
                return n <= nc * (1.0 + 1e-12) ? std::cos(kPi * std::min(n, double(nc)) / (2.0 * nc)) : 0.0;
            }};
}

SpectralFilter SpectralFilter::tikhonov(double mu)
{
    if (!(mu >= 0.0)) throw Error("Tikhonov parameter must be nonnegative");
    return {FilterKind::tikhonov, mu, "tikhonov:" + format_number(mu),
            [mu](double lambda) { return 1.0 / (1.0 + mu * std::sqrt(lambda)); }};
}

SpectralFilter SpectralFilter::custom(std::string name, std::function<double(double)> multiplier)
{
    return {FilterKind::custom, 0.0, std::move(name), std::move(multiplier)};
}

SpectralFilter SpectralFilter::parse(const std::string& text)
{
    if (text == "identity") return identity();
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error("filter '" + text + "' has no ':' (expected kind:value)");
    const std::string kind = text.substr(0, colon);
    const std::string value = text.substr(colon + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size()) throw Error("filter '" + text + "' has an invalid value");
    auto as_int = [&]() {
        if (v != std::floor(v)) throw Error("filter '" + text + "' needs an integer degree");
        return static_cast<int>(v);
    };
    if (kind == "power") return power(v);
    if (kind == "cutoff") return cutoff(as_int());
    if (kind == "cosine") return cosine(as_int());
    if (kind == "tikhonov") return tikhonov(v);
    throw Error("unknown filter kind '" + kind + "' (expected power, cutoff, cosine or tikhonov)");
}

std::string SpectralFilter::describe() const
{
    return name_;
}

// ---------------------------------------------------------------------------

SpectralField apply_L_spectral(const SpectralField& spec)
{
    SpectralField out = spec;
    for (int n = 0; n <= spec.degree(); ++n)
        for (int k = 0; k <= n; ++k) out(n, k) *= static_cast<double>(n + 1) * (n + 1);
    return out;
}

SpectralBoundary apply_T2_spectral(const SpectralBoundary& spec)
{
    SpectralBoundary out = spec;
    const int W = spec.margin();
    for (int n = 0; n <= spec.degree(); ++n)
        for (int k = -W; k <= n + W; ++k) out(n, k) *= static_cast<double>(n + 1) * (n + 1);
    return out;
}

SpectralField functional_calculus_disk(const SpectralFilter& filter, const SpectralField& spec, double bound)
{
    SpectralField out = spec;
    for (int n = 0; n <= spec.degree(); ++n) {
        const double m = filter.at_degree(n);
        check_bound(m, bound, n);
        for (int k = 0; k <= n; ++k) out(n, k) *= m;
    }
    return out;
}

SpectralBoundary functional_calculus_boundary(const SpectralFilter& filter, const SpectralBoundary& spec, double bound)
{
    SpectralBoundary out = spec;
    const int W = spec.margin();
    for (int n = 0; n <= spec.degree(); ++n) {
        const double m = filter.at_degree(n);
        check_bound(m, bound, n);
        for (int k = -W; k <= n + W; ++k) out(n, k) *= m;
    }
    return out;
}

SpectralBoundary cminus_spectral(const SpectralBoundary& spec)
{
    SpectralBoundary out = spec;
    const int W = spec.margin();
    for (int n = 0; n <= spec.degree(); ++n) {
        for (int k = -W; k <= n + W; ++k) {
            if (k < 0) out(n, k) *= Complex(0.0, 1.0);
            else if (k > n) out(n, k) *= Complex(0.0, -1.0);
            else out(n, k) = 0.0;
        }
    }
    return out;
}

double sobolev_norm_disk(double s, const SpectralField& spec)
{
    double acc = 0.0;
    for (int n = 0; n <= spec.degree(); ++n)
        for (int k = 0; k <= n; ++k) acc += std::pow(n + 1.0, 2.0 * s) * std::norm(spec(n, k));
    return std::sqrt(acc);
}

double sobolev_norm_boundary_T(double s, const SpectralBoundary& spec)
{
    double acc = 0.0;
    const int W = spec.margin();
    for (int n = 0; n <= spec.degree(); ++n)
        for (int k = -W; k <= n + W; ++k) acc += std::pow(n + 1.0, 2.0 * s) * std::norm(spec(n, k));
    return std::sqrt(acc);
}

double sobolev_norm_boundary_classical(double s, const SpectralBoundary& spec)
{
    double acc = 0.0;
    const int W = spec.margin();
    for (int n = 0; n <= spec.degree(); ++n) {
        for (int k = -W; k <= n + W; ++k) {
            const double m = n - 2.0 * k;
            acc += std::pow((n + 1.0) * (n + 1.0) + m * m, s) * std::norm(spec(n, k));
        }
    }
    return std::sqrt(acc);
}

double h1_norm_reference(const SpectralField& spec)
{
    if (!spec.model().is_reference()) throw ModelMismatch("the classical H^1 norm is defined on the reference disk");
    const double d = dz_spectral(spec).norm();
    const double db = dzbar_spectral(spec).norm();
    return std::sqrt(spec.norm() * spec.norm() + 2.0 * (d * d + db * db));
}

// ---------------------------------------------------------------------------

Complex apply_L_pointwise(const DiskModel& model, const DiskFunction& f, Complex z, double h)
{
    if (!(std::abs(z) < model.radius())) throw OutOfDisk("the disk operator is evaluated at interior points only");
    const bool curved = !model.is_reference();
    auto v = [&](double x, double y) {
        if (!curved) return f(Complex(x, y));
        const double r = std::hypot(x, y);
        const double rho = phi_radial_inverse_unchecked(model, r);
        const Complex p = r > 0.0 ? Complex(x, y) * (rho / r) : Complex{};
        return f(p) / model.weight(rho);
    };
    const Complex zeta = curved ? phi_map(model, z) : z;
    const double x = zeta.real(), y = zeta.imag();
    const Partials p = partials(v, x, y, h, h, [](double a, double b) { return a * a + b * b < 1.0; });
    const Complex le = -(p.faa + p.fbb) + x * x * p.faa + 2.0 * x * y * p.fab + y * y * p.fbb
        + 3.0 * (x * p.fa + y * p.fb) + p.f;
    return curved ? model.weight(z) * le : le;
}

Complex apply_T_pointwise(const DiskModel& model, const BoundaryFunction& u, const FanBeamCoord& coord, double h)
{
    const Partials p = boundary_partials(model, u, coord, h);
    const double sp = s_map_derivative(model, coord.alpha);
    return std::sqrt(sp) * (p.fa - p.fb / sp);
}

Complex apply_T2_pointwise(const DiskModel& model, const BoundaryFunction& u, const FanBeamCoord& coord, double h)
{
    // With v = u / sqrt(s') and X = d_beta - (1/s') d_alpha, T^2 u = sqrt(s') X^2 v.
    const Partials p = boundary_partials(model, u, coord, h);
    const double sp = s_map_derivative(model, coord.alpha);
    const double spp = s_map_second_derivative(model, coord.alpha);
    const Complex x2 = p.faa - (2.0 / sp) * p.fab + p.fbb / (sp * sp) - (spp / (sp * sp * sp)) * p.fb;
    return std::sqrt(sp) * x2;
}

Complex apply_D_pointwise(const DiskModel& model, const BoundaryFunction& u, const FanBeamCoord& coord, double h)
{
    return apply_T2_pointwise(model, u, coord, h) + 2.0 * std::tan(coord.alpha) * apply_T_pointwise(model, u, coord, h);
}

} // namespace gxr

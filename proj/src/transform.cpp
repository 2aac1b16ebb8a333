#include "gxr/transform.hpp"

#include "gxr/parallel.hpp"
#include "gxr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace gxr {

namespace {

constexpr int kInterpolationMargin = 2;

void count(SamplingStats* stats, bool clamped)
{
    if (!stats) return;
    stats->total.fetch_add(1, std::memory_order_relaxed);
    if (clamped) stats->clamped.fetch_add(1, std::memory_order_relaxed);
}

// Cubic Lagrange weights for nodes at offsets -1, 0, 1, 2 and fractional position t.
void cubic_weights(double t, double w[4])
{
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
}

int wrap_index(int i, int n)
{
    i %= n;
    return i < 0 ? i + n : i;
}

// Periodic interpolation of a uniformly sampled row at fractional index t.
template <typename Get>
Complex periodic_interp(Get get, int n, double t, Interpolation method)
{
    const double fl = std::floor(t);
    const int i0 = static_cast<int>(fl);
    const double f = t - fl;
    if (method == Interpolation::bilinear) {
        return (1.0 - f) * get(wrap_index(i0, n)) + f * get(wrap_index(i0 + 1, n));
    }
    double w[4];
    cubic_weights(f, w);
    Complex acc{};
    for (int s = 0; s < 4; ++s) acc += w[s] * get(wrap_index(i0 - 1 + s, n));
    return acc;
}

// Fast evaluation of a psi-hat expansion at arbitrary coordinates.
class BoundaryExpansion {
public:
    explicit BoundaryExpansion(SpectralBoundary spec)
        : spec_(std::move(spec)), mmax_(spec_.degree() + 2 * spec_.margin())
    {
    }

    Complex operator()(const FanBeamCoord& c) const
    {
        const DiskModel& model = spec_.model();
        const double sg = s_map(model, c.alpha);
        const double root = std::sqrt(s_map_derivative(model, c.alpha));
        const int N = spec_.degree(), W = spec_.margin();
        std::vector<Complex> phase(2 * mmax_ + 1);
        const Complex e = std::polar(1.0, c.beta + sg);
        phase[mmax_] = 1.0;
        for (int m = 1; m <= mmax_; ++m) {
            phase[mmax_ + m] = phase[mmax_ + m - 1] * e;
            phase[mmax_ - m] = std::conj(phase[mmax_ + m]);
        }
        Complex acc{};
        for (int n = 0; n <= N; ++n) {
            Complex row{};
            for (int k = -W; k <= n + W; ++k) row += spec_.get(n, k) * phase[mmax_ + n - 2 * k];
            // (-1)^n (e^{ia} + (-1)^n e^{-ia}) with a = (n + 1) sigma.
            const double a = (n + 1) * sg;
            const Complex bracket = (n % 2 == 0) ? Complex(2.0 * std::cos(a), 0.0) : Complex(0.0, -2.0 * std::sin(a));
            acc += row * bracket;
        }
        return root * acc / (4.0 * kPi * psi_norm(model));
    }

private:
    SpectralBoundary spec_;
    int mmax_;
};

// Per-ray quadrature shared by the forward variants.
template <typename Sample>
void forward_rows(const SinogramGrid& grid, const RaySamplingConfig& cfg, GridSinogram& out, Sample sample)
{
    cfg.validate();
    const GaussRule rule = gauss_legendre(cfg.nodes_per_ray);
    const int nb = grid.n_beta(), na = grid.n_alpha();
    parallel_for(0, static_cast<std::size_t>(nb), [&](std::size_t ii) {
        std::vector<Complex> pts;
        std::vector<double> wts;
        for (int j = 0; j < na; ++j) {
            const GeodesicArc arc(grid.model(), grid.coord(static_cast<int>(ii), j));
            arc.sample(rule, pts, wts);
            Complex acc{};
            for (std::size_t q = 0; q < pts.size(); ++q) acc += wts[q] * sample(pts[q]);
            out.at(static_cast<int>(ii), j) = acc;
        }
    });
}

struct Footpoints {
    std::vector<double> beta;
    std::vector<double> alpha;
    std::vector<double> weight;
};

// Theta quadrature on the fiber over radius rho (at omega = 0). Nodes are
// equispaced in the reference direction theta' = Psi(rho, theta), with weights
// (2 pi / n) d theta / d theta'. In theta' the backprojected integrand is the
// Euclidean one, which stays smooth where theta -> theta' compresses sharply.
Footpoints footpoints_on_circle(const DiskModel& model, double rho, int n_theta)
{
    Footpoints fp;
    fp.beta.resize(n_theta);
    fp.alpha.resize(n_theta);
    fp.weight.resize(n_theta);
    const double rho_ref = phi_radial(model, rho);
    const double u = model.kappa() * rho * rho;
    const double lam = model.lambda();
    const double jac = ((1.0 + u) / (1.0 - u)) * ((1.0 - lam) / (1.0 + lam));
    for (int j = 0; j < n_theta; ++j) {
        const FanBeamCoord e = euclidean_footpoint(rho_ref, 0.0, kTwoPi * j / n_theta);
        fp.beta[j] = e.beta;
        fp.alpha[j] = s_map_inverse(model, e.alpha);
        fp.weight[j] = (kTwoPi / n_theta) * jac / s_map_derivative(model, fp.alpha[j]);
    }
    return fp;
}

Complex backproject(const BoundaryFunction& g, const Footpoints& fp, double omega, bool star)
{
    const std::size_t n = fp.beta.size();
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) {
        const Complex v = g(FanBeamCoord{wrap_two_pi(omega + fp.beta[j]), fp.alpha[j]});
        acc += fp.weight[j] * (star ? v / std::cos(fp.alpha[j]) : v);
    }
    return acc;
}

void check_interior(const DiskModel& model, Complex z)
{
    if (!(std::abs(z) < model.radius())) {
        throw OutOfDisk("backprojection is evaluated at interior points only");
    }
}

GridField backproject_grid(const DiskModel& model, const BoundaryFunction& g, const DiskGrid& grid,
                           const RaySamplingConfig& cfg, bool star)
{
    cfg.validate();
    if (!(grid.model() == model)) throw ModelMismatch("disk grid built for a different model");
    GridField out(grid);
    const int nr = grid.n_rho(), nw = grid.n_omega();
    parallel_for(0, static_cast<std::size_t>(nr), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        check_interior(model, grid.rho(i));
        const Footpoints fp = footpoints_on_circle(model, grid.rho(i), cfg.theta_nodes);
        for (int j = 0; j < nw; ++j) out.at(i, j) = backproject(g, fp, grid.omega(j), star);
    });
    return out;
}

} // namespace

Interpolation parse_interpolation(const std::string& name)
{
    if (name == "bilinear") return Interpolation::bilinear;
    if (name == "bicubic") return Interpolation::bicubic;
    if (name == "spectral") return Interpolation::spectral;
    throw Error("unknown interpolation '" + name + "' (expected bilinear, bicubic or spectral)");
}

void RaySamplingConfig::validate() const
{
    if (nodes_per_ray < 16) throw ResolutionTooLow("nodes_per_ray must be at least 16");
    if (theta_nodes < 64) throw ResolutionTooLow("theta_nodes must be at least 64");
}

int boundary_degree_for(const SinogramGrid& grid, int margin)
{
    const int by_beta = (grid.n_beta() - 1 - 4 * margin) / 2;
    const int by_alpha = (grid.n_alpha() - 2 - 2 * margin) / 2;
    return std::min(by_beta, by_alpha);
}

int disk_degree_for(const DiskGrid& grid)
{
    return std::min((grid.n_omega() - 1) / 2, 2 * grid.n_rho() - 1);
}

// ---------------------------------------------------------------------------

Complex forward_ray(const DiskModel& model, const DiskFunction& f, const FanBeamCoord& coord,
                    const RaySamplingConfig& cfg)
{
    cfg.validate();
    const GeodesicArc arc(model, coord);
    std::vector<Complex> pts;
    std::vector<double> wts;
    arc.sample(gauss_legendre(cfg.nodes_per_ray), pts, wts);
    Complex acc{};
    for (std::size_t q = 0; q < pts.size(); ++q) acc += wts[q] * f(pts[q]);
    return acc;
}

std::vector<Complex> forward(const DiskModel& model, const DiskFunction& f, const std::vector<FanBeamCoord>& coords,
                             const RaySamplingConfig& cfg)
{
    cfg.validate();
    const GaussRule rule = gauss_legendre(cfg.nodes_per_ray);
    std::vector<Complex> out(coords.size());
    parallel_for(0, coords.size(), [&](std::size_t r) {
        const GeodesicArc arc(model, coords[r]);
        std::vector<Complex> pts;
        std::vector<double> wts;
        arc.sample(rule, pts, wts);
        Complex acc{};
        for (std::size_t q = 0; q < pts.size(); ++q) acc += wts[q] * f(pts[q]);
        out[r] = acc;
    });
    return out;
}

GridSinogram forward(const DiskFunction& f, const SinogramGrid& grid, const RaySamplingConfig& cfg)
{
    GridSinogram out(grid);
    forward_rows(grid, cfg, out, [&](Complex z) { return f(z); });
    return out;
}

GridSinogram forward(const SpectralField& f, Frame frame, const SinogramGrid& grid, const RaySamplingConfig& cfg)
{
    if (!(f.model() == grid.model())) throw ModelMismatch("field and sinogram grid use different models");
    GridSinogram out(grid);
    forward_rows(grid, cfg, out, [&](Complex z) { return evaluate(f, z, frame); });
    return out;
}

GridSinogram forward(const GridField& f, const SinogramGrid& grid, const RaySamplingConfig& cfg, SamplingStats* stats)
{
    if (!(f.grid.model() == grid.model())) throw ModelMismatch("field and sinogram grid use different models");
    const DiskFunction sample = field_interpolant(f, cfg.interpolation, stats);
    GridSinogram out(grid);
    forward_rows(grid, cfg, out, sample);
    return out;
}

std::vector<GridSinogram> forward_basis(const DiskModel& model, int degree, Frame frame, const SinogramGrid& grid,
                                        const RaySamplingConfig& cfg)
{
    cfg.validate();
    if (!(model == grid.model())) throw ModelMismatch("sinogram grid built for a different model");
    const std::size_t modes = SpectralField::size_for(degree);
    std::vector<GridSinogram> out(modes, GridSinogram(grid));
    const GaussRule rule = gauss_legendre(cfg.nodes_per_ray);
    const int nb = grid.n_beta(), na = grid.n_alpha();
    std::vector<double> scale(degree + 1);
    for (int n = 0; n <= degree; ++n) scale[n] = 1.0 / curved_zernike_norm(model, n, 0);

    parallel_for(0, static_cast<std::size_t>(nb), [&](std::size_t ii) {
        std::vector<Complex> pts;
        std::vector<double> wts;
        std::vector<Complex> acc(modes);
        std::vector<Complex> powers(degree + 1);
        for (int j = 0; j < na; ++j) {
            const GeodesicArc arc(model, grid.coord(static_cast<int>(ii), j));
            arc.sample(rule, pts, wts);
            std::fill(acc.begin(), acc.end(), Complex{});
            for (std::size_t q = 0; q < pts.size(); ++q) {
                const Complex zeta = phi_map(model, pts[q]);
                const double r = std::min(std::abs(zeta), 1.0);
                const auto table = radial_table(degree, r);
                const Complex unit = r > 0.0 ? zeta / r : Complex(1.0, 0.0);
                powers[0] = 1.0;
                for (int m = 1; m <= degree; ++m) powers[m] = powers[m - 1] * unit;
                const double w = model.weight(pts[q]);
                const double factor = wts[q] * (frame == Frame::weighted ? w * w : w);
                for (int n = 0; n <= degree; ++n) {
                    for (int k = 0; k <= n; ++k) {
                        const int m = n - 2 * k;
                        const Complex ph = m >= 0 ? powers[m] : std::conj(powers[-m]);
                        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
                        acc[SpectralField::index(n, k)] +=
                            (factor * sign * scale[n] * table[std::abs(m)][std::min(k, n - k)]) * ph;
                    }
                }
            }
            for (std::size_t idx = 0; idx < modes; ++idx) out[idx].at(static_cast<int>(ii), j) = acc[idx];
        }
    });
    return out;
}

// ---------------------------------------------------------------------------

Complex adjoint_sharp(const DiskModel& model, const BoundaryFunction& g, Complex z, const RaySamplingConfig& cfg)
{
    cfg.validate();
    check_interior(model, z);
    const Footpoints fp = footpoints_on_circle(model, std::abs(z), cfg.theta_nodes);
    return backproject(g, fp, std::arg(z), false);
}

Complex adjoint_star(const DiskModel& model, const BoundaryFunction& g, Complex z, const RaySamplingConfig& cfg)
{
    cfg.validate();
    check_interior(model, z);
    const Footpoints fp = footpoints_on_circle(model, std::abs(z), cfg.theta_nodes);
    return backproject(g, fp, std::arg(z), true);
}

GridField adjoint_sharp(const DiskModel& model, const BoundaryFunction& g, const DiskGrid& grid,
                        const RaySamplingConfig& cfg)
{
    return backproject_grid(model, g, grid, cfg, false);
}

GridField adjoint_star(const DiskModel& model, const BoundaryFunction& g, const DiskGrid& grid,
                       const RaySamplingConfig& cfg)
{
    return backproject_grid(model, g, grid, cfg, true);
}

GridField adjoint_sharp(const GridSinogram& g, const DiskGrid& grid, const RaySamplingConfig& cfg, SamplingStats* stats)
{
    return backproject_grid(g.grid.model(), sinogram_interpolant(g, cfg.interpolation, stats), grid, cfg, false);
}

GridField adjoint_star(const GridSinogram& g, const DiskGrid& grid, const RaySamplingConfig& cfg, SamplingStats* stats)
{
    return backproject_grid(g.grid.model(), sinogram_interpolant(g, cfg.interpolation, stats), grid, cfg, true);
}

// ---------------------------------------------------------------------------

BoundaryFunction sinogram_interpolant(const GridSinogram& g, Interpolation method, SamplingStats* stats)
{
    if (method == Interpolation::spectral) {
        const int degree = boundary_degree_for(g.grid, kInterpolationMargin);
        if (degree < 0) throw ResolutionTooLow("sinogram grid too coarse for spectral interpolation");
        auto expansion = std::make_shared<BoundaryExpansion>(analyze_boundary(g, degree, kInterpolationMargin));
        return [expansion, stats](const FanBeamCoord& c) {
            count(stats, false);
            return (*expansion)(c);
        };
    }
    auto data = std::make_shared<GridSinogram>(g);
    return [data, method, stats](const FanBeamCoord& c) {
        const SinogramGrid& grid = data->grid;
        const int nb = grid.n_beta(), na = grid.n_alpha();
        const double tb = wrap_two_pi(c.beta) / (kTwoPi / nb);
        const double dsig = kPi / na;
        double ts = (s_map(grid.model(), c.alpha) - grid.sigma(0)) / dsig;
        const bool clamped = ts < 0.0 || ts > na - 1.0;
        count(stats, clamped);
        ts = std::clamp(ts, 0.0, static_cast<double>(na - 1));

        auto column = [&](int j) {
            return periodic_interp([&](int i) { return data->at(i, j); }, nb, tb, method);
        };
        if (na == 1) return column(0);
        if (method == Interpolation::bilinear || na < 4) {
            const int j0 = std::clamp(static_cast<int>(std::floor(ts)), 0, na - 2);
            const double f = ts - j0;
            return (1.0 - f) * column(j0) + f * column(j0 + 1);
        }
        // Cubic in sigma with the stencil shifted inward at the ends.
        int j0 = static_cast<int>(std::floor(ts)) - 1;
        j0 = std::clamp(j0, 0, na - 4);
        const double t = ts - (j0 + 1);
        double w[4];
        cubic_weights(t, w);
        Complex acc{};
        for (int s = 0; s < 4; ++s) acc += w[s] * column(j0 + s);
        return acc;
    };
}

DiskFunction field_interpolant(const GridField& f, Interpolation method, SamplingStats* stats)
{
    if (method == Interpolation::spectral) {
        const int degree = disk_degree_for(f.grid);
        if (degree < 0) throw ResolutionTooLow("disk grid too coarse for spectral interpolation");
        auto spec = std::make_shared<SpectralField>(analyze_disk(f, degree, Frame::plain));
        return [spec, stats](Complex z) {
            count(stats, false);
            return evaluate(*spec, z, Frame::plain);
        };
    }
    auto data = std::make_shared<GridField>(f);
    // Signed radial nodes: the ray through the center continues at omega + pi.
    auto radii = std::make_shared<std::vector<double>>();
    const int nr = f.grid.n_rho();
    for (int i = nr - 1; i >= 0; --i) radii->push_back(-f.grid.rho(i));
    for (int i = 0; i < nr; ++i) radii->push_back(f.grid.rho(i));

    return [data, radii, method, stats](Complex z) {
        const DiskGrid& grid = data->grid;
        const int nr = grid.n_rho(), nw = grid.n_omega();
        const double rho = std::abs(z);
        const double om = rho > 0.0 ? std::arg(z) : 0.0;
        const bool clamped = rho > grid.rho(nr - 1);
        count(stats, clamped);

        // Value along the signed radial line at signed node s.
        auto node_value = [&](int s) {
            const bool negative = s < nr;
            const int i = negative ? nr - 1 - s : s - nr;
            const double angle = wrap_two_pi(negative ? om + kPi : om);
            const double t = angle / (kTwoPi / nw);
            return periodic_interp([&](int j) { return data->at(i, j); }, nw, t, method);
        };
        const std::vector<double>& r = *radii;
        const int total = static_cast<int>(r.size());
        int hi = static_cast<int>(std::upper_bound(r.begin(), r.end(), rho) - r.begin());
        hi = std::clamp(hi, 1, total - 1);
        if (method == Interpolation::bilinear || total < 4) {
            const int lo = hi - 1;
            const double f = (rho - r[lo]) / (r[hi] - r[lo]);
            return (1.0 - f) * node_value(lo) + f * node_value(hi);
        }
        int start = std::clamp(hi - 2, 0, total - 4);
        Complex acc{};
        for (int a = 0; a < 4; ++a) {
            double l = 1.0;
            for (int b = 0; b < 4; ++b)
                if (b != a) l *= (rho - r[start + b]) / (r[start + a] - r[start + b]);
            acc += l * node_value(start + a);
        }
        return acc;
    };
}

// ---------------------------------------------------------------------------

GridField normal_operator(const DiskModel& model, const DiskFunction& f, const DiskGrid& grid, int degree_hint,
                          const NormalOperatorConfig& cfg)
{
    const int N = std::max(degree_hint, 0);
    const int nb = cfg.n_beta > 0 ? cfg.n_beta : std::max(4 * N, 2 * N + 4 * kInterpolationMargin + 2);
    const int na = cfg.n_alpha > 0 ? cfg.n_alpha : std::max(4 * N, 2 * N + 2 * kInterpolationMargin + 2);
    const SinogramGrid sgrid(model, nb, na);
    const GridSinogram sino = forward(f, sgrid, cfg.rays);
    RaySamplingConfig back = cfg.rays;
    back.interpolation = cfg.interpolation;
    return adjoint_star(sino, grid, back);
}

double singular_value(const DiskModel& model, int n)
{
    return std::sqrt(model.c_const() / (n + 1));
}

SpectralBoundary forward_spectral(const SpectralField& weighted, int margin)
{
    SpectralBoundary out(weighted.model(), weighted.degree(), margin);
    for (int n = 0; n <= weighted.degree(); ++n) {
        const double sv = singular_value(weighted.model(), n);
        for (int k = 0; k <= n; ++k) out(n, k) = sv * weighted(n, k);
    }
    return out;
}

SpectralField adjoint_star_spectral(const SpectralBoundary& g)
{
    SpectralField out(g.model(), g.degree());
    for (int n = 0; n <= g.degree(); ++n) {
        const double sv = singular_value(g.model(), n);
        for (int k = 0; k <= n; ++k) out(n, k) = sv * g(n, k);
    }
    return out;
}

} // namespace gxr

#include "gxr/inversion.hpp"

#include <cmath>
#include <sstream>

namespace gxr {

namespace {

void check_model(const DiskModel& model, const GridSinogram& sino)
{
    if (!(model == sino.grid.model())) {
        std::ostringstream msg;
        msg << "sinogram belongs to model (kappa=" << sino.grid.model().kappa() << ", R=" << sino.grid.model().radius()
            << "), requested (kappa=" << model.kappa() << ", R=" << model.radius() << ")";
        throw ModelMismatch(msg.str());
    }
}

Reconstruction finish(SpectralField field, const SpectralBoundary& g)
{
    Reconstruction r{std::move(field)};
    const double total = g.norm();
    r.kernel_fraction = total > 0.0 ? std::pow(g.kernel_norm() / total, 2) : 0.0;
    r.kernel_leak = r.kernel_fraction > kKernelLeakThreshold;
    return r;
}

// out_{n,k} = g_{n,k} * scale(n) for 0 <= k <= n.
template <typename Scale>
SpectralField diagonal(const SpectralBoundary& g, Scale scale)
{
    SpectralField out(g.model(), g.degree());
    for (int n = 0; n <= g.degree(); ++n) {
        const double s = scale(n);
        for (int k = 0; k <= n; ++k) out(n, k) = s * g(n, k);
    }
    return out;
}

} // namespace

SpectralBoundary analyze_sinogram(const GridSinogram& sino, int degree)
{
    if (degree < 0) throw ResolutionTooLow("degree must be nonnegative");
    const int resolved = boundary_degree_for(sino.grid, kKernelMargin);
    if (degree > resolved) {
        std::ostringstream msg;
        msg << "sinogram grid " << sino.grid.n_beta() << "x" << sino.grid.n_alpha() << " resolves degree " << resolved
            << " but degree " << degree << " was requested (need n_beta >= " << 2 * degree + 4 * kKernelMargin + 1
            << ", n_alpha >= " << 2 * degree + 2 * kKernelMargin + 2 << ")";
        throw ResolutionTooLow(msg.str());
    }
    return analyze_boundary(sino, degree, kKernelMargin);
}

SpectralField svd_reconstruct(const SpectralBoundary& g)
{
    return diagonal(g, [&](int n) { return 1.0 / singular_value(g.model(), n); });
}

SpectralField alpha_reconstruct(const SpectralBoundary& g, double alpha_exp)
{
    const double c = g.model().c_const();
    return diagonal(g, [&](int n) {
        const double lam_root = n + 1.0;
        const double t_power = std::pow(lam_root, 2.0 * alpha_exp);
        const double l_power = std::pow(lam_root, 1.0 - 2.0 * alpha_exp);
        return l_power * singular_value(g.model(), n) * t_power / c;
    });
}

SpectralField regularized_reconstruct(const SpectralBoundary& g, const SpectralFilter& filter, double bound)
{
    const double c = g.model().c_const();
    return diagonal(g, [&](int n) {
        const double f = filter.at_degree(n);
        if (!std::isfinite(f) || std::abs(f) > bound) {
            std::ostringstream msg;
            msg << "filter " << filter.describe() << " gives multiplier " << f << " at degree " << n;
            throw FilterOverflow(msg.str());
        }
        return singular_value(g.model(), n) * (n + 1.0) * f / c;
    });
}

Reconstruction svd_reconstruct(const DiskModel& model, const GridSinogram& sino, int degree)
{
    check_model(model, sino);
    const SpectralBoundary g = analyze_sinogram(sino, degree);
    return finish(svd_reconstruct(g), g);
}

Reconstruction alpha_reconstruct(const DiskModel& model, const GridSinogram& sino, double alpha_exp, int degree)
{
    check_model(model, sino);
    const SpectralBoundary g = analyze_sinogram(sino, degree);
    return finish(alpha_reconstruct(g, alpha_exp), g);
}

Reconstruction regularized_reconstruct(const DiskModel& model, const GridSinogram& sino, const SpectralFilter& filter,
                                       int degree, double bound)
{
    check_model(model, sino);
    const SpectralBoundary g = analyze_sinogram(sino, degree);
    return finish(regularized_reconstruct(g, filter, bound), g);
}

SpectralField alpha_reconstruct_quadrature(const DiskModel& model, const GridSinogram& sino, double alpha_exp,
                                           int degree, const RaySamplingConfig& cfg)
{
    check_model(model, sino);
    const SpectralBoundary g = analyze_sinogram(sino, degree);
    SpectralBoundary range(model, degree, 0);
    for (int n = 0; n <= degree; ++n)
        for (int k = 0; k <= n; ++k) range(n, k) = g(n, k);
    const SpectralBoundary powered = functional_calculus_boundary(SpectralFilter::power(alpha_exp), range);

    // Backproject the filtered data, sampled exactly through its expansion.
    const BoundaryFunction data = [&](const FanBeamCoord& c) { return evaluate(powered, c); };
    const DiskGrid grid = DiskGrid::for_degree(model, degree);
    const GridField back = adjoint_star(model, data, grid, cfg);
    SpectralField field = analyze_disk(back, degree, Frame::plain);
    field = functional_calculus_disk(SpectralFilter::power(0.5 - alpha_exp), field);
    for (auto& v : field.coeffs()) v /= model.c_const();
    return field;
}

} // namespace gxr

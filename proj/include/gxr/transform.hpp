#pragma once

#include "gxr/basis.hpp"

#include <atomic>
#include <cstddef>
#include <vector>

namespace gxr {

/// How gridded data is sampled at off-grid points.
/// bilinear/bicubic: local polynomial interpolation on the grid.
/// spectral: expand the grid data in its basis and evaluate the expansion.
enum class Interpolation { bilinear, bicubic, spectral };

Interpolation parse_interpolation(const std::string& name);

struct RaySamplingConfig {
    int nodes_per_ray = 256;
    int theta_nodes = 256;
    Interpolation interpolation = Interpolation::bicubic;

    /// Throws ResolutionTooLow when below the minimum resolutions (16 nodes per
    /// ray, 64 theta nodes).
    void validate() const;
};

/// Counts of samples requested outside the interpolation grid (clamped).
struct SamplingStats {
    std::atomic<std::size_t> clamped{0};
    std::atomic<std::size_t> total{0};
};

// Forward transform: I0 f(beta, alpha) = integral of f along the geodesic.
Complex forward_ray(const DiskModel& model, const DiskFunction& f, const FanBeamCoord& coord,
                    const RaySamplingConfig& cfg = {});
std::vector<Complex> forward(const DiskModel& model, const DiskFunction& f, const std::vector<FanBeamCoord>& coords,
                             const RaySamplingConfig& cfg = {});
GridSinogram forward(const DiskFunction& f, const SinogramGrid& grid, const RaySamplingConfig& cfg = {});
/// Forward transform of a spectral field, evaluated pointwise in the given frame.
GridSinogram forward(const SpectralField& f, Frame frame, const SinogramGrid& grid, const RaySamplingConfig& cfg = {});
/// Forward transform of gridded disk data sampled with cfg.interpolation.
GridSinogram forward(const GridField& f, const SinogramGrid& grid, const RaySamplingConfig& cfg = {},
                     SamplingStats* stats = nullptr);

/// Forward transforms of every normalized basis function of degree <= N (in the
/// given frame) on one grid. Entry SpectralField::index(n, k) holds Zhat_{n,k}.
std::vector<GridSinogram> forward_basis(const DiskModel& model, int degree, Frame frame, const SinogramGrid& grid,
                                        const RaySamplingConfig& cfg = {});

// Backprojections. I0^sharp g(x) = integral over theta of g at the footpoint
// of (x, theta); I0^* g = I0^sharp (g / cos alpha).
Complex adjoint_sharp(const DiskModel& model, const BoundaryFunction& g, Complex z, const RaySamplingConfig& cfg = {});
Complex adjoint_star(const DiskModel& model, const BoundaryFunction& g, Complex z, const RaySamplingConfig& cfg = {});
GridField adjoint_sharp(const DiskModel& model, const BoundaryFunction& g, const DiskGrid& grid,
                        const RaySamplingConfig& cfg = {});
GridField adjoint_star(const DiskModel& model, const BoundaryFunction& g, const DiskGrid& grid,
                       const RaySamplingConfig& cfg = {});
/// Backprojection of gridded sinogram data, sampled with cfg.interpolation.
GridField adjoint_sharp(const GridSinogram& g, const DiskGrid& grid, const RaySamplingConfig& cfg = {},
                        SamplingStats* stats = nullptr);
GridField adjoint_star(const GridSinogram& g, const DiskGrid& grid, const RaySamplingConfig& cfg = {},
                       SamplingStats* stats = nullptr);

/// Sampler for a gridded sinogram at arbitrary fan-beam coordinates.
BoundaryFunction sinogram_interpolant(const GridSinogram& g, Interpolation method, SamplingStats* stats = nullptr);
/// Sampler for gridded disk data at arbitrary points of the closed disk.
DiskFunction field_interpolant(const GridField& f, Interpolation method, SamplingStats* stats = nullptr);

/// Largest degree whose boundary analysis is exact on the grid with the given margin.
int boundary_degree_for(const SinogramGrid& grid, int margin);
/// Largest degree whose disk analysis is exact on the grid.
int disk_degree_for(const DiskGrid& grid);

struct NormalOperatorConfig {
    RaySamplingConfig rays{};
    /// Intermediate sinogram grid; 0 selects 4N in each direction (N the degree hint).
    int n_beta = 0;
    int n_alpha = 0;
    Interpolation interpolation = Interpolation::spectral;
};

/// I0^* I0 f sampled on grid. degree_hint sizes the default intermediate grid.
GridField normal_operator(const DiskModel& model, const DiskFunction& f, const DiskGrid& grid, int degree_hint,
                          const NormalOperatorConfig& cfg = {});

// Diagonal actions in the normalized bases.
/// sqrt(c / (n + 1)).
double singular_value(const DiskModel& model, int n);
/// I0 of the weighted-frame field w * sum f_{n,k} Zhat_{n,k}.
SpectralBoundary forward_spectral(const SpectralField& weighted, int margin = 0);
/// I0^* of boundary data, as a plain-frame field; kernel entries are annihilated.
SpectralField adjoint_star_spectral(const SpectralBoundary& g);

} // namespace gxr

#pragma once

#include "gxr/operators.hpp"
#include "gxr/transform.hpp"

namespace gxr {

/// Reconstructed field and diagnostics. The field is in the weighted frame:
/// f = w * sum field_{n,k} Zhat_{n,k}.
struct Reconstruction {
    SpectralField field;
    /// Fraction of sinogram energy (squared norm) at k outside [0, n].
    double kernel_fraction = 0.0;
    /// kernel_fraction above kKernelLeakThreshold: the data are not in the range of I0.
    bool kernel_leak = false;
};

inline constexpr double kKernelLeakThreshold = 0.01;
/// k-margin used when analyzing sinograms, so that kernel energy can be measured.
inline constexpr int kKernelMargin = 2;

/// Boundary analysis of a gridded sinogram to degree N with the kernel margin.
/// Throws ResolutionTooLow when the grid does not resolve degree N.
SpectralBoundary analyze_sinogram(const GridSinogram& sino, int degree);

// Spectral pipelines on analyzed data; entries with k outside [0, n] are ignored.
/// Divides each coefficient by the singular value sqrt(c / (n + 1)).
SpectralField svd_reconstruct(const SpectralBoundary& g);
/// (w / c) L^{1/2 - a} I0^* (-T^2)^a applied to g.
SpectralField alpha_reconstruct(const SpectralBoundary& g, double alpha_exp);
/// (w / c) I0^* (-T^2)^{1/2} F(-T^2) applied to g.
SpectralField regularized_reconstruct(const SpectralBoundary& g, const SpectralFilter& filter,
                                      double bound = kDefaultFilterBound);

// Gridded sinograms. Throw ModelMismatch when the sinogram grid belongs to another model.
Reconstruction svd_reconstruct(const DiskModel& model, const GridSinogram& sino, int degree);
Reconstruction alpha_reconstruct(const DiskModel& model, const GridSinogram& sino, double alpha_exp, int degree);
Reconstruction regularized_reconstruct(const DiskModel& model, const GridSinogram& sino, const SpectralFilter& filter,
                                       int degree, double bound = kDefaultFilterBound);

/// alpha_reconstruct with I0^* computed by backprojection of the filtered
/// sinogram instead of its diagonal action. Meant for cross-validation at low degree.
SpectralField alpha_reconstruct_quadrature(const DiskModel& model, const GridSinogram& sino, double alpha_exp,
                                           int degree, const RaySamplingConfig& cfg = {});

} // namespace gxr

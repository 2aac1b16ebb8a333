#pragma once

#include "gxr/basis.hpp"

#include <functional>
#include <string>

namespace gxr {

enum class FilterKind { power, cutoff, cosine, tikhonov, custom };

/// Scalar multiplier F(lambda) applied at the eigenvalues lambda_n = (n + 1)^2
/// of the disk operator and of -T^2.
class SpectralFilter {
public:
    /// F(lambda) = lambda^a. power(0) is the identity.
    static SpectralFilter power(double a);
    /// 1 for n <= nc, 0 beyond.
    static SpectralFilter cutoff(int nc);
    /// cos(pi n / (2 nc)) for n <= nc, 0 beyond.
    static SpectralFilter cosine(int nc);
    /// F(lambda) = 1 / (1 + mu sqrt(lambda)). Applied inside the reconstruction
    /// pipeline this is Tikhonov regularization of I0 w with parameter mu c.
    static SpectralFilter tikhonov(double mu);
    static SpectralFilter custom(std::string name, std::function<double(double)> multiplier);
    static SpectralFilter identity() { return power(0.0); }

    /// Grammar: "power:a", "cutoff:Nc", "cosine:Nc", "tikhonov:mu", "identity".
    static SpectralFilter parse(const std::string& text);

    FilterKind kind() const { return kind_; }
    double parameter() const { return parameter_; }
    std::string describe() const;

    double operator()(double lambda) const { return multiplier_(lambda); }
    double at_degree(int n) const { return multiplier_(static_cast<double>(n + 1) * (n + 1)); }

private:
    SpectralFilter(FilterKind kind, double parameter, std::string name, std::function<double(double)> multiplier);

    FilterKind kind_;
    double parameter_;
    std::string name_;
    std::function<double(double)> multiplier_;
};

inline constexpr double kDefaultFilterBound = 1e12;

// Spectral actions. The disk operator has eigenvalue (n + 1)^2 on Zhat_{n,k};
// -T^2 has eigenvalue (n + 1)^2 on psi-hat_{n,k} for every k, kernel modes included.
SpectralField apply_L_spectral(const SpectralField& spec);
/// Action of -T^2.
SpectralBoundary apply_T2_spectral(const SpectralBoundary& spec);

/// Multiplies each (n, k) coefficient by F((n + 1)^2). Throws FilterOverflow when
/// a multiplier is not finite or exceeds bound in magnitude.
SpectralField functional_calculus_disk(const SpectralFilter& filter, const SpectralField& spec,
                                       double bound = kDefaultFilterBound);
SpectralBoundary functional_calculus_boundary(const SpectralFilter& filter, const SpectralBoundary& spec,
                                              double bound = kDefaultFilterBound);

/// Composite odd Hilbert-type operator: i for k < 0, 0 for 0 <= k <= n, -i for k > n.
SpectralBoundary cminus_spectral(const SpectralBoundary& spec);

/// (sum (n + 1)^{2s} |f_{n,k}|^2)^{1/2}.
double sobolev_norm_disk(double s, const SpectralField& spec);
/// (sum (n + 1)^{2s} |g_{n,k}|^2)^{1/2} over all stored k.
double sobolev_norm_boundary_T(double s, const SpectralBoundary& spec);
/// (sum ((n + 1)^2 + (n - 2k)^2)^s |g_{n,k}|^2)^{1/2}.
double sobolev_norm_boundary_classical(double s, const SpectralBoundary& spec);

/// Classical H^1 norm on the reference unit disk of sum f_{n,k} Zhat^e_{n,k}:
/// (||f||^2 + 2 ||df/dz||^2 + 2 ||df/dconj z||^2)^{1/2}. Requires a reference model.
double h1_norm_reference(const SpectralField& spec);

// Pointwise operators by finite differences (five-point stencils, shifted
// inward where the centered stencil would leave the domain).

/// Disk operator: on the reference disk
///   -Lap f + x^2 f_xx + 2xy f_xy + y^2 f_yy + 3 (x f_x + y f_y) + f,
/// and on a curved model w * (that operator applied to (f / w) o Phi^{-1}) o Phi.
/// f is sampled only at points of the open disk.
Complex apply_L_pointwise(const DiskModel& model, const DiskFunction& f, Complex z, double h = 1e-3);

/// T u = sqrt(s') (d_beta - (1/s') d_alpha)(u / sqrt(s')).
Complex apply_T_pointwise(const DiskModel& model, const BoundaryFunction& u, const FanBeamCoord& coord,
                          double h = 1e-3);
/// T^2 u, from second differences of u / sqrt(s').
Complex apply_T2_pointwise(const DiskModel& model, const BoundaryFunction& u, const FanBeamCoord& coord,
                           double h = 1e-3);
/// D = T^2 + 2 tan(alpha) T.
Complex apply_D_pointwise(const DiskModel& model, const BoundaryFunction& u, const FanBeamCoord& coord,
                          double h = 1e-3);

} // namespace gxr

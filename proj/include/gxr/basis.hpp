#pragma once

#include "gxr/geometry.hpp"

#include <cstddef>
#include <vector>

namespace gxr {

// Zernike polynomials on the unit disk, with the convention
// Z_{n,k}(rho e^{i omega}) = (-1)^k e^{i(n-2k) omega} rho^{|n-2k|} P_j^{(0,|n-2k|)}(2 rho^2 - 1),
// j = min(k, n-k). Z_{n,0} = z^n and Z_{n,n} = (-1)^n conj(z)^n.
Complex zernike(int n, int k, Complex z);
/// Unnormalized L^2 norm on the unit disk: sqrt(pi / (n + 1)).
double zernike_norm(int n, int k);

/// Curved Zernike function w(z) Z_{n,k}(Phi(z)) on D_R.
Complex curved_zernike(const DiskModel& model, int n, int k, Complex z);
/// Norm of the curved Zernike function in L^2(w dVol_kappa).
double curved_zernike_norm(const DiskModel& model, int n, int k);
/// curved_zernike divided by its norm.
Complex curved_zernike_hat(const DiskModel& model, int n, int k, Complex z);

/// Euclidean boundary function in the variables (beta, sigma).
Complex psi_euclidean(int n, int k, double beta, double sigma);
/// Boundary function sqrt(s'(alpha)) psi^e_{n,k}(beta, s(alpha)); k may be any integer.
Complex psi(const DiskModel& model, int n, int k, const FanBeamCoord& coord);
/// Norm of psi_{n,k} in L^2(dSigma^2): sqrt(measure_factor / 4), independent of (n, k).
double psi_norm(const DiskModel& model);
Complex psi_hat(const DiskModel& model, int n, int k, const FanBeamCoord& coord);

/// How a spectral field relates to the function it stands for.
/// plain:    f = sum f_{n,k} Zhat_{n,k}
/// weighted: f = w * sum f_{n,k} Zhat_{n,k}   (the frame reconstructions live in)
enum class Frame { plain, weighted };

/// Coefficients in the orthonormal curved Zernike system, triangular layout.
class SpectralField {
public:
    SpectralField(const DiskModel& model, int degree);

    const DiskModel& model() const { return model_; }
    int degree() const { return degree_; }

    static std::size_t size_for(int degree) { return static_cast<std::size_t>(degree + 1) * (degree + 2) / 2; }
    static std::size_t index(int n, int k) { return static_cast<std::size_t>(n) * (n + 1) / 2 + k; }
    bool contains(int n, int k) const { return n >= 0 && n <= degree_ && k >= 0 && k <= n; }

    Complex& operator()(int n, int k);
    Complex operator()(int n, int k) const;
    /// Zero outside the stored range instead of throwing.
    Complex get(int n, int k) const { return contains(n, k) ? coeffs_[index(n, k)] : Complex{}; }

    std::vector<Complex>& coeffs() { return coeffs_; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }

    /// Euclidean norm of the coefficient vector.
    double norm() const;
    /// Copy truncated or zero-padded to another degree.
    SpectralField resized(int degree) const;

    static SpectralField unit(const DiskModel& model, int degree, int n, int k);

    bool operator==(const SpectralField&) const = default;

private:
    DiskModel model_;
    int degree_;
    std::vector<Complex> coeffs_;
};

/// Coefficients in the orthonormal psi-hat system. Row n stores k in
/// [-margin, n + margin]; entries with k outside [0, n] span the kernel of the adjoint.
class SpectralBoundary {
public:
    SpectralBoundary(const DiskModel& model, int degree, int margin);

    const DiskModel& model() const { return model_; }
    int degree() const { return degree_; }
    int margin() const { return margin_; }

    std::size_t index(int n, int k) const
    {
        return static_cast<std::size_t>(n) * (n + 1) / 2 + static_cast<std::size_t>(2 * margin_) * n
            + static_cast<std::size_t>(k + margin_);
    }
    bool contains(int n, int k) const
    {
        return n >= 0 && n <= degree_ && k >= -margin_ && k <= n + margin_;
    }

    Complex& operator()(int n, int k);
    Complex operator()(int n, int k) const;
    Complex get(int n, int k) const { return contains(n, k) ? coeffs_[index(n, k)] : Complex{}; }

    std::vector<Complex>& coeffs() { return coeffs_; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }

    double norm() const;
    /// Norm of the entries with 0 <= k <= n (the range of the transform).
    double range_norm() const;
    /// Norm of the entries with k < 0 or k > n.
    double kernel_norm() const;

    static SpectralBoundary unit(const DiskModel& model, int degree, int margin, int n, int k);

private:
    DiskModel model_;
    int degree_;
    int margin_;
    std::vector<Complex> coeffs_;
};

/// Polar tensor grid on D_R. Radial nodes are Gauss-Legendre in u = |Phi(z)|^2,
/// angular nodes are equispaced.
class DiskGrid {
public:
    DiskGrid(const DiskModel& model, int n_rho, int n_omega);
    /// Grid on which degree-N analysis is exact.
    static DiskGrid for_degree(const DiskModel& model, int degree);

    const DiskModel& model() const { return model_; }
    int n_rho() const { return static_cast<int>(rho_.size()); }
    int n_omega() const { return n_omega_; }
    std::size_t size() const { return rho_.size() * static_cast<std::size_t>(n_omega_); }

    double rho(int i) const { return rho_[i]; }
    /// Radius of the image node in the reference disk.
    double rho_ref(int i) const { return rho_ref_[i]; }
    /// Quadrature weight in the reference disk: integral over u in [0,1] of (.) du / 2.
    double ref_weight(int i) const { return ref_weight_[i]; }
    double omega(int j) const;
    Complex point(int i, int j) const;
    /// Weight such that sum_{i,j} dvol_weight(i) f(point(i,j)) approximates the
    /// integral of f against dVol_kappa.
    double dvol_weight(int i) const;

    bool operator==(const DiskGrid& other) const;

private:
    DiskModel model_;
    int n_omega_;
    std::vector<double> rho_;
    std::vector<double> rho_ref_;
    std::vector<double> ref_weight_;
};

struct GridField {
    explicit GridField(const DiskGrid& grid);
    GridField(const DiskGrid& grid, const DiskFunction& f);

    DiskGrid grid;
    /// values[i * n_omega + j] at grid.point(i, j).
    std::vector<Complex> values;

    Complex& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.n_omega() + j]; }
    Complex at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n_omega() + j]; }
};

/// Sinogram grid: beta equispaced in [0, 2pi); alpha = s^{-1}(sigma) at the
/// midpoints sigma_j of n_alpha equal cells of (-pi/2, pi/2). All alpha nodes are interior.
class SinogramGrid {
public:
    SinogramGrid(const DiskModel& model, int n_beta, int n_alpha);
    /// Grid on which degree-N boundary analysis with the given k-margin is exact.
    static SinogramGrid for_degree(const DiskModel& model, int degree, int margin = 2);

    const DiskModel& model() const { return model_; }
    int n_beta() const { return n_beta_; }
    int n_alpha() const { return n_alpha_; }
    std::size_t size() const { return static_cast<std::size_t>(n_beta_) * n_alpha_; }

    double beta(int i) const { return kTwoPi * i / n_beta_; }
    double sigma(int j) const { return -kHalfPi + (j + 0.5) * kPi / n_alpha_; }
    double alpha(int j) const { return alpha_[j]; }
    FanBeamCoord coord(int i, int j) const { return {beta(i), alpha_[j]}; }
    /// Weight such that sum_{i,j} weight(j) g(coord(i,j)) approximates the
    /// integral of g against dSigma^2.
    double weight(int j) const { return weight_[j]; }

    bool operator==(const SinogramGrid& other) const;

private:
    DiskModel model_;
    int n_beta_;
    int n_alpha_;
    std::vector<double> alpha_;
    std::vector<double> weight_;
};

struct GridSinogram {
    explicit GridSinogram(const SinogramGrid& grid);
    GridSinogram(const SinogramGrid& grid, const BoundaryFunction& g);

    SinogramGrid grid;
    /// values[i * n_alpha + j] at grid.coord(i, j); rows are beta.
    std::vector<Complex> values;

    Complex& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.n_alpha() + j]; }
    Complex at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n_alpha() + j]; }
};

// Disk analysis and synthesis. Coefficients are inner products in L^2(w dVol_kappa).
SpectralField analyze_disk(const GridField& field, int degree, Frame frame = Frame::plain);
SpectralField analyze_disk(const DiskModel& model, const DiskFunction& f, int degree, Frame frame = Frame::plain);
GridField synthesize_disk(const SpectralField& spec, const DiskGrid& grid, Frame frame = Frame::plain);
Complex evaluate(const SpectralField& spec, Complex z, Frame frame = Frame::plain);

// Boundary analysis and synthesis in L^2(dSigma^2).
SpectralBoundary analyze_boundary(const GridSinogram& sino, int degree, int margin = 2);
SpectralBoundary analyze_boundary(const DiskModel& model, const BoundaryFunction& g, int degree, int margin = 2);
GridSinogram synthesize_boundary(const SpectralBoundary& spec, const SinogramGrid& grid);
Complex evaluate(const SpectralBoundary& spec, const FanBeamCoord& coord);

/// Values of rho^m P_j^{(0,m)}(2 rho^2 - 1) for all m + 2j <= degree;
/// entry [m][j].
std::vector<std::vector<double>> radial_table(int degree, double rho);

// Derivatives of sum f_{n,k} Zhat^e_{n,k} on the reference disk. The output has
// degree N - 1 and is exact for band-limited input.
SpectralField dz_spectral(const SpectralField& spec);
SpectralField dzbar_spectral(const SpectralField& spec);

/// Beurling transform: moves the (n, k) coefficient to (n, k + 1) for k < n;
/// coefficients at k = n are dropped.
SpectralField beurling(const SpectralField& spec);

/// Index bound min(k, n - 1 - k) of the terminating derivative expansion.
int derivative_index_bound(int n, int k);

} // namespace gxr

#include "gxr/basis.hpp"

#include "gxr/parallel.hpp"
#include "gxr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gxr {

namespace {

void check_zernike_index(int n, int k)
{
    if (n < 0 || k < 0 || k > n) {
        std::ostringstream msg;
        msg << "Zernike index (" << n << "," << k << ") out of range";
        throw IndexOutOfRange(msg.str());
    }
}

// z^m for m >= 0, conj(z)^{|m|} otherwise.
Complex angular_power(Complex z, int m)
{
    Complex base = m >= 0 ? z : std::conj(z);
    Complex out{1.0, 0.0};
    for (int i = 0; i < std::abs(m); ++i) out *= base;
    return out;
}

double sign_pow(int k)
{
    return (k % 2 == 0) ? 1.0 : -1.0;
}

// Scale between unnormalized reference Zernikes and the normalized curved ones:
// Zhat_{n,k} = w Phi^* Z^e_{n,k} / ||Z_{n,k}||, ||Z_{n,k}|| = R sqrt(pi/(n+1)) / (1 - lambda).
double curved_scale(const DiskModel& model, int n)
{
    return (1.0 - model.lambda()) / model.radius() * std::sqrt((n + 1) / kPi);
}

// Factor turning a reference-disk integral of (f / w) conj(Z^e_{n,k}) into the
// inner product (f, Zhat_{n,k}) in L^2(w dVol_kappa).
double analysis_scale(const DiskModel& model, int n)
{
    return model.radius() / (1.0 - model.lambda()) * std::sqrt((n + 1) / kPi);
}

} // namespace

Complex zernike(int n, int k, Complex z)
{
    check_zernike_index(n, k);
    const double rho = std::abs(z);
    if (rho > 1.0 + 1e-12) throw OutOfDisk("Zernike polynomials are evaluated on the closed unit disk");
    const int m = n - 2 * k;
    const int j = std::min(k, n - k);
    const double p = jacobi(j, 0.0, std::abs(m), 2.0 * rho * rho - 1.0);
    return sign_pow(k) * p * angular_power(z, m);
}

double zernike_norm(int n, int k)
{
    check_zernike_index(n, k);
    return std::sqrt(kPi / (n + 1));
}

Complex curved_zernike(const DiskModel& model, int n, int k, Complex z)
{
    const Complex zeta = phi_map(model, z);
    return model.weight(z) * zernike(n, k, zeta);
}

double curved_zernike_norm(const DiskModel& model, int n, int k)
{
    return zernike_norm(n, k) * model.radius() / (1.0 - model.lambda());
}

Complex curved_zernike_hat(const DiskModel& model, int n, int k, Complex z)
{
    return curved_zernike(model, n, k, z) / curved_zernike_norm(model, n, k);
}

Complex psi_euclidean(int n, int k, double beta, double sigma)
{
    if (n < 0) throw IndexOutOfRange("boundary basis needs n >= 0");
    const double sn = sign_pow(n);
    const Complex phase = std::polar(1.0, (n - 2.0 * k) * (beta + sigma));
    const double a = (n + 1) * sigma;
    // e^{ia} + (-1)^n e^{-ia}
    const Complex bracket = (n % 2 == 0) ? Complex(2.0 * std::cos(a), 0.0) : Complex(0.0, 2.0 * std::sin(a));
    return sn / (4.0 * kPi) * phase * bracket;
}

Complex psi(const DiskModel& model, int n, int k, const FanBeamCoord& coord)
{
    const double sigma = s_map(model, coord.alpha);
    return std::sqrt(s_map_derivative(model, coord.alpha)) * psi_euclidean(n, k, coord.beta, sigma);
}

double psi_norm(const DiskModel& model)
{
    return 0.5 * std::sqrt(model.measure_factor());
}

Complex psi_hat(const DiskModel& model, int n, int k, const FanBeamCoord& coord)
{
    return psi(model, n, k, coord) / psi_norm(model);
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(const DiskModel& model, int degree)
    : model_(model), degree_(degree)
{
    if (degree < 0) throw IndexOutOfRange("degree must be nonnegative");
    coeffs_.assign(size_for(degree), Complex{});
}

Complex& SpectralField::operator()(int n, int k)
{
    if (!contains(n, k)) {
        std::ostringstream msg;
        msg << "coefficient (" << n << "," << k << ") outside degree " << degree_;
        throw IndexOutOfRange(msg.str());
    }
    return coeffs_[index(n, k)];
}

Complex SpectralField::operator()(int n, int k) const
{
    return const_cast<SpectralField&>(*this)(n, k);
}

double SpectralField::norm() const
{
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
}

SpectralField SpectralField::resized(int degree) const
{
    SpectralField out(model_, degree);
    const int d = std::min(degree, degree_);
    std::copy(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(size_for(d)), out.coeffs_.begin());
    return out;
}

SpectralField SpectralField::unit(const DiskModel& model, int degree, int n, int k)
{
    SpectralField out(model, degree);
    out(n, k) = 1.0;
    return out;
}

SpectralBoundary::SpectralBoundary(const DiskModel& model, int degree, int margin)
    : model_(model), degree_(degree), margin_(margin)
{
    if (degree < 0 || margin < 0) throw IndexOutOfRange("degree and margin must be nonnegative");
    coeffs_.assign(index(degree + 1, -margin), Complex{});
}

Complex& SpectralBoundary::operator()(int n, int k)
{
    if (!contains(n, k)) {
        std::ostringstream msg;
        msg << "boundary coefficient (" << n << "," << k << ") outside the stored window";
        throw IndexOutOfRange(msg.str());
    }
    return coeffs_[index(n, k)];
}

Complex SpectralBoundary::operator()(int n, int k) const
{
    return const_cast<SpectralBoundary&>(*this)(n, k);
}

double SpectralBoundary::norm() const
{
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
}

double SpectralBoundary::range_norm() const
{
    double s = 0.0;
    for (int n = 0; n <= degree_; ++n)
        for (int k = 0; k <= n; ++k) s += std::norm(coeffs_[index(n, k)]);
    return std::sqrt(s);
}

double SpectralBoundary::kernel_norm() const
{
    double s = 0.0;
    for (int n = 0; n <= degree_; ++n) {
        for (int k = -margin_; k <= n + margin_; ++k) {
            if (k < 0 || k > n) s += std::norm(coeffs_[index(n, k)]);
        }
    }
    return std::sqrt(s);
}

SpectralBoundary SpectralBoundary::unit(const DiskModel& model, int degree, int margin, int n, int k)
{
    SpectralBoundary out(model, degree, margin);
    out(n, k) = 1.0;
    return out;
}

// ---------------------------------------------------------------------------

DiskGrid::DiskGrid(const DiskModel& model, int n_rho, int n_omega)
    : model_(model), n_omega_(n_omega)
{
    if (n_rho < 1 || n_omega < 1) throw ResolutionTooLow("disk grid needs at least one node per axis");
    const GaussRule rule = gauss_legendre(n_rho, 0.0, 1.0);
    rho_.resize(n_rho);
    rho_ref_.resize(n_rho);
    ref_weight_.resize(n_rho);
    for (int i = 0; i < n_rho; ++i) {
        rho_ref_[i] = std::sqrt(rule.nodes[i]);
        rho_[i] = phi_radial_inverse_unchecked(model, rho_ref_[i]);
        ref_weight_[i] = 0.5 * rule.weights[i];
    }
}

DiskGrid DiskGrid::for_degree(const DiskModel& model, int degree)
{
    return DiskGrid(model, degree + 2, 2 * degree + 2);
}

double DiskGrid::omega(int j) const
{
    return kTwoPi * j / n_omega_;
}

Complex DiskGrid::point(int i, int j) const
{
    return std::polar(rho_[i], omega(j));
}

double DiskGrid::dvol_weight(int i) const
{
    // w^3 dVol_kappa = (R / (1 - lambda))^2 dA on the reference disk.
    const double w = model_.weight(rho_[i]);
    const double scale = model_.radius() / (1.0 - model_.lambda());
    return scale * scale * ref_weight_[i] * (kTwoPi / n_omega_) / (w * w * w);
}

bool DiskGrid::operator==(const DiskGrid& other) const
{
    return model_ == other.model_ && n_omega_ == other.n_omega_ && rho_.size() == other.rho_.size();
}

GridField::GridField(const DiskGrid& g)
    : grid(g), values(g.size())
{
}

GridField::GridField(const DiskGrid& g, const DiskFunction& f)
    : grid(g), values(g.size())
{
    const int nw = grid.n_omega();
    parallel_for(0, static_cast<std::size_t>(grid.n_rho()), [&](std::size_t i) {
        for (int j = 0; j < nw; ++j) at(static_cast<int>(i), j) = f(grid.point(static_cast<int>(i), j));
    });
}

SinogramGrid::SinogramGrid(const DiskModel& model, int n_beta, int n_alpha)
    : model_(model), n_beta_(n_beta), n_alpha_(n_alpha)
{
    if (n_beta < 1 || n_alpha < 1) throw ResolutionTooLow("sinogram grid needs at least one node per axis");
    alpha_.resize(n_alpha);
    weight_.resize(n_alpha);
    const double cell = model.measure_factor() * (kTwoPi / n_beta) * (kPi / n_alpha);
    for (int j = 0; j < n_alpha; ++j) {
        alpha_[j] = s_map_inverse(model, sigma(j));
        weight_[j] = cell / s_map_derivative(model, alpha_[j]);
    }
}

SinogramGrid SinogramGrid::for_degree(const DiskModel& model, int degree, int margin)
{
    return SinogramGrid(model, 2 * degree + 4 * margin + 2, 2 * degree + 2 * margin + 2);
}

bool SinogramGrid::operator==(const SinogramGrid& other) const
{
    return model_ == other.model_ && n_beta_ == other.n_beta_ && n_alpha_ == other.n_alpha_;
}

GridSinogram::GridSinogram(const SinogramGrid& g)
    : grid(g), values(g.size())
{
}

GridSinogram::GridSinogram(const SinogramGrid& g, const BoundaryFunction& f)
    : grid(g), values(g.size())
{
    const int na = grid.n_alpha();
    parallel_for(0, static_cast<std::size_t>(grid.n_beta()), [&](std::size_t i) {
        for (int j = 0; j < na; ++j) at(static_cast<int>(i), j) = f(grid.coord(static_cast<int>(i), j));
    });
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> radial_table(int degree, double rho)
{
    std::vector<std::vector<double>> table(degree + 1);
    const double x = 2.0 * rho * rho - 1.0;
    double rho_m = 1.0;
    for (int m = 0; m <= degree; ++m) {
        const int jmax = (degree - m) / 2;
        table[m].resize(jmax + 1);
        jacobi_all(jmax, 0.0, m, x, table[m].data());
        for (double& v : table[m]) v *= rho_m;
        rho_m *= rho;
    }
    return table;
}

SpectralField analyze_disk(const GridField& field, int degree, Frame frame)
{
    const DiskGrid& grid = field.grid;
    const DiskModel& model = grid.model();
    const int nr = grid.n_rho(), nw = grid.n_omega();
    if (nw < 2 * degree + 1 || 2 * nr < degree + 1) {
        std::ostringstream msg;
        msg << "disk grid " << nr << "x" << nw << " too coarse for degree " << degree;
        throw ResolutionTooLow(msg.str());
    }

    // F[i][m + degree] = sum_j (f / w^p)(rho_i, omega_j) e^{-i m omega_j} (2 pi / n_omega)
    const int nm = 2 * degree + 1;
    std::vector<Complex> F(static_cast<std::size_t>(nr) * nm);
    parallel_for(0, static_cast<std::size_t>(nr), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const double w = model.weight(grid.rho(i));
        const double unweight = frame == Frame::weighted ? 1.0 / (w * w) : 1.0 / w;
        for (int m = -degree; m <= degree; ++m) {
            Complex acc{};
            for (int j = 0; j < nw; ++j) {
                const double phase = -m * grid.omega(j);
                acc += field.at(i, j) * Complex(std::cos(phase), std::sin(phase));
            }
            F[ii * nm + (m + degree)] = acc * (unweight * kTwoPi / nw);
        }
    });

    SpectralField out(model, degree);
    std::vector<std::vector<std::vector<double>>> tables(nr);
    for (int i = 0; i < nr; ++i) tables[i] = radial_table(degree, grid.rho_ref(i));
    for (int n = 0; n <= degree; ++n) {
        const double scale = analysis_scale(model, n);
        for (int k = 0; k <= n; ++k) {
            const int m = n - 2 * k;
            const int j = std::min(k, n - k);
            Complex acc{};
            for (int i = 0; i < nr; ++i) {
                acc += grid.ref_weight(i) * tables[i][std::abs(m)][j] * F[static_cast<std::size_t>(i) * nm + (m + degree)];
            }
            out(n, k) = sign_pow(k) * scale * acc;
        }
    }
    return out;
}

SpectralField analyze_disk(const DiskModel& model, const DiskFunction& f, int degree, Frame frame)
{
    return analyze_disk(GridField(DiskGrid::for_degree(model, degree), f), degree, frame);
}

GridField synthesize_disk(const SpectralField& spec, const DiskGrid& grid, Frame frame)
{
    const DiskModel& model = grid.model();
    if (!(model == spec.model())) throw ModelMismatch("spectral field and grid use different models");
    const int N = spec.degree();
    const int nr = grid.n_rho(), nw = grid.n_omega();
    GridField out(grid);
    parallel_for(0, static_cast<std::size_t>(nr), [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const auto table = radial_table(N, grid.rho_ref(i));
        // Harmonic amplitudes A[m + N] without the angular factor.
        std::vector<Complex> A(2 * N + 1);
        for (int n = 0; n <= N; ++n) {
            const double scale = curved_scale(model, n);
            for (int k = 0; k <= n; ++k) {
                const int m = n - 2 * k;
                A[m + N] += spec.get(n, k) * (sign_pow(k) * scale * table[std::abs(m)][std::min(k, n - k)]);
            }
        }
        const double w = model.weight(grid.rho(i));
        const double factor = frame == Frame::weighted ? w * w : w;
        for (int j = 0; j < nw; ++j) {
            Complex acc{};
            for (int m = -N; m <= N; ++m) {
                const double phase = m * grid.omega(j);
                acc += A[m + N] * Complex(std::cos(phase), std::sin(phase));
            }
            out.at(i, j) = factor * acc;
        }
    });
    return out;
}

Complex evaluate(const SpectralField& spec, Complex z, Frame frame)
{
    const DiskModel& model = spec.model();
    const Complex zeta = phi_map(model, z);
    const double r = std::min(std::abs(zeta), 1.0);
    const int N = spec.degree();
    const auto table = radial_table(N, r);
    const Complex unit = r > 0.0 ? zeta / std::abs(zeta) : Complex(1.0, 0.0);
    // Powers of the unit phase e^{i m omega}; r^{|m|} is already in the table.
    std::vector<Complex> pos(N + 1);
    pos[0] = 1.0;
    for (int m = 1; m <= N; ++m) pos[m] = pos[m - 1] * unit;
    Complex acc{};
    for (int n = 0; n <= N; ++n) {
        const double scale = curved_scale(model, n);
        for (int k = 0; k <= n; ++k) {
            const int m = n - 2 * k;
            const Complex ph = m >= 0 ? pos[m] : std::conj(pos[-m]);
            acc += spec.get(n, k) * (sign_pow(k) * scale * table[std::abs(m)][std::min(k, n - k)]) * ph;
        }
    }
    const double w = model.weight(z);
    return (frame == Frame::weighted ? w * w : w) * acc;
}

// ---------------------------------------------------------------------------

SpectralBoundary analyze_boundary(const GridSinogram& sino, int degree, int margin)
{
    const SinogramGrid& grid = sino.grid;
    const DiskModel& model = grid.model();
    const int nb = grid.n_beta(), na = grid.n_alpha();
    if (nb < 2 * degree + 4 * margin + 1 || na < 2 * degree + 2 * margin + 2) {
        std::ostringstream msg;
        msg << "sinogram grid " << nb << "x" << na << " too coarse for degree " << degree << " with margin " << margin;
        throw ResolutionTooLow(msg.str());
    }
    const int mmax = degree + 2 * margin;
    const int nm = 2 * mmax + 1;

    // G[j][m + mmax] = sum_i g(beta_i, alpha_j) e^{-i m beta_i} / sqrt(s'_j)
    std::vector<Complex> G(static_cast<std::size_t>(na) * nm);
    parallel_for(0, static_cast<std::size_t>(na), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        const double inv_sqrt_sp = 1.0 / std::sqrt(s_map_derivative(model, grid.alpha(j)));
        for (int m = -mmax; m <= mmax; ++m) {
            Complex acc{};
            for (int i = 0; i < nb; ++i) {
                const double phase = -m * grid.beta(i);
                acc += sino.at(i, j) * Complex(std::cos(phase), std::sin(phase));
            }
            G[jj * nm + (m + mmax)] = acc * inv_sqrt_sp;
        }
    });

    SpectralBoundary out(model, degree, margin);
    const double pref = model.measure_factor() * (kTwoPi / nb) * (kPi / na) / psi_norm(model) / (4.0 * kPi);
    parallel_for(0, static_cast<std::size_t>(degree + 1), [&](std::size_t nn) {
        const int n = static_cast<int>(nn);
        const double sn = sign_pow(n);
        for (int k = -margin; k <= n + margin; ++k) {
            const int m = n - 2 * k;
            Complex acc{};
            for (int j = 0; j < na; ++j) {
                const double sg = grid.sigma(j);
                const double a = (n + 1) * sg;
                // conj(e^{ia} + (-1)^n e^{-ia})
                const Complex bracket = (n % 2 == 0) ? Complex(2.0 * std::cos(a), 0.0) : Complex(0.0, -2.0 * std::sin(a));
                acc += G[static_cast<std::size_t>(j) * nm + (m + mmax)] * std::polar(1.0, -m * sg) * bracket;
            }
            out(n, k) = sn * pref * acc;
        }
    });
    return out;
}

SpectralBoundary analyze_boundary(const DiskModel& model, const BoundaryFunction& g, int degree, int margin)
{
    return analyze_boundary(GridSinogram(SinogramGrid::for_degree(model, degree, margin), g), degree, margin);
}

GridSinogram synthesize_boundary(const SpectralBoundary& spec, const SinogramGrid& grid)
{
    if (!(grid.model() == spec.model())) throw ModelMismatch("boundary coefficients and grid use different models");
    GridSinogram out(grid);
    const int nb = grid.n_beta(), na = grid.n_alpha();
    const int N = spec.degree(), W = spec.margin();
    const int mmax = N + 2 * W;
    const double inv = 1.0 / psi_norm(grid.model());
    parallel_for(0, static_cast<std::size_t>(na), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        const double sg = grid.sigma(j);
        const double root = std::sqrt(s_map_derivative(grid.model(), grid.alpha(j)));
        // Amplitude of e^{i m beta} in column j.
        std::vector<Complex> A(2 * mmax + 1);
        for (int n = 0; n <= N; ++n) {
            for (int k = -W; k <= n + W; ++k) {
                const Complex c = spec.get(n, k);
                if (c == Complex{}) continue;
                A[n - 2 * k + mmax] += c * psi_euclidean(n, k, 0.0, sg);
            }
        }
        for (int i = 0; i < nb; ++i) {
            Complex acc{};
            for (int m = -mmax; m <= mmax; ++m) {
                if (A[m + mmax] == Complex{}) continue;
                acc += A[m + mmax] * std::polar(1.0, m * grid.beta(i));
            }
            out.at(i, j) = root * inv * acc;
        }
    });
    return out;
}

Complex evaluate(const SpectralBoundary& spec, const FanBeamCoord& coord)
{
    const DiskModel& model = spec.model();
    const double sg = s_map(model, coord.alpha);
    const double root = std::sqrt(s_map_derivative(model, coord.alpha));
    Complex acc{};
    for (int n = 0; n <= spec.degree(); ++n) {
        for (int k = -spec.margin(); k <= n + spec.margin(); ++k) {
            const Complex c = spec.get(n, k);
            if (c == Complex{}) continue;
            acc += c * psi_euclidean(n, k, coord.beta, sg);
        }
    }
    return root * acc / psi_norm(model);
}

// ---------------------------------------------------------------------------

int derivative_index_bound(int n, int k)
{
    if (n == 0) return 0;
    return std::min(k, n - 1 - k);
}

SpectralField dz_spectral(const SpectralField& spec)
{
    const int N = spec.degree();
    SpectralField out(spec.model(), std::max(N - 1, 0));
    for (int n = 0; n <= N - 1; ++n) {
        for (int k = 0; k <= n; ++k) {
            Complex acc{};
            for (int p = 0; n + 1 + 2 * p <= N; ++p) {
                acc += sign_pow(p) * std::sqrt(n + 2.0 + 2.0 * p) * spec.get(n + 1 + 2 * p, k + p);
            }
            out(n, k) = std::sqrt(n + 1.0) * acc;
        }
    }
    return out;
}

SpectralField dzbar_spectral(const SpectralField& spec)
{
    const int N = spec.degree();
    SpectralField out(spec.model(), std::max(N - 1, 0));
    for (int n = 0; n <= N - 1; ++n) {
        for (int k = 0; k <= n; ++k) {
            Complex acc{};
            for (int p = 0; n + 1 + 2 * p <= N; ++p) {
                acc += sign_pow(p + 1) * std::sqrt(n + 2.0 + 2.0 * p) * spec.get(n + 1 + 2 * p, k + 1 + p);
            }
            out(n, k) = std::sqrt(n + 1.0) * acc;
        }
    }
    return out;
}

SpectralField beurling(const SpectralField& spec)
{
    SpectralField out(spec.model(), spec.degree());
    for (int n = 1; n <= spec.degree(); ++n)
        for (int k = 0; k < n; ++k) out(n, k + 1) = spec(n, k);
    return out;
}

} // namespace gxr

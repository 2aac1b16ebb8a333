#include "gxr/transform.hpp"
#include "gxr/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gxr;

namespace {

std::vector<DiskModel> test_models()
{
    return {make_model(0.0, 1.0), make_model(0.5, 1.0), make_model(-0.5, 1.0), make_model(0.9, 1.0),
            make_model(-0.9, 1.0), make_model(0.3, 1.5)};
}

std::vector<FanBeamCoord> random_coords(unsigned seed, int count, double max_alpha = 1.45)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> b(0.0, kTwoPi), a(-max_alpha, max_alpha);
    std::vector<FanBeamCoord> out;
    for (int i = 0; i < count; ++i) out.push_back({b(rng), a(rng)});
    return out;
}

// Smooth test function that is not a finite curved Zernike sum on any model.
DiskFunction bump(const DiskModel& m)
{
    const double R = m.radius();
    return [R](Complex z) {
        const Complex c(0.2 * R, -0.1 * R);
        return std::exp(-std::norm(z - c) / (0.25 * R * R)) * Complex(1.0, 0.3 * z.real() / R);
    };
}

double rel(Complex a, Complex b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

} // namespace

TEST(Forward, ConstantGivesGeodesicLength)
{
    for (const auto& m : test_models()) {
        for (const auto& c : random_coords(11, 40)) {
            const Complex v = forward_ray(m, [](Complex) { return Complex(1.0); }, c);
            EXPECT_NEAR(v.real(), oracle::geodesic_length(m, c), 1e-11) << m.kappa();
            EXPECT_EQ(v.imag(), 0.0);
        }
    }
    const DiskModel flat(0.0, 1.0);
    for (double a = -1.5; a <= 1.5; a += 0.25)
        EXPECT_NEAR(forward_ray(flat, [](Complex) { return Complex(1.0); }, {0.7, a}).real(), 2.0 * std::cos(a), 1e-13);
}

TEST(Forward, LinearFunctionOnEuclideanChord)
{
    // Integral of x along the chord equals the chord length times the midpoint abscissa.
    const DiskModel flat(0.0, 1.0);
    for (const auto& c : random_coords(5, 30)) {
        const Complex p = std::polar(1.0, c.beta);
        const Complex q = std::polar(1.0, c.beta + kPi + 2.0 * c.alpha);
        const double len = std::abs(q - p);
        const Complex v = forward_ray(flat, [](Complex z) { return Complex(z.real()); }, c);
        EXPECT_NEAR(v.real(), len * 0.5 * (p + q).real(), 1e-13);
    }
}

TEST(Forward, SingularRelation)
{
    for (const auto& m : test_models()) {
        for (int n = 0; n <= 7; ++n) {
            for (int k = 0; k <= n; ++k) {
                for (const auto& c : random_coords(100 + n, 4)) {
                    const Complex v = forward_ray(
                        m, [&](Complex z) { return m.weight(z) * curved_zernike_hat(m, n, k, z); }, c);
                    const Complex expect = singular_value(m, n) * psi_hat(m, n, k, c);
                    EXPECT_LT(std::abs(v - expect), 1e-10) << m.kappa() << " " << n << " " << k;
                }
            }
        }
    }
}

TEST(Forward, IntertwinesWithReferenceModel)
{
    // I0[w^2 (h o Phi)](beta, alpha) = R/(1-lambda) sqrt((1+lambda)/(1-lambda)) sqrt(s'(alpha)) I0^e h(beta, s(alpha)).
    const DiskModel ref(0.0, 1.0);
    const auto h = [](Complex z) { return std::exp(Complex(z.real() * 1.3, -0.4 * z.imag())) / (2.5 + z.real()); };
    for (const auto& m : test_models()) {
        const double lam = m.lambda();
        const double scale = m.radius() / (1.0 - lam) * std::sqrt((1.0 + lam) / (1.0 - lam));
        for (const auto& c : random_coords(21, 25)) {
            const Complex curved = forward_ray(
                m, [&](Complex z) { return m.weight(z) * m.weight(z) * h(phi_map(m, z)); }, c);
            const Complex flat = forward_ray(ref, h, {c.beta, s_map(m, c.alpha)});
            const Complex expect = scale * std::sqrt(s_map_derivative(m, c.alpha)) * flat;
            EXPECT_LT(rel(curved, expect), 1e-11) << m.kappa();
        }
    }
}

TEST(Forward, InvariantUnderAntipodalScattering)
{
    for (const auto& m : test_models()) {
        const DiskFunction f = bump(m);
        for (const auto& c : random_coords(31, 30)) {
            const FanBeamCoord d = antipodal_scattering(m, c);
            EXPECT_LT(rel(forward_ray(m, f, c), forward_ray(m, f, d)), 1e-12) << m.kappa();
        }
    }
}

TEST(Forward, BasisMatchesPointwise)
{
    const DiskModel m(-0.5, 1.0);
    const int N = 5;
    const SinogramGrid grid(m, 14, 9);
    RaySamplingConfig cfg;
    cfg.nodes_per_ray = 64;
    for (Frame frame : {Frame::plain, Frame::weighted}) {
        const auto all = forward_basis(m, N, frame, grid, cfg);
        for (int n = 0; n <= N; ++n) {
            for (int k = 0; k <= n; ++k) {
                const GridSinogram one = forward(SpectralField::unit(m, N, n, k), frame, grid, cfg);
                const GridSinogram& b = all[SpectralField::index(n, k)];
                for (std::size_t q = 0; q < one.values.size(); ++q)
                    EXPECT_LT(std::abs(one.values[q] - b.values[q]), 1e-13);
            }
        }
    }
}

TEST(Forward, SpectralMatchesQuadrature)
{
    for (const auto& m : test_models()) {
        const int N = 8;
        std::mt19937_64 rng(4);
        std::normal_distribution<double> g;
        SpectralField f(m, N);
        for (auto& c : f.coeffs()) c = Complex(g(rng), g(rng));
        const SinogramGrid grid = SinogramGrid::for_degree(m, N);
        const SpectralBoundary numeric = analyze_boundary(forward(f, Frame::weighted, grid), N);
        const SpectralBoundary exact = forward_spectral(f, 2);
        double err = 0.0;
        for (std::size_t q = 0; q < exact.coeffs().size(); ++q)
            err = std::max(err, std::abs(exact.coeffs()[q] - numeric.coeffs()[q]));
        EXPECT_LT(err / exact.norm(), 1e-10) << m.kappa();
        EXPECT_LT(numeric.kernel_norm() / numeric.norm(), 1e-10) << m.kappa();
    }
}

TEST(Forward, RejectsTangentRays)
{
    const DiskModel m(0.5, 1.0);
    EXPECT_THROW(forward_ray(m, bump(m), {0.0, kHalfPi}), TangentRay);
}

TEST(Adjoint, SharpOfConstantIsTwoPi)
{
    // The theta' trapezoid integrates d theta / d theta', which peaks near the
    // boundary when |lambda| is close to 1; 1024 nodes resolve it to r = 0.999.
    RaySamplingConfig cfg;
    cfg.theta_nodes = 1024;
    for (const auto& m : test_models()) {
        for (double r : {0.0, 0.3, 0.7, 0.95, 0.999}) {
            const Complex z = std::polar(r * m.radius(), 1.1);
            EXPECT_NEAR(std::abs(adjoint_sharp(m, [](const FanBeamCoord&) { return Complex(1.0); }, z, cfg) - kTwoPi),
                        0.0, 1e-12)
                << m.kappa() << " " << r;
        }
    }
}

TEST(Adjoint, StarOfBoundaryBasis)
{
    for (const auto& m : test_models()) {
        for (int n = 0; n <= 6; ++n) {
            for (int k = -2; k <= n + 2; ++k) {
                const BoundaryFunction g = [&](const FanBeamCoord& c) { return psi_hat(m, n, k, c); };
                for (double r : {0.0, 0.4, 0.8, 0.97}) {
                    const Complex z = std::polar(r * m.radius(), 0.3 + n);
                    const Complex v = adjoint_star(m, g, z);
                    const bool range = k >= 0 && k <= n;
                    const Complex expect = range ? singular_value(m, n) * curved_zernike_hat(m, n, k, z) : Complex{};
                    EXPECT_LT(std::abs(v - expect), 1e-10) << m.kappa() << " " << n << " " << k << " " << r;
                }
            }
        }
    }
}

TEST(Adjoint, StarIsSharpOfDividedData)
{
    const DiskModel m(0.3, 1.5);
    const BoundaryFunction g = [](const FanBeamCoord& c) {
        return std::cos(c.alpha) * Complex(std::sin(2 * c.beta + c.alpha), std::cos(c.beta) * c.alpha);
    };
    const BoundaryFunction divided = [&](const FanBeamCoord& c) { return g(c) / std::cos(c.alpha); };
    for (double r : {0.1, 0.6, 1.2, 1.45}) {
        const Complex z = std::polar(r, -0.8);
        EXPECT_LT(std::abs(adjoint_star(m, g, z) - adjoint_sharp(m, divided, z)), 1e-14);
    }
}

TEST(Adjoint, RejectsBoundaryPoints)
{
    const DiskModel m(0.5, 1.0);
    const BoundaryFunction g = [](const FanBeamCoord&) { return Complex(1.0); };
    EXPECT_THROW(adjoint_sharp(m, g, Complex(1.0, 0.0)), OutOfDisk);
    EXPECT_THROW(adjoint_star(m, g, Complex(0.0, -1.2)), OutOfDisk);
}

TEST(Adjoint, PairingWithForward)
{
    // (I0(w f), g) in L^2(dSigma^2) equals (f, I0^* g) in L^2(w dVol), both sides by
    // independent adaptive quadrature.
    for (const auto& m : {make_model(0.0, 1.0), make_model(0.5, 1.0), make_model(-0.5, 1.0), make_model(0.3, 1.5)}) {
        const DiskFunction f = bump(m);
        const BoundaryFunction g = [](const FanBeamCoord& c) {
            return std::cos(c.alpha) * Complex(1.0 + 0.5 * std::cos(c.beta - 0.3), 0.4 * std::sin(c.alpha + c.beta));
        };
        RaySamplingConfig cfg;
        cfg.nodes_per_ray = 96;
        cfg.theta_nodes = 128;
        const DiskFunction wf = [&](Complex z) { return m.weight(z) * f(z); };
        const Complex lhs = oracle::boundary_integral(
            m, [&](const FanBeamCoord& c) { return forward_ray(m, wf, c, cfg) * std::conj(g(c)); }, 48);
        const Complex rhs = oracle::disk_integral(
            m, [&](Complex z) { return m.weight(z) * f(z) * std::conj(adjoint_star(m, g, z, cfg)); }, 48);
        EXPECT_LT(std::abs(lhs - rhs) / std::abs(lhs), 1e-6) << m.kappa();
    }
}

TEST(NormalOperator, Eigenvalues)
{
    for (const auto& m : test_models()) {
        const int N = 6;
        const DiskGrid grid = DiskGrid::for_degree(m, N);
        for (int n : {0, 3, 6}) {
            for (int k : {0, n / 2, n}) {
                const GridField out = normal_operator(
                    m, [&](Complex z) { return m.weight(z) * curved_zernike_hat(m, n, k, z); }, grid, N);
                const SpectralField spec = analyze_disk(out, N, Frame::plain);
                SpectralField expect(m, N);
                expect(n, k) = m.c_const() / (n + 1);
                double err = 0.0;
                for (std::size_t q = 0; q < spec.coeffs().size(); ++q)
                    err = std::max(err, std::abs(spec.coeffs()[q] - expect.coeffs()[q]));
                EXPECT_LT(err / (m.c_const() / (n + 1)), 1e-9) << m.kappa() << " " << n << " " << k;
            }
        }
    }
}

TEST(NormalOperator, IsPositiveOnRandomFields)
{
    const DiskModel m(-0.5, 1.0);
    const int N = 5;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    SpectralField f(m, N);
    for (auto& c : f.coeffs()) c = Complex(g(rng), g(rng));
    const GridField out = normal_operator(m, [&](Complex z) { return evaluate(f, z, Frame::weighted); },
                                          DiskGrid::for_degree(m, N), N);
    const SpectralField spec = analyze_disk(out, N, Frame::plain);
    Complex pairing{};
    for (int n = 0; n <= N; ++n)
        for (int k = 0; k <= n; ++k) pairing += spec(n, k) * std::conj(f(n, k));
    EXPECT_GT(pairing.real(), 0.0);
    EXPECT_LT(std::abs(pairing.imag()) / pairing.real(), 1e-10);
}

TEST(Interpolation, Parse)
{
    EXPECT_EQ(parse_interpolation("bilinear"), Interpolation::bilinear);
    EXPECT_EQ(parse_interpolation("bicubic"), Interpolation::bicubic);
    EXPECT_EQ(parse_interpolation("spectral"), Interpolation::spectral);
    EXPECT_THROW(parse_interpolation("nearest"), Error);
}

TEST(Interpolation, SpectralSinogramIsExactForBandLimitedData)
{
    for (const auto& m : test_models()) {
        const int N = 6;
        const SinogramGrid grid = SinogramGrid::for_degree(m, N);
        const BoundaryFunction g = [&](const FanBeamCoord& c) {
            return psi_hat(m, 5, 2, c) - 0.5 * psi_hat(m, 6, -1, c) + Complex(0, 0.3) * psi_hat(m, 1, 1, c);
        };
        const BoundaryFunction interp = sinogram_interpolant(GridSinogram(grid, g), Interpolation::spectral);
        for (const auto& c : random_coords(9, 30, 1.55))
            EXPECT_LT(std::abs(interp(c) - g(c)), 1e-11) << m.kappa();
    }
}

TEST(Interpolation, LocalSinogramConvergesAtExpectedOrder)
{
    const DiskModel m(0.5, 1.0);
    const BoundaryFunction g = [](const FanBeamCoord& c) {
        return Complex(std::cos(2 * c.beta - c.alpha), std::sin(c.beta) * std::sin(c.alpha));
    };
    const auto coords = random_coords(13, 50, 1.2);
    auto error = [&](int n, Interpolation method) {
        const BoundaryFunction interp = sinogram_interpolant(GridSinogram(SinogramGrid(m, 2 * n, n), g), method);
        double e = 0.0;
        for (const auto& c : coords) e = std::max(e, std::abs(interp(c) - g(c)));
        return e;
    };
    const double lin_ratio = error(32, Interpolation::bilinear) / error(64, Interpolation::bilinear);
    const double cub_ratio = error(32, Interpolation::bicubic) / error(64, Interpolation::bicubic);
    EXPECT_GT(lin_ratio, 3.0);
    EXPECT_GT(cub_ratio, 10.0);
    EXPECT_LT(error(64, Interpolation::bicubic), error(64, Interpolation::bilinear));
}

TEST(Interpolation, ClampedSamplesAreCounted)
{
    const DiskModel m(0.0, 1.0);
    const SinogramGrid grid(m, 16, 8);
    SamplingStats stats;
    const BoundaryFunction interp =
        sinogram_interpolant(GridSinogram(grid, [](const FanBeamCoord&) { return Complex(2.0); }), Interpolation::bicubic,
                             &stats);
    EXPECT_NEAR(std::abs(interp({0.3, 0.0}) - 2.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(interp({0.3, 1.55}) - 2.0), 0.0, 1e-14);
    EXPECT_EQ(stats.total.load(), 2u);
    EXPECT_EQ(stats.clamped.load(), 1u);
}

TEST(Interpolation, FieldModes)
{
    for (const auto& m : {make_model(0.0, 1.0), make_model(0.9, 1.0), make_model(0.3, 1.5)}) {
        const int N = 7;
        SpectralField f(m, N);
        f(7, 3) = 1.0;
        f(2, 1) = Complex(0.0, -0.6);
        const GridField field = synthesize_disk(f, DiskGrid::for_degree(m, N));
        const DiskFunction spectral = field_interpolant(field, Interpolation::spectral);
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int t = 0; t < 40; ++t) {
            const Complex z = std::polar(m.radius() * std::sqrt(u(rng)), kTwoPi * u(rng));
            EXPECT_LT(std::abs(spectral(z) - evaluate(f, z)), 1e-11);
        }
    }
    // Local modes on a fine grid: cubic beats linear, and both reproduce constants.
    const DiskModel m(-0.5, 1.0);
    const DiskGrid fine(m, 40, 80);
    const DiskFunction smooth = bump(m);
    const GridField field(fine, smooth);
    const DiskFunction lin = field_interpolant(field, Interpolation::bilinear);
    const DiskFunction cub = field_interpolant(field, Interpolation::bicubic);
    double e_lin = 0.0, e_cub = 0.0;
    for (int t = 0; t < 60; ++t) {
        const Complex z = std::polar(0.9 * t / 60.0, 0.37 * t);
        e_lin = std::max(e_lin, std::abs(lin(z) - smooth(z)));
        e_cub = std::max(e_cub, std::abs(cub(z) - smooth(z)));
    }
    EXPECT_LT(e_cub, 1e-4);
    EXPECT_LT(e_cub, e_lin);
    const GridField one(fine, [](Complex) { return Complex(1.0); });
    EXPECT_NEAR(std::abs(field_interpolant(one, Interpolation::bicubic)(Complex(0.0, 0.0)) - 1.0), 0.0, 1e-13);
}

TEST(Interpolation, GriddedForwardAgreesWithAnalytic)
{
    const DiskModel m(0.5, 1.0);
    const int N = 6;
    SpectralField f(m, N);
    f(4, 1) = 1.0;
    f(6, 6) = Complex(0.2, 0.5);
    const SinogramGrid sgrid(m, 12, 8);
    const GridField field = synthesize_disk(f, DiskGrid::for_degree(m, N));
    RaySamplingConfig cfg;
    cfg.nodes_per_ray = 64;
    cfg.interpolation = Interpolation::spectral;
    const GridSinogram a = forward(field, sgrid, cfg);
    const GridSinogram b = forward(f, Frame::plain, sgrid, cfg);
    for (std::size_t q = 0; q < a.values.size(); ++q) EXPECT_LT(std::abs(a.values[q] - b.values[q]), 1e-11);
}

TEST(RaySampling, Validation)
{
    RaySamplingConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.nodes_per_ray = 15;
    EXPECT_THROW(cfg.validate(), ResolutionTooLow);
    cfg.nodes_per_ray = 16;
    cfg.theta_nodes = 63;
    EXPECT_THROW(cfg.validate(), ResolutionTooLow);
    const DiskModel m(0.0, 1.0);
    EXPECT_THROW(forward_ray(m, bump(m), {0.0, 0.0}, cfg), ResolutionTooLow);
}

TEST(RaySampling, ModelMismatchIsRejected)
{
    const DiskModel a(0.0, 1.0), b(0.5, 1.0);
    EXPECT_THROW(forward(SpectralField(a, 2), Frame::plain, SinogramGrid(b, 8, 8)), ModelMismatch);
    EXPECT_THROW(adjoint_star(a, [](const FanBeamCoord&) { return Complex(1.0); }, DiskGrid(b, 4, 8)), ModelMismatch);
}

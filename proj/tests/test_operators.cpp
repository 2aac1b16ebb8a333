#include "gxr/operators.hpp"
#include "gxr/oracles.hpp"
#include "gxr/transform.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gxr;

namespace {

std::vector<DiskModel> test_models()
{
    return {make_model(0.0, 1.0), make_model(0.5, 1.0), make_model(-0.5, 1.0), make_model(0.9, 1.0),
            make_model(-0.9, 1.0), make_model(0.3, 1.5)};
}

SpectralField random_field(const DiskModel& m, int degree, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SpectralField f(m, degree);
    for (auto& c : f.coeffs()) c = Complex(g(rng), g(rng));
    return f;
}

SpectralBoundary random_boundary(const DiskModel& m, int degree, int margin, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SpectralBoundary b(m, degree, margin);
    for (auto& c : b.coeffs()) c = Complex(g(rng), g(rng));
    return b;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b)
{
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

} // namespace

TEST(Filter, Multipliers)
{
    EXPECT_EQ(SpectralFilter::identity().at_degree(7), 1.0);
    EXPECT_DOUBLE_EQ(SpectralFilter::power(0.5).at_degree(4), 5.0);
    EXPECT_DOUBLE_EQ(SpectralFilter::power(-1.0).at_degree(2), 1.0 / 9.0);
    const SpectralFilter cut = SpectralFilter::cutoff(3);
    EXPECT_EQ(cut.at_degree(3), 1.0);
    EXPECT_EQ(cut.at_degree(4), 0.0);
    const SpectralFilter cosf = SpectralFilter::cosine(4);
    EXPECT_NEAR(cosf.at_degree(0), 1.0, 1e-15);
    EXPECT_NEAR(cosf.at_degree(2), std::cos(kPi / 4), 1e-14);
    EXPECT_NEAR(cosf.at_degree(4), 0.0, 1e-15);
    EXPECT_EQ(cosf.at_degree(5), 0.0);
    EXPECT_NEAR(SpectralFilter::tikhonov(0.5).at_degree(3), 1.0 / 3.0, 1e-15);
}

TEST(Filter, LowPassFiltersDecay)
{
    for (const auto& f : {SpectralFilter::cutoff(5), SpectralFilter::cosine(5), SpectralFilter::tikhonov(0.1),
                          SpectralFilter::power(-0.5)}) {
        double prev = f.at_degree(0);
        for (int n = 1; n <= 400; ++n) {
            EXPECT_LE(std::abs(f.at_degree(n)), std::abs(prev) + 1e-15) << f.describe();
            prev = f.at_degree(n);
        }
        EXPECT_LT(std::abs(f.at_degree(100000)), 1e-3) << f.describe();
    }
}

TEST(Filter, Parse)
{
    EXPECT_EQ(SpectralFilter::parse("power:0.25").kind(), FilterKind::power);
    EXPECT_EQ(SpectralFilter::parse("power:0.25").parameter(), 0.25);
    EXPECT_EQ(SpectralFilter::parse("cutoff:12").at_degree(12), 1.0);
    EXPECT_EQ(SpectralFilter::parse("cosine:8").kind(), FilterKind::cosine);
    EXPECT_EQ(SpectralFilter::parse("tikhonov:1e-3").parameter(), 1e-3);
    EXPECT_EQ(SpectralFilter::parse("identity").at_degree(30), 1.0);
    EXPECT_EQ(SpectralFilter::parse("cutoff:12").describe(), "cutoff:12");
    for (const char* bad : {"", "power", "power:", "power:x", "cutoff:2.5", "cosine:0", "tikhonov:-1", "gauss:3",
                            "cutoff:-1", "power:1abc"})
        EXPECT_THROW(SpectralFilter::parse(bad), Error) << bad;
}

TEST(FunctionalCalculus, IdentityAndSquareRoot)
{
    const DiskModel m(0.5, 1.0);
    const SpectralField f = random_field(m, 9, 1);
    EXPECT_EQ(functional_calculus_disk(SpectralFilter::identity(), f), f);
    const SpectralField r = functional_calculus_disk(SpectralFilter::power(0.5), SpectralField::unit(m, 9, 6, 2));
    EXPECT_NEAR(std::abs(r(6, 2) - 7.0), 0.0, 1e-14);
    EXPECT_NEAR(r.norm(), 7.0, 1e-14);
    // Square root composed with itself is the disk operator.
    const SpectralField twice = functional_calculus_disk(SpectralFilter::power(0.5),
                                                         functional_calculus_disk(SpectralFilter::power(0.5), f));
    EXPECT_LT(max_diff(twice.coeffs(), apply_L_spectral(f).coeffs()), 1e-12);
}

TEST(FunctionalCalculus, Overflow)
{
    const DiskModel m(0.0, 1.0);
    const SpectralField f = random_field(m, 40, 2);
    EXPECT_NO_THROW(functional_calculus_disk(SpectralFilter::power(3.0), f));
    EXPECT_THROW(functional_calculus_disk(SpectralFilter::power(4.0), f), FilterOverflow);
    EXPECT_THROW(functional_calculus_disk(SpectralFilter::power(1.0), f, 100.0), FilterOverflow);
    EXPECT_THROW(functional_calculus_boundary(SpectralFilter::custom("nan", [](double) { return std::nan(""); }),
                                              random_boundary(m, 3, 2, 1)),
                 FilterOverflow);
}

TEST(FunctionalCalculus, IntertwinesThroughForward)
{
    // analyze(I0(w synth(F(L) f))) = F(-T^2) analyze(I0(w f)), with sinograms by quadrature.
    for (const auto& m : {make_model(0.0, 1.0), make_model(-0.9, 1.0), make_model(0.3, 1.5)}) {
        const int N = 7;
        const SpectralField f = random_field(m, N, 5);
        const SinogramGrid grid = SinogramGrid::for_degree(m, N);
        for (const auto& filter : {SpectralFilter::power(0.5), SpectralFilter::cosine(5), SpectralFilter::tikhonov(0.2)}) {
            const SpectralField ff = functional_calculus_disk(filter, f);
            const SpectralBoundary lhs = analyze_boundary(forward(ff, Frame::weighted, grid), N);
            const SpectralBoundary rhs =
                functional_calculus_boundary(filter, analyze_boundary(forward(f, Frame::weighted, grid), N));
            EXPECT_LT(max_diff(lhs.coeffs(), rhs.coeffs()) / rhs.norm(), 1e-6) << m.kappa() << " " << filter.describe();
        }
    }
}

TEST(SpectralOperators, Eigenvalues)
{
    const DiskModel m(-0.5, 1.0);
    const SpectralField c = apply_L_spectral(SpectralField::unit(m, 4, 0, 0));
    EXPECT_EQ(c(0, 0), Complex(1.0));
    const SpectralField z32 = apply_L_spectral(SpectralField::unit(m, 4, 3, 2));
    EXPECT_EQ(z32(3, 2), Complex(16.0));
    EXPECT_EQ(z32.norm(), 16.0);
    const SpectralBoundary b = apply_T2_spectral(SpectralBoundary::unit(m, 5, 2, 4, -2));
    EXPECT_EQ(b(4, -2), Complex(25.0));
    // Linearity and coercivity: (Lu, u) >= |u|^2 with equality only for constants.
    const SpectralField u = random_field(m, 6, 3), v = random_field(m, 6, 4);
    SpectralField sum = u;
    for (std::size_t i = 0; i < sum.coeffs().size(); ++i) sum.coeffs()[i] = 2.0 * u.coeffs()[i] - v.coeffs()[i];
    const SpectralField lu = apply_L_spectral(u), lv = apply_L_spectral(v), ls = apply_L_spectral(sum);
    for (std::size_t i = 0; i < sum.coeffs().size(); ++i)
        EXPECT_LT(std::abs(ls.coeffs()[i] - (2.0 * lu.coeffs()[i] - lv.coeffs()[i])), 1e-12);
    Complex pairing{};
    for (std::size_t i = 0; i < u.coeffs().size(); ++i) pairing += lu.coeffs()[i] * std::conj(u.coeffs()[i]);
    EXPECT_GT(pairing.real(), u.norm() * u.norm());
    const SpectralField one = SpectralField::unit(m, 6, 0, 0);
    EXPECT_EQ(apply_L_spectral(one), one);
}

TEST(Cminus, DiagonalAction)
{
    const DiskModel m(0.5, 1.0);
    EXPECT_EQ(cminus_spectral(SpectralBoundary::unit(m, 4, 2, 2, 1)).norm(), 0.0);
    EXPECT_EQ(cminus_spectral(SpectralBoundary::unit(m, 4, 2, 2, -1))(2, -1), Complex(0.0, 1.0));
    EXPECT_EQ(cminus_spectral(SpectralBoundary::unit(m, 4, 2, 2, 4))(2, 4), Complex(0.0, -1.0));
    // Skew-adjoint, commutes with -T^2, norm one.
    const SpectralBoundary a = random_boundary(m, 6, 2, 1), b = random_boundary(m, 6, 2, 2);
    const SpectralBoundary ca = cminus_spectral(a), cb = cminus_spectral(b);
    Complex lhs{}, rhs{};
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        lhs += ca.coeffs()[i] * std::conj(b.coeffs()[i]);
        rhs += a.coeffs()[i] * std::conj(cb.coeffs()[i]);
    }
    EXPECT_LT(std::abs(lhs + rhs), 1e-12);
    EXPECT_LT(max_diff(cminus_spectral(apply_T2_spectral(a)).coeffs(), apply_T2_spectral(ca).coeffs()), 1e-12);
    EXPECT_NEAR(ca.norm(), a.kernel_norm(), 1e-12);
    EXPECT_LE(ca.norm(), a.norm());
}

TEST(Cminus, AnnihilatesTheRange)
{
    for (const auto& m : test_models()) {
        const int N = 8;
        const SinogramGrid grid = SinogramGrid::for_degree(m, N);
        const SpectralBoundary g = analyze_boundary(forward(random_field(m, N, 7), Frame::weighted, grid), N);
        EXPECT_LT(cminus_spectral(g).norm() / g.norm(), 1e-10) << m.kappa();
    }
}

TEST(Sobolev, SingleModes)
{
    const DiskModel m(0.0, 1.0);
    for (double s : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
        for (int n : {0, 3, 10}) {
            EXPECT_NEAR(sobolev_norm_disk(s, SpectralField::unit(m, 10, n, n / 3)), std::pow(n + 1.0, s), 1e-12);
            for (int k = -2; k <= n + 2; ++k) {
                const SpectralBoundary b = SpectralBoundary::unit(m, 10, 2, n, k);
                const double ratio = sobolev_norm_boundary_T(s, b) / sobolev_norm_boundary_classical(s, b);
                const double q = (n - 2.0 * k) / (n + 1.0);
                EXPECT_NEAR(ratio, std::pow(1.0 + q * q, -s / 2.0), 1e-12);
                if (k >= 0 && k <= n && s >= 0) EXPECT_GE(ratio, std::pow(2.0, -s / 2.0) - 1e-15);
            }
        }
    }
}

TEST(Sobolev, StabilityIdentity)
{
    // |f|_{s} = c^{-1/2} |I0(w f)|_{T, s + 1/2}, sinogram by quadrature.
    for (const auto& m : test_models()) {
        const int N = 8;
        const SpectralField f = random_field(m, N, 11);
        const SpectralBoundary g =
            analyze_boundary(forward(f, Frame::weighted, SinogramGrid::for_degree(m, N)), N);
        for (double s : {0.0, 1.0}) {
            const double lhs = sobolev_norm_disk(s, f);
            const double rhs = sobolev_norm_boundary_T(s + 0.5, g) / std::sqrt(m.c_const());
            EXPECT_NEAR(lhs / rhs, 1.0, 1e-10) << m.kappa() << " " << s;
        }
    }
}

TEST(Sobolev, ClassicalH1OnReferenceDisk)
{
    const DiskModel ref(0.0, 1.0);
    for (int n = 0; n <= 8; ++n) {
        for (int k = 0; k <= n; ++k) {
            // Oracle: quadrature of |Z|^2 + 2 |dZ|^2 + 2 |dbar Z|^2 from the monomial expansion.
            const Complex q = oracle::disk_integral(ref, [&](Complex z) {
                return Complex(std::norm(oracle::zernike_monomial(n, k, z)) + 2.0 * std::norm(oracle::zernike_dz(n, k, z))
                               + 2.0 * std::norm(oracle::zernike_dzbar(n, k, z)));
            });
            const double h1 = h1_norm_reference(SpectralField::unit(ref, n, n, k)) * zernike_norm(n, k);
            EXPECT_NEAR(h1 * h1 / q.real(), 1.0, 1e-10) << n << " " << k;
        }
    }
    EXPECT_THROW(h1_norm_reference(SpectralField(make_model(0.5, 1.0), 2)), ModelMismatch);
}

TEST(Sobolev, UnboundednessWitness)
{
    const DiskModel ref(0.0, 1.0);
    double prev = 0.0;
    for (int n = 2; n <= 40; n += 2) {
        const SpectralField z = SpectralField::unit(ref, n, n, n / 2);
        const double d = dz_spectral(z).norm() * zernike_norm(n, n / 2);
        EXPECT_NEAR(d * d / (kPi * n * (n + 2) / 4.0), 1.0, 1e-12) << n;
        const double ratio = h1_norm_reference(z) / sobolev_norm_disk(1.0, z);
        EXPECT_GT(ratio, prev) << n;
        prev = ratio;
    }
}

TEST(PointwiseL, SymbolicCases)
{
    const DiskModel ref(0.0, 1.0);
    const Complex z(0.3, -0.45);
    EXPECT_NEAR(std::abs(apply_L_pointwise(ref, [](Complex) { return Complex(1.0); }, z) - 1.0), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(apply_L_pointwise(ref, [](Complex w) { return w; }, z) - 4.0 * z), 0.0, 1e-9);
    // |z|^2: Lap = 4, E^2 = 4|z|^2 terms; the operator gives -4 + 2|z|^2 + 6|z|^2 + |z|^2.
    const double r2 = std::norm(z);
    EXPECT_NEAR(std::abs(apply_L_pointwise(ref, [](Complex w) { return Complex(std::norm(w)); }, z) - (-4.0 + 9.0 * r2)),
                0.0, 1e-8);
}

TEST(PointwiseL, AgreesWithSpectral)
{
    for (const auto& m : test_models()) {
        const int N = 6;
        const SpectralField f = random_field(m, N, 21);
        const SpectralField lf = apply_L_spectral(f);
        std::mt19937_64 rng(22);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double scale = 0.0;
        for (const auto& c : lf.coeffs()) scale = std::max(scale, std::abs(c));
        for (int t = 0; t < 25; ++t) {
            const Complex z = std::polar(0.995 * m.radius() * std::sqrt(u(rng)), kTwoPi * u(rng));
            const Complex p = apply_L_pointwise(m, [&](Complex w) { return evaluate(f, w); }, z);
            EXPECT_LT(std::abs(p - evaluate(lf, z)) / scale, 1e-6) << m.kappa() << " " << z;
        }
    }
}

TEST(PointwiseL, SelfAdjointInWeightedMeasure)
{
    for (const auto& m : {make_model(0.0, 1.0), make_model(0.5, 1.0), make_model(-0.9, 1.0)}) {
        const int N = 4;
        const SpectralField a = random_field(m, N, 1), b = random_field(m, N, 2);
        const DiskFunction u = [&](Complex z) { return evaluate(a, z); };
        const DiskFunction v = [&](Complex z) { return evaluate(b, z); };
        const DiskGrid grid = DiskGrid::for_degree(m, 2 * N + 2);
        Complex lhs{}, rhs{};
        for (int i = 0; i < grid.n_rho(); ++i) {
            for (int j = 0; j < grid.n_omega(); ++j) {
                const Complex z = grid.point(i, j);
                const double wt = grid.dvol_weight(i) * m.weight(z);
                lhs += wt * apply_L_pointwise(m, u, z) * std::conj(v(z));
                rhs += wt * u(z) * std::conj(apply_L_pointwise(m, v, z));
            }
        }
        EXPECT_LT(std::abs(lhs - rhs) / (a.norm() * b.norm()), 1e-8) << m.kappa();
    }
}

TEST(PointwiseL, RejectsBoundary)
{
    const DiskModel m(0.0, 1.0);
    EXPECT_THROW(apply_L_pointwise(m, [](Complex) { return Complex(1.0); }, Complex(1.0, 0.0)), OutOfDisk);
}

TEST(PointwiseT, EuclideanForm)
{
    const DiskModel ref(0.0, 1.0);
    const BoundaryFunction u = [](const FanBeamCoord& c) {
        return Complex(std::sin(2 * c.beta) * std::cos(c.alpha), c.alpha * c.alpha);
    };
    for (const FanBeamCoord c : {FanBeamCoord{0.3, 0.2}, FanBeamCoord{4.0, -1.1}, FanBeamCoord{2.0, 1.4}}) {
        const Complex exact = Complex(2 * std::cos(2 * c.beta) * std::cos(c.alpha), 0.0)
            - Complex(-std::sin(2 * c.beta) * std::sin(c.alpha), 2 * c.alpha);
        EXPECT_LT(std::abs(apply_T_pointwise(ref, u, c) - exact), 1e-9);
    }
}

TEST(PointwiseT, BasisEigenfunctions)
{
    for (const auto& m : test_models()) {
        for (int n = 0; n <= 6; ++n) {
            for (int k = -2; k <= n + 2; ++k) {
                const BoundaryFunction u = [&](const FanBeamCoord& c) { return psi_hat(m, n, k, c); };
                for (const FanBeamCoord c : {FanBeamCoord{0.4, 0.3}, FanBeamCoord{5.0, -1.2}}) {
                    const Complex t2 = apply_T2_pointwise(m, u, c);
                    EXPECT_LT(std::abs(-t2 - double((n + 1) * (n + 1)) * u(c)) / ((n + 1) * (n + 1)), 1e-7)
                        << m.kappa() << " " << n << " " << k;
                    const Complex tt = apply_T_pointwise(m, [&](const FanBeamCoord& d) { return apply_T_pointwise(m, u, d); }, c);
                    EXPECT_LT(std::abs(tt - t2) / ((n + 1) * (n + 1)), 1e-5);
                }
            }
        }
    }
}

TEST(PointwiseT, AgreesWithSpectral)
{
    for (const auto& m : test_models()) {
        const SpectralBoundary g = random_boundary(m, 6, 2, 3);
        const SpectralBoundary t2 = apply_T2_spectral(g);
        const BoundaryFunction u = [&](const FanBeamCoord& c) { return evaluate(g, c); };
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> b(0.0, kTwoPi), a(-1.4, 1.4);
        for (int t = 0; t < 10; ++t) {
            const FanBeamCoord c{b(rng), a(rng)};
            EXPECT_LT(std::abs(-apply_T2_pointwise(m, u, c) - evaluate(t2, c)) / t2.norm(), 1e-6) << m.kappa();
        }
    }
}

TEST(PointwiseT, DIsConjugatedTSquared)
{
    // D u = mu^{-1} T^2 (mu u) + u, mu = cos(alpha), on the reference model.
    for (const auto& m : {make_model(0.0, 1.0)}) {
        const BoundaryFunction u = [](const FanBeamCoord& c) {
            return Complex(std::cos(c.beta - 2 * c.alpha), std::sin(c.beta) * c.alpha);
        };
        const BoundaryFunction mu_u = [&](const FanBeamCoord& c) { return std::cos(c.alpha) * u(c); };
        for (const FanBeamCoord c : {FanBeamCoord{0.4, 0.3}, FanBeamCoord{3.0, -1.0}}) {
            const Complex rhs = apply_T2_pointwise(m, mu_u, c) / std::cos(c.alpha) + u(c);
            EXPECT_LT(std::abs(apply_D_pointwise(m, u, c) - rhs), 1e-7) << m.kappa();
        }
    }
}

TEST(Intertwining, DiskOperatorAndBackprojection)
{
    // L I0^* g = I0^* (-T^2 g) and (1 - L) I0^sharp g = I0^sharp D g, by quadrature composition.
    for (const auto& m : {make_model(0.0, 1.0), make_model(0.5, 1.0)}) {
        const SpectralBoundary spec = random_boundary(m, 5, 0, 9);
        const BoundaryFunction g = [&](const FanBeamCoord& c) { return evaluate(spec, c); };
        const BoundaryFunction t2g = [&](const FanBeamCoord& c) { return -apply_T2_pointwise(m, g, c); };
        const BoundaryFunction dg = [&](const FanBeamCoord& c) { return apply_D_pointwise(m, g, c); };
        for (const Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.3), Complex(0.1, -0.8)}) {
            const Complex lhs = apply_L_pointwise(m, [&](Complex p) { return adjoint_star(m, g, p); }, z);
            const Complex rhs = adjoint_star(m, t2g, z);
            EXPECT_LT(std::abs(lhs - rhs) / std::abs(rhs), 1e-5) << m.kappa() << " " << z;
            if (m.is_reference()) {
                const Complex sharp = adjoint_sharp(m, g, z);
                const Complex l_sharp = sharp - apply_L_pointwise(m, [&](Complex p) { return adjoint_sharp(m, g, p); }, z);
                const Complex d_sharp = adjoint_sharp(m, dg, z);
                EXPECT_LT(std::abs(l_sharp - d_sharp) / std::abs(d_sharp), 1e-5) << z;
            }
        }
    }
}

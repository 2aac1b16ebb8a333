#include "gxr/phantom.hpp"
#include "gxr/transform.hpp"

#include <gtest/gtest.h>

using namespace gxr;

TEST(Phantom, ParseDefaults)
{
    const DiskModel m(0.2, 2.0);
    const Phantom c = Phantom::parse(m, "const");
    EXPECT_EQ(c.kind(), PhantomKind::constant);
    EXPECT_EQ(c(Complex(0.3, 0.1)), Complex(1.0));
    EXPECT_EQ(Phantom::parse(m, "const:2.5")(0.0), Complex(2.5));

    const Phantom g = Phantom::parse(m, "gaussian");
    EXPECT_EQ(g.kind(), PhantomKind::gaussian_bump);
    EXPECT_NEAR(g(0.0).real(), 1.0, 1e-15);
    // width 0.25 in units of R = 2: one width out from the centre.
    EXPECT_NEAR(g(Complex(0.5, 0.0)).real(), std::exp(-0.5), 1e-15);

    const Phantom r = Phantom::parse(m, "ring");
    EXPECT_NEAR(r(Complex(0.0, 1.0)).real(), 1.0, 1e-15);
    EXPECT_LT(r(0.0).real(), 1e-8);
}

TEST(Phantom, ParseArguments)
{
    const DiskModel m(0.0, 1.0);
    const Phantom g = Phantom::parse(m, "gaussian:0.2,-0.1,0.3,2");
    EXPECT_NEAR(g(Complex(0.2, -0.1)).real(), 2.0, 1e-15);
    const Phantom z = Phantom::parse(m, "zernike:2,1,1,0;0,0,0,0.5");
    const Complex p(0.3, 0.4);
    EXPECT_NEAR(std::abs(z(p) - (curved_zernike_hat(m, 2, 1, p) + Complex(0, 0.5) * curved_zernike_hat(m, 0, 0, p))),
                0.0, 1e-15);
    EXPECT_FALSE(z.has_exact_coefficients());
    EXPECT_EQ(Phantom::parse(m, z.description()).description(), z.description());
}

TEST(Phantom, RejectsBadText)
{
    const DiskModel m(0.0, 1.0);
    for (const char* bad : {"blob", "const:x", "gaussian:0,0", "gaussian:0,0,-1,1", "gaussian:1.2,0,0.2,1",
                            "ring:0.5,0,1", "zernike", "zernike:2,1,1", "zernike:2.5,1,1,0", "const:1e999"})
        EXPECT_THROW(Phantom::parse(m, bad), Error) << bad;
    EXPECT_THROW(Phantom::parse(m, "zernike:2,3,1,0"), IndexOutOfRange);
}

TEST(Phantom, OutsideDisk)
{
    const Phantom g = Phantom::parse(DiskModel(0.3, 1.5), "gaussian");
    EXPECT_NO_THROW(g(Complex(1.5, 0.0)));
    EXPECT_THROW(g(Complex(1.6, 0.0)), OutOfDisk);
}

TEST(Phantom, WeightedZernikeCoefficients)
{
    const DiskModel m(-0.5, 1.0);
    const Phantom p = Phantom::parse(m, "wzernike:3,1,1,2;1,0,-0.5,0");
    ASSERT_TRUE(p.has_exact_coefficients());
    const SpectralField f = p.exact_coefficients(4);
    EXPECT_EQ(f(3, 1), Complex(1.0, 2.0));
    EXPECT_EQ(f(1, 0), Complex(-0.5, 0.0));
    EXPECT_THROW(p.exact_coefficients(2), IndexOutOfRange);
    // Pointwise values agree with the weighted-frame synthesis.
    for (Complex z : {Complex(0.1, 0.2), Complex(-0.6, 0.3), Complex(0.0, -0.9)})
        EXPECT_NEAR(std::abs(p(z) - evaluate(f, z, Frame::weighted)), 0.0, 1e-13);
}

TEST(Phantom, WeightedZernikeSinogram)
{
    // I0(w Zhat_{2,1}) = sqrt(c / 3) psi-hat_{2,1}; at kappa = 0.5, R = 1, c = 8 pi.
    const DiskModel m(0.5, 1.0);
    EXPECT_NEAR(m.c_const(), 8.0 * kPi, 1e-13);
    const Phantom p = Phantom::parse(m, "wzernike:2,1,1,0");
    const SinogramGrid grid(m, 12, 9);
    const GridSinogram s = forward(p.function(), grid);
    const double scale = std::sqrt(8.0 * kPi / 3.0);
    for (int i = 0; i < grid.n_beta(); ++i)
        for (int j = 0; j < grid.n_alpha(); ++j)
            EXPECT_NEAR(std::abs(s.at(i, j) - scale * psi_hat(m, 2, 1, grid.coord(i, j))), 0.0, 1e-10);
}

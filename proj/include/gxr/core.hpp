#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gxr {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Error hierarchy. Every failure raised by the library derives from gxr::Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SimplicityViolation : public Error {
public:
    using Error::Error;
};

class NonpositiveRadius : public Error {
public:
    using Error::Error;
};

class OutOfDisk : public Error {
public:
    using Error::Error;
};

class TangentRay : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class ResolutionTooLow : public Error {
public:
    using Error::Error;
};

class FilterOverflow : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ModelMismatch : public Error {
public:
    using Error::Error;
};

/// Wraps an angle into [0, 2pi).
inline double wrap_two_pi(double a)
{
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_pi(double a)
{
    double r = wrap_two_pi(a);
    return r > kPi ? r - kTwoPi : r;
}

/// Distance between two angles on the circle, in [0, pi].
inline double angle_distance(double a, double b)
{
    return std::abs(wrap_pi(a - b));
}

struct FanBeamCoord;

/// A function on the closed disk, taking the point as a complex number x + iy.
using DiskFunction = std::function<Complex(Complex)>;

/// A function on the inward boundary bundle, in fan-beam coordinates.
using BoundaryFunction = std::function<Complex(const FanBeamCoord&)>;

} // namespace gxr

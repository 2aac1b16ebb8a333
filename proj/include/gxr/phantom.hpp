#pragma once

#include "gxr/basis.hpp"

#include <string>
#include <vector>

namespace gxr {

enum class PhantomKind { constant, gaussian_bump, smooth_ring, zernike_combo };

struct ZernikeTerm {
    int n = 0;
    int k = 0;
    Complex coeff{};
};

/// Test object on the closed disk D_R.
///
/// Text forms (lengths in units of R):
///   const[:value]
///   gaussian[:cx,cy,width,amplitude]     default 0,0,0.25,1
///   ring[:r0,width,amplitude]            default 0.5,0.08,1
///   zernike:n,k,re,im[;n,k,re,im...]     sum c Zhat_{n,k}
///   wzernike:n,k,re,im[;...]             w * sum c Zhat_{n,k}
class Phantom {
public:
    static Phantom parse(const DiskModel& model, const std::string& text);
    static Phantom constant(const DiskModel& model, Complex value = 1.0);
    static Phantom gaussian(const DiskModel& model, Complex center, double width, double amplitude = 1.0);
    static Phantom ring(const DiskModel& model, double r0, double width, double amplitude = 1.0);
    static Phantom zernike(const DiskModel& model, std::vector<ZernikeTerm> terms, bool weighted);

    PhantomKind kind() const { return kind_; }
    const DiskModel& model() const { return model_; }
    const std::string& description() const { return text_; }

    Complex operator()(Complex z) const;
    DiskFunction function() const;

    /// Exact coefficients (weighted frame) when the phantom is a finite sum;
    /// for wzernike these are the listed terms, for zernike none exist.
    bool has_exact_coefficients() const { return kind_ == PhantomKind::zernike_combo && weighted_; }
    SpectralField exact_coefficients(int degree) const;

private:
    explicit Phantom(const DiskModel& model) : model_(model) {}

    DiskModel model_;
    PhantomKind kind_ = PhantomKind::constant;
    std::string text_;
    Complex value_{1.0};
    Complex center_{};
    double width_ = 0.25;
    double amplitude_ = 1.0;
    double r0_ = 0.5;
    std::vector<ZernikeTerm> terms_;
    bool weighted_ = false;
};

} // namespace gxr

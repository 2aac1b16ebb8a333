#include "gxr/phantom.hpp"

#include <sstream>

namespace gxr {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double number(const std::string& s, const std::string& context)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) throw Error("phantom '" + context + "': bad number '" + s + "'");
    return v;
}

std::vector<double> numbers(const std::string& args, std::size_t count, const std::string& context)
{
    const auto parts = split(args, ',');
    if (parts.size() != count) {
        std::ostringstream msg;
        msg << "phantom '" << context << "' expects " << count << " comma-separated values";
        throw Error(msg.str());
    }
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(number(p, context));
    return out;
}

} // namespace

Phantom Phantom::constant(const DiskModel& model, Complex value)
{
    Phantom p(model);
    p.kind_ = PhantomKind::constant;
    p.value_ = value;
    std::ostringstream s;
    s << "const:" << value.real();
    p.text_ = s.str();
    return p;
}

Phantom Phantom::gaussian(const DiskModel& model, Complex center, double width, double amplitude)
{
    if (!(width > 0.0)) throw Error("gaussian phantom width must be positive");
    if (std::abs(center) >= 1.0) throw Error("gaussian phantom center must lie inside the disk");
    Phantom p(model);
    p.kind_ = PhantomKind::gaussian_bump;
    p.center_ = center;
    p.width_ = width;
    p.amplitude_ = amplitude;
    std::ostringstream s;
    s << "gaussian:" << center.real() << "," << center.imag() << "," << width << "," << amplitude;
    p.text_ = s.str();
    return p;
}

Phantom Phantom::ring(const DiskModel& model, double r0, double width, double amplitude)
{
    if (!(width > 0.0)) throw Error("ring phantom width must be positive");
    if (!(r0 >= 0.0 && r0 < 1.0)) throw Error("ring phantom radius must lie in [0, 1)");
    Phantom p(model);
    p.kind_ = PhantomKind::smooth_ring;
    p.r0_ = r0;
    p.width_ = width;
    p.amplitude_ = amplitude;
    std::ostringstream s;
    s << "ring:" << r0 << "," << width << "," << amplitude;
    p.text_ = s.str();
    return p;
}

Phantom Phantom::zernike(const DiskModel& model, std::vector<ZernikeTerm> terms, bool weighted)
{
    if (terms.empty()) throw Error("zernike phantom needs at least one term");
    std::ostringstream s;
    s << (weighted ? "wzernike:" : "zernike:");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (t.n < 0 || t.k < 0 || t.k > t.n) {
            std::ostringstream msg;
            msg << "zernike phantom term (" << t.n << "," << t.k << ") needs 0 <= k <= n";
            throw IndexOutOfRange(msg.str());
        }
        s << (i ? ";" : "") << t.n << "," << t.k << "," << t.coeff.real() << "," << t.coeff.imag();
    }
    Phantom p(model);
    p.kind_ = PhantomKind::zernike_combo;
    p.terms_ = std::move(terms);
    p.weighted_ = weighted;
    p.text_ = s.str();
    return p;
}

Phantom Phantom::parse(const DiskModel& model, const std::string& text)
{
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? std::string() : text.substr(colon + 1);
    if (kind == "const") {
        if (args.empty()) return constant(model);
        return constant(model, number(args, text));
    }
    if (kind == "gaussian") {
        if (args.empty()) return gaussian(model, 0.0, 0.25);
        const auto v = numbers(args, 4, text);
        return gaussian(model, Complex(v[0], v[1]), v[2], v[3]);
    }
    if (kind == "ring") {
        if (args.empty()) return ring(model, 0.5, 0.08);
        const auto v = numbers(args, 3, text);
        return ring(model, v[0], v[1], v[2]);
    }
    if (kind == "zernike" || kind == "wzernike") {
        if (args.empty()) throw Error("phantom '" + text + "' needs terms n,k,re,im");
        std::vector<ZernikeTerm> terms;
        for (const auto& item : split(args, ';')) {
            const auto v = numbers(item, 4, text);
            if (v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) throw Error("phantom '" + text + "': n, k must be integers");
            terms.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), Complex(v[2], v[3])});
        }
        return zernike(model, std::move(terms), kind == "wzernike");
    }
    throw Error("unknown phantom '" + text + "' (expected const, gaussian, ring, zernike or wzernike)");
}

Complex Phantom::operator()(Complex z) const
{
    const double R = model_.radius();
    if (std::abs(z) > R * (1.0 + 1e-12)) throw OutOfDisk("phantom evaluated outside the disk");
    switch (kind_) {
    case PhantomKind::constant:
        return value_;
    case PhantomKind::gaussian_bump: {
        const double d2 = std::norm(z / R - center_);
        return amplitude_ * std::exp(-d2 / (2.0 * width_ * width_));
    }
    case PhantomKind::smooth_ring: {
        const double d = std::abs(z) / R - r0_;
        return amplitude_ * std::exp(-d * d / (2.0 * width_ * width_));
    }
    case PhantomKind::zernike_combo: {
        Complex acc{};
        for (const auto& t : terms_) acc += t.coeff * curved_zernike_hat(model_, t.n, t.k, z);
        return weighted_ ? model_.weight(z) * acc : acc;
    }
    }
    return {};
}

DiskFunction Phantom::function() const
{
    const Phantom copy = *this;
    return [copy](Complex z) { return copy(z); };
}

SpectralField Phantom::exact_coefficients(int degree) const
{
    if (!has_exact_coefficients()) throw Error("phantom '" + text_ + "' has no finite weighted-frame expansion");
    SpectralField f(model_, degree);
    for (const auto& t : terms_) {
        if (t.n > degree) throw IndexOutOfRange("phantom term degree exceeds the requested degree");
        f(t.n, t.k) += t.coeff;
    }
    return f;
}

} // namespace gxr

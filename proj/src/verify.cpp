#include "gxr/verify.hpp"

#include "gxr/inversion.hpp"
#include "gxr/oracles.hpp"
#include "gxr/phantom.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

namespace gxr {

namespace {

SpectralField random_field(const DiskModel& m, int degree, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SpectralField f(m, degree);
    for (auto& c : f.coeffs()) c = Complex(g(rng), g(rng));
    return f;
}

SpectralBoundary random_boundary(const DiskModel& m, int degree, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SpectralBoundary b(m, degree, 0);
    for (auto& c : b.coeffs()) c = Complex(g(rng), g(rng));
    return b;
}

double rel_diff(const std::vector<Complex>& a, const std::vector<Complex>& b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double rel_diff(const SpectralField& a, const SpectralField& b) { return rel_diff(a.coeffs(), b.coeffs()); }

using Parts = std::vector<Measurement>;

// --- individual checks -------------------------------------------------------

Parts check_singular(const DiskModel& m, int N, Frame frame, double c, double tol)
{
    const SinogramGrid grid = SinogramGrid::for_degree(m, N);
    const auto basis = forward_basis(m, N, frame, grid);
    double coeff_err = 0.0, leak = 0.0;
    for (int n = 0; n <= N; ++n) {
        const double a = std::sqrt(c / (n + 1));
        for (int k = 0; k <= n; ++k) {
            const SpectralBoundary g = analyze_boundary(basis[SpectralField::index(n, k)], N);
            coeff_err = std::max(coeff_err, std::abs(g(n, k) - a) / a);
            for (int p = 0; p <= N; ++p)
                for (int q = -g.margin(); q <= p + g.margin(); ++q)
                    if (p != n || q != k) leak = std::max(leak, std::abs(g(p, q)) / a);
        }
    }
    return {{"coefficient", coeff_err, tol}, {"leakage", leak, tol}};
}

Parts check_svd(const DiskModel& m) { return check_singular(m, 16, Frame::plain, 4.0 * kPi, 1e-8); }

Parts check_curved_singular(const DiskModel& m) { return check_singular(m, 12, Frame::weighted, m.c_const(), 1e-6); }

Parts check_norms(const DiskModel& m)
{
    const int N = 20;
    const DiskModel ref(0.0, 1.0);
    const DiskGrid flat = DiskGrid::for_degree(ref, N);
    const DiskGrid curved = DiskGrid::for_degree(m, N);
    const SinogramGrid sgrid = SinogramGrid::for_degree(m, N);
    const double R = m.radius();
    double e_flat = 0.0, e_curved = 0.0, e_psi = 0.0;
    for (int n = 0; n <= N; ++n) {
        for (int k = 0; k <= n; ++k) {
            double qf = 0.0, qc = 0.0;
            for (int i = 0; i < flat.n_rho(); ++i)
                for (int j = 0; j < flat.n_omega(); ++j)
                    qf += flat.dvol_weight(i) * std::norm(zernike(n, k, flat.point(i, j)));
            for (int i = 0; i < curved.n_rho(); ++i)
                for (int j = 0; j < curved.n_omega(); ++j)
                    qc += curved.dvol_weight(i) * m.weight(curved.rho(i)) * std::norm(curved_zernike(m, n, k, curved.point(i, j)));
            const double zf = kPi / (n + 1);
            const double zc = R * R / ((1.0 - m.lambda()) * (1.0 - m.lambda())) * kPi / (n + 1);
            e_flat = std::max(e_flat, std::abs(qf - zf) / zf);
            e_curved = std::max(e_curved, std::abs(qc - zc) / zc);
        }
        for (int k = -1; k <= n + 1; ++k) {
            double qp = 0.0;
            for (int i = 0; i < sgrid.n_beta(); ++i)
                for (int j = 0; j < sgrid.n_alpha(); ++j) qp += sgrid.weight(j) * std::norm(psi(m, n, k, sgrid.coord(i, j)));
            const double zp = R / (1.0 + m.lambda()) / 4.0;
            e_psi = std::max(e_psi, std::abs(qp - zp) / zp);
        }
    }
    return {{"zernike", e_flat, 1e-10}, {"curved zernike", e_curved, 1e-10}, {"psi", e_psi, 1e-10}};
}

Parts check_main_relation(const DiskModel& m, unsigned seed)
{
    const int N = 8;
    const SpectralField f = random_field(m, N, seed);
    const DiskGrid grid = DiskGrid::for_degree(m, N);
    SpectralField cur = f;
    for (int it = 0; it < 2; ++it) {
        const SpectralField in = cur;
        const GridField out = normal_operator(m, [&](Complex z) { return evaluate(in, z, Frame::weighted); }, grid, N);
        cur = analyze_disk(out, N, Frame::plain);
    }
    const SpectralField lhs = apply_L_spectral(cur);
    SpectralField rhs = f;
    const double c2 = m.c_const() * m.c_const();
    for (auto& v : rhs.coeffs()) v *= c2;
    return {{"L (I0* I0 w)^2 f vs c^2 f", rel_diff(lhs, rhs), 1e-5}};
}

Parts check_intertwining_lemma(const DiskModel& m, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double R = m.radius();
    double e_beta = 0.0, e_alpha = 0.0, e_jac = 0.0;
    const double h = 1e-4;
    for (int t = 0; t < 10000; ++t) {
        const double rho = R * std::sqrt(u(rng)) * 0.999;
        const double omega = kTwoPi * u(rng);
        const double theta = kTwoPi * u(rng);
        // Curved footpoint from the independent marching construction; Euclidean one of Psi(rho, theta).
        const FanBeamCoord fk = oracle::footpoint_by_marching(m, rho, omega, omega + theta);
        const PsiImage p = psi_map(m, rho, theta);
        const FanBeamCoord fe = euclidean_footpoint(p.rho_prime, omega, omega + p.theta_prime);
        e_beta = std::max(e_beta, angle_distance(fk.beta, fe.beta));
        e_alpha = std::max(e_alpha, std::abs(s_map(m, fk.alpha) - fe.alpha));
        if (t % 10 == 0) {
            auto tp = [&](double x) { return psi_map(m, rho, x).theta_prime; };
            const double fd = (tp(theta - 2 * h) - 8 * tp(theta - h) + 8 * tp(theta + h) - tp(theta + 2 * h)) / (12 * h);
            const double k = m.kappa();
            const double jac = ((1 - k * rho * rho) / (1 + k * rho * rho)) * ((1 + m.lambda()) / (1 - m.lambda()))
                * s_map_derivative(m, fk.alpha);
            e_jac = std::max({e_jac, std::abs(jac - fd), std::abs(psi_theta_jacobian(m, rho, theta) - fd)});
        }
    }
    return {{"beta", e_beta, 1e-10}, {"s(alpha)", e_alpha, 1e-10}, {"jacobian", e_jac, 1e-6}};
}

Parts check_intertwining(const DiskModel& m, unsigned seed)
{
    const SpectralBoundary spec = random_boundary(m, 5, seed);
    const BoundaryFunction g = [&](const FanBeamCoord& c) { return evaluate(spec, c); };
    const BoundaryFunction t2g = [&](const FanBeamCoord& c) { return -apply_T2_pointwise(m, g, c); };
    const BoundaryFunction dg = [&](const FanBeamCoord& c) { return apply_D_pointwise(m, g, c); };
    const double R = m.radius();
    double e1 = 0.0, e2 = 0.0;
    for (const Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.3), Complex(0.1, -0.8), Complex(0.6, 0.6)}) {
        const Complex x = R * z;
        const Complex lhs = apply_L_pointwise(m, [&](Complex p) { return adjoint_star(m, g, p); }, x);
        const Complex rhs = adjoint_star(m, t2g, x);
        e1 = std::max(e1, std::abs(lhs - rhs) / std::abs(rhs));
        const Complex sharp = adjoint_sharp(m, g, x);
        const Complex l_sharp = sharp - apply_L_pointwise(m, [&](Complex p) { return adjoint_sharp(m, g, p); }, x);
        const Complex d_sharp = adjoint_sharp(m, dg, x);
        e2 = std::max(e2, std::abs(l_sharp - d_sharp) / std::abs(d_sharp));
    }
    return {{"L I0* g vs I0* (-T^2) g", e1, 1e-5}, {"(1 - L) I0# g vs I0# D g", e2, 1e-5}};
}

Parts check_inversion(const DiskModel& m, unsigned seed)
{
    const int N = 10;
    const SpectralField f = random_field(m, N, seed);
    const GridSinogram sino = forward(f, Frame::weighted, SinogramGrid::for_degree(m, N));
    const SpectralField a0 = alpha_reconstruct(m, sino, 0.0, N).field;
    const SpectralField a5 = alpha_reconstruct(m, sino, 0.5, N).field;
    const SpectralField a1 = alpha_reconstruct(m, sino, 1.0, N).field;
    const double pair = std::max({rel_diff(a0, a5), rel_diff(a1, a5), rel_diff(a0, a1)});
    const double rec = std::max({rel_diff(a0, f), rel_diff(a5, f), rel_diff(a1, f)});
    // Backprojection path at low degree, independent of the diagonal action of I0^*.
    const int Nq = 4;
    const SpectralField fq = random_field(m, Nq, seed + 1);
    const GridSinogram sq = forward(fq, Frame::weighted, SinogramGrid::for_degree(m, Nq));
    double quad = 0.0;
    for (double a : {0.0, 0.5, 1.0}) quad = std::max(quad, rel_diff(alpha_reconstruct_quadrature(m, sq, a, Nq), fq));
    return {{"pairwise agreement", pair, 1e-9}, {"recovery", rec, 1e-7}, {"backprojection path recovery", quad, 1e-7}};
}

Parts check_regularization(const DiskModel& m, unsigned seed)
{
    const int N = 10, nc = 6;
    const SpectralField f = random_field(m, N, seed);
    const GridSinogram sino = forward(f, Frame::weighted, SinogramGrid::for_degree(m, N));
    const SpectralBoundary g = analyze_sinogram(sino, N);
    const SpectralField exact = alpha_reconstruct(g, 0.5);
    const double e_id = rel_diff(regularized_reconstruct(g, SpectralFilter::identity()), exact);
    const double e_cut = rel_diff(regularized_reconstruct(g, SpectralFilter::cutoff(nc)), exact.resized(nc).resized(N));
    return {{"F = 1 vs exact inversion", e_id, 1e-9}, {"cutoff vs truncation", e_cut, 1e-12}};
}

SpectralBoundary quadrature_sinogram_spectrum(const DiskModel& m, const SpectralField& f)
{
    const int N = f.degree();
    return analyze_sinogram(forward(f, Frame::weighted, SinogramGrid::for_degree(m, N, kKernelMargin)), N);
}

Parts check_range(const DiskModel& m, unsigned seed)
{
    const SpectralBoundary g = quadrature_sinogram_spectrum(m, random_field(m, 10, seed));
    return {{"|C- I0 f| / |I0 f|", cminus_spectral(g).norm() / g.norm(), 1e-6}};
}

Parts check_stability(const DiskModel& m, unsigned seed)
{
    const SpectralField f = random_field(m, 10, seed);
    const SpectralBoundary g = quadrature_sinogram_spectrum(m, f);
    Parts out;
    for (double s : {0.0, 1.0}) {
        const double lhs = sobolev_norm_disk(s, f);
        const double rhs = sobolev_norm_boundary_T(s + 0.5, g) / std::sqrt(m.c_const());
        out.push_back({"s = " + std::to_string(static_cast<int>(s)), std::abs(lhs - rhs) / lhs, 1e-6});
    }
    return out;
}

double grad_norm_sq_by_quadrature(int n, int k)
{
    const DiskModel ref(0.0, 1.0);
    const DiskGrid grid = DiskGrid::for_degree(ref, std::max(n, 1));
    double q = 0.0;
    for (int i = 0; i < grid.n_rho(); ++i)
        for (int j = 0; j < grid.n_omega(); ++j)
            q += grid.dvol_weight(i) * std::norm(oracle::zernike_dz_jacobi(n, k, grid.point(i, j)));
    return q;
}

Parts check_derivatives(const DiskModel& m)
{
    const int N = 10;
    double e_rec = 0.0, e_chain = 0.0, e_norm = 0.0;
    for (int n = 0; n <= N; ++n) {
        for (int k = 0; k <= n; ++k) {
            const SpectralField unit = SpectralField::unit(m, N, n, k);
            const double nz = zernike_norm(n, k);
            const SpectralField ez = analyze_disk(m, [&](Complex z) { return oracle::zernike_dz(n, k, z) / nz; }, N - 1);
            const SpectralField ezb = analyze_disk(m, [&](Complex z) { return oracle::zernike_dzbar(n, k, z) / nz; }, N - 1);
            const SpectralField dz = dz_spectral(unit), dzb = dzbar_spectral(unit);
            for (std::size_t i = 0; i < dz.coeffs().size(); ++i)
                e_rec = std::max({e_rec, std::abs(dz.coeffs()[i] - ez.coeffs()[i]), std::abs(dzb.coeffs()[i] - ezb.coeffs()[i])});
            const int P = derivative_index_bound(n, k);
            const double expect = kPi * (P + 1) * (n - P);
            const double q = grad_norm_sq_by_quadrature(n, k);
            e_norm = std::max(e_norm, expect > 0.0 ? std::abs(q - expect) / expect : q);
        }
        SpectralField f = SpectralField::unit(m, N, n, 0);
        for (int k = 1; k <= n; ++k) {
            f = beurling(f);
            e_chain = std::max(e_chain, rel_diff(f, SpectralField::unit(m, N, n, k)));
        }
    }
    return {{"recurrences vs symbolic", e_rec, 1e-12}, {"Beurling chain", e_chain, 0.0}, {"|dZ|^2 vs quadrature", e_norm, 1e-8}};
}

Parts check_unboundedness(const DiskModel& m)
{
    double prev = 0.0, e_grad = 0.0;
    int violations = 0;
    for (int n = 2; n <= 40; n += 2) {
        const SpectralField z = SpectralField::unit(m, n, n, n / 2);
        const double ratio = h1_norm_reference(z) / sobolev_norm_disk(1.0, z);
        if (!(ratio > prev)) ++violations;
        prev = ratio;
        const double expect = kPi * n * (n + 2) / 4.0;
        const double d = dz_spectral(z).norm() * zernike_norm(n, n / 2);
        e_grad = std::max({e_grad, std::abs(grad_norm_sq_by_quadrature(n, n / 2) - expect) / expect,
                           std::abs(d * d - expect) / expect});
    }
    return {{"ratio not increasing (count)", static_cast<double>(violations), 0.0}, {"gradient part", e_grad, 1e-8}};
}

Parts check_end_to_end(const DiskModel& m)
{
    const auto t0 = std::chrono::steady_clock::now();
    const Phantom phantom = Phantom::parse(m, "gaussian:0.1,0.05,0.25,1");
    const int N = 40;
    const GridSinogram sino = forward(phantom.function(), SinogramGrid(m, 256, 256));
    const Reconstruction r = svd_reconstruct(m, sino, N);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const DiskGrid grid = DiskGrid::for_degree(m, 2 * N);
    const GridField rec = synthesize_disk(r.field, grid, Frame::weighted);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < grid.n_rho(); ++i) {
        for (int j = 0; j < grid.n_omega(); ++j) {
            const Complex v = phantom(grid.point(i, j));
            num += grid.dvol_weight(i) * std::norm(rec.at(i, j) - v);
            den += grid.dvol_weight(i) * std::norm(v);
        }
    }
    return {{"relative L2 error", std::sqrt(num / den), 1e-3}, {"wall seconds", seconds, 120.0}};
}

bool applies(const std::string& name, const DiskModel& m)
{
    if (name == "svd" || name == "derivatives" || name == "unboundedness") return m.is_reference();
    if (name == "intertwining") return m.kappa() == 0.0;
    return true;
}

std::string model_text(const DiskModel& m)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%g, %g)", m.kappa(), m.radius());
    return buf;
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

} // namespace

std::string to_string(CheckStatus status)
{
    switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_applicable: return "n/a";
    }
    return "?";
}

std::vector<DiskModel> default_models()
{
    return {DiskModel(0.0, 1.0), DiskModel(0.5, 1.0), DiskModel(-0.5, 1.0),
            DiskModel(0.9, 1.0), DiskModel(-0.9, 1.0), DiskModel(0.3, 1.5)};
}

const std::vector<std::string>& check_names()
{
    static const std::vector<std::string> names = {
        "svd",       "singular",  "norms",       "main_relation", "intertwining_lemma", "intertwining", "inversion",
        "regularization", "range", "stability", "derivatives",   "unboundedness",      "end_to_end"};
    return names;
}

CheckResult run_check(const std::string& name, const DiskModel& model, const VerifyOptions& options)
{
    const auto& names = check_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) throw Error("unknown check '" + name + "'");
    CheckResult r{name, model, CheckStatus::not_applicable, 0.0, 0.0, 0.0, {}, {}};
    if (!applies(name, model)) {
        r.note = name == "intertwining" ? "stated for kappa = 0" : "reference disk only";
        return r;
    }
    const unsigned seed = options.seed;
    const auto t0 = std::chrono::steady_clock::now();
    Parts parts;
    if (name == "svd") parts = check_svd(model);
    else if (name == "singular") parts = check_curved_singular(model);
    else if (name == "norms") parts = check_norms(model);
    else if (name == "main_relation") parts = check_main_relation(model, seed);
    else if (name == "intertwining_lemma") parts = check_intertwining_lemma(model, seed);
    else if (name == "intertwining") parts = check_intertwining(model, seed);
    else if (name == "inversion") parts = check_inversion(model, seed);
    else if (name == "regularization") parts = check_regularization(model, seed);
    else if (name == "range") parts = check_range(model, seed);
    else if (name == "stability") parts = check_stability(model, seed);
    else if (name == "derivatives") parts = check_derivatives(model);
    else if (name == "unboundedness") parts = check_unboundedness(model);
    else parts = check_end_to_end(model);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    r.status = CheckStatus::pass;
    double worst = -1.0;
    for (auto& p : parts) {
        p.tolerance *= options.tolerance_scale;
        const bool ok = p.error <= p.tolerance; // NaN fails
        if (!ok) r.status = CheckStatus::fail;
        const double ratio = !ok ? HUGE_VAL : p.tolerance > 0.0 ? p.error / p.tolerance : 0.0;
        if (ratio > worst) {
            worst = ratio;
            r.error = p.error;
            r.tolerance = p.tolerance;
        }
    }
    r.measurements = std::move(parts);
    return r;
}

VerificationReport run_verification(const VerifyOptions& options, const std::function<void(const CheckResult&)>& progress)
{
    if (!(options.tolerance_scale > 0.0)) throw Error("tolerance scale must be positive");
    std::vector<std::string> selected;
    for (const auto& name : check_names())
        if (options.only.empty() || std::find(options.only.begin(), options.only.end(), name) != options.only.end())
            selected.push_back(name);
    for (const auto& name : options.only)
        if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
            throw Error("unknown check '" + name + "'");
    const std::vector<DiskModel> models = options.models.empty() ? default_models() : options.models;

    VerificationReport report;
    for (const auto& model : models) {
        for (const auto& name : selected) {
            report.results.push_back(run_check(name, model, options));
            if (progress) progress(report.results.back());
        }
    }
    return report;
}

bool VerificationReport::passed() const
{
    return count(CheckStatus::fail) == 0;
}

std::size_t VerificationReport::count(CheckStatus status) const
{
    return static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(), [&](const CheckResult& r) { return r.status == status; }));
}

std::string VerificationReport::text() const
{
    std::string out;
    char line[256];
    for (const auto& r : results) {
        if (r.status == CheckStatus::not_applicable) {
            std::snprintf(line, sizeof line, "%-4s  %-18s %-12s %s\n", "n/a", r.name.c_str(), model_text(r.model).c_str(),
                          r.note.c_str());
            out += line;
            continue;
        }
        std::snprintf(line, sizeof line, "%-4s  %-18s %-12s error %s  tol %s  (%.1fs)\n",
                      r.status == CheckStatus::pass ? "PASS" : "FAIL", r.name.c_str(), model_text(r.model).c_str(),
                      sci(r.error).c_str(), sci(r.tolerance).c_str(), r.seconds);
        out += line;
        for (const auto& m : r.measurements) {
            std::snprintf(line, sizeof line, "        %-32s %s <= %s%s\n", m.label.c_str(), sci(m.error).c_str(),
                          sci(m.tolerance).c_str(), m.error <= m.tolerance ? "" : "  <-- fails");
            out += line;
        }
    }
    std::snprintf(line, sizeof line, "%zu passed, %zu failed, %zu not applicable\n", count(CheckStatus::pass),
                  count(CheckStatus::fail), count(CheckStatus::not_applicable));
    out += line;
    return out;
}

std::string VerificationReport::json() const
{
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json j = {{"name", r.name},
                            {"kappa", r.model.kappa()},
                            {"radius", r.model.radius()},
                            {"status", to_string(r.status)}};
        if (r.status != CheckStatus::not_applicable) {
            j["error"] = r.error;
            j["tolerance"] = r.tolerance;
            j["seconds"] = r.seconds;
            nlohmann::json ms = nlohmann::json::array();
            for (const auto& m : r.measurements)
                ms.push_back({{"label", m.label}, {"error", m.error}, {"tolerance", m.tolerance}});
            j["measurements"] = ms;
        } else {
            j["note"] = r.note;
        }
        checks.push_back(j);
    }
    const nlohmann::json doc = {{"passed", passed()},
                                {"counts",
                                 {{"pass", count(CheckStatus::pass)},
                                  {"fail", count(CheckStatus::fail)},
                                  {"not_applicable", count(CheckStatus::not_applicable)}}},
                                {"checks", checks}};
    return doc.dump(2) + "\n";
}

} // namespace gxr

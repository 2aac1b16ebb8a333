// gxr: simulate, reconstruct and verify geodesic X-ray data on constant-curvature disks.

#include "gxr/inversion.hpp"
#include "gxr/io.hpp"
#include "gxr/phantom.hpp"
#include "gxr/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace gxr;

namespace {

enum Exit { ok = 0, check_failed = 1, bad_flags = 2, io_failure = 3, model_mismatch = 4 };

struct UsageError : Error {
    using Error::Error;
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string with_extension(const std::string& path, const std::string& ext)
{
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot) + ext;
    return path + ext;
}

// "k,R" pairs separated by ';' or given as separate values.
std::vector<DiskModel> parse_models(const std::vector<std::string>& items)
{
    std::vector<DiskModel> models;
    for (const auto& item : items) {
        double k = 0.0, r = 0.0;
        char comma = 0, extra = 0;
        std::istringstream in(item);
        if (!(in >> k >> comma >> r) || comma != ',' || (in >> extra))
            throw UsageError("--models expects kappa,radius pairs, got '" + item + "'");
        models.emplace_back(k, r);
    }
    return models;
}

// --- project -----------------------------------------------------------------

struct ProjectArgs {
    double kappa = 0.0;
    double radius = 1.0;
    std::string phantom = "gaussian";
    int n_beta = 256;
    int n_alpha = 256;
    int nodes_per_ray = 256;
    double noise = 0.0;
    unsigned long long seed = 0;
    std::string out = "sinogram.gxr";
    std::string format = "bin";
};

int run_project(const ProjectArgs& a)
{
    const DiskModel model(a.kappa, a.radius);
    const Phantom phantom = Phantom::parse(model, a.phantom);
    RaySamplingConfig cfg;
    cfg.nodes_per_ray = a.nodes_per_ray;
    cfg.validate();
    GridSinogram sino = forward(phantom.function(), SinogramGrid(model, a.n_beta, a.n_alpha), cfg);
    if (a.noise > 0.0) {
        std::mt19937_64 rng(a.seed);
        std::normal_distribution<double> g(0.0, a.noise);
        for (auto& v : sino.values) {
            const double re = g(rng);
            const double im = g(rng);
            v += Complex(re, im);
        }
    }
    const Metadata meta = {{"phantom", phantom.description()},
                           {"noise", fmt(a.noise)},
                           {"seed", std::to_string(a.seed)},
                           {"nodes_per_ray", std::to_string(a.nodes_per_ray)}};
    const std::string path = a.format == "csv" && format_for_path(a.out) != FileFormat::csv
        ? with_extension(a.out, ".csv")
        : a.out;
    write_sinogram(path, sino, meta);
    std::cout << "wrote " << path << ": " << a.n_beta << " x " << a.n_alpha << " samples, kappa " << a.kappa
              << ", radius " << a.radius << ", phantom " << phantom.description() << ", seed " << a.seed << "\n";
    return ok;
}

// --- reconstruct -------------------------------------------------------------

struct ReconstructArgs {
    std::string in;
    std::optional<double> kappa;
    std::optional<double> radius;
    int degree = 0;
    std::string method;
    std::string filter;
    std::optional<double> alpha_exponent;
    std::string out = "field.gxf";
    std::vector<std::string> formats{"bin"};
    std::string coefficients;
    int preview_size = 256;
};

int run_reconstruct(const ReconstructArgs& a)
{
    int chosen = 0;
    chosen += !a.method.empty();
    chosen += !a.filter.empty();
    chosen += a.alpha_exponent.has_value();
    if (chosen > 1) throw UsageError("use only one of --method, --filter, --alpha-exponent");

    Metadata in_meta;
    const GridSinogram sino = read_sinogram(a.in, &in_meta);
    const DiskModel& file_model = sino.grid.model();
    const DiskModel model(a.kappa.value_or(file_model.kappa()), a.radius.value_or(file_model.radius()));

    const int max_degree = boundary_degree_for(sino.grid, kKernelMargin);
    const int degree = a.degree > 0 ? a.degree : std::min(max_degree, 40);
    if (degree < 0) throw UsageError("sinogram grid is too coarse for any reconstruction");

    std::string method = a.method.empty() ? "alpha:0.5" : a.method;
    if (!a.filter.empty()) method = "filter:" + a.filter;
    if (a.alpha_exponent) method = "alpha:" + fmt(*a.alpha_exponent);

    Reconstruction rec{SpectralField(model, 0)};
    try {
        if (method == "svd") {
            rec = svd_reconstruct(model, sino, degree);
        } else if (method.rfind("alpha:", 0) == 0) {
            std::size_t used = 0;
            const std::string arg = method.substr(6);
            double alpha = 0.0;
            try {
                alpha = std::stod(arg, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != arg.size()) throw UsageError("bad alpha exponent in --method " + method);
            rec = alpha_reconstruct(model, sino, alpha, degree);
        } else if (method.rfind("filter:", 0) == 0) {
            rec = regularized_reconstruct(model, sino, SpectralFilter::parse(method.substr(7)), degree);
        } else {
            throw UsageError("--method must be svd, alpha:<a> or filter:<grammar>, got '" + method + "'");
        }
    } catch (const ResolutionTooLow& e) {
        throw UsageError(std::string(e.what()) + " (largest degree for this grid: " + std::to_string(max_degree) + ")");
    }

    // Residual misfit in sample space: sinogram of the reconstruction against the data.
    const GridSinogram fit = synthesize_boundary(forward_spectral(rec.field, kKernelMargin), sino.grid);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < sino.grid.n_beta(); ++i) {
        for (int j = 0; j < sino.grid.n_alpha(); ++j) {
            num += sino.grid.weight(j) * std::norm(fit.at(i, j) - sino.at(i, j));
            den += sino.grid.weight(j) * std::norm(sino.at(i, j));
        }
    }
    const double misfit = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);

    Metadata meta = in_meta;
    meta["method"] = method;
    meta["degree"] = std::to_string(degree);
    meta["source"] = a.in;

    bool want_bin = false, want_csv = false, want_pgm = false;
    for (const auto& f : a.formats) {
        if (f == "bin") want_bin = true;
        else if (f == "csv") want_csv = true;
        else if (f == "pgm") want_pgm = true;
        else throw UsageError("--format accepts bin, csv, pgm; got '" + f + "'");
    }
    if (!want_bin && !want_csv && !want_pgm) want_bin = true;

    std::vector<std::string> written;
    if (want_bin || want_csv) {
        // The field itself, f = w * sum f_{n,k} Zhat_{n,k}.
        const GridField field = synthesize_disk(rec.field, DiskGrid::for_degree(model, degree), Frame::weighted);
        if (want_bin) {
            const std::string p = format_for_path(a.out) == FileFormat::csv ? with_extension(a.out, ".gxf") : a.out;
            write_field(p, field, meta);
            written.push_back(p);
        }
        if (want_csv) {
            const std::string p = with_extension(a.out, ".csv");
            write_field(p, field, meta);
            written.push_back(p);
        }
    }
    if (want_pgm) {
        const std::string p = with_extension(a.out, ".pgm");
        write_pgm(p, rec.field, Frame::weighted, a.preview_size, meta);
        written.push_back(p);
    }
    if (!a.coefficients.empty()) {
        write_coefficients_csv(a.coefficients, rec.field, meta);
        written.push_back(a.coefficients);
    }

    std::printf("method %s, degree %d, kappa %g, radius %g\n", method.c_str(), degree, model.kappa(), model.radius());
    std::printf("residual sinogram misfit %.6e\n", misfit);
    std::printf("kernel energy fraction %.6e\n", rec.kernel_fraction);
    for (const auto& p : written) std::printf("wrote %s\n", p.c_str());
    if (rec.kernel_leak)
        std::fprintf(stderr, "warning: %.1f%% of the sinogram energy lies outside the range of the transform\n",
                     100.0 * rec.kernel_fraction);
    return ok;
}

// --- verify ------------------------------------------------------------------

struct VerifyArgs {
    std::vector<std::string> models;
    std::vector<std::string> only;
    double tolerance_scale = 1.0;
    unsigned seed = 20240601;
    std::string json;
    bool quiet = false;
};

int run_verify(const VerifyArgs& a)
{
    VerifyOptions opt;
    opt.models = a.models.empty() ? default_models() : parse_models(a.models);
    opt.only = a.only;
    opt.tolerance_scale = a.tolerance_scale;
    opt.seed = a.seed;
    for (const auto& name : opt.only)
        if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
            throw UsageError("unknown check '" + name + "' for --only");

    const VerificationReport report = run_verification(opt, [&](const CheckResult& r) {
        if (a.quiet) return;
        const VerificationReport one{{r}};
        const std::string t = one.text();
        std::cout << t.substr(0, t.rfind('\n', t.size() - 2) + 1) << std::flush;
    });
    const std::string t = report.text();
    std::cout << (a.quiet ? t : t.substr(t.rfind('\n', t.size() - 2) + 1));
    if (!a.json.empty()) write_atomic(a.json, report.json());
    return report.passed() ? ok : check_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Geodesic X-ray transform on constant-curvature disks: simulate, reconstruct, verify."};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    ProjectArgs pa;
    auto* project = app.add_subcommand("project", "Forward-project a phantom to a sinogram file");
    project->add_option("--kappa", pa.kappa, "Curvature parameter kappa")->required();
    project->add_option("--radius", pa.radius, "Disk radius R")->required();
    project->add_option("--phantom", pa.phantom,
                        "const[:v] | gaussian[:cx,cy,width,amp] | ring[:r0,width,amp] | "
                        "zernike:n,k,re,im[;...] | wzernike:n,k,re,im[;...] (lengths in units of R)")
        ->capture_default_str();
    project->add_option("--nbeta", pa.n_beta, "Boundary angle samples")->check(CLI::Range(4, 1 << 16))->capture_default_str();
    project->add_option("--nalpha", pa.n_alpha, "Fan angle samples")->check(CLI::Range(4, 1 << 16))->capture_default_str();
    project->add_option("--nodes", pa.nodes_per_ray, "Gauss nodes per ray")->check(CLI::Range(2, 1 << 16))->capture_default_str();
    project->add_option("--noise", pa.noise, "Standard deviation of Gaussian noise per real component")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    project->add_option("--seed", pa.seed, "Noise seed (recorded in the output metadata)")->capture_default_str();
    project->add_option("--out", pa.out, "Output path (.csv selects CSV)")->capture_default_str();
    project->add_option("--format", pa.format, "bin or csv")->check(CLI::IsMember({"bin", "csv"}))->capture_default_str();

    ReconstructArgs ra;
    auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct a field from a sinogram file");
    reconstruct->add_option("--in", ra.in, "Input sinogram (GXR1 binary or CSV)")->required();
    reconstruct->add_option("--kappa", ra.kappa, "Expected kappa; must match the file");
    reconstruct->add_option("--radius", ra.radius, "Expected radius; must match the file");
    reconstruct->add_option("--degree", ra.degree, "Reconstruction degree N (default: min(40, largest the grid resolves))")
        ->check(CLI::Range(1, 4096));
    reconstruct->add_option("--method", ra.method, "svd | alpha:<a> | filter:<grammar> (default alpha:0.5)");
    reconstruct->add_option("--filter", ra.filter, "Shorthand for --method filter:<grammar>, e.g. cosine:20, tikhonov:0.01");
    reconstruct->add_option("--alpha-exponent", ra.alpha_exponent, "Shorthand for --method alpha:<a>");
    reconstruct->add_option("--out", ra.out, "Output field path")->capture_default_str();
    reconstruct->add_option("--format", ra.formats, "Any of bin, csv, pgm (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    reconstruct->add_option("--coefficients", ra.coefficients, "Also write the n,k,re,im coefficient table here");
    reconstruct->add_option("--preview-size", ra.preview_size, "PGM preview edge length in pixels")
        ->check(CLI::Range(2, 8192))
        ->capture_default_str();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run the invariant and accuracy suite");
    verify->add_option("--models", va.models, "kappa,radius pairs separated by ';' (default: six standard models)")
        ->delimiter(';');
    verify->add_option("--only", va.only, "Comma separated subset of: " + [] {
        std::string s;
        for (const auto& n : check_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }())->delimiter(',');
    verify->add_option("--tolerance-scale", va.tolerance_scale, "Multiply every tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_option("--seed", va.seed, "Seed for random test fields")->capture_default_str();
    verify->add_option("--json", va.json, "Write the machine-readable report here");
    verify->add_flag("--quiet", va.quiet, "Print the report only at the end");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const auto active = app.get_subcommands();
        std::cerr << (active.empty() ? app.help() : active.front()->help());
        return bad_flags;
    }

    try {
        if (*project) return run_project(pa);
        if (*reconstruct) return run_reconstruct(ra);
        if (*verify) return run_verify(va);
    } catch (const ModelMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return model_mismatch;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return io_failure;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return io_failure;
    } catch (const Error& e) {
        // Invalid models, phantoms, filters, degrees: all come from the flags.
        std::cerr << "error: " << e.what() << "\n";
        return bad_flags;
    }
    return bad_flags;
}

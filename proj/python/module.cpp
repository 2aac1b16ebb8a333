#include "gxr/inversion.hpp"
#include "gxr/io.hpp"
#include "gxr/parallel.hpp"
#include "gxr/phantom.hpp"
#include "gxr/verify.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

namespace py = pybind11;
using namespace gxr;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexArray to_array(const std::vector<Complex>& values, std::vector<py::ssize_t> shape)
{
    ComplexArray out(shape);
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

GridSinogram from_array(const DiskModel& model, const ComplexArray& data)
{
    if (data.ndim() != 2) throw py::value_error("sinogram must be a 2-d array (n_beta, n_alpha)");
    GridSinogram sino(SinogramGrid(model, static_cast<int>(data.shape(0)), static_cast<int>(data.shape(1))));
    std::copy(data.data(), data.data() + data.size(), sino.values.begin());
    return sino;
}

// Applies f elementwise over an array of complex points.
template <typename F>
ComplexArray map_points(const ComplexArray& z, F&& f)
{
    ComplexArray out(std::vector<py::ssize_t>(z.shape(), z.shape() + z.ndim()));
    const Complex* in = z.data();
    Complex* dst = out.mutable_data();
    for (py::ssize_t i = 0; i < z.size(); ++i) dst[i] = f(in[i]);
    return out;
}

struct PyReconstruction {
    Reconstruction rec;

    ComplexArray coefficients() const
    {
        return to_array(rec.field.coeffs(), {static_cast<py::ssize_t>(rec.field.coeffs().size())});
    }
};

PyReconstruction reconstruct(const DiskModel& model, const ComplexArray& data, int degree, const std::string& method)
{
    const GridSinogram sino = from_array(model, data);
    py::gil_scoped_release release;
    if (method == "svd") return {svd_reconstruct(model, sino, degree)};
    if (method.rfind("alpha:", 0) == 0) return {alpha_reconstruct(model, sino, std::stod(method.substr(6)), degree)};
    if (method.rfind("filter:", 0) == 0)
        return {regularized_reconstruct(model, sino, SpectralFilter::parse(method.substr(7)), degree)};
    throw Error("method must be svd, alpha:<a> or filter:<grammar>, got '" + method + "'");
}

} // namespace

PYBIND11_MODULE(_gxr, m)
{
    m.doc() = "Geodesic X-ray transform on constant-curvature disks";

    auto base = py::register_exception<Error>(m, "GxrError", PyExc_RuntimeError);
    py::register_exception<SimplicityViolation>(m, "SimplicityViolation", base.ptr());
    py::register_exception<NonpositiveRadius>(m, "NonpositiveRadius", base.ptr());
    py::register_exception<OutOfDisk>(m, "OutOfDisk", base.ptr());
    py::register_exception<ResolutionTooLow>(m, "ResolutionTooLow", base.ptr());
    py::register_exception<FilterOverflow>(m, "FilterOverflow", base.ptr());
    py::register_exception<ModelMismatch>(m, "ModelMismatch", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::class_<DiskModel>(m, "DiskModel")
        .def(py::init<double, double>(), py::arg("kappa"), py::arg("radius"))
        .def_property_readonly("kappa", &DiskModel::kappa)
        .def_property_readonly("radius", &DiskModel::radius)
        .def_property_readonly("lam", &DiskModel::lambda)
        .def_property_readonly("c", &DiskModel::c_const)
        .def_property_readonly("measure_factor", &DiskModel::measure_factor)
        .def("weight", py::overload_cast<double>(&DiskModel::weight, py::const_), py::arg("rho"))
        .def("__eq__", [](const DiskModel& a, const DiskModel& b) { return a == b; })
        .def("__repr__", [](const DiskModel& d) {
            return "DiskModel(kappa=" + py::repr(py::float_(d.kappa())).cast<std::string>()
                + ", radius=" + py::repr(py::float_(d.radius())).cast<std::string>() + ")";
        });

    m.def("sinogram_grid", [](const DiskModel& model, int n_beta, int n_alpha) {
        const SinogramGrid g(model, n_beta, n_alpha);
        std::vector<double> beta(n_beta), alpha(n_alpha);
        for (int i = 0; i < n_beta; ++i) beta[i] = g.beta(i);
        for (int j = 0; j < n_alpha; ++j) alpha[j] = g.alpha(j);
        return py::make_tuple(py::array_t<double>(n_beta, beta.data()), py::array_t<double>(n_alpha, alpha.data()));
    }, py::arg("model"), py::arg("n_beta"), py::arg("n_alpha"),
       "Sample angles (beta, alpha) of the n_beta x n_alpha sinogram grid.");

    m.def("project", [](const DiskModel& model, const std::string& phantom, int n_beta, int n_alpha, int nodes_per_ray,
                        double noise, unsigned long long seed) {
        const Phantom p = Phantom::parse(model, phantom);
        RaySamplingConfig cfg;
        cfg.nodes_per_ray = nodes_per_ray;
        cfg.validate();
        GridSinogram sino(SinogramGrid(model, n_beta, n_alpha));
        {
            py::gil_scoped_release release;
            sino = forward(p.function(), sino.grid, cfg);
            if (noise > 0.0) {
                std::mt19937_64 rng(seed);
                std::normal_distribution<double> g(0.0, noise);
                for (auto& v : sino.values) {
                    const double re = g(rng);
                    const double im = g(rng);
                    v += Complex(re, im);
                }
            }
        }
        return to_array(sino.values, {n_beta, n_alpha});
    }, py::arg("model"), py::arg("phantom"), py::arg("n_beta") = 256, py::arg("n_alpha") = 256,
       py::arg("nodes_per_ray") = 256, py::arg("noise") = 0.0, py::arg("seed") = 0,
       "Sinogram of a phantom (same grammar and noise model as the command line).");

    m.def("phantom", [](const DiskModel& model, const std::string& phantom, const ComplexArray& z) {
        const Phantom p = Phantom::parse(model, phantom);
        return map_points(z, [&](Complex x) { return p(x); });
    }, py::arg("model"), py::arg("phantom"), py::arg("z"), "Phantom values at complex points z.");

    py::class_<PyReconstruction>(m, "Reconstruction")
        .def_property_readonly("coefficients", &PyReconstruction::coefficients,
                               "Weighted-frame coefficients, index n(n+1)/2 + k")
        .def_property_readonly("degree", [](const PyReconstruction& r) { return r.rec.field.degree(); })
        .def_property_readonly("kernel_fraction", [](const PyReconstruction& r) { return r.rec.kernel_fraction; })
        .def_property_readonly("kernel_leak", [](const PyReconstruction& r) { return r.rec.kernel_leak; })
        .def("coefficient", [](const PyReconstruction& r, int n, int k) { return r.rec.field(n, k); })
        .def("evaluate", [](const PyReconstruction& r, const ComplexArray& z) {
            return map_points(z, [&](Complex x) { return evaluate(r.rec.field, x, Frame::weighted); });
        }, py::arg("z"), "Reconstructed function at complex points z.");

    m.def("reconstruct", &reconstruct, py::arg("model"), py::arg("sinogram"), py::arg("degree"),
          py::arg("method") = "alpha:0.5", "Reconstruct from an (n_beta, n_alpha) sinogram on the standard grid.");

    m.def("singular_value", &singular_value, py::arg("model"), py::arg("n"));
    m.def("zernike", [](int n, int k, const ComplexArray& z) {
        return map_points(z, [&](Complex x) { return zernike(n, k, x); });
    }, py::arg("n"), py::arg("k"), py::arg("z"));
    m.def("curved_zernike_hat", [](const DiskModel& model, int n, int k, const ComplexArray& z) {
        return map_points(z, [&](Complex x) { return curved_zernike_hat(model, n, k, x); });
    }, py::arg("model"), py::arg("n"), py::arg("k"), py::arg("z"));
    m.def("psi_hat", [](const DiskModel& model, int n, int k, double beta, double alpha) {
        return psi_hat(model, n, k, {beta, alpha});
    }, py::arg("model"), py::arg("n"), py::arg("k"), py::arg("beta"), py::arg("alpha"));

    m.def("write_sinogram", [](const std::string& path, const DiskModel& model, const ComplexArray& data,
                               const Metadata& meta) { write_sinogram(path, from_array(model, data), meta); },
          py::arg("path"), py::arg("model"), py::arg("sinogram"), py::arg("metadata") = Metadata{});
    m.def("read_sinogram", [](const std::string& path) {
        Metadata meta;
        const GridSinogram s = read_sinogram(path, &meta);
        return py::make_tuple(s.grid.model(), to_array(s.values, {s.grid.n_beta(), s.grid.n_alpha()}), meta);
    }, py::arg("path"), "Returns (model, sinogram, metadata).");

    m.def("check_names", &check_names);
    m.def("_verify_json", [](const std::vector<std::pair<double, double>>& models, const std::vector<std::string>& only,
                             double tolerance_scale, unsigned seed) {
        VerifyOptions o;
        for (const auto& [k, r] : models) o.models.emplace_back(k, r);
        o.only = only;
        o.tolerance_scale = tolerance_scale;
        o.seed = seed;
        py::gil_scoped_release release;
        return run_verification(o).json();
    });

    m.def("set_max_threads", &set_max_threads, py::arg("n"), "Cap worker threads; 0 restores the default.");
    m.def("max_threads", &max_threads);
}

// Python bindings for the main operations: geometry and contrast maps,
// Cauchy-data synthesis, noise, the four imaging functionals, persistence,
// and the experiment runner.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "osm/data.hpp"
#include "osm/errors.hpp"
#include "osm/experiment.hpp"
#include "osm/forward.hpp"
#include "osm/imaging.hpp"
#include "osm/specfun.hpp"

namespace py = pybind11;
using namespace osm;

PYBIND11_MODULE(_osm2d, m) {
    m.doc() = "2D acoustic scattering: Lippmann-Schwinger data synthesis and "
              "orthogonality-sampling reconstruction";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataFormatError>(m, "DataFormatError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    // special functions
    m.def("bessel_j0", &specfun::bessel_j0, py::arg("x"));
    m.def("bessel_j1", &specfun::bessel_j1, py::arg("x"));
    m.def("bessel_y0", &specfun::bessel_y0, py::arg("x"));
    m.def("bessel_y1", &specfun::bessel_y1, py::arg("x"));
    m.def("hankel1_0", &specfun::hankel1_0, py::arg("x"));
    m.def("hankel1_1", &specfun::hankel1_1, py::arg("x"));

    // geometry
    py::class_<Point2>(m, "Point2")
        .def(py::init<double, double>(), py::arg("x1"), py::arg("x2"))
        .def_readwrite("x1", &Point2::x1)
        .def_readwrite("x2", &Point2::x2)
        .def("__repr__", [](const Point2& p) {
            return "Point2(" + std::to_string(p.x1) + ", " + std::to_string(p.x2) + ")";
        });

    py::class_<Direction2>(m, "Direction2")
        .def(py::init<double, double>(), py::arg("x1"), py::arg("x2"))
        .def_static("from_angle", &Direction2::from_angle, py::arg("theta"))
        .def_readonly("x1", &Direction2::x1)
        .def_readonly("x2", &Direction2::x2)
        .def("angle", &Direction2::angle);

    py::class_<Aperture>(m, "Aperture")
        .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
        .def_readwrite("lo", &Aperture::lo)
        .def_readwrite("hi", &Aperture::hi)
        .def("full", &Aperture::full)
        .def("length", &Aperture::length);
    m.def("full_aperture", &full_aperture);
    m.def("bottom_half_aperture", &bottom_half_aperture);

    py::class_<Shape>(m, "Shape");
    m.def("parse_shape", &parse_shape_expression, py::arg("expression"));
    m.def("shape_contains",
          [](const Shape& s, double x1, double x2) { return contains(s, {x1, x2}); });

    py::class_<ContrastMap>(m, "ContrastMap")
        .def("eval", [](const ContrastMap& c, double x1, double x2) { return c.eval({x1, x2}); })
        .def("member",
             [](const ContrastMap& c, double x1, double x2) { return c.member({x1, x2}); })
        .def("distance",
             [](const ContrastMap& c, double x1, double x2) { return c.distance({x1, x2}); });
    m.def("catalogue", &catalogue, py::arg("name"),
          "catalogue media: kite, disk_rectangle, square_cavity");
    m.def(
        "contrast_map",
        [](const std::string& expr, Complex eta) {
            return ContrastMap({{parse_shape_expression(expr), eta}}, default_support_box());
        },
        py::arg("shape_expression"), py::arg("eta"));
    m.def("kite_boundary", [](double t) {
        const Point2 p = kite_boundary(t);
        return std::make_pair(p.x1, p.x2);
    });

    py::class_<SamplingGrid>(m, "SamplingGrid")
        .def(py::init<double, double, double, double, int, int>(), py::arg("x1_lo"),
             py::arg("x1_hi"), py::arg("x2_lo"), py::arg("x2_hi"), py::arg("n1"), py::arg("n2"))
        .def_readonly("n1", &SamplingGrid::n1)
        .def_readonly("n2", &SamplingGrid::n2)
        .def("x1", &SamplingGrid::x1)
        .def("x2", &SamplingGrid::x2);

    py::class_<MeasurementCircle>(m, "MeasurementCircle")
        .def(py::init([](double radius, int n, const Aperture& ap) {
                 return MeasurementCircle{radius, n, ap};
             }),
             py::arg("radius"), py::arg("n_receivers"), py::arg("aperture") = full_aperture())
        .def_readwrite("radius", &MeasurementCircle::radius)
        .def_readwrite("n_receivers", &MeasurementCircle::n_receivers);

    py::class_<VolumeGrid>(m, "VolumeGrid")
        .def(py::init<double, double, int>(), py::arg("lo"), py::arg("hi"), py::arg("m"))
        .def_readonly("m", &VolumeGrid::m)
        .def("h", &VolumeGrid::h);

    py::class_<DirectionSet>(m, "DirectionSet")
        .def_static("uniform", &DirectionSet::uniform, py::arg("n"),
                    py::arg("aperture") = full_aperture())
        .def("count", &DirectionSet::count);

    // forward problem
    py::class_<ForwardSolution>(m, "ForwardSolution")
        .def_readonly("k", &ForwardSolution::k)
        .def_readonly("residual", &ForwardSolution::residual)
        .def_readonly("iterations", &ForwardSolution::iterations);
    m.def(
        "solve_forward",
        [](const ContrastMap& map, const Direction2& d, double k, const VolumeGrid& grid) {
            return solve_forward(map, d, k, grid);
        },
        py::arg("map"), py::arg("d"), py::arg("k"), py::arg("grid"));
    m.def("scattered_at",
          [](const ForwardSolution& sol, double x1, double x2) {
              return scattered_at(sol, {x1, x2});
          });
    m.def("farfield_at", &farfield_at, py::arg("solution"), py::arg("xhat"));

    py::class_<DiskSeriesOracle>(m, "DiskSeriesOracle")
        .def(py::init<Complex, double, double, int>(), py::arg("eta0"), py::arg("radius"),
             py::arg("k"), py::arg("extra_order") = 0)
        .def("scattered", [](const DiskSeriesOracle& o, double x1, double x2,
                             const Direction2& d) { return o.scattered({x1, x2}, d); })
        .def("far_field", &DiskSeriesOracle::far_field);

    // data
    py::class_<CauchyDataset>(m, "CauchyDataset")
        .def_readonly("k", &CauchyDataset::k)
        .def_readonly("has_normal_derivative", &CauchyDataset::has_normal_derivative)
        .def_property_readonly("n_receivers",
                               [](const CauchyDataset& d) { return d.circle.n_receivers; })
        .def_property_readonly("n_directions",
                               [](const CauchyDataset& d) { return d.directions.count(); })
        .def("u", [](const CauchyDataset& d, std::size_t j, std::size_t l) { return d.U(j, l); })
        .def("du", [](const CauchyDataset& d, std::size_t j, std::size_t l) { return d.dU(j, l); });

    m.def("synthesize",
          [](const ContrastMap& map, double k, const MeasurementCircle& circle,
             const DirectionSet& dirs, const VolumeGrid& grid) {
              return synthesize(map, k, circle, dirs, grid);
          },
          py::arg("map"), py::arg("k"), py::arg("circle"), py::arg("directions"), py::arg("grid"));
    m.def(
        "add_noise",
        [](const CauchyDataset& ds, double delta, std::uint64_t seed) {
            return add_noise(ds, {delta, seed});
        },
        py::arg("dataset"), py::arg("delta"), py::arg("seed"));
    m.def("save_dataset", [](const CauchyDataset& ds, const std::string& path) { save(ds, path); });
    m.def("load_dataset", [](const std::string& path) { return load(path); });

    // imaging
    py::class_<IndicatorImage>(m, "IndicatorImage")
        .def_readonly("functional", &IndicatorImage::functional)
        .def_readonly("normalized", &IndicatorImage::normalized)
        .def_readonly("k", &IndicatorImage::k)
        .def_readonly("values", &IndicatorImage::values)
        .def_property_readonly("n1", [](const IndicatorImage& i) { return i.grid.n1; })
        .def_property_readonly("n2", [](const IndicatorImage& i) { return i.grid.n2; })
        .def("value", &IndicatorImage::value, py::arg("i1"), py::arg("i2"))
        .def("max_value", &IndicatorImage::max_value)
        .def("argmax", &IndicatorImage::argmax);

    m.def("imaging_I", &imaging_I, py::arg("dataset"), py::arg("grid"), py::arg("n_xhat") = 0);
    m.def("imaging_I_far", &imaging_I_far, py::arg("dataset"), py::arg("grid"),
          py::arg("n_xhat") = 0);
    m.def("imaging_I2", &imaging_I2, py::arg("dataset"), py::arg("grid"));
    m.def("imaging_I2_far", &imaging_I2_far, py::arg("dataset"), py::arg("grid"));
    m.def("normalize", &normalize, py::arg("image"));

    // experiments
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("medium", &ExperimentConfig::medium)
        .def_readwrite("k", &ExperimentConfig::k)
        .def_readwrite("delta", &ExperimentConfig::delta)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("n_receivers", &ExperimentConfig::n_receivers)
        .def_readwrite("n_directions", &ExperimentConfig::n_directions)
        .def_readwrite("R", &ExperimentConfig::R)
        .def_readwrite("solver_m", &ExperimentConfig::solver_m)
        .def_readwrite("sample_n1", &ExperimentConfig::sample_n1)
        .def_readwrite("sample_n2", &ExperimentConfig::sample_n2)
        .def_readwrite("functionals", &ExperimentConfig::functionals)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def_readwrite("use_cache", &ExperimentConfig::use_cache)
        .def("validate", &ExperimentConfig::validate)
        .def("text", [](const ExperimentConfig& c) { return config_to_text(c); });

    m.def("parse_config", &parse_config_text, py::arg("text"));
    m.def("parse_config_file", &parse_config_file, py::arg("path"));
    m.def("preset", &preset, py::arg("name"));
    m.def("preset_names", &preset_names);
    m.def(
        "run",
        [](const ExperimentConfig& cfg) {
            const RunReport report = run(cfg);
            py::module_ json = py::module_::import("json");
            return json.attr("loads")(report.data.dump());
        },
        py::arg("config"));
    m.def("export_image_csv", &export_image_csv, py::arg("image"), py::arg("path"));
    m.def("export_image_pgm", &export_image_pgm, py::arg("image"), py::arg("path"));
}

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "perco/perco.hpp"

namespace py = pybind11;
using namespace perco;

namespace {

using ImageArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

BinaryImage to_binary(const ImageArray& a) {
    if (a.ndim() != 2)
        throw ShapeError("expected a 2-D array");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    std::vector<std::uint8_t> active(a.data(), a.data() + rows * cols);
    for (auto& v : active)
        v = v != 0;
    return BinaryImage(rows, cols, std::move(active));
}

py::array_t<std::uint8_t> from_binary(const BinaryImage& img) {
    py::array_t<std::uint8_t> out({img.rows(), img.cols()});
    std::copy(img.active().begin(), img.active().end(), out.mutable_data());
    return out;
}

template <class T>
py::array_t<T> as_array(const std::vector<T>& v) {
    return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

Topology topology_arg(const py::object& t) {
    if (py::isinstance<Topology>(t))
        return t.cast<Topology>();
    if (py::isinstance<py::int_>(t))
        return parse_topology(std::to_string(t.cast<int>()));
    return parse_topology(t.cast<std::string>());
}

} // namespace

PYBIND11_MODULE(_perco, m) {
    m.attr("__version__") = "0.1.0";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
    py::register_exception<ProvenanceError>(m, "ProvenanceError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::enum_<Topology>(m, "Topology")
        .value("FOUR", Topology::Four)
        .value("SIX", Topology::Six)
        .value("EIGHT", Topology::Eight);

    py::class_<Lattice>(m, "Lattice")
        .def(py::init([](std::size_t rows, std::size_t cols, const py::object& topology) {
                 return Lattice(rows, cols, topology_arg(topology));
             }),
             py::arg("rows"), py::arg("cols"), py::arg("topology") = Topology::Four)
        .def_property_readonly("rows", &Lattice::rows)
        .def_property_readonly("cols", &Lattice::cols)
        .def_property_readonly("topology", &Lattice::topology)
        .def_property_readonly("site_count", &Lattice::site_count)
        .def("neighbors", [](const Lattice& l, SiteIndex s) {
            const auto n = l.neighbors(s);
            return std::vector<SiteIndex>(n.begin(), n.end());
        })
        .def("site", &Lattice::site, py::arg("row"), py::arg("col"))
        .def("__repr__", [](const Lattice& l) {
            return "Lattice(" + std::to_string(l.rows()) + ", " + std::to_string(l.cols()) + ", " +
                   std::string(to_string(l.topology())) + ")";
        });

    m.def(
        "generate_percolation",
        [](double p, std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint64_t stream) {
            RngStream rng(seed, stream);
            return from_binary(generate_percolation(p, rows, cols, rng));
        },
        py::arg("p"), py::arg("rows"), py::arg("cols"), py::arg("seed") = 0, py::arg("stream") = 0,
        "Independent site-percolation image as a uint8 array of 0/1.");

    m.def(
        "threshold",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> gray, double tau, bool active_if_geq) {
            if (gray.ndim() != 2)
                throw ShapeError("expected a 2-D array");
            const auto rows = static_cast<std::size_t>(gray.shape(0));
            const auto cols = static_cast<std::size_t>(gray.shape(1));
            GrayImage img(rows, cols, std::vector<double>(gray.data(), gray.data() + rows * cols));
            return from_binary(threshold(img, tau, active_if_geq ? ThresholdDirection::ActiveIfGeq
                                                                 : ThresholdDirection::ActiveIfLt));
        },
        py::arg("gray"), py::arg("tau"), py::arg("active_if_geq") = true);

    m.def(
        "label_components",
        [](const ImageArray& image, const py::object& topology) {
            const auto img = to_binary(image);
            const auto lab = label_components(img, Lattice(img.rows(), img.cols(), topology_arg(topology)));
            py::array_t<std::uint32_t> labels({img.rows(), img.cols()});
            std::copy(lab.labels.begin(), lab.labels.end(), labels.mutable_data());
            return py::make_tuple(labels, as_array(lab.cluster_sizes), lab.largest);
        },
        py::arg("image"), py::arg("topology") = Topology::Four,
        "Returns (labels, cluster_sizes, largest); label 0 marks inactive sites.");

    m.def(
        "dfs_depths",
        [](const ImageArray& image, SiteIndex seed, const py::object& topology) {
            const auto img = to_binary(image);
            const auto tree = dfs_spanning_tree(img, Lattice(img.rows(), img.cols(), topology_arg(topology)), seed);
            return py::make_tuple(as_array(tree.depths), as_array(tree.mother));
        },
        py::arg("image"), py::arg("seed"), py::arg("topology") = Topology::Four);

    m.def(
        "nz_curve",
        [](const Lattice& lattice, const std::vector<SiteIndex>& order) { return as_array(nz_curve(lattice, order).size); },
        py::arg("lattice"), py::arg("order"), "Largest cluster size after each prefix of the visiting order.");

    m.def(
        "estimate_cdf",
        [](const Lattice& lattice, double p, std::size_t runs, std::uint64_t seed, unsigned threads) {
            py::gil_scoped_release release;
            const auto est = estimate_cdf(lattice, p, runs, seed, {threads});
            py::gil_scoped_acquire acquire;
            return py::make_tuple(as_array(est.values), as_array(est.standard_errors));
        },
        py::arg("lattice"), py::arg("p"), py::arg("runs"), py::arg("seed") = 0, py::arg("threads") = 0,
        "Monte Carlo CDF of the largest cluster size, k = 0..S. Returns (cdf, standard_errors).");

    m.def(
        "estimate_cdf_inhomogeneous",
        [](const Lattice& lattice, std::tuple<std::size_t, std::size_t, std::size_t, std::size_t> rect, double p_in,
           double p_out, std::size_t runs, std::uint64_t seed, unsigned threads) {
            const auto [top, left, height, width] = rect;
            const auto sub = rect_subgrid(lattice, top, left, height, width);
            py::gil_scoped_release release;
            const auto est = estimate_cdf_inhomogeneous(lattice, sub, p_in, p_out, runs, seed, {threads});
            py::gil_scoped_acquire acquire;
            return py::make_tuple(as_array(est.values), as_array(est.standard_errors));
        },
        py::arg("lattice"), py::arg("rect"), py::arg("p_in"), py::arg("p_out"), py::arg("runs"),
        py::arg("seed") = 0, py::arg("threads") = 0, "rect is (top, left, height, width), 0-based.");

    m.def(
        "critical_value",
        [](const std::vector<double>& cdf, double alpha) {
            CdfEstimate est;
            est.values = cdf;
            est.provenance.rows = 1;
            est.provenance.cols = cdf.empty() ? 0 : cdf.size() - 1;
            return critical_value(NullDistribution(std::move(est)), alpha);
        },
        py::arg("cdf"), py::arg("alpha"), "Smallest k with P(M >= k) <= alpha; S + 1 if none.");

    m.def(
        "detect",
        [](const ImageArray& image, const std::vector<double>& cdf, double alpha, const py::object& topology) {
            const auto img = to_binary(image);
            const Lattice lattice(img.rows(), img.cols(), topology_arg(topology));
            CdfEstimate est;
            est.values = cdf;
            est.provenance.rows = img.rows();
            est.provenance.cols = img.cols();
            est.provenance.topology = lattice.topology();
            const auto r = detect(img, lattice, NullDistribution(std::move(est)), alpha);
            py::dict out;
            out["observed_max"] = r.observed_max;
            out["critical_value"] = r.critical_value;
            out["p_value"] = r.p_value;
            out["alpha"] = r.alpha;
            out["detected"] = r.detected;
            return out;
        },
        py::arg("image"), py::arg("cdf"), py::arg("alpha") = 0.05, py::arg("topology") = Topology::Four,
        "Tests the image against a null CDF over the image's own lattice.");
}

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ncmseg/config.hpp"
#include "ncmseg/fcm.hpp"
#include "ncmseg/metrics.hpp"
#include "ncmseg/ncm.hpp"
#include "ncmseg/ns_transform.hpp"
#include "ncmseg/phantom.hpp"
#include "ncmseg/pipeline.hpp"
#include "ncmseg/regions.hpp"

namespace py = pybind11;
using namespace ncmseg;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

RealRaster to_raster(const DoubleArray& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  return RealRaster(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

GrayImage to_image(const DoubleArray& a, double spacing_mm) { return GrayImage(to_raster(a), spacing_mm); }

BinaryMask to_mask(const py::array& a) {
  ByteArray bytes = ByteArray::ensure(a);
  if (!bytes || bytes.ndim() != 2) throw py::value_error("expected a 2-D mask array");
  const auto h = static_cast<int>(bytes.shape(0));
  const auto w = static_cast<int>(bytes.shape(1));
  BinaryMask m(w, h);
  auto dst = m.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = bytes.data()[i] ? 1 : 0;
  return m;
}

template <typename T>
py::array_t<T> from_raster(const Raster<T>& r) {
  py::array_t<T> out({r.height(), r.width()});
  std::copy(r.vec().begin(), r.vec().end(), out.mutable_data());
  return out;
}

py::array_t<bool> from_mask(const BinaryMask& m) {
  py::array_t<bool> out({m.height(), m.width()});
  auto* dst = out.mutable_data();
  for (std::size_t i = 0; i < m.size(); ++i) dst[i] = m.values()[i] != 0;
  return out;
}

Matrix to_matrix(const DoubleArray& a) {
  if (a.ndim() == 1) return Matrix::column(std::vector<double>(a.data(), a.data() + a.size()));
  if (a.ndim() != 2) throw py::value_error("expected a 1-D or 2-D data array");
  return Matrix(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> from_matrix(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

py::array_t<double> from_contour(const Contour& c) {
  py::array_t<double> out({c.size(), std::size_t{2}});
  auto* dst = out.mutable_data();
  for (std::size_t k = 0; k < c.size(); ++k) {
    dst[2 * k] = c.points[k].x;
    dst[2 * k + 1] = c.points[k].y;
  }
  return out;
}

Contour to_contour(const DoubleArray& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw py::value_error("expected an (n, 2) point array");
  Contour c;
  for (py::ssize_t k = 0; k < a.shape(0); ++k) c.points.push_back({a.at(k, 0), a.at(k, 1)});
  return c;
}

py::dict report_dict(const MetricsReport& r) {
  py::dict d;
  auto values = r.as_array();
  for (std::size_t k = 0; k < values.size(); ++k) d[py::str(std::string(MetricsReport::kFieldNames[k]))] = values[k];
  return d;
}

std::optional<Matrix> optional_centers(const std::optional<DoubleArray>& a) {
  if (!a) return std::nullopt;
  return to_matrix(*a);
}

}  // namespace

PYBIND11_MODULE(_ncmseg, m) {
  m.doc() = "Neutrosophic c-means clustering, lumen segmentation and evaluation";

  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PipelineError>(m, "PipelineError", PyExc_RuntimeError);

  // image-core
  m.def("read_gray_image", [](const std::filesystem::path& p) {
    GrayImage img = read_gray_image(p);
    return py::make_tuple(from_raster(img.raster()), img.spacing_mm());
  }, py::arg("path"), "Returns (pixels in [0, 1], spacing_mm).");
  m.def("write_mask", [](const py::array& mask, const std::filesystem::path& p) { write_mask(to_mask(mask), p); },
        py::arg("mask"), py::arg("path"));
  m.def("read_mask", [](const std::filesystem::path& p) { return from_mask(read_mask(p)); }, py::arg("path"));
  m.def("write_contour_csv", [](const DoubleArray& pts, const std::filesystem::path& p) {
    write_contour_csv(to_contour(pts), p);
  }, py::arg("points"), py::arg("path"));
  m.def("mean_filter", [](const DoubleArray& img, int w) {
    return from_raster(mean_filter(to_image(img, 1.0), w).raster());
  }, py::arg("image"), py::arg("w"));

  // ns-transform
  m.def("ns_transform", [](const DoubleArray& img, int w) {
    NsImage ns = ns_transform(to_image(img, 1.0), w);
    return py::make_tuple(from_raster(ns.t_map), from_raster(ns.i_map), from_raster(ns.f_map));
  }, py::arg("image"), py::arg("w") = kDefaultNsWindow, "Returns the (T, I, F) maps.");

  // fcm
  py::class_<FcmState>(m, "FcmState")
      .def_property_readonly("centers", [](const FcmState& s) { return from_matrix(s.centers); })
      .def_property_readonly("memberships", [](const FcmState& s) { return from_matrix(s.memberships); })
      .def_readonly("objective_history", &FcmState::objective_history)
      .def_readonly("iterations_run", &FcmState::iterations_run)
      .def_readonly("converged", &FcmState::converged);
  m.def("fcm_fit", [](const DoubleArray& data, int c, double mm, double epsilon, int max_iter, std::uint64_t seed,
                      const std::optional<DoubleArray>& initial_centers) {
    FcmFitOptions opts;
    opts.initial_centers = optional_centers(initial_centers);
    return fcm_fit(to_matrix(data), FcmParams{c, mm, epsilon, max_iter, seed}, opts);
  }, py::arg("data"), py::arg("c") = 3, py::arg("m") = 2.0, py::arg("epsilon") = 1e-5, py::arg("max_iter") = 100,
        py::arg("seed") = 0, py::arg("initial_centers") = py::none());
  m.def("fcm_assign", &fcm_assign, py::arg("state"));

  // ncm
  py::class_<NcmParams>(m, "NcmParams")
      .def(py::init<>())
      .def_readwrite("c", &NcmParams::c)
      .def_readwrite("m", &NcmParams::m)
      .def_readwrite("w1", &NcmParams::w1)
      .def_readwrite("w2", &NcmParams::w2)
      .def_readwrite("w3", &NcmParams::w3)
      .def_readwrite("delta_reg", &NcmParams::delta_reg)
      .def_readwrite("epsilon", &NcmParams::epsilon)
      .def_readwrite("max_iter", &NcmParams::max_iter)
      .def_readwrite("seed", &NcmParams::seed)
      .def("normalized", &NcmParams::normalized)
      .def("__repr__", [](const NcmParams& p) { return "NcmParams(" + to_json(p).dump() + ")"; });
  py::class_<NcmState>(m, "NcmState")
      .def_property_readonly("centers", [](const NcmState& s) { return from_matrix(s.centers); })
      .def_property_readonly("t", [](const NcmState& s) { return from_matrix(s.t); })
      .def_readonly("i", &NcmState::i_vec)
      .def_readonly("f", &NcmState::f_vec)
      .def_readonly("objective_history", &NcmState::objective_history)
      .def_readonly("iterations_run", &NcmState::iterations_run)
      .def_readonly("converged", &NcmState::converged)
      .def_readonly("degenerate", &NcmState::degenerate);
  m.def("ncm_fit", [](const DoubleArray& data, const NcmParams& params,
                      const std::optional<DoubleArray>& initial_centers) {
    NcmFitOptions opts;
    opts.initial_centers = optional_centers(initial_centers);
    return ncm_fit(to_matrix(data), params, opts);
  }, py::arg("data"), py::arg("params") = NcmParams{}, py::arg("initial_centers") = py::none());
  m.def("ncm_assign", &ncm_assign, py::arg("state"));
  m.def("ncm_objective", [](const DoubleArray& data, const NcmState& s, const NcmParams& p) {
    return ncm_objective(to_matrix(data), s, p);
  }, py::arg("data"), py::arg("state"), py::arg("params"));
  m.def("compute_cimax", [](const std::vector<double>& t_row, const DoubleArray& centers) {
    return compute_cimax(t_row, to_matrix(centers));
  }, py::arg("t_row"), py::arg("centers"));

  // pipeline
  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("ncm", &PipelineConfig::ncm)
      .def_readwrite("smooth_w", &PipelineConfig::smooth_w)
      .def_readwrite("preprocess_w", &PipelineConfig::preprocess_w)
      .def_readwrite("catheter_radius_px", &PipelineConfig::catheter_radius_px)
      .def_readwrite("min_region_px", &PipelineConfig::min_region_px)
      .def_readwrite("merge_ambiguity", &PipelineConfig::merge_ambiguity)
      .def_readwrite("ns_window", &PipelineConfig::ns_window)
      .def_readwrite("restarts", &PipelineConfig::restarts)
      .def_property("lumen_rule", [](const PipelineConfig& c) { return to_string(c.lumen_rule); },
                    [](PipelineConfig& c, const std::string& s) { c.lumen_rule = parse_lumen_rule(s); })
      .def_property("features", [](const PipelineConfig& c) { return to_string(c.features); },
                    [](PipelineConfig& c, const std::string& s) { c.features = parse_feature_source(s); })
      .def_property("clusterer", [](const PipelineConfig& c) { return to_string(c.clusterer); },
                    [](PipelineConfig& c, const std::string& s) { c.clusterer = parse_clusterer(s); });
  m.def("segment_lumen", [](const DoubleArray& img, const PipelineConfig& cfg, double spacing_mm) {
    PipelineResult r = segment_lumen(to_image(img, spacing_mm), cfg);
    py::dict out;
    out["labels"] = from_raster(r.label_map.labels);
    out["mask"] = from_mask(r.lumen_mask);
    out["contour"] = from_contour(r.contour);
    out["lumen_cluster"] = r.lumen_cluster;
    out["iterations_run"] = r.iterations_run();
    out["timings_ms"] = r.timings_ms;
    if (r.ncm_state) out["ncm_state"] = *r.ncm_state;
    if (r.fcm_state) out["fcm_state"] = *r.fcm_state;
    return out;
  }, py::arg("image"), py::arg("config") = PipelineConfig{}, py::arg("spacing_mm") = 1.0);

  // regions
  m.def("trace_boundary", [](const py::array& mask) { return from_contour(trace_boundary(to_mask(mask))); },
        py::arg("mask"));
  m.def("rasterize_contour", [](const DoubleArray& pts, int width, int height) {
    return from_mask(rasterize_contour(to_contour(pts), width, height));
  }, py::arg("points"), py::arg("width"), py::arg("height"));

  // metrics
  m.def("jaccard", [](const py::array& a, const py::array& b) { return jaccard(to_mask(a), to_mask(b)); });
  m.def("dice", [](const py::array& a, const py::array& b) { return dice(to_mask(a), to_mask(b)); });
  m.def("pad", [](const py::array& a, const py::array& b) { return pad(to_mask(a), to_mask(b)); });
  m.def("ad_area", [](const py::array& a, const py::array& b) { return ad_area(to_mask(a), to_mask(b)); });
  m.def("hausdorff", [](const DoubleArray& a, const DoubleArray& b, double s) {
    return hausdorff(to_contour(a), to_contour(b), s);
  }, py::arg("auto"), py::arg("manual"), py::arg("spacing_mm") = 1.0);
  m.def("ad_curve", [](const DoubleArray& a, const DoubleArray& b, double s) {
    return ad_curve(to_contour(a), to_contour(b), s);
  }, py::arg("auto"), py::arg("manual"), py::arg("spacing_mm") = 1.0);
  m.def("evaluate", [](const py::array& a, const py::array& b, double s) {
    return report_dict(evaluate(to_mask(a), to_mask(b), s));
  }, py::arg("auto"), py::arg("manual"), py::arg("spacing_mm") = 1.0);

  // phantom
  m.def("generate_phantom", [](const py::dict& spec) {
    const auto text = py::module_::import("json").attr("dumps")(spec).cast<std::string>();
    Phantom p = generate(phantom_spec_from_json(nlohmann::json::parse(text)));
    return py::make_tuple(from_raster(p.image.raster()), from_mask(p.truth));
  }, py::arg("spec") = py::dict(), "Spec keys as in the phantom JSON format.");
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "curator/baselines.hpp"
#include "curator/commands.hpp"
#include "curator/error.hpp"
#include "curator/feature_io.hpp"
#include "curator/geometry.hpp"
#include "curator/parallel.hpp"
#include "curator/selection.hpp"

namespace py = pybind11;

namespace {

using curator::Json;

std::vector<curator::FrameFeature> frames_of(const std::vector<std::vector<double>>& rows) {
  std::vector<curator::FrameFeature> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back({"", i, rows[i]});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Snippet complexity scoring and labeling-set curation.";

  py::register_exception<curator::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<curator::DomainError>(m, "DomainError", PyExc_ValueError);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"curator"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = curator::run(argv, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one CLI subcommand; returns (exit_code, stdout, stderr).");

  m.def("schema_json", [] { return curator::schema_json().dump(); });

  m.def(
      "polyline_complexity",
      [](const std::vector<std::pair<double, double>>& points, std::size_t waypoints) {
        std::vector<curator::Vec2> pts;
        pts.reserve(points.size());
        for (auto [x, y] : points) pts.push_back({x, y});
        return curator::geometry::polyline_complexity(pts, waypoints);
      },
      py::arg("points"), py::arg("waypoints") = 100);

  m.def(
      "gaussian_entropy",
      [](double sxx, double sxy, double syy) {
        return curator::gaussian_entropy({{0.0, 0.0}, sxx, sxy, syy});
      },
      py::arg("sxx"), py::arg("sxy"), py::arg("syy"));

  m.def(
      "dissimilarity",
      [](const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b,
         bool symmetric) {
        const auto mode =
            symmetric ? curator::DissimilarityMode::kSymmetric : curator::DissimilarityMode::kDirected;
        return curator::dissimilarity(curator::to_matrix(frames_of(a)), curator::to_matrix(frames_of(b)),
                                      mode);
      },
      py::arg("a"), py::arg("b"), py::arg("symmetric") = false);

  m.def(
      "curate_json",
      [](const std::string& features_dir, const std::string& config_json, std::size_t jobs) {
        curator::CurationConfig config = curator::default_config();
        if (!config_json.empty()) {
          try {
            config = curator::config_from_json(Json::parse(config_json));
          } catch (const Json::exception& e) {
            throw curator::InputError(std::string("invalid config: ") + e.what());
          }
        }
        std::string out;
        {
          py::gil_scoped_release release;
          const auto table = curator::load_features(features_dir);
          out = curator::to_json(curator::curate(table, config, jobs == 0 ? curator::default_jobs() : jobs))
                    .dump();
        }
        return out;
      },
      py::arg("features_dir"), py::arg("config_json") = "", py::arg("jobs") = 0);
}

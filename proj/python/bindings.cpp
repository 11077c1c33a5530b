#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idtrack/bootstrap.hpp"
#include "idtrack/config_io.hpp"
#include "idtrack/corpus.hpp"
#include "idtrack/errors.hpp"
#include "idtrack/evaluation.hpp"
#include "idtrack/random.hpp"
#include "idtrack/scenesim.hpp"
#include "idtrack/trackers.hpp"

namespace py = pybind11;
using namespace idtrack;
using nlohmann::json;

namespace {

py::dict metrics_dict(const MetricsReport& r) {
  py::dict d;
  for (const auto& name : metric_columns()) d[py::str(name)] = metric_value(r, name);
  for (const auto& name : extra_metrics()) d[py::str(name)] = metric_value(r, name);
  return d;
}

py::dict aggregate_dict(const AggregateTable& table) {
  py::dict d;
  for (const auto& [name, a] : table) {
    py::dict m;
    m["mean"] = a.mean;
    m["std"] = a.std;
    m["n_defined"] = a.n_defined;
    m["n_excluded"] = a.n_excluded;
    d[py::str(name)] = m;
  }
  return d;
}

EvalParams eval_params(double gate_deg, double cutoff_deg, double order) {
  EvalParams p;
  p.gate = deg2rad(gate_deg);
  p.ospa.cutoff = deg2rad(cutoff_deg);
  p.ospa.order = order;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Identity-aware tracking metrics, scene simulation and trackers";

  auto base = py::register_exception<Error>(m, "IdtrackError", PyExc_ValueError);
  py::register_exception<InvalidConfig>(m, "InvalidConfig", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<GridMismatch>(m, "GridMismatch", base.ptr());

  py::class_<Direction>(m, "Direction")
      .def(py::init<double, double>(), py::arg("azimuth"), py::arg("elevation"))
      .def_static("from_degrees", &Direction::from_degrees, py::arg("azimuth_deg"), py::arg("elevation_deg"))
      .def_readonly("azimuth", &Direction::azimuth)
      .def_readonly("elevation", &Direction::elevation)
      .def("__eq__", [](const Direction& a, const Direction& b) { return a == b; })
      .def("__repr__", [](const Direction& d) {
        std::ostringstream s;
        s << "Direction(azimuth=" << d.azimuth << ", elevation=" << d.elevation << ")";
        return s.str();
      });

  m.def("angular_distance", py::overload_cast<const Direction&, const Direction&>(&angular_distance),
        "Great-circle distance in radians", py::arg("a"), py::arg("b"));

  py::class_<FrameGrid>(m, "FrameGrid")
      .def(py::init([](double period, std::size_t n) {
             FrameGrid g{period, n};
             g.validate();
             return g;
           }),
           py::arg("frame_period"), py::arg("n_frames"))
      .def_readonly("frame_period", &FrameGrid::frame_period)
      .def_readonly("n_frames", &FrameGrid::n_frames)
      .def_property_readonly("duration", &FrameGrid::duration);

  py::class_<TrackSet>(m, "TrackSet")
      .def(py::init<FrameGrid>(), py::arg("grid"))
      .def_property_readonly("grid", &TrackSet::grid)
      .def("add", &TrackSet::add, py::arg("track_id"), py::arg("frame"), py::arg("direction"))
      .def("track_ids", &TrackSet::track_ids)
      .def("trajectory", [](const TrackSet& ts, const TrackId& id) { return ts.trajectory(id); }, py::arg("track_id"))
      .def_property_readonly("n_tracks", &TrackSet::n_tracks)
      .def_property_readonly("n_entries", &TrackSet::n_entries)
      .def("to_csv",
           [](const TrackSet& ts) {
             std::ostringstream s;
             write_trackset(ts, s);
             return s.str();
           })
      .def_static(
          "from_csv",
          [](const std::string& text, const FrameGrid& grid) {
            std::istringstream s(text);
            return read_trackset(s, grid);
          },
          py::arg("text"), py::arg("grid"))
      .def("__eq__", [](const TrackSet& a, const TrackSet& b) { return a == b; });

  py::class_<ObservationSet>(m, "ObservationSet")
      .def_readonly("grid", &ObservationSet::grid)
      .def_readonly("tagged", &ObservationSet::tagged)
      .def_property_readonly("n_observations", &ObservationSet::n_observations)
      .def("to_csv", [](const ObservationSet& obs) {
        std::ostringstream s;
        write_observations(obs, s);
        return s.str();
      });

  m.def(
      "_simulate_scene",
      [](const std::string& scenario_json, const std::string& observation_json) {
        const auto truth = generate_scene(scenario_from_json(json::parse(scenario_json)));
        auto obs = simulate_observations(truth, observation_from_json(json::parse(observation_json)));
        return py::make_tuple(truth, obs);
      },
      py::arg("scenario_json"), py::arg("observation_json"));

  m.def(
      "_run_tracker",
      [](const std::string& tracker_json, const TrackSet& truth, const ObservationSet& obs, std::size_t n_speakers,
         std::uint64_t seed) {
        py::gil_scoped_release release;
        return run_tracker(tracker_from_json(json::parse(tracker_json)), &truth, &obs, n_speakers, seed);
      },
      py::arg("tracker_json"), py::arg("truth"), py::arg("observations"), py::arg("n_speakers"), py::arg("seed"));

  m.def(
      "evaluate",
      [](const TrackSet& preds, const TrackSet& gts, double gate_deg, double cutoff_deg, double order) {
        return metrics_dict(evaluate_scene(preds, gts, eval_params(gate_deg, cutoff_deg, order)));
      },
      "Per-scene metrics; angles in degrees, undefined metrics as None", py::arg("preds"), py::arg("gts"),
      py::arg("gate_deg") = 20.0, py::arg("ospa_cutoff_deg") = 30.0, py::arg("ospa_order") = 1.0);

  m.def(
      "bootstrap",
      [](const std::vector<double>& values, double fraction, std::size_t replicates, std::uint64_t seed) {
        Rng rng(seed);
        const auto r = bootstrap_aggregate(values, fraction, replicates, rng);
        return py::make_tuple(r.mean, r.std);
      },
      "Subsampling mean and std", py::arg("values"), py::arg("fraction") = 0.8, py::arg("replicates") = 100,
      py::arg("seed") = 0);

  m.def(
      "_run_sweep",
      [](const std::string& sweep_json, std::size_t jobs) {
        const auto spec = sweep_spec_from_json(json::parse(sweep_json));
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(spec, jobs);
        }
        py::list cells;
        for (const auto& c : result.cells) {
          py::dict d;
          d["n_speakers"] = c.n_speakers;
          d["k_max"] = c.k_max.label();
          d["aggregate"] = aggregate_dict(c.aggregate);
          cells.append(d);
        }
        py::list trends;
        for (const auto& t : check_trends(result)) {
          py::dict d;
          d["subset"] = t.subset;
          d["metric"] = t.metric;
          d["passed"] = t.passed;
          d["detail"] = t.detail;
          trends.append(d);
        }
        return py::make_tuple(cells, trends);
      },
      py::arg("sweep_json"), py::arg("jobs") = 1);
}

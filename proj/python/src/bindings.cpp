// Python bindings. Configs cross the boundary as JSON text; arrays come back
// as numpy arrays (copies).

#include "wakegait/aero.hpp"
#include "wakegait/checks.hpp"
#include "wakegait/config.hpp"
#include "wakegait/error.hpp"
#include "wakegait/gait_opt.hpp"
#include "wakegait/io.hpp"
#include "wakegait/morphology.hpp"
#include "wakegait/simulation.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace wakegait;

namespace {

py::array_t<double> points_array(const std::vector<Vec3>& pts) {
    py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{3}});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (int a = 0; a < 3; ++a) m(static_cast<py::ssize_t>(i), a) = pts[i][a];
    return out;
}

std::vector<Vec3> points_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(1) != 3) throw std::invalid_argument("expected an (N, 3) array");
    auto r = a.unchecked<2>();
    std::vector<Vec3> pts(static_cast<std::size_t>(a.shape(0)));
    for (py::ssize_t i = 0; i < a.shape(0); ++i) pts[static_cast<std::size_t>(i)] = Vec3(r(i, 0), r(i, 1), r(i, 2));
    return pts;
}

py::dict wake_dict(const WakeStructure& w) {
    py::dict d;
    d["rows"] = w.rows;
    d["strips"] = w.strips;
    d["vertices"] = points_array(w.vertices);
    d["faces"] = w.faces;
    d["phase"] = py::array_t<double>(static_cast<py::ssize_t>(w.phase.size()), w.phase.data());
    return d;
}

py::dict simulate(const std::string& config_json) {
    const SimConfig cfg = parse_config(config_json);
    SimulationResult r;
    {
        py::gil_scoped_release release;
        r = biot_savart_map(cfg);
    }
    py::dict d;
    d["feasible"] = r.feasible();
    d["reason"] = r.reason;
    d["invariants"] = py::module_::import("json").attr("loads")(
        run_manifest(cfg, r)["invariants"].dump());
    if (!r.feasible()) return d;
    d["wake"] = wake_dict(r.wake);
    d["times"] = py::array_t<double>(static_cast<py::ssize_t>(r.times.size()), r.times.data());
    const auto n = static_cast<py::ssize_t>(r.wing.size());
    py::array_t<double> gamma({static_cast<py::ssize_t>(r.gamma_history.size()), n});
    auto g = gamma.mutable_unchecked<2>();
    for (std::size_t t = 0; t < r.gamma_history.size(); ++t)
        for (py::ssize_t i = 0; i < n; ++i) g(static_cast<py::ssize_t>(t), i) = r.gamma_history[t][i];
    d["gamma"] = gamma;
    d["force"] = points_array(r.force_history);
    std::vector<double> s;
    for (const auto& e : r.wing.elements) s.push_back(e.s);
    d["stations"] = s;
    return d;
}

}  // namespace

PYBIND11_MODULE(_wakegait, m) {
    m.doc() = "morphing-wing wake simulation and gait design";
    m.attr("__version__") = version_string;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<RejectedConfiguration>(m, "RejectedConfiguration", PyExc_RuntimeError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<MeshMismatch>(m, "MeshMismatch", PyExc_ValueError);

    m.attr("EXIT_OK") = static_cast<int>(ExitCode::ok);
    m.attr("EXIT_CONFIG") = static_cast<int>(ExitCode::config);
    m.attr("EXIT_NUMERIC") = static_cast<int>(ExitCode::numeric);
    m.attr("EXIT_CHECK") = static_cast<int>(ExitCode::check);

    m.def("normalize_config", [](const std::string& text) { return dump_config(parse_config(text)); },
          "Parse, validate and re-serialize a config with all defaults filled in.");

    m.def(
        "wagner_phi",
        [](py::array_t<double, py::array::forcecast> tau) {
            return py::vectorize([](double t) { return wagner_phi(t); })(tau);
        },
        py::arg("tau"), "Wagner function of the distance travelled in semichords.");

    m.def(
        "build_wing",
        [](double semispan_proximal, double semispan_distal, double chord_proximal,
           double chord_distal, double sweep_distal, int n_elements_per_side) {
            WingGeometry g{semispan_proximal, semispan_distal, chord_proximal,
                           chord_distal,     sweep_distal,    n_elements_per_side};
            const Wing w = build_wing(g);
            std::vector<double> s, theta, chord, width;
            for (const auto& e : w.elements) {
                s.push_back(e.s);
                theta.push_back(e.theta);
                chord.push_back(e.chord);
                width.push_back(e.width);
            }
            py::dict d;
            d["s"] = s;
            d["theta"] = theta;
            d["chord"] = chord;
            d["width"] = width;
            d["node_s"] = w.node_s;
            return d;
        },
        py::arg("semispan_proximal") = 0.08, py::arg("semispan_distal") = 0.09,
        py::arg("chord_proximal") = 0.15, py::arg("chord_distal") = 0.15,
        py::arg("sweep_distal") = 0.0, py::arg("n_elements_per_side") = 16);

    m.def("simulate_json", &simulate, py::arg("config_json"));

    m.def(
        "export_json",
        [](const std::string& config_json, const std::filesystem::path& out_dir, bool with_field) {
            const SimConfig cfg = parse_config(config_json);
            const SimulationResult r = biot_savart_map(cfg);
            if (r.failure == Failure::rejected) throw RejectedConfiguration(r.reason);
            if (r.failure == Failure::numeric) throw NumericError(r.reason);
            return export_outputs(cfg, r, out_dir, with_field);
        },
        py::arg("config_json"), py::arg("out_dir"), py::arg("with_field") = false);

    m.def("read_wake_vtk", [](const std::filesystem::path& p) { return wake_dict(read_wake_vtk(p)); });

    m.def(
        "wake_distance",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
            return wake_distance(points_from(a), points_from(b));
        },
        py::arg("w"), py::arg("wd"));

    m.def(
        "optimize_json",
        [](const std::string& config_json, const std::filesystem::path& desired,
           std::optional<std::vector<double>> x0, int budget) {
            const SimConfig cfg = parse_config(config_json);
            const WakeStructure wd = read_wake_vtk(desired);
            const DesignSpace space = DesignSpace::from_config(cfg.optimizer);
            std::vector<double> start = x0 ? *x0 : cfg.optimizer.x0;
            if (start.empty()) start = space.values(Candidate::from_config(cfg));
            OptResult res;
            {
                py::gil_scoped_release release;
                res = optimize(cfg, wd, start, budget > 0 ? budget : cfg.optimizer.budget);
            }
            py::dict d;
            d["best"] = res.best;
            d["best_cost"] = res.best_cost;
            d["evaluations"] = res.evaluations;
            d["terminated_by"] = to_string(res.terminated_by);
            d["best_so_far"] = res.best_so_far();
            std::vector<std::string> names;
            for (auto f : space.fields) names.push_back(to_string(f));
            d["fields"] = names;
            return d;
        },
        py::arg("config_json"), py::arg("desired"), py::arg("x0") = py::none(),
        py::arg("budget") = 0);

    m.def("check", [] {
        py::list out;
        for (const auto& r : oracle_suite()) {
            py::dict d;
            d["name"] = r.name;
            d["value"] = r.value;
            d["limit"] = r.limit;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            out.append(d);
        }
        return out;
    });
}

#include "wakegait/io.hpp"

#include "wakegait/error.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace wakegait {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return in;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw std::runtime_error("not a number: '" + s + "'");
    }
    return v;
}

void write_vec(std::ostream& out, const Vec3& v) {
    out << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z());
}

}  // namespace

void write_wake_vtk(std::ostream& out, const WakeStructure& w) {
    out << "# vtk DataFile Version 3.0\n";
    out << "wakegait wake structure rows " << w.rows << " strips " << w.strips << "\n";
    out << "ASCII\nDATASET POLYDATA\n";
    out << "POINTS " << w.vertices.size() << " double\n";
    for (const Vec3& v : w.vertices) {
        write_vec(out, v);
        out << '\n';
    }
    out << "POLYGONS " << w.faces.size() << ' ' << 5 * w.faces.size() << '\n';
    for (const auto& f : w.faces) out << "4 " << f[0] << ' ' << f[1] << ' ' << f[2] << ' ' << f[3] << '\n';
    out << "POINT_DATA " << w.vertices.size() << '\n';
    out << "SCALARS phase double 1\nLOOKUP_TABLE default\n";
    for (double p : w.phase) out << format_double(p) << '\n';
}

void write_wake_vtk(const std::filesystem::path& path, const WakeStructure& wake) {
    auto out = open_out(path);
    write_wake_vtk(out, wake);
}

WakeStructure read_wake_vtk(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("# vtk DataFile", 0) != 0) throw std::runtime_error("not a legacy VTK file");
    std::getline(in, line);  // title
    std::getline(in, line);
    if (line.rfind("ASCII", 0) != 0) throw std::runtime_error("only ASCII VTK is supported");
    WakeStructure w;
    std::string token;
    bool in_point_data = false;
    while (in >> token) {
        if (token == "DATASET") {
            in >> token;
            if (token != "POLYDATA") throw std::runtime_error("expected DATASET POLYDATA");
        } else if (token == "POINTS") {
            std::size_t n = 0;
            std::string type;
            in >> n >> type;
            w.vertices.resize(n);
            for (auto& v : w.vertices) {
                std::string a, b, c;
                in >> a >> b >> c;
                v = Vec3(parse_double(a), parse_double(b), parse_double(c));
            }
        } else if (token == "POLYGONS") {
            std::size_t n = 0, size = 0;
            in >> n >> size;
            for (std::size_t f = 0; f < n; ++f) {
                int count = 0;
                in >> count;
                if (count != 4) throw std::runtime_error("only quad polygons are supported");
                std::array<int, 4> q{};
                in >> q[0] >> q[1] >> q[2] >> q[3];
                w.faces.push_back(q);
            }
        } else if (token == "POINT_DATA") {
            std::size_t n = 0;
            in >> n;
            in_point_data = true;
        } else if (token == "SCALARS" && in_point_data) {
            std::string name, type;
            in >> name >> type;
            std::getline(in, line);  // optional component count
            std::getline(in, line);  // LOOKUP_TABLE
            std::vector<double> values(w.vertices.size());
            for (auto& v : values) {
                in >> token;
                v = parse_double(token);
            }
            if (name == "phase") w.phase = std::move(values);
        } else if (!in) {
            break;
        }
    }
    if (!in.eof() && in.fail()) throw std::runtime_error("malformed VTK file " + path.string());

    // regular lattice: first face is (0, 1, stride+1, stride)
    if (!w.faces.empty()) {
        const int stride = w.faces.front()[3];
        if (stride > 1 && w.vertices.size() % static_cast<std::size_t>(stride) == 0) {
            const int rows = static_cast<int>(w.vertices.size()) / stride - 1;
            if (static_cast<std::size_t>(rows * (stride - 1)) == w.faces.size()) {
                w.rows = rows;
                w.strips = stride - 1;
            }
        }
    }
    return w;
}

void write_field_vtk(std::ostream& out, const FieldGrid& g,
                     const std::vector<double>& iso_thresholds) {
    out << "# vtk DataFile Version 3.0\n";
    out << "wakegait omega_x iso_thresholds";
    for (double t : iso_thresholds) out << ' ' << format_double(t);
    out << "\nASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.dims[0] << ' ' << g.dims[1] << ' ' << g.dims[2] << '\n';
    out << "ORIGIN ";
    write_vec(out, g.origin);
    out << "\nSPACING ";
    write_vec(out, g.spacing);
    out << "\nPOINT_DATA " << g.point_count() << '\n';
    out << "SCALARS omega_x double 1\nLOOKUP_TABLE default\n";
    for (double w : g.omega_x) out << format_double(w) << '\n';
    out << "VECTORS velocity double\n";
    for (const Vec3& v : g.velocity) {
        write_vec(out, v);
        out << '\n';
    }
}

void write_field_vtk(const std::filesystem::path& path, const FieldGrid& grid,
                     const std::vector<double>& iso_thresholds) {
    auto out = open_out(path);
    write_field_vtk(out, grid, iso_thresholds);
}

FieldFile read_field_vtk(const std::filesystem::path& path) {
    auto in = open_in(path);
    FieldFile f;
    std::string line;
    std::getline(in, line);
    if (line.rfind("# vtk DataFile", 0) != 0) throw std::runtime_error("not a legacy VTK file");
    std::getline(in, line);
    {
        std::istringstream title(line);
        std::string word;
        bool thresholds = false;
        while (title >> word) {
            if (thresholds) f.iso_thresholds.push_back(parse_double(word));
            if (word == "iso_thresholds") thresholds = true;
        }
    }
    std::string token;
    std::size_t npoints = 0;
    while (in >> token) {
        if (token == "DIMENSIONS") {
            in >> f.dims[0] >> f.dims[1] >> f.dims[2];
        } else if (token == "ORIGIN" || token == "SPACING") {
            std::string a, b, c;
            in >> a >> b >> c;
            (token == "ORIGIN" ? f.origin : f.spacing) =
                Vec3(parse_double(a), parse_double(b), parse_double(c));
        } else if (token == "POINT_DATA") {
            in >> npoints;
        } else if (token == "SCALARS") {
            std::string name, type;
            in >> name >> type;
            std::getline(in, line);
            std::getline(in, line);
            std::vector<double> values(npoints);
            for (auto& v : values) {
                in >> token;
                v = parse_double(token);
            }
            if (name == "omega_x") f.omega_x = std::move(values);
        }
    }
    return f;
}

CirculationHistory circulation_history(const SimulationResult& r) {
    CirculationHistory h;
    h.times = r.times;
    for (const auto& e : r.wing.elements) h.stations.push_back(e.s);
    for (const VecX& g : r.gamma_history) h.gamma.emplace_back(g.data(), g.data() + g.size());
    return h;
}

void write_circulation_csv(const std::filesystem::path& path, const CirculationHistory& h) {
    auto out = open_out(path);
    const std::size_t n = h.stations.size();
    out << 't';
    for (std::size_t i = 0; i < n; ++i) out << ",s_" << i;
    for (std::size_t i = 0; i < n; ++i) out << ",gamma_" << i;
    out << '\n';
    for (std::size_t r = 0; r < h.times.size(); ++r) {
        out << format_double(h.times[r]);
        for (double s : h.stations) out << ',' << format_double(s);
        for (double g : h.gamma[r]) out << ',' << format_double(g);
        out << '\n';
    }
}

CirculationHistory read_circulation_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);
    const std::size_t columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (columns < 3 || (columns - 1) % 2 != 0) throw std::runtime_error("bad circulation header");
    const std::size_t n = (columns - 1) / 2;
    CirculationHistory h;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> values;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) values.push_back(parse_double(cell));
        if (values.size() != columns) throw std::runtime_error("bad circulation row");
        h.times.push_back(values[0]);
        if (h.stations.empty()) h.stations.assign(values.begin() + 1, values.begin() + 1 + static_cast<long>(n));
        h.gamma.emplace_back(values.begin() + 1 + static_cast<long>(n), values.end());
    }
    return h;
}

void write_slice_csv(const std::filesystem::path& path, const std::vector<SlicePoint>& points) {
    auto out = open_out(path);
    out << "x,y,z,v_y,v_z,omega_x\n";
    for (const auto& p : points) {
        out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.z) << ','
            << format_double(p.vy) << ',' << format_double(p.vz) << ',' << format_double(p.omega_x)
            << '\n';
    }
}

void write_opt_history_csv(const std::filesystem::path& path, const OptResult& result,
                           const DesignSpace& space) {
    auto out = open_out(path);
    out << "evaluation";
    for (DesignField f : space.fields) out << ',' << to_string(f);
    out << ",cost,best_so_far\n";
    const std::vector<double> best = result.best_so_far();
    for (std::size_t e = 0; e < result.history.size(); ++e) {
        out << e;
        for (double x : result.history[e].x) out << ',' << format_double(x);
        out << ',' << format_double(result.history[e].cost) << ',' << format_double(best[e]) << '\n';
    }
}

json opt_result_json(const OptResult& result, const DesignSpace& space) {
    json best = json::object();
    for (std::size_t i = 0; i < space.dim(); ++i) best[to_string(space.fields[i])] = result.best[i];
    return json{{"best", best},
                {"best_cost", result.best_cost},
                {"evaluations", result.evaluations},
                {"terminated_by", to_string(result.terminated_by)}};
}

json stroke_json(const StrokeVorticity& s) {
    return json{{"upstroke_positive", s.upstroke_positive},
                {"upstroke_negative", s.upstroke_negative},
                {"downstroke_positive", s.downstroke_positive},
                {"downstroke_negative", s.downstroke_negative}};
}

json run_manifest(const SimConfig& config, const SimulationResult& r) {
    const auto& inv = r.invariants;
    json m;
    m["version"] = version_string;
    m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                 "." + std::to_string(EIGEN_MINOR_VERSION);
    m["config"] = config_to_json(config);
    m["feasible"] = r.feasible();
    if (!r.feasible()) m["reason"] = r.reason;
    m["steps"] = r.times.empty() ? 0 : r.times.size() - 1;
    m["wake"] = {{"rows", r.wake.rows},
                 {"strips", r.wake.strips},
                 {"vertices", r.wake.vertices.size()},
                 {"faces", r.wake.faces.size()}};
    m["invariants"] = {{"kelvin", inv.kelvin},
                       {"tip_gamma", inv.tip_gamma},
                       {"mirror_error", inv.mirror_error},
                       {"max_even_ratio", inv.max_even_ratio},
                       {"condition_number", inv.condition_number},
                       {"stalled_samples", inv.stalled_samples},
                       {"max_substeps", inv.max_substeps}};
    return m;
}

void write_json(const std::filesystem::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

std::vector<std::filesystem::path> export_outputs(const SimConfig& config,
                                                  const SimulationResult& result,
                                                  const std::filesystem::path& dir,
                                                  bool with_field) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    const auto wake_path = dir / "wake.vtk";
    write_wake_vtk(wake_path, result.wake);
    written.push_back(wake_path);

    const auto circ_path = dir / "circulation.csv";
    write_circulation_csv(circ_path, circulation_history(result));
    written.push_back(circ_path);

    std::vector<SlicePoint> slices;
    for (double x : config.grid.slice_x) {
        const auto s = velocity_slice(result.lattice, &result.bound, x, config.grid.lower.y(),
                                      config.grid.upper.y(), config.grid.lower.z(),
                                      config.grid.upper.z(), config.grid.slice_dims[0],
                                      config.grid.slice_dims[1], config.wind);
        slices.insert(slices.end(), s.begin(), s.end());
    }
    const auto slice_path = dir / "slices.csv";
    write_slice_csv(slice_path, slices);
    written.push_back(slice_path);

    json manifest = run_manifest(config, result);
    if (with_field) {
        const FieldGrid grid = run_vorticity_field(result, config);
        const auto field_path = dir / "vorticity.vtk";
        write_field_vtk(field_path, grid, config.grid.iso_thresholds);
        written.push_back(field_path);
        manifest["iso_thresholds"] = config.grid.iso_thresholds;
        manifest["stroke_vorticity"] = stroke_json(
            stroke_vorticity(grid, result.lattice, config.gait, result.warmup_end_time));
    }
    const auto manifest_path = dir / "manifest.json";
    write_json(manifest_path, manifest);
    written.push_back(manifest_path);
    return written;
}

}  // namespace wakegait

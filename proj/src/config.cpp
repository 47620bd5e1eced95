#include "wakegait/config.hpp"

#include "wakegait/error.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace wakegait {

using json = nlohmann::ordered_json;

namespace {

class Block {
public:
    Block(const json& j, std::string prefix, std::set<std::string> allowed)
        : j_(j), prefix_(std::move(prefix)) {
        if (!j.is_object()) throw ConfigError(prefix_, "expected an object");
        for (const auto& [key, _] : j.items()) {
            if (!allowed.contains(key)) throw ConfigError(name(key), "unknown key");
        }
    }

    std::string name(const std::string& key) const {
        return prefix_.empty() ? key : prefix_ + "." + key;
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    template <class T>
    void get(const std::string& key, T& out) const {
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(name(key), std::string("wrong type: ") + e.what());
        }
    }

    void get(const std::string& key, double& out) const {
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(name(key), "expected a number");
        out = v.get<double>();
    }

    void get(const std::string& key, int& out) const {
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) throw ConfigError(name(key), "expected an integer");
        out = v.get<int>();
    }

    void get(const std::string& key, Vec3& out) const {
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_array() || v.size() != 3) throw ConfigError(name(key), "expected [x, y, z]");
        for (std::size_t i = 0; i < 3; ++i) {
            if (!v[i].is_number()) throw ConfigError(name(key), "expected numbers");
            out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
        }
    }

    const json& sub(const std::string& key) const { return j_.at(key); }

private:
    const json& j_;
    std::string prefix_;
};

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
}

bool positive(double v) { return std::isfinite(v) && v > 0; }

}  // namespace

void SimConfig::validate() const {
    require(positive(wing.semispan_proximal), "wing.semispan_proximal", "must be > 0");
    require(positive(wing.semispan_distal), "wing.semispan_distal", "must be > 0");
    require(positive(wing.chord_proximal), "wing.chord_proximal", "must be > 0");
    require(positive(wing.chord_distal), "wing.chord_distal", "must be > 0");
    require(std::isfinite(wing.sweep_distal) && std::abs(wing.sweep_distal) < pi / 2,
            "wing.sweep_distal", "|sweep| must be < pi/2");
    require(wing.n_elements_per_side >= 2, "wing.n_elements_per_side", "must be >= 2");

    require(positive(gait.frequency), "gait.frequency", "must be > 0");
    require(std::isfinite(gait.flap_amplitude) && gait.flap_amplitude >= 0, "gait.flap_amplitude",
            "must be >= 0");
    require(std::isfinite(gait.fold_amplitude) && gait.fold_amplitude >= 0, "gait.fold_amplitude",
            "must be >= 0");
    for (auto [v, f] : {std::pair{gait.flap_offset, "gait.flap_offset"},
                        std::pair{gait.incidence, "gait.incidence"},
                        std::pair{gait.fold_phase, "gait.fold_phase"},
                        std::pair{gait.pitch_gain, "gait.pitch_gain"}}) {
        require(std::isfinite(v), f, "must be finite");
    }

    require(std::isfinite(forward_speed) && forward_speed >= 0, "flight.forward_speed",
            "must be >= 0");
    require(positive(air_density), "flight.air_density", "must be > 0");
    require(wind.allFinite(), "flight.wind", "must be finite");
    require(positive(body_mass), "flight.body_mass", "must be > 0");

    require(dt_per_cycle >= 50, "simulation.dt_per_cycle", "must be >= 50");
    require(n_warmup >= 0, "simulation.n_warmup", "must be >= 0");
    require(n_cycles > n_warmup, "simulation.n_cycles", "must exceed n_warmup");
    require(n_keep_cycles >= 1, "simulation.n_keep_cycles", "must be >= 1");
    require(positive(core_radius), "simulation.core_radius", "must be > 0");

    for (int a = 0; a < 3; ++a) {
        require(grid.dims[static_cast<std::size_t>(a)] >= 3, "grid.dims", "need >= 3 points per axis");
        require(grid.upper[a] > grid.lower[a], "grid.upper", "must exceed grid.lower");
    }
    require(grid.slice_dims[0] >= 3 && grid.slice_dims[1] >= 3, "grid.slice_dims",
            "need >= 3 points per axis");

    const std::size_t nf = optimizer.fields.size();
    require(nf >= 1, "optimizer.fields", "need at least one field");
    require(optimizer.lower.size() == nf, "optimizer.lower", "one bound per field");
    require(optimizer.upper.size() == nf, "optimizer.upper", "one bound per field");
    require(optimizer.x0.empty() || optimizer.x0.size() == nf, "optimizer.x0",
            "one value per field");
    for (std::size_t i = 0; i < nf; ++i) {
        require(optimizer.upper[i] > optimizer.lower[i], "optimizer.upper",
                "must exceed optimizer.lower");
    }
    require(optimizer.budget >= static_cast<int>(nf) + 2, "optimizer.budget",
            "must be >= number of fields + 2");
}

SimConfig config_from_json(const json& j) {
    SimConfig c;
    Block root(j, "", {"wing", "gait", "flight", "simulation", "grid", "optimizer", "output_dir"});

    if (root.has("wing")) {
        Block b(root.sub("wing"), "wing",
                {"semispan_proximal", "semispan_distal", "chord_proximal", "chord_distal",
                 "sweep_distal", "n_elements_per_side"});
        b.get("semispan_proximal", c.wing.semispan_proximal);
        b.get("semispan_distal", c.wing.semispan_distal);
        b.get("chord_proximal", c.wing.chord_proximal);
        b.get("chord_distal", c.wing.chord_distal);
        b.get("sweep_distal", c.wing.sweep_distal);
        b.get("n_elements_per_side", c.wing.n_elements_per_side);
    }
    if (root.has("gait")) {
        Block b(root.sub("gait"), "gait",
                {"mode", "frequency", "flap_amplitude", "flap_offset", "incidence",
                 "fold_amplitude", "fold_phase", "pitch_gain"});
        std::string mode = to_string(c.gait.mode);
        b.get("mode", mode);
        try {
            c.gait.mode = gait_mode_from_string(mode);
        } catch (const ConfigError& e) {
            throw ConfigError("gait.mode", e.what());
        }
        b.get("frequency", c.gait.frequency);
        b.get("flap_amplitude", c.gait.flap_amplitude);
        b.get("flap_offset", c.gait.flap_offset);
        b.get("incidence", c.gait.incidence);
        b.get("fold_amplitude", c.gait.fold_amplitude);
        b.get("fold_phase", c.gait.fold_phase);
        b.get("pitch_gain", c.gait.pitch_gain);
    }
    if (root.has("flight")) {
        Block b(root.sub("flight"), "flight",
                {"forward_speed", "air_density", "wind", "body_mode", "body_mass"});
        b.get("forward_speed", c.forward_speed);
        b.get("air_density", c.air_density);
        b.get("wind", c.wind);
        std::string mode = to_string(c.body_mode);
        b.get("body_mode", mode);
        try {
            c.body_mode = body_mode_from_string(mode);
        } catch (const ConfigError& e) {
            throw ConfigError("flight.body_mode", e.what());
        }
        b.get("body_mass", c.body_mass);
    }
    bool core_given = false;
    if (root.has("simulation")) {
        Block b(root.sub("simulation"), "simulation",
                {"dt_per_cycle", "n_cycles", "n_warmup", "n_keep_cycles", "core_radius",
                 "downwash_mode", "wake_mode"});
        b.get("dt_per_cycle", c.dt_per_cycle);
        b.get("n_cycles", c.n_cycles);
        b.get("n_warmup", c.n_warmup);
        b.get("n_keep_cycles", c.n_keep_cycles);
        core_given = b.has("core_radius");
        b.get("core_radius", c.core_radius);
        std::string dw = to_string(c.downwash_mode);
        b.get("downwash_mode", dw);
        std::string wm = to_string(c.wake_mode);
        b.get("wake_mode", wm);
        try {
            c.downwash_mode = downwash_mode_from_string(dw);
        } catch (const ConfigError& e) {
            throw ConfigError("simulation.downwash_mode", e.what());
        }
        try {
            c.wake_mode = wake_mode_from_string(wm);
        } catch (const ConfigError& e) {
            throw ConfigError("simulation.wake_mode", e.what());
        }
    }
    if (!core_given) c.core_radius = 0.05 * c.wing.mean_chord();
    if (root.has("grid")) {
        Block b(root.sub("grid"), "grid",
                {"lower", "upper", "dims", "slice_x", "slice_dims", "iso_thresholds"});
        b.get("lower", c.grid.lower);
        b.get("upper", c.grid.upper);
        b.get("dims", c.grid.dims);
        b.get("slice_x", c.grid.slice_x);
        b.get("slice_dims", c.grid.slice_dims);
        b.get("iso_thresholds", c.grid.iso_thresholds);
    }
    if (root.has("optimizer")) {
        Block b(root.sub("optimizer"), "optimizer",
                {"fields", "lower", "upper", "x0", "budget", "seed"});
        b.get("fields", c.optimizer.fields);
        b.get("lower", c.optimizer.lower);
        b.get("upper", c.optimizer.upper);
        b.get("x0", c.optimizer.x0);
        b.get("budget", c.optimizer.budget);
        b.get("seed", c.optimizer.seed);
    }
    root.get("output_dir", c.output_dir);
    c.validate();
    return c;
}

SimConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte offset -> line/column
        const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < pos; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream msg;
        msg << "parse error at line " << line << ", column " << col << ": " << e.what();
        throw ConfigError("", msg.str());
    }
    return config_from_json(j);
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

json config_to_json(const SimConfig& c) {
    auto vec = [](const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); };
    json j;
    j["wing"] = {{"semispan_proximal", c.wing.semispan_proximal},
                 {"semispan_distal", c.wing.semispan_distal},
                 {"chord_proximal", c.wing.chord_proximal},
                 {"chord_distal", c.wing.chord_distal},
                 {"sweep_distal", c.wing.sweep_distal},
                 {"n_elements_per_side", c.wing.n_elements_per_side}};
    j["gait"] = {{"mode", to_string(c.gait.mode)},
                 {"frequency", c.gait.frequency},
                 {"flap_amplitude", c.gait.flap_amplitude},
                 {"flap_offset", c.gait.flap_offset},
                 {"incidence", c.gait.incidence},
                 {"fold_amplitude", c.gait.fold_amplitude},
                 {"fold_phase", c.gait.fold_phase},
                 {"pitch_gain", c.gait.pitch_gain}};
    j["flight"] = {{"forward_speed", c.forward_speed},
                   {"air_density", c.air_density},
                   {"wind", vec(c.wind)},
                   {"body_mode", to_string(c.body_mode)},
                   {"body_mass", c.body_mass}};
    j["simulation"] = {{"dt_per_cycle", c.dt_per_cycle},
                       {"n_cycles", c.n_cycles},
                       {"n_warmup", c.n_warmup},
                       {"n_keep_cycles", c.n_keep_cycles},
                       {"core_radius", c.core_radius},
                       {"downwash_mode", to_string(c.downwash_mode)},
                       {"wake_mode", to_string(c.wake_mode)}};
    j["grid"] = {{"lower", vec(c.grid.lower)},
                 {"upper", vec(c.grid.upper)},
                 {"dims", c.grid.dims},
                 {"slice_x", c.grid.slice_x},
                 {"slice_dims", c.grid.slice_dims},
                 {"iso_thresholds", c.grid.iso_thresholds}};
    j["optimizer"] = {{"fields", c.optimizer.fields},
                      {"lower", c.optimizer.lower},
                      {"upper", c.optimizer.upper},
                      {"x0", c.optimizer.x0},
                      {"budget", c.optimizer.budget},
                      {"seed", c.optimizer.seed}};
    j["output_dir"] = c.output_dir;
    return j;
}

std::string dump_config(const SimConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

void save_config(const SimConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("", "cannot write config file " + path.string());
    out << dump_config(cfg);
}

}  // namespace wakegait

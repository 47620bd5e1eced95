// wakegait command-line driver.
//
//   wakegait simulate <config.json> [--out DIR]
//   wakegait field    <config.json> [--out DIR]
//   wakegait optimize <config.json> <Wd.vtk> [--out DIR] [--budget N]
//   wakegait compare  <configA.json> <configB.json>
//   wakegait check
//
// Errors go to stderr as one JSON object; exit codes 0 ok, 2 config,
// 3 numeric, 4 check failure.

#include "wakegait/checks.hpp"
#include "wakegait/config.hpp"
#include "wakegait/error.hpp"
#include "wakegait/gait_opt.hpp"
#include "wakegait/io.hpp"
#include "wakegait/simulation.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace wakegait;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* incomplete_marker = "INCOMPLETE";

struct Failed {
    ExitCode code;
    json error;
};

[[noreturn]] void fail(ExitCode code, const std::string& kind, const std::string& message,
                       const std::string& field = {}) {
    json e{{"error", kind}, {"message", message}};
    if (!field.empty()) e["field"] = field;
    throw Failed{code, e};
}

fs::path output_dir(const SimConfig& cfg, const std::string& override_dir) {
    return override_dir.empty() ? fs::path(cfg.output_dir) : fs::path(override_dir);
}

void begin_output(const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream(dir / incomplete_marker) << "run in progress\n";
}

void end_output(const fs::path& dir) { fs::remove(dir / incomplete_marker); }

SimulationResult run_or_fail(const SimConfig& cfg) {
    SimulationResult r = biot_savart_map(cfg);
    if (!r.feasible()) {
        fail(ExitCode::numeric, r.failure == Failure::rejected ? "rejected" : "numeric", r.reason);
    }
    return r;
}

int cmd_simulate(const std::string& config_path, const std::string& out, bool with_field) {
    const SimConfig cfg = load_config(config_path);
    const fs::path dir = output_dir(cfg, out);
    begin_output(dir);
    const SimulationResult r = run_or_fail(cfg);
    for (const auto& p : export_outputs(cfg, r, dir, with_field)) std::cout << p.string() << '\n';
    end_output(dir);
    return 0;
}

int cmd_optimize(const std::string& config_path, const std::string& wd_path,
                 const std::string& out, int budget) {
    const SimConfig cfg = load_config(config_path);
    const WakeStructure desired = read_wake_vtk(wd_path);
    const DesignSpace space = DesignSpace::from_config(cfg.optimizer);
    std::vector<double> x0 = cfg.optimizer.x0;
    if (x0.empty()) x0 = space.values(Candidate::from_config(cfg));
    if (budget <= 0) budget = cfg.optimizer.budget;
    if (budget < static_cast<int>(space.dim()) + 2) {
        fail(ExitCode::config, "config", "budget must be >= dim + 2", "optimizer.budget");
    }

    const fs::path dir = output_dir(cfg, out);
    begin_output(dir);
    const OptResult res = optimize(cfg, desired, x0, budget);
    json j = opt_result_json(res, space);
    j["x0"] = x0;
    j["desired"] = wd_path;
    write_json(dir / "opt_result.json", j);
    write_opt_history_csv(dir / "opt_history.csv", res, space);
    std::cout << j.dump(2) << '\n';
    end_output(dir);
    return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
    const SimConfig a = load_config(a_path);
    const SimConfig b = load_config(b_path);
    auto stroke = [](const SimConfig& c) {
        try {
            return run_stroke_vorticity(c);
        } catch (const RejectedConfiguration& e) {
            fail(ExitCode::numeric, "rejected", e.what());
        }
    };
    const StrokeVorticity sa = stroke(a);
    const StrokeVorticity sb = stroke(b);
    json report{{"a", {{"config", a_path}, {"stroke", stroke_json(sa)}}},
                {"b", {{"config", b_path}, {"stroke", stroke_json(sb)}}}};
    report["upstroke_positive_ratio_b_over_a"] =
        sa.upstroke_positive != 0.0 ? sb.upstroke_positive / sa.upstroke_positive : 0.0;
    report["b_upstroke_positive_smaller"] = sb.upstroke_positive < sa.upstroke_positive;
    std::cout << report.dump(2) << '\n';
    return 0;
}

int cmd_check() {
    bool ok = true;
    for (const auto& r : oracle_suite()) {
        std::cout << format_check(r) << '\n';
        ok = ok && r.passed;
    }
    std::cout << (ok ? "all checks passed" : "check suite FAILED") << '\n';
    return ok ? 0 : static_cast<int>(ExitCode::check);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wakegait: morphing-wing wake simulation and gait design"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string);

    std::string config, config_b, desired, out;
    int budget = 0;

    auto* simulate = app.add_subcommand("simulate", "run the simulation and export outputs");
    simulate->add_option("config", config, "JSON config")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out, "output directory (overrides output_dir)");

    auto* field = app.add_subcommand("field", "simulate and also export the vorticity grid");
    field->add_option("config", config, "JSON config")->required()->check(CLI::ExistingFile);
    field->add_option("--out", out, "output directory (overrides output_dir)");

    auto* opt = app.add_subcommand("optimize", "fit design fields to a desired wake mesh");
    opt->add_option("config", config, "JSON config")->required()->check(CLI::ExistingFile);
    opt->add_option("desired", desired, "desired wake mesh (legacy VTK)")
        ->required()
        ->check(CLI::ExistingFile);
    opt->add_option("--out", out, "output directory (overrides output_dir)");
    opt->add_option("--budget", budget, "evaluation budget (overrides optimizer.budget)");

    auto* compare = app.add_subcommand("compare", "upstroke/downstroke omega_x integrals of two gaits");
    compare->add_option("config_a", config, "first config")->required()->check(CLI::ExistingFile);
    compare->add_option("config_b", config_b, "second config")->required()->check(CLI::ExistingFile);

    auto* check = app.add_subcommand("check", "run the built-in oracle suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
        return static_cast<int>(ExitCode::config);
    }

    try {
        if (*simulate) return cmd_simulate(config, out, false);
        if (*field) return cmd_simulate(config, out, true);
        if (*opt) return cmd_optimize(config, desired, out, budget);
        if (*compare) return cmd_compare(config, config_b);
        if (*check) return cmd_check();
    } catch (const Failed& f) {
        std::cerr << f.error.dump() << '\n';
        return static_cast<int>(f.code);
    } catch (const ConfigError& e) {
        json j{{"error", "config"}, {"message", e.what()}};
        if (!e.field().empty()) j["field"] = e.field();
        std::cerr << j.dump() << '\n';
        return static_cast<int>(ExitCode::config);
    } catch (const RejectedConfiguration& e) {
        std::cerr << json{{"error", "rejected"}, {"message", e.what()}}.dump() << '\n';
        return static_cast<int>(ExitCode::numeric);
    } catch (const NumericError& e) {
        std::cerr << json{{"error", "numeric"}, {"message", e.what()}}.dump() << '\n';
        return static_cast<int>(ExitCode::numeric);
    } catch (const MeshMismatch& e) {
        std::cerr << json{{"error", "mesh_mismatch"}, {"message", e.what()}}.dump() << '\n';
        return static_cast<int>(ExitCode::config);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "io"}, {"message", e.what()}}.dump() << '\n';
        return static_cast<int>(ExitCode::config);
    }
    return 0;
}

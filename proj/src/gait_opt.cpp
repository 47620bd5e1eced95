#include "wakegait/gait_opt.hpp"

#include "wakegait/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wakegait {

double wake_distance(std::span<const Vec3> w, std::span<const Vec3> wd) {
    if (w.size() != wd.size()) {
        throw MeshMismatch("wake_distance: vertex counts differ (" + std::to_string(w.size()) +
                           " vs " + std::to_string(wd.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) sum += (w[i] - wd[i]).squaredNorm();
    return sum;
}

double wake_distance(const WakeStructure& w, const WakeStructure& wd) {
    return wake_distance(w.vertices, wd.vertices);
}

DesignField design_field_from_string(const std::string& name) {
    static const std::pair<const char*, DesignField> table[] = {
        {"chord_proximal", DesignField::chord_proximal}, {"chord_distal", DesignField::chord_distal},
        {"sweep_distal", DesignField::sweep_distal},     {"flap_amplitude", DesignField::flap_amplitude},
        {"fold_amplitude", DesignField::fold_amplitude}, {"fold_phase", DesignField::fold_phase},
        {"pitch_gain", DesignField::pitch_gain},         {"incidence", DesignField::incidence}};
    for (const auto& [n, f] : table) {
        if (name == n) return f;
    }
    throw ConfigError("optimizer.fields", "unknown design field '" + name + "'");
}

std::string to_string(DesignField field) {
    switch (field) {
        case DesignField::chord_proximal: return "chord_proximal";
        case DesignField::chord_distal: return "chord_distal";
        case DesignField::sweep_distal: return "sweep_distal";
        case DesignField::flap_amplitude: return "flap_amplitude";
        case DesignField::fold_amplitude: return "fold_amplitude";
        case DesignField::fold_phase: return "fold_phase";
        case DesignField::pitch_gain: return "pitch_gain";
        case DesignField::incidence: return "incidence";
    }
    return "?";
}

DesignSpace DesignSpace::from_config(const OptimizerSpec& spec) {
    DesignSpace s;
    for (const auto& name : spec.fields) s.fields.push_back(design_field_from_string(name));
    s.lower = spec.lower;
    s.upper = spec.upper;
    return s;
}

bool DesignSpace::contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < dim(); ++i) {
        if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
    }
    return true;
}

std::vector<double> DesignSpace::clamp(std::span<const double> x) const {
    std::vector<double> out(dim());
    for (std::size_t i = 0; i < dim(); ++i) out[i] = std::clamp(x[i], lower[i], upper[i]);
    return out;
}

std::vector<double> DesignSpace::normalize(std::span<const double> x) const {
    std::vector<double> u(dim());
    for (std::size_t i = 0; i < dim(); ++i) u[i] = (x[i] - lower[i]) / (upper[i] - lower[i]);
    return u;
}

std::vector<double> DesignSpace::denormalize(std::span<const double> u) const {
    std::vector<double> x(dim());
    for (std::size_t i = 0; i < dim(); ++i) x[i] = lower[i] + u[i] * (upper[i] - lower[i]);
    return x;
}

namespace {

double& field_ref(Candidate& c, DesignField f) {
    switch (f) {
        case DesignField::chord_proximal: return c.wing.chord_proximal;
        case DesignField::chord_distal: return c.wing.chord_distal;
        case DesignField::sweep_distal: return c.wing.sweep_distal;
        case DesignField::flap_amplitude: return c.gait.flap_amplitude;
        case DesignField::fold_amplitude: return c.gait.fold_amplitude;
        case DesignField::fold_phase: return c.gait.fold_phase;
        case DesignField::pitch_gain: return c.gait.pitch_gain;
        case DesignField::incidence: return c.gait.incidence;
    }
    return c.wing.chord_proximal;
}

}  // namespace

std::vector<double> DesignSpace::values(const Candidate& c) const {
    Candidate copy = c;
    std::vector<double> x;
    for (DesignField f : fields) x.push_back(field_ref(copy, f));
    return x;
}

Candidate DesignSpace::apply(const Candidate& base, std::span<const double> x) const {
    Candidate c = base;
    for (std::size_t i = 0; i < dim(); ++i) field_ref(c, fields[i]) = x[i];
    return c;
}

double evaluate_candidate(std::span<const double> x, const DesignSpace& space,
                          const Candidate& base, const SimConfig& config,
                          const WakeStructure& desired) {
    double penalty = 0.0;
    std::vector<double> xc(x.begin(), x.end());
    if (!space.contains(x)) {
        xc = space.clamp(x);
        const std::vector<double> u = space.normalize(x);
        const std::vector<double> uc = space.normalize(xc);
        double d2 = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double d = std::isfinite(u[i]) ? u[i] - uc[i] : 1e6;
            d2 += d * d;
        }
        penalty = out_of_bounds_cost + bound_penalty_weight * d2;
    }
    const SimulationResult run = biot_savart_map(space.apply(base, xc), config);
    if (!run.feasible()) return infeasible_cost + penalty;
    try {
        return wake_distance(run.wake, desired) + penalty;
    } catch (const MeshMismatch&) {
        return infeasible_cost + penalty;
    }
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::budget: return "budget";
        case Termination::tolerance: return "tolerance";
        case Termination::simplex_collapse: return "simplex_collapse";
    }
    return "?";
}

std::vector<double> OptResult::best_so_far() const {
    std::vector<double> out;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : history) {
        best = std::min(best, e.cost);
        out.push_back(best);
    }
    return out;
}

namespace {

struct Vertex {
    std::vector<double> u;
    double cost;
};

class BudgetExhausted {};

}  // namespace

OptResult nelder_mead(const Objective& f, const DesignSpace& space, std::span<const double> x0,
                      const NelderMeadOptions& opts) {
    const std::size_t d = space.dim();
    OptResult res;
    res.best_cost = std::numeric_limits<double>::infinity();

    auto eval = [&](const std::vector<double>& u) {
        if (res.evaluations >= opts.budget) throw BudgetExhausted{};
        const std::vector<double> x = space.denormalize(u);
        const double c = f(x);
        ++res.evaluations;
        res.history.push_back({x, c});
        if (c < res.best_cost) {
            res.best_cost = c;
            res.best = x;
        }
        return c;
    };

    std::vector<Vertex> simplex;
    try {
        const std::vector<double> u0 = space.normalize(x0);
        simplex.push_back({u0, eval(u0)});
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<double> u = u0;
            u[i] += (u[i] + opts.initial_step <= 1.0) ? opts.initial_step : -opts.initial_step;
            simplex.push_back({u, eval(u)});
        }

        for (;;) {
            std::sort(simplex.begin(), simplex.end(),
                      [](const Vertex& a, const Vertex& b) { return a.cost < b.cost; });
            double diameter = 0.0;
            for (std::size_t v = 1; v <= d; ++v) {
                double dist = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    dist = std::max(dist, std::abs(simplex[v].u[i] - simplex[0].u[i]));
                }
                diameter = std::max(diameter, dist);
            }
            if (diameter < opts.simplex_tolerance) {
                res.terminated_by = Termination::simplex_collapse;
                break;
            }
            const double spread = simplex[d].cost - simplex[0].cost;
            if (spread <= opts.cost_tolerance * std::abs(simplex[0].cost) + 1e-300) {
                res.terminated_by = Termination::tolerance;
                break;
            }

            std::vector<double> centroid(d, 0.0);
            for (std::size_t v = 0; v < d; ++v)
                for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[v].u[i] / d;
            auto along = [&](double t) {
                std::vector<double> u(d);
                for (std::size_t i = 0; i < d; ++i)
                    u[i] = centroid[i] + t * (simplex[d].u[i] - centroid[i]);
                return u;
            };

            const std::vector<double> ur = along(-1.0);
            const double cr = eval(ur);
            if (cr < simplex[0].cost) {
                const std::vector<double> ue = along(-2.0);
                const double ce = eval(ue);
                simplex[d] = ce < cr ? Vertex{ue, ce} : Vertex{ur, cr};
            } else if (cr < simplex[d - 1].cost) {
                simplex[d] = {ur, cr};
            } else {
                const bool outside = cr < simplex[d].cost;
                const std::vector<double> uc = along(outside ? -0.5 : 0.5);
                const double cc = eval(uc);
                if (cc < (outside ? cr : simplex[d].cost)) {
                    simplex[d] = {uc, cc};
                } else {
                    for (std::size_t v = 1; v <= d; ++v) {
                        for (std::size_t i = 0; i < d; ++i)
                            simplex[v].u[i] = simplex[0].u[i] + 0.5 * (simplex[v].u[i] - simplex[0].u[i]);
                        simplex[v].cost = eval(simplex[v].u);
                    }
                }
            }
        }
    } catch (const BudgetExhausted&) {
        res.terminated_by = Termination::budget;
    }
    return res;
}

OptResult optimize(const SimConfig& config, const WakeStructure& desired,
                   std::span<const double> x0, int budget) {
    const DesignSpace space = DesignSpace::from_config(config.optimizer);
    if (x0.size() != space.dim()) throw std::invalid_argument("optimize: x0 dimension mismatch");
    if (budget < static_cast<int>(space.dim()) + 2) {
        throw std::invalid_argument("optimize: budget must be >= dim + 2");
    }
    const Candidate base = Candidate::from_config(config);
    NelderMeadOptions opts;
    opts.budget = budget;
    return nelder_mead(
        [&](std::span<const double> x) {
            return evaluate_candidate(x, space, base, config, desired);
        },
        space, x0, opts);
}

}  // namespace wakegait

#include "wakegait/simulation.hpp"

#include "wakegait/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wakegait {

namespace {

struct Stage {
    ElementKinematics kin;
    MotionWash wash;
    AeroSystem sys;
};

BodyState body_at(const BodyState& body, double tau) {
    BodyState b = body;
    b.position += body.velocity * tau;
    return b;
}

Stage evaluate_stage(const Wing& wing, const GaitParams& gait, const BodyState& body, double t,
                     const SimConfig& cfg, const std::shared_ptr<const FourierBasis>& basis,
                     int& stalled) {
    Stage st;
    st.kin = element_kinematics(wing, eval_gait(gait, t), body);
    st.wash = motion_wash(st.kin, cfg.wind);
    stalled += static_cast<int>(st.wash.stalled.size());
    const VecX speed = st.wash.speed.cwiseMax(min_relative_speed);
    st.sys = assemble_aero(basis, speed);
    return st;
}

double even_ratio(const VecX& a) {
    const double norm = a.norm();
    if (norm == 0.0) return 0.0;
    double even = 0.0;
    for (Eigen::Index k = 1; k < a.size(); k += 2) even = std::max(even, std::abs(a[k]));
    return even / norm;
}

double tip_gamma(const VecX& a) {
    double g0 = 0.0, gpi = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        const double m = static_cast<double>(k + 1);
        g0 += a[k] * std::sin(m * 0.0);
        gpi += a[k] * std::sin(m * pi);
    }
    const double scale = a.cwiseAbs().sum();
    return scale > 0.0 ? std::max(std::abs(g0), std::abs(gpi)) / scale : 0.0;
}

double mirror_error(const WakeStructure& w) {
    const int stride = w.strips + 1;
    double err = 0.0;
    for (int r = 0; r <= w.rows; ++r) {
        for (int i = 0; i < stride; ++i) {
            const Vec3& p = w.vertices[static_cast<std::size_t>(r * stride + i)];
            const Vec3& q = w.vertices[static_cast<std::size_t>(r * stride + (stride - 1 - i))];
            err = std::max(err, (p - mirror_y(q)).cwiseAbs().maxCoeff());
        }
    }
    return err;
}

}  // namespace

SimulationResult biot_savart_map(const Candidate& cand, const SimConfig& cfg) {
    SimulationResult res;
    try {
        cand.wing.validate();
        cand.gait.validate();
        res.wing = build_wing(cand.wing);
        const Wing& wing = res.wing;
        const auto basis =
            std::make_shared<const FourierBasis>(wing.elements, wing.semispan(), cfg.downwash_mode);
        res.invariants.condition_number = basis->condition_number();

        const int n = static_cast<int>(wing.size());
        const int steps_per_cycle = cfg.dt_per_cycle;
        const int steps = cfg.n_cycles * steps_per_cycle;
        const double period = cand.gait.period();
        const double dt = period / steps_per_cycle;
        const std::size_t keep_rows = static_cast<std::size_t>(cfg.n_keep_cycles) * steps_per_cycle;
        res.warmup_end_time = cfg.n_warmup * period;

        BodyState body;
        body.velocity = Vec3(cfg.forward_speed, 0.0, 0.0);
        AeroState state = AeroState::zero(n);
        int& stalled = res.invariants.stalled_samples;

        Stage start = evaluate_stage(wing, cand.gait, body, 0.0, cfg, basis, stalled);
        res.lattice = seed_lattice(start.kin.trailing_edge_nodes, 0.0, cfg.core_radius);
        res.times.push_back(0.0);
        res.gamma_history.push_back(VecX::Zero(n));
        res.force_history.push_back(Vec3::Zero());
        BoundVortex bound{start.kin.quarter_chord_nodes, std::vector<double>(n, 0.0)};

        for (int k = 0; k < steps; ++k) {
            const double t0 = k * dt;
            const double t1 = (k + 1) * dt;
            Stage end = evaluate_stage(wing, cand.gait, body_at(body, dt), t1, cfg, basis, stalled);

            // the wake step stays at dt; the aero march substeps when the
            // downwash coupling is stiff
            const int nsub = std::max(stable_substeps(start.sys, dt), stable_substeps(end.sys, dt));
            res.invariants.max_substeps = std::max(res.invariants.max_substeps, nsub);
            const double h = dt / nsub;
            const Stage* s0 = &start;
            Stage inner;
            for (int j = 0; j < nsub; ++j) {
                const double ts = t0 + j * h;
                Stage mid = evaluate_stage(wing, cand.gait, body_at(body, (j + 0.5) * h),
                                           ts + 0.5 * h, cfg, basis, stalled);
                Stage next;
                if (j + 1 < nsub) {
                    next = evaluate_stage(wing, cand.gait, body_at(body, (j + 1) * h), ts + h, cfg,
                                          basis, stalled);
                }
                const Stage& s1 = j + 1 < nsub ? next : end;
                state = step_aero(
                    StageInputs{&s0->sys, &mid.sys, &s1.sys, s0->wash.y1, mid.wash.y1, s1.wash.y1},
                    state, h);
                if (j + 1 < nsub) {
                    inner = std::move(next);
                    s0 = &inner;
                }
            }
            const AeroOutput out =
                force_output(end.sys, state, end.wash.y1, wing, end.kin, end.wash, cfg.air_density);

            // the wake moves under the field of the previous instant
            advect(res.lattice, dt, cfg.wind, cfg.wake_mode, &bound);
            std::vector<double> gamma(out.gamma.data(), out.gamma.data() + n);
            shed(res.lattice, end.kin.trailing_edge_nodes, gamma, t1, k + 1);
            truncate(res.lattice, keep_rows);
            bound = BoundVortex{end.kin.quarter_chord_nodes, gamma};

            body = step_body(body, out.total, cfg.body_mass, dt, cfg.body_mode);
            if (cfg.body_mode == BodyMode::point_mass) {
                // kinematics of the next step start from the integrated body
                end = evaluate_stage(wing, cand.gait, body, t1, cfg, basis, stalled);
            }

            res.times.push_back(t1);
            res.gamma_history.push_back(out.gamma);
            res.force_history.push_back(out.total);
            res.invariants.tip_gamma = std::max(res.invariants.tip_gamma, tip_gamma(state.a));
            res.invariants.max_even_ratio =
                std::max(res.invariants.max_even_ratio, even_ratio(state.a));
            start = std::move(end);
        }

        res.bound = bound;
        res.body = body;

        // final cycle: ring rows shed at steps (n_cycles-1)*spc+1 .. n_cycles*spc
        const long first_step = static_cast<long>(cfg.n_cycles - 1) * steps_per_cycle + 1;
        const long oldest = res.lattice.ring_rows.front().step;
        res.final_cycle_first_row = static_cast<int>(first_step - oldest);
        res.wake = wake_mesh(res.lattice, period, res.final_cycle_first_row, steps_per_cycle);

        for (const RingRow& row : res.lattice.ring_rows) {
            const VecX& h = res.gamma_history[static_cast<std::size_t>(row.step)];
            for (int i = 0; i < n; ++i) {
                if (row.gamma[static_cast<std::size_t>(i)] != h[i]) res.invariants.kelvin = false;
            }
        }
        res.invariants.mirror_error = mirror_error(res.wake);
    } catch (const RejectedConfiguration& e) {
        res.failure = Failure::rejected;
        res.reason = e.what();
    } catch (const NumericError& e) {
        res.failure = Failure::numeric;
        res.reason = e.what();
    }
    return res;
}

FieldGrid run_vorticity_field(const SimulationResult& result, const SimConfig& cfg) {
    FieldGrid grid = make_grid(cfg.grid.lower, cfg.grid.upper, cfg.grid.dims);
    return vorticity_field(result.lattice, &result.bound, std::move(grid), cfg.wind);
}

StrokeVorticity stroke_vorticity(const FieldGrid& grid, const WakeLattice& lattice,
                                 const GaitParams& gait, double warmup_end_time) {
    struct RowInfo {
        double x;
        bool counted;
        bool upstroke;
    };
    std::vector<RowInfo> rows;
    for (std::size_t r = 0; r < lattice.ring_rows.size(); ++r) {
        double x = 0.0;
        for (const Vec3& v : lattice.vertex_rows[r]) x += v.x();
        for (const Vec3& v : lattice.vertex_rows[r + 1]) x += v.x();
        x /= 2.0 * static_cast<double>(lattice.n_strips + 1);
        const double t = lattice.ring_rows[r].shed_time;
        // midpoint of the shedding interval decides the stroke
        const double t_mid = t - 0.5 * (r + 1 < lattice.vertex_row_time.size()
                                            ? lattice.vertex_row_time[r + 1] - lattice.vertex_row_time[r]
                                            : 0.0);
        rows.push_back({x, t > warmup_end_time, is_upstroke(gait, t_mid)});
    }
    StrokeVorticity out;
    if (rows.empty()) return out;
    const double dv = grid.spacing.x() * grid.spacing.y() * grid.spacing.z();
    const auto [nx, ny, nz] = grid.dims;
    for (int i = 1; i < nx - 1; ++i) {
        const double x = grid.origin.x() + i * grid.spacing.x();
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double d = std::abs(rows[r].x - x);
            if (d < best_d) {
                best_d = d;
                best = r;
            }
        }
        if (!rows[best].counted) continue;
        for (int k = 1; k < nz - 1; ++k)
            for (int j = 1; j < ny - 1; ++j) {
                const double w = grid.omega_x[grid.index(i, j, k)] * dv;
                if (rows[best].upstroke) {
                    (w > 0 ? out.upstroke_positive : out.upstroke_negative) += w;
                } else {
                    (w > 0 ? out.downstroke_positive : out.downstroke_negative) += w;
                }
            }
    }
    return out;
}

StrokeVorticity run_stroke_vorticity(const SimConfig& config) {
    const SimulationResult run = biot_savart_map(config);
    if (run.failure == Failure::rejected) throw RejectedConfiguration(run.reason);
    if (run.failure == Failure::numeric) throw NumericError(run.reason);
    const FieldGrid grid = run_vorticity_field(run, config);
    return stroke_vorticity(grid, run.lattice, config.gait, run.warmup_end_time);
}

}  // namespace wakegait

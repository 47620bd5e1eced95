#include "wakegait/checks.hpp"
#include "wakegait/config.hpp"
#include "wakegait/simulation.hpp"
#include "wakegait/wake.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wakegait;

namespace {

std::vector<Vec3> row_at(double x, int strips, double half_span, double z = 0.0) {
    std::vector<Vec3> r;
    for (int i = 0; i <= strips; ++i) r.emplace_back(x, -half_span + 2.0 * half_span * i / strips, z);
    return r;
}

// Un-merged closed loop fore(i+1) -> fore(i) -> ... -> aft(i) -> aft(i+1) -> ... -> fore(i+1).
void add_loop(std::vector<Filament>& out, const std::vector<std::vector<Vec3>>& rows, int i,
              double gamma) {
    const auto& fore = rows.back();
    const auto& aft = rows.front();
    out.push_back({fore[i + 1], fore[i], gamma});
    for (std::size_t r = rows.size() - 1; r > 0; --r) out.push_back({rows[r][i], rows[r - 1][i], gamma});
    out.push_back({aft[i], aft[i + 1], gamma});
    for (std::size_t r = 0; r + 1 < rows.size(); ++r) {
        out.push_back({rows[r][i + 1], rows[r + 1][i + 1], gamma});
    }
}

std::vector<Vec3> probe_points() {
    std::vector<Vec3> p;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int k = 0; k < 40; ++k) p.emplace_back(u(rng) + 0.1, u(rng), u(rng));
    return p;
}

SimConfig small_config() {
    SimConfig c;
    c.wing.n_elements_per_side = 6;
    c.dt_per_cycle = 100;
    c.n_cycles = 2;
    c.n_warmup = 1;
    return c;
}

}  // namespace

TEST_CASE("kernel: reversing a filament flips the velocity") {
    const Filament f{Vec3(0.1, -0.2, 0.05), Vec3(-0.3, 0.4, 0.2), 1.3};
    const Filament r{f.b, f.a, f.gamma};
    for (const Vec3& p : probe_points()) {
        CHECK((filament_velocity(f, p, 0.01) + filament_velocity(r, p, 0.01)).norm() == 0.0);
    }
}

TEST_CASE("kernel: zero circulation induces nothing") {
    const Filament f{Vec3(0, 0, 0), Vec3(1, 0, 0), 0.0};
    CHECK(filament_velocity(f, Vec3(0.5, 0.1, 0), 0.01).norm() == 0.0);
}

TEST_CASE("kernel: finite on the filament and at its ends") {
    const Filament f{Vec3(0, 0, 0), Vec3(1, 0, 0), 1.0};
    for (const Vec3& p : {Vec3(0, 0, 0), Vec3(0.5, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)}) {
        CHECK(filament_velocity(f, p, 0.01).allFinite());
    }
}

TEST_CASE("kernel: analytic oracles and far-field decay") {
    for (const auto& r : biot_savart_checks()) CHECK_MESSAGE(r.passed, format_check(r));
}

TEST_CASE("lattice: rows with constant strip circulation equal one long ring per strip") {
    const int n = 3;
    const std::vector<std::vector<Vec3>> rows{row_at(0.0, n, 0.1), row_at(0.05, n, 0.1, 0.01),
                                              row_at(0.1, n, 0.1, 0.03)};
    const std::vector<double> gamma{0.4, -0.2, 0.9};
    WakeLattice lat = seed_lattice(rows[0], 0.0, 0.005);
    shed(lat, rows[1], gamma, 1.0, 1);
    shed(lat, rows[2], gamma, 2.0, 2);

    std::vector<Filament> loops;
    for (int i = 0; i < n; ++i) add_loop(loops, rows, i, gamma[static_cast<std::size_t>(i)]);

    const auto pts = probe_points();
    const auto lattice_v = induced_velocity(lat, nullptr, pts);
    const auto loop_v = induced_velocity(loops, pts, 0.005);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        CHECK((lattice_v[k] - loop_v[k]).norm() <= 1e-10 * loop_v[k].norm() + 1e-14);
    }
}

TEST_CASE("lattice: merged filaments drop zero-strength shared edges") {
    WakeLattice lat = seed_lattice(row_at(0.0, 4, 0.1), 0.0, 0.005);
    const std::vector<double> g(4, 1.0);
    shed(lat, row_at(0.1, 4, 0.1), g, 1.0, 1);
    shed(lat, row_at(0.2, 4, 0.1), g, 2.0, 2);
    // uniform sheet: outer boundary only, 4 + 4 spanwise and 2 + 2 streamwise
    CHECK(collect_filaments(lat).size() == 12);
}

TEST_CASE("lattice: velocity is linear in the circulations") {
    const auto r0 = row_at(0.0, 2, 0.1), r1 = row_at(0.1, 2, 0.1, 0.02);
    WakeLattice a = seed_lattice(r0, 0.0, 0.005), b = a;
    shed(a, r1, std::vector<double>{0.3, 0.7}, 1.0);
    shed(b, r1, std::vector<double>{-0.6, -1.4}, 1.0);
    const auto pts = probe_points();
    const auto va = induced_velocity(a, nullptr, pts);
    const auto vb = induced_velocity(b, nullptr, pts);
    for (std::size_t k = 0; k < pts.size(); ++k) CHECK((vb[k] + 2.0 * va[k]).norm() <= 1e-13 * va[k].norm() + 1e-16);
}

TEST_CASE("lattice: zero-circulation wake induces nothing and free equals prescribed") {
    WakeLattice lat = seed_lattice(row_at(0.0, 3, 0.1), 0.0, 0.005);
    shed(lat, row_at(0.1, 3, 0.1, 0.05), std::vector<double>(3, 0.0), 1.0);
    for (const Vec3& v : induced_velocity(lat, nullptr, probe_points())) CHECK(v.norm() == 0.0);
    WakeLattice free = lat, fixed = lat;
    advect(free, 0.01, Vec3(-1, 0, 0), WakeMode::free);
    advect(fixed, 0.01, Vec3(-1, 0, 0), WakeMode::prescribed);
    CHECK(free.vertex_rows == fixed.vertex_rows);
}

TEST_CASE("lattice: prescribed transport moves 0.5 m per cycle at 1 m/s") {
    WakeLattice lat = seed_lattice(row_at(0.0, 2, 0.1), 0.0, 0.005);
    shed(lat, row_at(0.1, 2, 0.1), std::vector<double>{1.0, 1.0}, 1.0);
    const auto before = lat.vertex_rows;
    for (int k = 0; k < 200; ++k) advect(lat, 0.5 / 200, Vec3(-1, 0, 0), WakeMode::prescribed);
    for (std::size_t r = 0; r < before.size(); ++r) {
        for (std::size_t i = 0; i < before[r].size(); ++i) {
            CHECK(lat.vertex_rows[r][i].x() - before[r][i].x() == doctest::Approx(-0.5).epsilon(1e-12));
            CHECK(lat.ring_rows.front().gamma[0] == 1.0);
        }
    }
}

TEST_CASE("lattice: a free ring moves along its own induced velocity") {
    WakeLattice lat = seed_lattice(row_at(0.0, 1, 0.05), 0.0, 0.005);
    shed(lat, row_at(0.1, 1, 0.05), std::vector<double>{1.0}, 1.0);
    const Vec3 centre(0.05, 0.0, 0.0);
    const Vec3 vc = induced_velocity(lat, nullptr, std::span<const Vec3>(&centre, 1))[0];
    REQUIRE(std::abs(vc.z()) > 0.0);
    CHECK(std::abs(vc.x()) < 1e-12);
    CHECK(std::abs(vc.y()) < 1e-12);
    advect(lat, 1e-3, Vec3::Zero(), WakeMode::free);
    Vec3 mean = Vec3::Zero();
    for (const auto& row : lat.vertex_rows)
        for (const auto& v : row) mean += v;
    mean /= 4.0;
    CHECK(mean.z() * vc.z() > 0.0);
    CHECK(std::abs(mean.x() - 0.05) < 1e-12);
}

TEST_CASE("lattice: truncation keeps the newest rows") {
    WakeLattice lat = seed_lattice(row_at(0.0, 2, 0.1), 0.0, 0.005);
    for (int k = 1; k <= 5; ++k) shed(lat, row_at(0.1 * k, 2, 0.1), std::vector<double>{1.0 * k, 0.0}, k);
    truncate(lat, 3);
    CHECK(lat.ring_rows.size() == 3);
    CHECK(lat.vertex_rows.size() == 4);
    CHECK(lat.ring_rows.front().gamma[0] == 3.0);
    CHECK(lat.ring_count() == 6);
}

TEST_CASE("mesh: vertex, face and edge counts") {
    WakeLattice lat = seed_lattice(row_at(0.0, 4, 0.1), 0.0, 0.005);
    for (int k = 1; k <= 3; ++k) shed(lat, row_at(0.1 * k, 4, 0.1), std::vector<double>(4, 1.0), 0.1 * k);
    const WakeStructure w = wake_mesh(lat, 0.5);
    CHECK(w.rows == 3);
    CHECK(w.strips == 4);
    CHECK(w.vertex_count() == 20);
    CHECK(w.faces.size() == 12);
    CHECK(w.edges.size() == 31);
    CHECK(w.phase.size() == 20);
    for (double p : w.phase) {
        CHECK(p >= 0.0);
        CHECK(p < 1.0);
    }
    CHECK_THROWS(wake_mesh(lat, 0.5, 2, 5));
}

TEST_CASE("field: zero-circulation wake gives a zero field") {
    WakeLattice lat = seed_lattice(row_at(0.0, 3, 0.1), 0.0, 0.005);
    shed(lat, row_at(0.1, 3, 0.1), std::vector<double>(3, 0.0), 1.0);
    const FieldGrid g = vorticity_field(lat, nullptr, make_grid(Vec3(-0.1, -0.1, -0.1), Vec3(0.2, 0.1, 0.1), {7, 5, 5}));
    for (double w : g.omega_x) CHECK(w == 0.0);
    for (const Vec3& v : g.velocity) CHECK(v.norm() == 0.0);
}

TEST_CASE("field: omega_x of a streamwise vortex integrates to its circulation") {
    const double rc = 0.01;
    WakeLattice lat = seed_lattice(row_at(-10.0, 1, 5.0), 0.0, rc);
    shed(lat, row_at(10.0, 1, 5.0), std::vector<double>{0.8}, 1.0);
    const double h = rc / 4;
    const FieldGrid g = vorticity_field(lat, nullptr,
                                        make_grid(Vec3(-h, 5.0 - 0.1, -0.1), Vec3(h, 5.0 + 0.1, 0.1), {3, 81, 81}));
    double total = 0.0;
    for (int k = 1; k < 80; ++k)
        for (int j = 1; j < 80; ++j) total += g.omega_x[g.index(1, j, k)] * g.spacing.y() * g.spacing.z();
    CHECK(std::abs(total) == doctest::Approx(0.8).epsilon(0.1));
}

TEST_CASE("field: resolved grid around a vortex is divergence-free") {
    const double rc = 0.01;
    WakeLattice lat = seed_lattice(row_at(0.0, 2, 0.1), 0.0, rc);
    shed(lat, row_at(0.1, 2, 0.1, 0.02), std::vector<double>{1.0, 0.4}, 1.0);
    const double h = rc / 8;
    const Vec3 tip = lat.vertex_rows[0][2];
    const Vec3 half = Vec3::Constant(0.5 * h * 19);
    const DivergenceReport d = divergence(vorticity_field(lat, nullptr, make_grid(tip - half, tip + half, {20, 20, 20})));
    CHECK(d.scale > 0.0);
    CHECK(d.max_divergence <= 1e-3 * d.scale);
}

TEST_CASE("simulation: counts, determinism and mirror symmetry") {
    SimConfig c = small_config();
    const SimulationResult a = biot_savart_map(c);
    REQUIRE(a.feasible());
    const std::size_t strips = 12;
    CHECK(a.lattice.ring_count() == 200 * strips);
    CHECK(a.wake.rows == 100);
    CHECK(a.wake.vertex_count() == 101 * (strips + 1));
    CHECK(a.invariants.kelvin);
    CHECK(a.invariants.mirror_error <= 1e-10);
    CHECK(a.invariants.tip_gamma <= 1e-12);

    const SimulationResult b = biot_savart_map(c);
    CHECK(a.wake.vertices == b.wake.vertices);
    CHECK(a.gamma_history == b.gamma_history);

    // the final-cycle wake spans one cycle of body travel
    const Vec3 first = a.wake.vertices.front();
    const Vec3 last = a.wake.vertices[a.wake.vertex_count() - strips - 1];
    CHECK(last.x() - first.x() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("simulation: three retained cycles hold 400 n rings at dt = T/200") {
    SimConfig c = small_config();
    c.dt_per_cycle = 200;
    c.n_cycles = 4;
    c.n_warmup = 1;
    const SimulationResult r = biot_savart_map(c);
    REQUIRE(r.feasible());
    CHECK(r.lattice.ring_count() == 3 * 200 * 12);
}

TEST_CASE("simulation: no flap and no incidence leaves a flat unloaded sheet") {
    SimConfig c = small_config();
    c.gait.flap_amplitude = 0.0;
    c.gait.incidence = 0.0;
    const SimulationResult r = biot_savart_map(c);
    REQUIRE(r.feasible());
    for (const auto& row : r.lattice.ring_rows)
        for (double g : row.gamma) CHECK(std::abs(g) < 1e-15);
    for (const Vec3& v : r.wake.vertices) CHECK(std::abs(v.z()) < 1e-15);

    SimConfig f = c;
    f.wake_mode = WakeMode::free;
    const SimulationResult rf = biot_savart_map(f);
    CHECK(rf.wake.vertices == r.wake.vertices);
}

TEST_CASE("simulation: flapping sheds nonzero circulation with alternating sign") {
    const SimulationResult r = biot_savart_map(small_config());
    REQUIRE(r.feasible());
    double lo = 0.0, hi = 0.0;
    for (const auto& row : r.lattice.ring_rows) {
        lo = std::min(lo, row.gamma[6]);
        hi = std::max(hi, row.gamma[6]);
    }
    CHECK(lo < 0.0);
    CHECK(hi > 0.0);
}

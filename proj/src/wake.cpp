#include "wakegait/wake.hpp"

#include "wakegait/error.hpp"
#include "wakegait/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wakegait {

Vec3 filament_velocity(const Filament& f, const Vec3& p, double core_radius) {
    const Vec3 r1 = p - f.a;
    const Vec3 r2 = p - f.b;
    const Vec3 r0 = f.b - f.a;
    const double rc2 = core_radius * core_radius;
    const double n1 = std::sqrt(r1.squaredNorm() + rc2);
    const double n2 = std::sqrt(r2.squaredNorm() + rc2);
    if (n1 < 1e-14 || n2 < 1e-14) return Vec3::Zero();
    const Vec3 cross = r1.cross(r2);
    const double denom = cross.squaredNorm() + rc2 * r0.squaredNorm();
    if (denom < 1e-300) return Vec3::Zero();
    const double along = r0.dot(r1 / n1 - r2 / n2);
    return (f.gamma / (4.0 * pi) * along / denom) * cross;
}

std::vector<Vec3> induced_velocity(std::span<const Filament> filaments,
                                   std::span<const Vec3> targets, double core_radius) {
    std::vector<Vec3> out(targets.size(), Vec3::Zero());
    parallel_for(targets.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            Vec3 v = Vec3::Zero();
            for (const Filament& f : filaments) v += filament_velocity(f, targets[t], core_radius);
            out[t] = v;
        }
    });
    return out;
}

WakeLattice seed_lattice(std::span<const Vec3> te, double t, double core_radius) {
    if (te.size() < 2) throw std::invalid_argument("seed_lattice: need at least two nodes");
    WakeLattice lattice;
    lattice.n_strips = static_cast<int>(te.size()) - 1;
    lattice.core_radius = core_radius;
    lattice.vertex_rows.emplace_back(te.begin(), te.end());
    lattice.vertex_row_time.push_back(t);
    return lattice;
}

void shed(WakeLattice& lattice, std::span<const Vec3> te, std::span<const double> gamma,
          double t, long step) {
    const auto n = static_cast<std::size_t>(lattice.n_strips);
    if (te.size() != n + 1 || gamma.size() != n) {
        throw std::invalid_argument("shed: expected n+1 trailing-edge nodes and n circulations");
    }
    lattice.vertex_rows.emplace_back(te.begin(), te.end());
    lattice.vertex_row_time.push_back(t);
    lattice.ring_rows.push_back(RingRow{std::vector<double>(gamma.begin(), gamma.end()), t, step});
}

void truncate(WakeLattice& lattice, std::size_t max_rows) {
    while (lattice.ring_rows.size() > max_rows) {
        lattice.ring_rows.pop_front();
        lattice.vertex_rows.pop_front();
        lattice.vertex_row_time.pop_front();
    }
}

std::vector<Filament> collect_filaments(const WakeLattice& lattice, const BoundVortex* bound) {
    const int n = lattice.n_strips;
    // Row views: vertex rows aft to fore, plus the quarter-chord row of the wing.
    std::vector<const std::vector<Vec3>*> rows;
    std::vector<const std::vector<double>*> gammas;
    for (const auto& r : lattice.vertex_rows) rows.push_back(&r);
    for (const auto& r : lattice.ring_rows) gammas.push_back(&r.gamma);
    if (bound) {
        if (bound->quarter_chord_nodes.size() != static_cast<std::size_t>(n + 1) ||
            bound->gamma.size() != static_cast<std::size_t>(n)) {
            throw std::invalid_argument("collect_filaments: bound vortex size mismatch");
        }
        rows.push_back(&bound->quarter_chord_nodes);
        gammas.push_back(&bound->gamma);
    }
    const int ring_rows = static_cast<int>(gammas.size());
    auto g = [&](int row, int strip) -> double {
        if (row < 0 || row >= ring_rows || strip < 0 || strip >= n) return 0.0;
        return (*gammas[static_cast<std::size_t>(row)])[static_cast<std::size_t>(strip)];
    };

    std::vector<Filament> out;
    out.reserve(static_cast<std::size_t>(ring_rows + 1) * static_cast<std::size_t>(2 * n + 1));
    for (int r = 0; r <= ring_rows; ++r) {
        const auto& row = *rows[static_cast<std::size_t>(r)];
        // spanwise, node i+1 -> node i
        for (int i = 0; i < n; ++i) {
            const double gamma = g(r - 1, i) - g(r, i);
            if (gamma != 0.0) {
                out.push_back({row[static_cast<std::size_t>(i + 1)], row[static_cast<std::size_t>(i)],
                               gamma});
            }
        }
        if (r == ring_rows) break;
        // streamwise, fore (row r+1) -> aft (row r)
        const auto& fore = *rows[static_cast<std::size_t>(r + 1)];
        for (int m = 0; m <= n; ++m) {
            const double gamma = g(r, m) - g(r, m - 1);
            if (gamma != 0.0) {
                out.push_back({fore[static_cast<std::size_t>(m)], row[static_cast<std::size_t>(m)],
                               gamma});
            }
        }
    }
    return out;
}

std::vector<Vec3> induced_velocity(const WakeLattice& lattice, const BoundVortex* bound,
                                   std::span<const Vec3> targets) {
    const std::vector<Filament> filaments = collect_filaments(lattice, bound);
    return induced_velocity(filaments, targets, lattice.core_radius);
}

std::string to_string(WakeMode mode) { return mode == WakeMode::free ? "free" : "prescribed"; }

WakeMode wake_mode_from_string(const std::string& name) {
    if (name == "prescribed") return WakeMode::prescribed;
    if (name == "free") return WakeMode::free;
    throw ConfigError("wake_mode", "expected prescribed or free, got '" + name + "'");
}

void advect(WakeLattice& lattice, double dt, const Vec3& freestream, WakeMode mode,
            const BoundVortex* bound) {
    if (mode == WakeMode::prescribed) {
        for (auto& row : lattice.vertex_rows) {
            for (auto& v : row) v += freestream * dt;
        }
        return;
    }
    std::vector<Vec3> points;
    points.reserve(lattice.vertex_count());
    for (const auto& row : lattice.vertex_rows) points.insert(points.end(), row.begin(), row.end());
    const std::vector<Vec3> vel = induced_velocity(lattice, bound, points);
    std::size_t k = 0;
    for (std::size_t r = 0; r < lattice.vertex_rows.size(); ++r) {
        for (auto& v : lattice.vertex_rows[r]) {
            const Vec3 u = freestream + vel[k++];
            if (!u.allFinite()) {
                std::ostringstream msg;
                msg << "wake vertex velocity non-finite at row " << r;
                throw NumericError(msg.str());
            }
            v += u * dt;
        }
    }
}

WakeStructure wake_mesh(const WakeLattice& lattice, double period, int first_row, int row_count) {
    const int total = static_cast<int>(lattice.ring_rows.size());
    if (total == 0) throw std::invalid_argument("wake_mesh: empty lattice");
    if (row_count < 0) row_count = total - first_row;
    if (first_row < 0 || row_count <= 0 || first_row + row_count > total) {
        throw std::out_of_range("wake_mesh: row range outside the lattice");
    }
    const int n = lattice.n_strips;
    WakeStructure w;
    w.rows = row_count;
    w.strips = n;
    for (int r = first_row; r <= first_row + row_count; ++r) {
        const double t = lattice.vertex_row_time[static_cast<std::size_t>(r)];
        w.row_time.push_back(t);
        double cycles = t / period;
        double ph = cycles - std::floor(cycles);
        if (ph >= 1.0) ph = 0.0;
        for (const Vec3& v : lattice.vertex_rows[static_cast<std::size_t>(r)]) {
            w.vertices.push_back(v);
            w.phase.push_back(ph);
        }
    }
    const int stride = n + 1;
    for (int r = 0; r < row_count; ++r) {
        for (int i = 0; i < n; ++i) {
            const int v0 = r * stride + i;
            w.faces.push_back({v0, v0 + 1, v0 + stride + 1, v0 + stride});
        }
    }
    for (int r = 0; r <= row_count; ++r) {
        for (int i = 0; i < n; ++i) w.edges.push_back({r * stride + i, r * stride + i + 1});
    }
    for (int r = 0; r < row_count; ++r) {
        for (int i = 0; i <= n; ++i) w.edges.push_back({r * stride + i, (r + 1) * stride + i});
    }
    return w;
}

FieldGrid make_grid(const Vec3& lower, const Vec3& upper, std::array<int, 3> dims) {
    FieldGrid g;
    g.origin = lower;
    g.dims = dims;
    for (int a = 0; a < 3; ++a) {
        if (dims[static_cast<std::size_t>(a)] < 3) {
            throw std::invalid_argument("make_grid: need at least 3 points per axis");
        }
        g.spacing[a] = (upper[a] - lower[a]) / (dims[static_cast<std::size_t>(a)] - 1);
        if (!(g.spacing[a] > 0)) throw std::invalid_argument("make_grid: spacing must be > 0");
    }
    return g;
}

FieldGrid vorticity_field(const WakeLattice& lattice, const BoundVortex* bound, FieldGrid grid,
                          const Vec3& freestream) {
    const auto [nx, ny, nz] = grid.dims;
    std::vector<Vec3> points(grid.point_count());
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) points[grid.index(i, j, k)] = grid.point(i, j, k);
    grid.velocity = induced_velocity(lattice, bound, points);
    for (auto& v : grid.velocity) v += freestream;
    grid.omega_x.assign(grid.point_count(), 0.0);
    const double hy = grid.spacing.y(), hz = grid.spacing.z();
    for (int k = 1; k < nz - 1; ++k)
        for (int j = 1; j < ny - 1; ++j)
            for (int i = 1; i < nx - 1; ++i) {
                const double dvz_dy = (grid.velocity[grid.index(i, j + 1, k)].z() -
                                       grid.velocity[grid.index(i, j - 1, k)].z()) / (2 * hy);
                const double dvy_dz = (grid.velocity[grid.index(i, j, k + 1)].y() -
                                       grid.velocity[grid.index(i, j, k - 1)].y()) / (2 * hz);
                grid.omega_x[grid.index(i, j, k)] = dvz_dy - dvy_dz;
            }
    return grid;
}

DivergenceReport divergence(const FieldGrid& g) {
    DivergenceReport r;
    const auto [nx, ny, nz] = g.dims;
    const Vec3 h = g.spacing;
    for (const Vec3& v : g.velocity) r.scale = std::max(r.scale, v.norm());
    r.scale /= h.minCoeff();
    for (int k = 1; k < nz - 1; ++k)
        for (int j = 1; j < ny - 1; ++j)
            for (int i = 1; i < nx - 1; ++i) {
                const double d =
                    (g.velocity[g.index(i + 1, j, k)].x() - g.velocity[g.index(i - 1, j, k)].x()) / (2 * h.x()) +
                    (g.velocity[g.index(i, j + 1, k)].y() - g.velocity[g.index(i, j - 1, k)].y()) / (2 * h.y()) +
                    (g.velocity[g.index(i, j, k + 1)].z() - g.velocity[g.index(i, j, k - 1)].z()) / (2 * h.z());
                r.max_divergence = std::max(r.max_divergence, std::abs(d));
            }
    return r;
}

std::vector<SlicePoint> velocity_slice(const WakeLattice& lattice, const BoundVortex* bound,
                                       double x, double y_lo, double y_hi, double z_lo,
                                       double z_hi, int ny, int nz, const Vec3& freestream) {
    if (ny < 3 || nz < 3) throw std::invalid_argument("velocity_slice: need >= 3 points per axis");
    const double hy = (y_hi - y_lo) / (ny - 1);
    const double hz = (z_hi - z_lo) / (nz - 1);
    std::vector<Vec3> points;
    points.reserve(static_cast<std::size_t>(ny) * nz);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j) points.emplace_back(x, y_lo + j * hy, z_lo + k * hz);
    std::vector<Vec3> vel = induced_velocity(lattice, bound, points);
    for (auto& v : vel) v += freestream;
    auto at = [&](int j, int k) -> const Vec3& {
        return vel[static_cast<std::size_t>(j) + static_cast<std::size_t>(ny) * k];
    };
    std::vector<SlicePoint> out;
    for (int k = 1; k < nz - 1; ++k)
        for (int j = 1; j < ny - 1; ++j) {
            const Vec3& v = at(j, k);
            const double wx = (at(j + 1, k).z() - at(j - 1, k).z()) / (2 * hy) -
                              (at(j, k + 1).y() - at(j, k - 1).y()) / (2 * hz);
            out.push_back({x, y_lo + j * hy, z_lo + k * hz, v.y(), v.z(), wx});
        }
    return out;
}

}  // namespace wakegait

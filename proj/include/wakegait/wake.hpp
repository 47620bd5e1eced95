#pragma once

// Vortex-ring wake lattice and Biot-Savart induction.
//
// Vertex rows are stored oldest first. Ring row j spans vertex row j (aft)
// and vertex row j+1 (fore) and carries the bound circulation of each strip
// at the instant it was shed. The newest vertex row is the trailing-edge
// attachment. Ring edges are oriented so that a positive ring circulation has
// its fore filament running from node i+1 to node i, which is the sense of
// positive (upward) lift on the wing.

#include "wakegait/math.hpp"

#include <array>
#include <deque>
#include <span>
#include <string>
#include <vector>

namespace wakegait {

struct Filament {
    Vec3 a;
    Vec3 b;
    double gamma = 0.0;
};

/// Straight-segment Biot-Savart kernel with a smoothed core, the exact
/// segment integral of the Rosenhead-Moore kernel r / (|r|^2 + rc^2)^(3/2):
///   v = gamma/(4 pi) (r1 x r2) / (|r1 x r2|^2 + (rc |r0|)^2)
///       * r0 . (r1/|r1|_c - r2/|r2|_c),   |r|_c = sqrt(|r|^2 + rc^2)
/// Smooth and divergence-free everywhere, including at segment ends.
Vec3 filament_velocity(const Filament& f, const Vec3& target, double core_radius);

/// Sum over filaments for every target; parallel over targets.
std::vector<Vec3> induced_velocity(std::span<const Filament> filaments,
                                   std::span<const Vec3> targets, double core_radius);

struct RingRow {
    std::vector<double> gamma;
    double shed_time = 0.0;
    long step = 0;
};

struct WakeLattice {
    int n_strips = 0;
    double core_radius = 0.0;
    std::deque<std::vector<Vec3>> vertex_rows;
    std::deque<double> vertex_row_time;
    std::deque<RingRow> ring_rows;

    const std::vector<Vec3>& trailing_row() const { return vertex_rows.back(); }
    std::size_t ring_count() const { return ring_rows.size() * static_cast<std::size_t>(n_strips); }
    std::size_t vertex_count() const {
        return vertex_rows.size() * static_cast<std::size_t>(n_strips + 1);
    }
    bool empty() const { return ring_rows.empty(); }
};

/// Bound vortex rings on the wing: quarter-chord nodes to the lattice's
/// trailing row, one per strip.
struct BoundVortex {
    std::vector<Vec3> quarter_chord_nodes;
    std::vector<double> gamma;
};

/// Lattice with a single vertex row at the trailing edge (wake seeding).
WakeLattice seed_lattice(std::span<const Vec3> trailing_edge_nodes, double t, double core_radius);

/// Appends one ring row between the current trailing row and the new
/// trailing-edge nodes. Older rows are untouched.
void shed(WakeLattice& lattice, std::span<const Vec3> trailing_edge_nodes,
          std::span<const double> gamma, double t, long step = 0);

/// Drops the oldest ring rows until at most `max_rows` remain.
void truncate(WakeLattice& lattice, std::size_t max_rows);

/// Ring edges merged into net-circulation filaments (shared edges combined,
/// zero-strength filaments dropped). With `bound`, the wing rings are
/// included as the foremost row.
std::vector<Filament> collect_filaments(const WakeLattice& lattice,
                                        const BoundVortex* bound = nullptr);

std::vector<Vec3> induced_velocity(const WakeLattice& lattice, const BoundVortex* bound,
                                   std::span<const Vec3> targets);

enum class WakeMode { prescribed, free };

std::string to_string(WakeMode mode);
WakeMode wake_mode_from_string(const std::string& name);

/// Moves every wake vertex by (freestream + induced)*dt (free) or
/// freestream*dt (prescribed). Circulations are untouched.
void advect(WakeLattice& lattice, double dt, const Vec3& freestream, WakeMode mode,
            const BoundVortex* bound = nullptr);

struct WakeStructure {
    int rows = 0;    // ring rows
    int strips = 0;  // rings per row
    std::vector<Vec3> vertices;               // row-major: row * (strips+1) + node
    std::vector<std::array<int, 4>> faces;    // quads
    std::vector<std::array<int, 2>> edges;
    std::vector<double> phase;                // gait phase in [0, 1) per vertex
    std::vector<double> row_time;             // per vertex row

    std::size_t vertex_count() const { return vertices.size(); }
};

/// Mesh of ring rows [first_row, first_row + row_count); row_count < 0 takes
/// all remaining rows. Vertex order is deterministic (shed order x node).
WakeStructure wake_mesh(const WakeLattice& lattice, double period, int first_row = 0,
                        int row_count = -1);

struct FieldGrid {
    Vec3 origin = Vec3::Zero();
    Vec3 spacing = Vec3::Ones();
    std::array<int, 3> dims{2, 2, 2};
    std::vector<Vec3> velocity;    // x fastest
    std::vector<double> omega_x;   // zero on boundary points

    std::size_t point_count() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims[0]) * (static_cast<std::size_t>(j) +
                                                    static_cast<std::size_t>(dims[1]) * k);
    }
    Vec3 point(int i, int j, int k) const {
        return origin + Vec3(i * spacing.x(), j * spacing.y(), k * spacing.z());
    }
    bool interior(int i, int j, int k) const {
        return i > 0 && j > 0 && k > 0 && i < dims[0] - 1 && j < dims[1] - 1 && k < dims[2] - 1;
    }
};

/// Grid covering [lower, upper] with `dims` points per axis.
FieldGrid make_grid(const Vec3& lower, const Vec3& upper, std::array<int, 3> dims);

/// Samples the induced velocity (plus the uniform freestream) and computes
/// omega_x = dv_z/dy - dv_y/dz by central differences on interior points.
FieldGrid vorticity_field(const WakeLattice& lattice, const BoundVortex* bound, FieldGrid grid,
                          const Vec3& freestream = Vec3::Zero());

/// Largest |div v| over interior points (central differences) and the
/// reference scale max|v| / min spacing.
struct DivergenceReport {
    double max_divergence = 0.0;
    double scale = 0.0;
};
DivergenceReport divergence(const FieldGrid& grid);

struct SlicePoint {
    double x, y, z, vy, vz, omega_x;
};

/// Cross-flow plane at station x; omega_x by central differences in the plane.
/// Only interior plane points are returned.
std::vector<SlicePoint> velocity_slice(const WakeLattice& lattice, const BoundVortex* bound,
                                       double x, double y_lo, double y_hi, double z_lo,
                                       double z_hi, int ny, int nz,
                                       const Vec3& freestream = Vec3::Zero());

}  // namespace wakegait

#include "wakegait/aero.hpp"

#include "wakegait/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wakegait {

double wagner_phi(double tau, const WagnerParams& p) {
    return 1.0 - p.psi1 * std::exp(-p.eps1 * tau) - p.psi2 * std::exp(-p.eps2 * tau);
}

std::string to_string(DownwashMode mode) {
    switch (mode) {
        case DownwashMode::prandtl: return "prandtl";
        case DownwashMode::paper_literal: return "paper_literal";
        case DownwashMode::none: return "none";
    }
    return "prandtl";
}

DownwashMode downwash_mode_from_string(const std::string& name) {
    if (name == "prandtl") return DownwashMode::prandtl;
    if (name == "paper_literal") return DownwashMode::paper_literal;
    if (name == "none") return DownwashMode::none;
    throw ConfigError("downwash_mode",
                      "expected prandtl, paper_literal or none, got '" + name + "'");
}

VecX circulation(const VecX& a, std::span<const BladeElement> elements) {
    if (static_cast<std::size_t>(a.size()) != elements.size()) {
        throw std::invalid_argument("circulation: coefficient count != element count");
    }
    VecX gamma = VecX::Zero(a.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        double g = 0.0;
        for (Eigen::Index k = 0; k < a.size(); ++k) {
            g += a[k] * std::sin(static_cast<double>(k + 1) * elements[i].theta);
        }
        gamma[static_cast<Eigen::Index>(i)] = g;
    }
    return gamma;
}

namespace {

void require_interior(const BladeElement& e) {
    if (!(std::sin(e.theta) > 0.0)) {
        throw RejectedConfiguration("element " + std::to_string(e.index) +
                                    ": theta on a wingtip, sin(theta) = 0");
    }
}

// Left-half rows mirror the right half exactly when the stations are symmetric:
// sin(k (pi - theta)) = (-1)^(k+1) sin(k theta).
bool mirrored(std::span<const BladeElement> el) {
    const std::size_t n = el.size();
    if (n % 2 != 0) return false;
    for (std::size_t i = 0; i < n / 2; ++i) {
        if (el[i].s != -el[n - 1 - i].s || el[i].theta != pi - el[n - 1 - i].theta) return false;
    }
    return true;
}

// row i, column k-1 of the selected matrix
template <class Entry>
MatX build_rows(std::span<const BladeElement> el, Entry entry) {
    const auto n = static_cast<Eigen::Index>(el.size());
    MatX m(n, n);
    const bool mirror = mirrored(el);
    for (Eigen::Index i = 0; i < n; ++i) {
        const bool left = mirror && i < n / 2;
        const BladeElement& e = left ? el[static_cast<std::size_t>(n - 1 - i)]
                                     : el[static_cast<std::size_t>(i)];
        for (Eigen::Index k = 1; k <= n; ++k) {
            const double v = entry(e.theta, static_cast<double>(k));
            m(i, k - 1) = (left && k % 2 == 0) ? -v : v;
        }
    }
    return m;
}

MatX downwash_matrix(std::span<const BladeElement> el, double semispan, DownwashMode mode) {
    for (const auto& e : el) require_interior(e);
    switch (mode) {
        case DownwashMode::prandtl:
            return build_rows(el, [&](double th, double k) {
                return -k * std::sin(k * th) / (4.0 * semispan * std::sin(th));
            });
        case DownwashMode::paper_literal:
            return build_rows(el, [](double th, double k) {
                return std::sin(k * th) / std::sin(th);
            });
        case DownwashMode::none: break;
    }
    return MatX::Zero(static_cast<Eigen::Index>(el.size()), static_cast<Eigen::Index>(el.size()));
}

}  // namespace

VecX induced_wash(const VecX& a, std::span<const BladeElement> elements, double semispan,
                  DownwashMode mode) {
    if (static_cast<std::size_t>(a.size()) != elements.size()) {
        throw std::invalid_argument("induced_wash: coefficient count != element count");
    }
    return downwash_matrix(elements, semispan, mode) * a;
}

FourierBasis::FourierBasis(std::span<const BladeElement> elements, double semispan,
                           DownwashMode mode)
    : semispan_(semispan), mode_(mode) {
    const auto n = static_cast<Eigen::Index>(elements.size());
    if (n == 0) throw RejectedConfiguration("FourierBasis: no elements");
    matrix_ = build_rows(elements, [](double th, double k) { return std::sin(k * th); });
    downwash_ = downwash_matrix(elements, semispan, mode);
    chord_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) chord_[i] = elements[static_cast<std::size_t>(i)].chord;

    Eigen::JacobiSVD<MatX> svd(matrix_);
    const VecX sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    cond_ = smin > 0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
    if (!(cond_ <= max_condition_number)) {
        std::ostringstream msg;
        msg << "Fourier matrix ill-conditioned (cond = " << cond_ << ")";
        throw RejectedConfiguration(msg.str());
    }
    inverse_ = matrix_.partialPivLu().inverse();
}

VecX AeroState::packed() const {
    VecX xi(a.size() + z.size());
    xi << a, z;
    return xi;
}

AeroState AeroState::unpack(const VecX& xi, int n) {
    return {xi.head(n), xi.segment(n, 2 * n)};
}

AeroSystem assemble_aero(std::shared_ptr<const FourierBasis> basis, const VecX& speed,
                         const WagnerParams& params) {
    const int n = basis->size();
    if (speed.size() != n) throw std::invalid_argument("assemble_aero: speed size mismatch");
    for (int i = 0; i < n; ++i) {
        if (!(speed[i] >= min_relative_speed)) {
            std::ostringstream msg;
            msg << "element " << i << ": relative speed " << speed[i] << " below floor "
                << min_relative_speed << " m/s";
            throw RejectedConfiguration(msg.str());
        }
    }

    AeroSystem sys;
    sys.wagner = params;
    sys.speed = speed;
    const VecX& c = basis->chord();
    sys.mu = (2.0 * speed.array() / c.array()).matrix();
    sys.lambda1 = params.eps1 * sys.mu;
    sys.lambda2 = params.eps2 * sys.mu;

    const MatX& A = basis->matrix();
    const MatX& Ainv = basis->inverse();
    const MatX& P = basis->downwash();
    const double phi0 = params.phi0();

    sys.B = sys.mu.asDiagonal() * A;
    sys.C = MatX::Zero(n, 2 * n);
    sys.D = MatX::Zero(2 * n, 2 * n);
    sys.E = MatX::Zero(2 * n, n);
    for (int i = 0; i < n; ++i) {
        sys.C(i, 2 * i) = params.psi1 * sys.lambda1[i];
        sys.C(i, 2 * i + 1) = params.psi2 * sys.lambda2[i];
        sys.D(2 * i, 2 * i) = -sys.lambda1[i];
        sys.D(2 * i + 1, 2 * i + 1) = -sys.lambda2[i];
        sys.E(2 * i, i) = 1.0;
        sys.E(2 * i + 1, i) = 1.0;
    }

    // gain mapping beta to the steady circulation: mu_i * pi * c_i
    const VecX gain = (sys.mu.array() * pi * c.array()).matrix();
    const MatX AinvG = Ainv * gain.asDiagonal();

    sys.A_xi = MatX::Zero(3 * n, 3 * n);
    sys.A_xi.topLeftCorner(n, n) = phi0 * AinvG * P - Ainv * sys.B;
    sys.A_xi.topRightCorner(n, 2 * n) = AinvG * sys.C;
    sys.A_xi.bottomLeftCorner(2 * n, n) = sys.E * P;
    sys.A_xi.bottomRightCorner(2 * n, 2 * n) = sys.D;

    sys.B_xi = MatX::Zero(3 * n, n);
    sys.B_xi.topRows(n) = phi0 * AinvG;
    sys.B_xi.bottomRows(2 * n) = sys.E;

    sys.C_xi = MatX::Zero(n, 3 * n);
    sys.C_xi.rightCols(2 * n) = sys.C;
    sys.D_xi = phi0 * MatX::Identity(n, n);

    sys.basis = std::move(basis);
    return sys;
}

double spectral_radius_estimate(const AeroSystem& sys) {
    const MatX& m = sys.A_xi;
    VecX x(m.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + i);
    x.normalize();
    double rho = 0.0;
    for (int it = 0; it < 60; ++it) {
        VecX y = m * x;
        const double norm = y.norm();
        if (norm == 0.0) return 0.0;
        rho = norm;
        x = y / norm;
    }
    return rho;
}

int stable_substeps(const AeroSystem& sys, double dt) {
    // RK4 is stable on the negative real axis up to ~2.78; keep 1.5 of it
    const double h_rho = 1.5;
    const double rho = 1.25 * spectral_radius_estimate(sys);
    const double k = std::ceil(dt * rho / h_rho);
    if (!(k <= max_aero_substeps)) {
        std::ostringstream msg;
        msg << "aero system too stiff for the wake step: " << k << " RK4 substeps needed (limit "
            << max_aero_substeps << ")";
        throw RejectedConfiguration(msg.str());
    }
    return std::max(1, static_cast<int>(k));
}

VecX aero_derivative(const AeroSystem& sys, const VecX& xi, const VecX& y1) {
    return sys.A_xi * xi + sys.B_xi * y1;
}

namespace {

void check_finite(const AeroSystem& sys, const VecX& xi) {
    if (xi.allFinite()) return;
    const int n = sys.size();
    int element = -1;
    for (int i = 0; i < n && element < 0; ++i) {
        if (!std::isfinite(xi[n + 2 * i]) || !std::isfinite(xi[n + 2 * i + 1])) element = i;
    }
    if (element < 0) {
        const VecX gamma = sys.basis->matrix() * xi.head(n);
        for (int i = 0; i < n && element < 0; ++i) {
            if (!std::isfinite(gamma[i])) element = i;
        }
    }
    throw NumericError("aero state non-finite at element " + std::to_string(std::max(element, 0)));
}

}  // namespace

AeroState step_aero(const StageInputs& in, const AeroState& state, double dt) {
    const int n = state.size();
    const VecX xi = state.packed();
    const VecX k1 = aero_derivative(*in.start, xi, in.y1_start);
    const VecX k2 = aero_derivative(*in.mid, xi + 0.5 * dt * k1, in.y1_mid);
    const VecX k3 = aero_derivative(*in.mid, xi + 0.5 * dt * k2, in.y1_mid);
    const VecX k4 = aero_derivative(*in.end, xi + dt * k3, in.y1_end);
    const VecX next = xi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite(*in.end, next);
    return AeroState::unpack(next, n);
}

AeroState step_aero(const AeroSystem& sys, const AeroState& state, const VecX& y1, double dt) {
    return step_aero(StageInputs{&sys, &sys, &sys, y1, y1, y1}, state, dt);
}

VecX aero_beta(const AeroSystem& sys, const AeroState& state, const VecX& y1) {
    const VecX wash = y1 + sys.basis->downwash() * state.a;
    return sys.C_xi * state.packed() + sys.D_xi * wash;
}

AeroOutput force_output(const AeroSystem& sys, const AeroState& state, const VecX& y1,
                        const Wing& wing, const ElementKinematics& kin, const MotionWash& wash,
                        double air_density) {
    const int n = sys.size();
    const VecX xi = state.packed();
    AeroOutput out;
    out.wash = y1 + sys.basis->downwash() * state.a;
    out.beta = sys.C_xi * xi + sys.D_xi * out.wash;
    out.gamma = sys.basis->matrix() * state.a;
    out.force.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const Vec3 f = air_density * out.gamma[i] * wing.elements[ui].width *
                       kin.tangent[ui].cross(wash.relative_velocity[ui]);
        out.force[ui] = f;
        (wing.elements[ui].s < 0 ? out.left : out.right) += f;
    }
    out.total = out.left + out.right;
    return out;
}

}  // namespace wakegait

#pragma once

// Unsteady lifting line with Wagner indicial lag.
//
// The span is one Fourier problem over theta in (0, pi):
//   Gamma_i = sum_k a_k sin(k theta_i)
// Each element carries two deficiency states z_{k,i} realizing the Wagner
// convolution, and the circulation relaxes towards the flat-plate value
// pi c_i beta_i at rate mu_i = 2 U_i / c_i:
//   A a'  = mu o (pi c o beta - A a),   beta = Phi0 y' + C Z
//   Z'    = D Z + E y',                 y'   = y1 + P a
// with D_i = diag(-2 eps_k U_i / c_i), E_i = [1 1]^T and P the downwash
// matrix. The state vector is xi = [a; z_{1,1}, z_{2,1}, ..., z_{2,n}].

#include "wakegait/math.hpp"
#include "wakegait/morphology.hpp"

#include <Eigen/LU>

#include <memory>
#include <span>
#include <string>

namespace wakegait {

struct WagnerParams {
    double psi1 = 0.165;
    double psi2 = 0.335;
    double eps1 = 0.0455;
    double eps2 = 0.3;

    double phi0() const { return 1.0 - psi1 - psi2; }
};

/// Phi(tau) = 1 - psi1 exp(-eps1 tau) - psi2 exp(-eps2 tau), tau in semichords.
double wagner_phi(double tau_semichords, const WagnerParams& params = {});

enum class DownwashMode { prandtl, paper_literal, none };

std::string to_string(DownwashMode mode);
DownwashMode downwash_mode_from_string(const std::string& name);

/// Gamma_i = sum_k a_k sin(k theta_i).
VecX circulation(const VecX& a, std::span<const BladeElement> elements);

/// Circulation-induced wash y_Gamma added to the motion wash.
///   prandtl:       -(1/(4l)) sum_k k a_k sin(k theta_i) / sin(theta_i)
///   paper_literal:            sum_k   a_k sin(k theta_i) / sin(theta_i)
///   none:          0
VecX induced_wash(const VecX& a, std::span<const BladeElement> elements, double semispan,
                  DownwashMode mode);

/// Geometry-only part of the system: the Fourier matrix, its factorization and
/// the downwash matrix. Built once per wing.
class FourierBasis {
public:
    FourierBasis(std::span<const BladeElement> elements, double semispan, DownwashMode mode);

    int size() const { return static_cast<int>(chord_.size()); }
    const MatX& matrix() const { return matrix_; }
    const MatX& inverse() const { return inverse_; }
    const MatX& downwash() const { return downwash_; }
    const VecX& chord() const { return chord_; }
    double condition_number() const { return cond_; }
    double semispan() const { return semispan_; }
    DownwashMode mode() const { return mode_; }

private:
    MatX matrix_;
    MatX inverse_;
    MatX downwash_;
    VecX chord_;
    double cond_ = 0.0;
    double semispan_ = 0.0;
    DownwashMode mode_;
};

inline constexpr double max_condition_number = 1e12;

struct AeroState {
    VecX a;  // Fourier coefficients, m^2/s
    VecX z;  // deficiency states, interleaved (z_{1,i}, z_{2,i}), m

    static AeroState zero(int n) { return {VecX::Zero(n), VecX::Zero(2 * n)}; }
    int size() const { return static_cast<int>(a.size()); }
    VecX packed() const;
    static AeroState unpack(const VecX& xi, int n);
};

struct AeroSystem {
    std::shared_ptr<const FourierBasis> basis;
    WagnerParams wagner;
    VecX speed;    // U_i used for the time scaling, m/s
    VecX mu;       // 2 U_i / c_i
    VecX lambda1;  // 2 eps1 U_i / c_i
    VecX lambda2;  // 2 eps2 U_i / c_i

    MatX B;  // diag(mu) A
    MatX C;  // n x 2n, rows [psi1 lambda1, psi2 lambda2]
    MatX D;  // 2n x 2n diagonal
    MatX E;  // 2n x n, [1 1]^T blocks

    MatX A_xi;  // 3n x 3n
    MatX B_xi;  // 3n x n, input y1
    MatX C_xi;  // n x 3n, [0 | C], output beta w.r.t. y'
    MatX D_xi;  // n x n, Phi0 I

    int size() const { return basis->size(); }
    double condition_number() const { return basis->condition_number(); }
};

/// Throws RejectedConfiguration when any U_i < min_relative_speed.
AeroSystem assemble_aero(std::shared_ptr<const FourierBasis> basis, const VecX& speed,
                         const WagnerParams& params = {});

/// Spectral radius of A_xi by power iteration (fixed start vector and
/// iteration count, so the estimate is deterministic).
double spectral_radius_estimate(const AeroSystem& sys);

inline constexpr int max_aero_substeps = 10000;

/// Smallest number of RK4 substeps keeping h * rho(A_xi) inside the real-axis
/// stability interval with margin. Throws RejectedConfiguration above
/// max_aero_substeps.
int stable_substeps(const AeroSystem& sys, double dt);

/// xi' for the given wash input.
VecX aero_derivative(const AeroSystem& sys, const VecX& xi, const VecX& y1);

/// System and motion wash at t, t + dt/2 and t + dt.
struct StageInputs {
    const AeroSystem* start;
    const AeroSystem* mid;
    const AeroSystem* end;
    VecX y1_start;
    VecX y1_mid;
    VecX y1_end;
};

/// Classical RK4 step. Throws NumericError naming the element on blow-up.
AeroState step_aero(const StageInputs& in, const AeroState& state, double dt);

/// Frozen system and input over the step.
AeroState step_aero(const AeroSystem& sys, const AeroState& state, const VecX& y1, double dt);

struct AeroOutput {
    VecX beta;        // Phi0 y' + C Z, m/s
    VecX gamma;       // bound circulation, m^2/s
    VecX wash;        // y' = y1 + y_Gamma, m/s
    std::vector<Vec3> force;  // per element, N
    Vec3 left = Vec3::Zero();
    Vec3 right = Vec3::Zero();
    Vec3 total = Vec3::Zero();
};

/// beta = Phi0 y' + C Z with y' = y1 + y_Gamma(a).
VecX aero_beta(const AeroSystem& sys, const AeroState& state, const VecX& y1);

/// Lift per element rho Gamma_i ds_i (t_i x v_rel,i): magnitude rho U_i Gamma_i ds_i,
/// normal to the relative flow in the section plane.
AeroOutput force_output(const AeroSystem& sys, const AeroState& state, const VecX& y1,
                        const Wing& wing, const ElementKinematics& kin, const MotionWash& wash,
                        double air_density);

}  // namespace wakegait

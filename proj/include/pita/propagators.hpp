#pragma once

#include "pita/model.hpp"

#include <string_view>

namespace pita {

enum class PropagatorKind {
    explicit_euler,
    implicit_euler,
};

std::string_view to_string(PropagatorKind kind) noexcept;

/// Number of steps of size h that cover [t_start, t_end].
///
/// The ratio must be a positive integer within 1e-9 relative; a ratio such as
/// 2.5 is rejected with StepCountError rather than silently rounded.
long step_count(double t_start, double t_end, double h);

/// One forward Euler step: (I + hA) y + h B u.
StateVector explicit_euler_step(const LtiSystem& sys, const StateVector& y, double h);

/// Repeated explicit steps from t_start to t_end. Returns every point,
/// starting with y_start.
///
/// An unstable step size is allowed; only non-finite values abort.
Trajectory explicit_euler_propagate(const LtiSystem& sys, const StateVector& y_start,
                                    double t_start, double t_end, double h);

/// Endpoint of explicit_euler_propagate without storing the intermediate points.
StateVector explicit_euler_endpoint(const LtiSystem& sys, const StateVector& y_start,
                                    double t_start, double t_end, double h);

/// Closed-form explicit Euler after `steps` steps:
///   (I + hA)^steps y + sum_{j<steps} (I + hA)^j h B u
/// accumulated with a running matrix product. Numerically independent of the
/// step-by-step loop, which makes it a useful cross-check.
StateVector closed_form_explicit(const LtiSystem& sys, const StateVector& y_start, long steps,
                                 double h);

/// Dense LU factorization of (I - hA), reused across implicit steps.
class ImplicitStepper {
public:
    /// Throws SingularMatrixError when |det(I - hA)| <= 1e-12 * ||I - hA||_1^d.
    ImplicitStepper(const LtiSystem& sys, double h);

    [[nodiscard]] StateVector step(const StateVector& y) const;
    [[nodiscard]] double step_size() const noexcept { return h_; }

private:
    double h_;
    Vector forcing_step_;  // h B u
    Eigen::PartialPivLU<Matrix> lu_;
};

/// One backward Euler step: solves (I - hA) z = y + h B u.
StateVector implicit_euler_step(const LtiSystem& sys, const StateVector& y, double h);

Trajectory implicit_euler_propagate(const LtiSystem& sys, const StateVector& y_start,
                                    double t_start, double t_end, double h);

StateVector implicit_euler_endpoint(const LtiSystem& sys, const StateVector& y_start,
                                    double t_start, double t_end, double h);

/// Matrix exponential by scaling and squaring with a degree-13 Padé approximant.
Matrix matrix_exponential(const Matrix& m);

/// Exact solution at time t (measured from the initial state y0):
///   e^{At} y0 + int_0^t e^{A(t-s)} B u ds,
/// evaluated through the exponential of the augmented matrix [[A, Bu], [0, 0]]
/// so A need not be invertible.
StateVector exact_solution(const LtiSystem& sys, double t);

/// Spectral radius of the explicit Euler amplification matrix I + hA.
double stability_radius(const LtiSystem& sys, double h);

} // namespace pita

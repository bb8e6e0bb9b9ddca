#ifndef G0HS_PEAKONS_HPP
#define G0HS_PEAKONS_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "g0hs/errors.hpp"
#include "g0hs/grid.hpp"

namespace g0hs {

/// N interacting pulses u = sum_i p_i e^{-|x - q_i|}.  The pulse ansatz
/// solves the transport equation exactly when (p, q) obey the ODE of
/// peakon_rhs, for any nonzero integer power k.
struct PeakonEnsemble {
    int k = 1;              ///< nonzero power of u in the transport speed
    std::vector<double> p;  ///< amplitudes
    std::vector<double> q;  ///< positions

    /// Throws std::invalid_argument unless k != 0, p and q are equally
    /// sized, nonempty and finite.
    void validate() const;
};

/// ODE state history: one ensemble per recorded time.
struct PeakonTrajectory {
    std::vector<double> times;
    std::vector<PeakonEnsemble> states;
};

/// Two pulse positions came within the collision threshold; carries the
/// valid states recorded before the offending step.
class peakon_collision : public collision_event {
public:
    peakon_collision(const std::string& what, double t, PeakonTrajectory partial)
        : collision_event(what, t), partial_(std::move(partial)) {}
    const PeakonTrajectory& partial() const { return partial_; }

private:
    PeakonTrajectory partial_;
};

/// Sample the pulse ansatz on a grid (as a formula on the line; no
/// periodic wrapping of the pulses themselves).
Field peakon_field(const PeakonEnsemble& e, const Grid& g);

/// Time derivatives of the ensemble.
struct PeakonDerivs {
    std::vector<double> dp;
    std::vector<double> dq;
};

/// The pulse ODE: with u(q_i) = sum_j p_j e^{-|q_i - q_j|} and
/// u_x(q_i) = -sum_j sgn(q_i - q_j) p_j e^{-|q_i - q_j|} (sgn(0) = 0,
/// so a pulse does not advect itself),
///     p_i' = k p_i u(q_i)^{k-1} u_x(q_i),   q_i' = u(q_i)^k.
/// For k <= 0 the powers divide by u(q_i); |u(q_i)| < 1e-10 throws
/// singularity_error naming the offending pulse index.
PeakonDerivs peakon_rhs(const PeakonEnsemble& e);

/// Fixed-step RK4 on the pulse ODE, recording every step (times are
/// i*dt, with a final shorter step landing exactly on t_end).  Halts
/// with peakon_collision when any |q_i - q_j| drops below 1e-6: the
/// sgn terms are discontinuous across a coincidence, so stepping over
/// one would integrate the wrong vector field.  k <= 0 singularities
/// rethrow with the time attached; non-finite states throw
/// blow_up_error.
PeakonTrajectory integrate_peakons(const PeakonEnsemble& e0, double t_end,
                                   double dt);

/// First integral of the antisymmetric two-pulse reduction p = p_1 =
/// -p_2, q = q_1 = -q_2 > 0 for odd k:  J = p^2 (1 - e^{-2q})^{-k}.
/// Constant along the flow; requires p > 0, q > 0 and odd k.
double two_peakon_invariant(double p, double q, int k);

/// The traveling wave u(t, x) = c^{1/k} e^{-|x - c t - q0|} for c > 0:
/// a single pulse of amplitude c^{1/k} moving at speed c.
double exact_single_peakon(double c, int k, double q0, double t, double x);

/// Closed-form k = -1 two-pulse derivatives (dp1, dp2, dq1, dq2), the
/// reduced form of peakon_rhs in terms of the interaction energy
/// H = p1^2 + 2 p1 p2 e^{-|q1-q2|} + p2^2 evaluated on the state:
///     A_1 = (H + p1^2 - p2^2)/(2 p1) = u(q_1),   A_2 likewise,
///     p_1' = sgn(q1-q2) (H - p1^2 - p2^2)/(2 A_1^2),  q_1' = 1/A_1.
/// Throws singularity_error when |p_i| or |A_i| is below 1e-10 and
/// std::invalid_argument when the interaction bracket
/// (H - p1^2 - p2^2)/(2 p1 p2) leaves [-1e-10, 1 + 1e-10].
std::array<double, 4> neg_k_two_peakon_rhs(double p1, double p2, double q1,
                                           double q2);

/// CSV serialization: header `t,p_1..p_N,q_1..q_N`, one row per time,
/// 17 significant digits.
std::string to_csv(const PeakonTrajectory& traj);

}  // namespace g0hs

#endif

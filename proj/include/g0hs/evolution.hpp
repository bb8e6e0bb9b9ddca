#ifndef G0HS_EVOLUTION_HPP
#define G0HS_EVOLUTION_HPP

#include <functional>
#include <vector>

#include "g0hs/errors.hpp"
#include "g0hs/grid.hpp"
#include "g0hs/helmholtz.hpp"

namespace g0hs {

/// Time-integration settings for the PDE u_t + u^k u_x = F(u).
struct SolverConfig {
    int k = 1;                   ///< nonlinearity exponent, >= 1
    double t_end = 1.0;          ///< integration horizon, > 0
    double cfl = 0.3;            ///< Courant number in (0, 1]
    double snapshot_every = 0.1; ///< cadence at which fields are stored
    double monitor_every = 0.05; ///< cadence at which the monitor hook fires

    /// Throws std::invalid_argument unless every field is in range.
    void validate() const;
};

/// Fields stored along one simulation, one per snapshot time.
/// times is strictly increasing with times[0] = 0; every snapshot
/// lives on the grid of the initial datum.
struct Trajectory {
    std::vector<double> times;
    std::vector<Field> snapshots;
    SolverConfig config;
};

/// Blow-up detected inside simulate(): carries the time of failure and
/// whatever snapshots were completed before it, so a run that breaks
/// down can still be inspected up to the breakdown time.
class simulation_blow_up : public blow_up_error {
  public:
    simulation_blow_up(const std::string& what, double t, Trajectory partial)
        : blow_up_error(what, t), partial_(std::move(partial)) {}
    const Trajectory& partial() const { return partial_; }

  private:
    Trajectory partial_;
};

/// Hook invoked with (t, u); used for streaming snapshots to disk and
/// for conservation monitors.
using FieldCallback = std::function<void(double, const Field&)>;

/// Right-hand side of the nonlocal form u_t = -u^k u_x + F(u), i.e.
/// -u^k * dx1(u) + flux(s, u, k).  Throws blow_up_error if u contains
/// non-finite values (the error's time is NaN at this level; callers
/// that track absolute time attach it).
Field rhs(const HelmholtzSolver& s, const Field& u, int k);

/// Advective time-step bound dt = cfl * dx / max(1e-8, max|u|^k).
/// The characteristic speed of the equation is u^k, so this is the
/// usual CFL restriction with a floor that keeps dt finite for u = 0.
double stable_dt(const Field& u, int k, double cfl);

/// One classical fourth-order Runge-Kutta step of rhs().  Throws
/// blow_up_error if any stage or the result is non-finite.
Field step_rk4(const HelmholtzSolver& s, const Field& u, double dt, int k);

/// Integrate the initial datum u0 to config.t_end and return the
/// snapshots at the requested cadence (t = 0 and t = t_end are always
/// included).  The step size is recomputed from stable_dt() every step
/// and capped so that snapshot and monitor times are hit exactly.
///
/// Internally the solver advances the momentum density m = u - u_xx,
/// which the equation transports as dm/dt = -u^k m_x.  That transport
/// is discretised in flux form with fifth-order upwind face
/// reconstruction, an outflow cap that preserves m >= 0 exactly, and
/// strong-stability-preserving RK3 stages, with u = inv_helmholtz(m)
/// refreshed at every stage.  This is algebraically equivalent to
/// rhs() but respects the equation's structure where the nonlocal
/// u-form does not: sign-definite momentum stays sign-definite (no
/// scheme ringing below zero), regions of exactly zero momentum stay
/// exactly zero, and u = inv_helmholtz(m) >= 0 follows because the
/// discrete Helmholtz matrix has a nonnegative inverse.  Snapshots are
/// reconstructed as u = inv_helmholtz(m), so the exact inverse pairing
/// means momentum(snapshot) recovers the transported m.
///
/// snapshot_cb, if given, is called once per stored snapshot;
/// monitor_cb is called at multiples of monitor_every (and at 0 and
/// t_end).  On blow-up a simulation_blow_up is thrown carrying the
/// partial trajectory.  Decaying grids require the datum to be
/// negligible at the ends: |u0| < 1e-8 * max|u0| at both endpoints.
Trajectory simulate(const Field& u0, const SolverConfig& config,
                    const FieldCallback& snapshot_cb = nullptr,
                    const FieldCallback& monitor_cb = nullptr);

}  // namespace g0hs

#endif

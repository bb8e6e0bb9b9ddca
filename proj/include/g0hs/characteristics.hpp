#ifndef G0HS_CHARACTERISTICS_HPP
#define G0HS_CHARACTERISTICS_HPP

#include <string>
#include <vector>

#include "g0hs/errors.hpp"
#include "g0hs/evolution.hpp"
#include "g0hs/grid.hpp"

namespace g0hs {

/// Characteristic curves y(t, x) with y(0, x) = x, one per seed.  The
/// transport field carries momentum along exactly these curves, so the
/// map doubles as a Lagrangian probe of the solver.
struct FlowMap {
    std::vector<double> seeds;                   ///< initial positions x
    std::vector<double> times;                   ///< the trajectory's snapshot times
    std::vector<std::vector<double>> positions;  ///< [time][seed] = y(t, x)
};

/// Integrate y' = u(t, y)^k for each seed through the trajectory's
/// snapshot times: one RK4 step per snapshot interval, with u between
/// snapshots reconstructed by cubic Hermite interpolation in time from
/// the stored snapshots alone (three-point slope estimates, one-sided
/// at the ends).  Positions are reported unwrapped on periodic grids.
///
/// Seeds must be strictly increasing and inside the grid domain.  The
/// flow of a smooth velocity is an increasing map, so after every step
/// the positions are checked to still be increasing (with 1e-12 slack
/// against round-off); a violation throws crossing_error carrying the
/// first time it was detected.  If a snapshot interval exceeds
/// dx / max|u|^k the time interpolation is too coarse for the spatial
/// accuracy and a warning is printed to stderr.
FlowMap flow(const Trajectory& traj, const std::vector<double>& seeds);

/// Momentum is constant along characteristics: m(t, y(t, x)) = m(0, x).
/// Returns the max over times and seeds of |m(t, y) - m(0, x)|, with m
/// from the solver-consistent momentum stencil, measuring how far the
/// discrete evolution drifts from exact Lagrangian transport.
double lagrangian_momentum_error(const Trajectory& traj, const FlowMap& fm);

/// CSV serialization: header `t,seed_index,x0,y`, one row per
/// (time, seed) pair, reals with 17 significant digits.
std::string to_csv(const FlowMap& fm);

}  // namespace g0hs

#endif

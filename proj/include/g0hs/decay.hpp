#ifndef G0HS_DECAY_HPP
#define G0HS_DECAY_HPP

#include <string>
#include <vector>

#include "g0hs/evolution.hpp"
#include "g0hs/grid.hpp"

namespace g0hs {

/// Fitted exponential decay rates of a field's two tails: |u| ~ e^{-theta|x|}
/// far out, so log|u| is a line of slope +theta_left on the left tail and
/// -theta_right on the right.  The windows record the span of samples the
/// fits actually used; residual is the worst deviation of log|u| from
/// either fitted line.
struct DecayEstimate {
    double theta_left = 0.0;
    double theta_right = 0.0;
    double left_lo = 0.0, left_hi = 0.0;    ///< used span of the left fit
    double right_lo = 0.0, right_hi = 0.0;  ///< used span of the right fit
    double residual = 0.0;                  ///< max |log|u| - line|, both sides
};

/// Per-snapshot decay estimates; snapshots whose tails had too few
/// usable points are simply absent (times lists only the fitted ones).
struct DecayHistory {
    std::vector<double> times;
    std::vector<DecayEstimate> estimates;
};

/// Least-squares line fit of log|u| against x over the outer
/// tail_fraction of each side of a decaying-boundary grid.  Samples with
/// |u| <= 1e-14 are excluded rather than clamped, so the floor noise of
/// denormal-scale values cannot bias the slope.  tail_fraction must lie
/// in (0, 0.4); a window with fewer than 8 usable points throws
/// insufficient_tail_error.
DecayEstimate fit_decay(const Field& u, double tail_fraction);

/// fit_decay applied to every snapshot of a trajectory.  Snapshots that
/// throw insufficient_tail_error (e.g. an identically zero field) are
/// skipped; any other error propagates.
DecayHistory decay_persistence(const Trajectory& traj, double tail_fraction);

/// Half-width of the smallest interval centered at the grid midpoint
/// outside which |u| < eps * max|u|.  The crossing between the outermost
/// sample at or above the threshold and its sub-threshold neighbor is
/// refined assuming log-linear (exponential) decay across the cell.
/// Returns +infinity when the threshold is still exceeded at a boundary
/// sample, and 0 for an identically zero field.  Monotone nonincreasing
/// in eps.
double support_radius(const Field& u, double eps);

/// CSV serialization: header `t,theta_left,theta_right,residual`, one
/// row per fitted snapshot (an empty history yields just the header),
/// 17 significant digits.
std::string to_csv(const DecayHistory& h);

}  // namespace g0hs

#endif

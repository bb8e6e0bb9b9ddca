#include "g0hs/decay.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "g0hs/errors.hpp"

namespace g0hs {

namespace {

/// Samples with |u| at or below this floor carry no slope information
/// (they are dominated by rounding noise) and are excluded from fits.
constexpr double kAmplitudeFloor = 1e-14;

struct LineFit {
    double slope = 0.0;
    double x_lo = 0.0, x_hi = 0.0;  ///< span of the points actually used
    double residual = 0.0;          ///< max |y - (a + b x)| over the window
};

/// Least-squares line through (x_i, log|u_i|) for i in [i0, i1],
/// skipping sub-floor samples.  Throws insufficient_tail_error when
/// fewer than 8 samples survive.
LineFit fit_log_line(const Field& u, int i0, int i1, const char* side) {
    std::vector<double> xs, ys;
    for (int i = i0; i <= i1; ++i) {
        const double a = std::abs(u[i]);
        if (a > kAmplitudeFloor) {
            xs.push_back(u.grid.x(i));
            ys.push_back(std::log(a));
        }
    }
    if (xs.size() < 8) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "fit_decay: only %zu usable points in the %s tail "
                      "window (need 8)",
                      xs.size(), side);
        throw insufficient_tail_error(buf);
    }
    const auto m = static_cast<double>(xs.size());
    double xbar = 0.0, ybar = 0.0;
    for (size_t j = 0; j < xs.size(); ++j) {
        xbar += xs[j];
        ybar += ys[j];
    }
    xbar /= m;
    ybar /= m;
    double sxy = 0.0, sxx = 0.0;
    for (size_t j = 0; j < xs.size(); ++j) {
        sxy += (xs[j] - xbar) * (ys[j] - ybar);
        sxx += (xs[j] - xbar) * (xs[j] - xbar);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.x_lo = xs.front();
    f.x_hi = xs.back();
    for (size_t j = 0; j < xs.size(); ++j) {
        const double pred = ybar + f.slope * (xs[j] - xbar);
        f.residual = std::max(f.residual, std::abs(ys[j] - pred));
    }
    return f;
}

}  // namespace

DecayEstimate fit_decay(const Field& u, double tail_fraction) {
    const Grid& g = u.grid;
    g.validate();
    if (g.boundary != Boundary::decaying)
        throw std::invalid_argument(
            "fit_decay: tail fits require a decaying-boundary grid");
    if (!(tail_fraction > 0.0 && tail_fraction < 0.4))
        throw std::invalid_argument(
            "fit_decay: tail_fraction must lie in (0, 0.4)");
    if (!u.finite())
        throw std::invalid_argument("fit_decay: field has non-finite values");

    // Outer tail_fraction of each side: nodes within that fraction of the
    // domain length of the corresponding end.
    const int nw =
        static_cast<int>(std::floor(tail_fraction * (g.n - 1) + 1e-9));
    const LineFit left = fit_log_line(u, 0, nw, "left");
    const LineFit right = fit_log_line(u, g.n - 1 - nw, g.n - 1, "right");

    DecayEstimate e;
    e.theta_left = left.slope;    // |u| ~ e^{+theta x} as x -> -inf
    e.theta_right = -right.slope; // |u| ~ e^{-theta x} as x -> +inf
    e.left_lo = left.x_lo;
    e.left_hi = left.x_hi;
    e.right_lo = right.x_lo;
    e.right_hi = right.x_hi;
    e.residual = std::max(left.residual, right.residual);
    return e;
}

DecayHistory decay_persistence(const Trajectory& traj, double tail_fraction) {
    if (traj.times.size() != traj.snapshots.size())
        throw std::invalid_argument(
            "decay_persistence: times/snapshots length mismatch");
    if (!(tail_fraction > 0.0 && tail_fraction < 0.4))
        throw std::invalid_argument(
            "decay_persistence: tail_fraction must lie in (0, 0.4)");
    DecayHistory h;
    for (size_t s = 0; s < traj.times.size(); ++s) {
        try {
            DecayEstimate e = fit_decay(traj.snapshots[s], tail_fraction);
            h.times.push_back(traj.times[s]);
            h.estimates.push_back(e);
        } catch (const insufficient_tail_error&) {
            // Tail fell below the amplitude floor at this instant; the
            // snapshot contributes no estimate.
        }
    }
    return h;
}

double support_radius(const Field& u, double eps) {
    const Grid& g = u.grid;
    g.validate();
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw std::invalid_argument("support_radius: eps must be positive");
    if (!u.finite())
        throw std::invalid_argument(
            "support_radius: field has non-finite values");

    const double umax = u.max_abs();
    if (umax == 0.0) return 0.0;
    const double thr = eps * umax;

    int lo = 0;
    while (lo < g.n && std::abs(u[lo]) < thr) ++lo;
    int hi = g.n - 1;
    while (hi >= 0 && std::abs(u[hi]) < thr) --hi;
    if (lo > hi) return 0.0;  // eps >= 1 and the max is not attained twice
    if (lo == 0 || hi == g.n - 1)
        return std::numeric_limits<double>::infinity();

    // Refine each crossing between the outermost sample at/above the
    // threshold and its sub-threshold neighbor, assuming |u| decays
    // exponentially across the cell (linear in log|u|).
    auto refine = [&](int inner, int outer) {
        const double ai = std::abs(u[inner]);
        const double ao = std::abs(u[outer]);
        double frac = 0.0;  // |u(outer)| == 0: crossing collapses to inner
        if (ao > 0.0) {
            const double num = std::log(ai) - std::log(thr);
            const double den = std::log(ai) - std::log(ao);
            if (den > 0.0) frac = num / den;
            frac = std::min(std::max(frac, 0.0), 1.0);
        }
        return g.x(inner) + (g.x(outer) - g.x(inner)) * frac;
    };
    const double center = 0.5 * (g.x(0) + g.x(g.n - 1));
    const double x_left = refine(lo, lo - 1);
    const double x_right = refine(hi, hi + 1);
    return std::max(x_right - center, center - x_left);
}

std::string to_csv(const DecayHistory& h) {
    if (h.times.size() != h.estimates.size())
        throw std::invalid_argument("to_csv: times/estimates length mismatch");
    std::string out = "t,theta_left,theta_right,residual\n";
    char buf[160];
    for (size_t s = 0; s < h.times.size(); ++s) {
        const DecayEstimate& e = h.estimates[s];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", h.times[s],
                      e.theta_left, e.theta_right, e.residual);
        out += buf;
    }
    return out;
}

}  // namespace g0hs

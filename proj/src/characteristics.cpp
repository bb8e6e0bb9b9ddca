#include "g0hs/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <stdexcept>

#include "g0hs/helmholtz.hpp"

namespace g0hs {

namespace {

/// Slope of the quadratic through (t0,f0), (t1,f1), (t2,f2) at query
/// time tq (one of the three nodes).  Second-order accurate on any
/// spacing; the workhorse for Hermite slopes from snapshots alone.
double quad_slope(double t0, double f0, double t1, double f1, double t2,
                  double f2, double tq) {
    const double d01 = (f1 - f0) / (t1 - t0);
    const double d12 = (f2 - f1) / (t2 - t1);
    const double dd = (d12 - d01) / (t2 - t0);
    return d01 + dd * (2.0 * tq - t0 - t1);
}

/// Time slopes du/dt at every snapshot, one Field per time.  Linear
/// slope when only two snapshots exist (Hermite then degenerates to
/// the exact linear interpolant).
std::vector<Field> time_slopes(const Trajectory& traj) {
    const std::size_t nt = traj.times.size();
    const std::vector<double>& t = traj.times;
    std::vector<Field> s;
    s.reserve(nt);
    for (std::size_t i = 0; i < nt; ++i) s.emplace_back(traj.snapshots[0].grid);
    const int n = traj.snapshots[0].grid.n;
    if (nt == 2) {
        const double inv = 1.0 / (t[1] - t[0]);
        for (int j = 0; j < n; ++j) {
            const double d = (traj.snapshots[1][j] - traj.snapshots[0][j]) * inv;
            s[0][j] = d;
            s[1][j] = d;
        }
        return s;
    }
    for (std::size_t i = 0; i < nt; ++i) {
        // Ends use the one-sided quadratic through the first/last three
        // snapshots; interior times the centered one.
        const std::size_t c = (i == 0) ? 1 : (i == nt - 1) ? nt - 2 : i;
        const Field& f0 = traj.snapshots[c - 1];
        const Field& f1 = traj.snapshots[c];
        const Field& f2 = traj.snapshots[c + 1];
        for (int j = 0; j < n; ++j)
            s[i][j] = quad_slope(t[c - 1], f0[j], t[c], f1[j], t[c + 1], f2[j],
                                 t[i]);
    }
    return s;
}

}  // namespace

FlowMap flow(const Trajectory& traj, const std::vector<double>& seeds) {
    const std::size_t nt = traj.times.size();
    if (nt == 0 || traj.snapshots.size() != nt)
        throw std::invalid_argument("flow: malformed trajectory");
    if (traj.config.k < 1)
        throw std::invalid_argument("flow: trajectory power k must be >= 1");
    const Grid& g = traj.snapshots[0].grid;
    g.validate();
    const double lo = g.x_min;
    const double hi = (g.boundary == Boundary::periodic)
                          ? g.x_min + g.n * g.dx
                          : g.x_min + (g.n - 1) * g.dx;
    for (std::size_t j = 0; j < seeds.size(); ++j) {
        if (!std::isfinite(seeds[j]) || seeds[j] < lo || seeds[j] > hi ||
            (g.boundary == Boundary::periodic && seeds[j] == hi))
            throw std::invalid_argument("flow: seed outside the grid domain");
        if (j > 0 && !(seeds[j] > seeds[j - 1]))
            throw std::invalid_argument("flow: seeds must be strictly increasing");
    }
    const int k = traj.config.k;

    double umax = 0.0;
    for (const Field& u : traj.snapshots) umax = std::max(umax, u.max_abs());
    double span = 0.0;
    for (std::size_t i = 0; i + 1 < nt; ++i)
        span = std::max(span, traj.times[i + 1] - traj.times[i]);
    const double speed = ipow(umax, k);
    if (speed > 0.0 && span > g.dx / speed) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "warning: flow: snapshot spacing %.3g exceeds dx/max|u|^k "
                      "= %.3g; time interpolation limits accuracy\n",
                      span, g.dx / speed);
        std::cerr << buf;
    }

    FlowMap fm;
    fm.seeds = seeds;
    fm.times = traj.times;
    fm.positions.reserve(nt);
    fm.positions.push_back(seeds);
    if (nt == 1) return fm;

    const std::vector<Field> slope = time_slopes(traj);
    std::vector<double> y = seeds;
    for (std::size_t i = 0; i + 1 < nt; ++i) {
        const double h = traj.times[i + 1] - traj.times[i];
        const Field& ua = traj.snapshots[i];
        const Field& ub = traj.snapshots[i + 1];
        const Field& sa = slope[i];
        const Field& sb = slope[i + 1];
        // Velocity at fraction th of the interval, position x: cubic
        // Hermite in time, cubic Lagrange in space (sample is linear in
        // the field, so interpolate the four samples).
        auto vel = [&](double th, double x) {
            const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
            const double h10 = th * (1.0 - th) * (1.0 - th);
            const double h01 = th * th * (3.0 - 2.0 * th);
            const double h11 = th * th * (th - 1.0);
            const double u = h00 * sample(ua, x) + h01 * sample(ub, x) +
                             h * (h10 * sample(sa, x) + h11 * sample(sb, x));
            return ipow(u, k);
        };
        for (double& yj : y) {
            const double k1 = vel(0.0, yj);
            const double k2 = vel(0.5, yj + 0.5 * h * k1);
            const double k3 = vel(0.5, yj + 0.5 * h * k2);
            const double k4 = vel(1.0, yj + h * k3);
            yj += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!std::isfinite(yj))
                throw blow_up_error("flow: non-finite characteristic position",
                                    traj.times[i + 1]);
        }
        for (std::size_t j = 0; j + 1 < y.size(); ++j) {
            if (y[j + 1] - y[j] <= -1e-12) {
                char buf[96];
                std::snprintf(buf, sizeof buf,
                              "flow: characteristics crossed at t = %.17g",
                              traj.times[i + 1]);
                throw crossing_error(buf, traj.times[i + 1]);
            }
        }
        fm.positions.push_back(y);
    }
    return fm;
}

double lagrangian_momentum_error(const Trajectory& traj, const FlowMap& fm) {
    const std::size_t nt = traj.times.size();
    if (nt == 0 || traj.snapshots.size() != nt)
        throw std::invalid_argument("lagrangian_momentum_error: malformed trajectory");
    if (fm.times != traj.times || fm.positions.size() != nt)
        throw std::invalid_argument(
            "lagrangian_momentum_error: flow map was not computed from this trajectory");
    for (const std::vector<double>& row : fm.positions)
        if (row.size() != fm.seeds.size())
            throw std::invalid_argument("lagrangian_momentum_error: ragged flow map");
    HelmholtzSolver s(traj.snapshots[0].grid);
    const Field m0 = s.momentum(traj.snapshots[0]);
    std::vector<double> ref(fm.seeds.size());
    for (std::size_t j = 0; j < fm.seeds.size(); ++j)
        ref[j] = sample(m0, fm.seeds[j]);
    double err = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        const Field m = s.momentum(traj.snapshots[i]);
        for (std::size_t j = 0; j < fm.seeds.size(); ++j)
            err = std::max(err,
                           std::abs(sample(m, fm.positions[i][j]) - ref[j]));
    }
    return err;
}

std::string to_csv(const FlowMap& fm) {
    std::string out = "t,seed_index,x0,y\n";
    char buf[96];
    for (std::size_t i = 0; i < fm.times.size(); ++i) {
        for (std::size_t j = 0; j < fm.seeds.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g\n",
                          fm.times[i], j, fm.seeds[j], fm.positions[i][j]);
            out += buf;
        }
    }
    return out;
}

}  // namespace g0hs

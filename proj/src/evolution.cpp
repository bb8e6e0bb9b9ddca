#include "g0hs/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace g0hs {

void SolverConfig::validate() const {
    if (k < 1) throw std::invalid_argument("solver: k must be >= 1");
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw std::invalid_argument("solver: t_end must be > 0");
    if (!(cfl > 0.0) || !(cfl <= 1.0))
        throw std::invalid_argument("solver: cfl must be in (0, 1]");
    if (!(snapshot_every > 0.0))
        throw std::invalid_argument("solver: snapshot_every must be > 0");
    if (!(monitor_every > 0.0))
        throw std::invalid_argument("solver: monitor_every must be > 0");
    if (t_end / snapshot_every > 1e7 || t_end / monitor_every > 1e7)
        throw std::invalid_argument("solver: output cadence too fine");
}

namespace {

inline double at(const Field& f, int i) {
    const int n = f.grid.n;
    if (f.grid.boundary == Boundary::periodic) {
        i %= n;
        if (i < 0) i += n;
        return f[i];
    }
    if (i < 0 || i >= n) return 0.0;
    return f[i];
}

/// Face winds w = u^k at every cell interface, from a fourth-order
/// interpolation of the (smooth) profile u.  Face j sits at x_{j-1/2},
/// between cells j-1 and j; the periodic face n is the face 0.
std::vector<double> face_winds(const Field& u, int k) {
    const Grid& g = u.grid;
    const int n = g.n;
    std::vector<double> w(n + 1);
    for (int j = 0; j <= n; ++j) {
        if (g.boundary == Boundary::periodic && j == n) {
            w[j] = w[0];
            continue;
        }
        const double uf = (-at(u, j - 2) + 9.0 * at(u, j - 1) +
                           9.0 * at(u, j) - at(u, j + 1)) /
                          16.0;
        w[j] = ipow(uf, k);
    }
    return w;
}

/// One conservative swept-flux sweep of the momentum transport,
/// written in flux form m_t + (w m)_x = w_x m with prescribed face
/// winds:
///
///   m_c += -(Phi_{c+1} - Phi_c)/dx + m_c (d_{c+1} - d_c)/dx
///
/// where d_j = w_j dt is the face displacement and Phi_j is the mass
/// of the upwind cell's sub-cell reconstruction inside the swept
/// interval of length |d_j| adjacent to face j.  Because the flux is
/// the integral of the profile actually leaving the cell, a profile
/// that is a translated copy of the reconstruction family -- in
/// particular a sharp step -- is advanced exactly, with no smearing
/// accumulating over steps; this is what lets a peakon's near-delta
/// momentum travel at the right speed instead of eroding.
///
/// Each cell carries two candidate reconstructions, both preserving
/// its mean: the WENO-Z blend of the three quadratic substencils
/// (fifth-order face accuracy where m is smooth) and, where the
/// neighbors bracket the cell monotonically, an exact two-state step
/// whose jump position is fixed by the mean.  Per cell the candidate
/// with the smaller total jump against the neighbors' WENO face
/// values wins (boundary-variation-diminishing selection), so smooth
/// data keep the high-order path and only under-resolved fronts
/// switch to the step form.
///
/// A per-cell scaling then caps each cell's total outflow at its
/// content, which keeps m >= 0 exactly: a nonnegative momentum stays
/// nonnegative cell by cell, and cells holding exactly zero emit
/// nothing.  Because a face flux is shared by both neighbors, the cap
/// does not break the telescoping of the flux sum, so the only drift
/// in the mean of u is the quadrature defect of the w_x m source.
///
/// The source is evaluated with m_src, the momentum state the winds
/// were computed from.  That pairing matters for k = 1: with
/// m = (1 - D2) u and symmetric interpolation for the face winds, the
/// sum over cells of m_c (w_{c+1} - w_c) telescopes to zero EXACTLY
/// (the discrete image of integral(u_x m) = 0), so the mean of u is
/// conserved to round-off -- but only when m_src and w come from the
/// same field.
Field sweep(const Field& m, double dt, const std::vector<double>& w,
            const Field& m_src) {
    const Grid& g = m.grid;
    const int n = g.n;
    const double dx = g.dx;

    // quadratic substencil coefficients q(xi) = a + b xi + c xi^2 on
    // the cell's normalized coordinate xi in [-1/2, 1/2], for the
    // left-shifted (S0), centered (S1) and right-shifted (S2) stencils
    struct Quad {
        double a, b, c;
        double value(double xi) const { return a + xi * (b + xi * c); }
        // integral over [lo, hi] within the cell, xi units
        double integral(double lo, double hi) const {
            auto F = [&](double x) {
                return x * (a + x * (0.5 * b + x * (c / 3.0)));
            };
            return F(hi) - F(lo);
        }
    };
    struct Recon {
        Quad q[3];
        double om[3];   // Z-weights, already normalized
        bool step;      // exact-step candidate selected
        double lo, hi;  // step states: lo left of the jump, hi right
        double alpha;   // fraction of the cell left of the jump
        double value(double xi) const {
            if (step) return xi < alpha - 0.5 ? lo : hi;
            return om[0] * q[0].value(xi) + om[1] * q[1].value(xi) +
                   om[2] * q[2].value(xi);
        }
        double integral(double l, double h) const {
            if (step) {
                const double j = alpha - 0.5;  // jump position
                const double below = std::min(h, j) - std::min(l, j);
                const double above = std::max(h, j) - std::max(l, j);
                return lo * std::max(below, 0.0) + hi * std::max(above, 0.0);
            }
            return om[0] * q[0].integral(l, h) + om[1] * q[1].integral(l, h) +
                   om[2] * q[2].integral(l, h);
        }
    };

    std::vector<Recon> rec(n);
    std::vector<double> faceL(n), faceR(n);  // WENO values at own faces
    for (int c = 0; c < n; ++c) {
        const double v0 = at(m, c - 2), v1 = at(m, c - 1), v2 = m[c],
                     v3 = at(m, c + 1), v4 = at(m, c + 2);
        Recon& r = rec[c];
        r.step = false;
        r.q[0] = {v2 - (v0 - 2.0 * v1 + v2) / 24.0,
                  0.5 * (3.0 * v2 - 4.0 * v1 + v0),
                  0.5 * (v0 - 2.0 * v1 + v2)};
        r.q[1] = {v2 - (v1 - 2.0 * v2 + v3) / 24.0, 0.5 * (v3 - v1),
                  0.5 * (v1 - 2.0 * v2 + v3)};
        r.q[2] = {v2 - (v2 - 2.0 * v3 + v4) / 24.0,
                  0.5 * (-3.0 * v2 + 4.0 * v3 - v4),
                  0.5 * (v2 - 2.0 * v3 + v4)};
        const double b0 =
            13.0 / 12.0 * (v0 - 2.0 * v1 + v2) * (v0 - 2.0 * v1 + v2) +
            0.25 * (v0 - 4.0 * v1 + 3.0 * v2) * (v0 - 4.0 * v1 + 3.0 * v2);
        const double b1 =
            13.0 / 12.0 * (v1 - 2.0 * v2 + v3) * (v1 - 2.0 * v2 + v3) +
            0.25 * (v1 - v3) * (v1 - v3);
        const double b2 =
            13.0 / 12.0 * (v2 - 2.0 * v3 + v4) * (v2 - 2.0 * v3 + v4) +
            0.25 * (3.0 * v2 - 4.0 * v3 + v4) * (3.0 * v2 - 4.0 * v3 + v4);
        const double tau = std::abs(b0 - b2);
        const double eps = 1e-40;
        const double a0 = 0.1 * (1.0 + tau / (b0 + eps));
        const double a1 = 0.6 * (1.0 + tau / (b1 + eps));
        const double a2 = 0.3 * (1.0 + tau / (b2 + eps));
        const double asum = a0 + a1 + a2;
        r.om[0] = a0 / asum;
        r.om[1] = a1 / asum;
        r.om[2] = a2 / asum;
        faceR[c] = r.value(0.5);
        faceL[c] = r.value(-0.5);
    }

    // exact-step candidate where the neighbors bracket the cell mean
    // monotonically, adopted when it lowers the total boundary jump
    auto nb_faceR = [&](int c) {  // neighbor's WENO value at my left face
        if (g.boundary == Boundary::periodic) return faceR[(c - 1 + n) % n];
        return c - 1 < 0 ? 0.0 : faceR[c - 1];
    };
    auto nb_faceL = [&](int c) {  // neighbor's WENO value at my right face
        if (g.boundary == Boundary::periodic) return faceL[(c + 1) % n];
        return c + 1 >= n ? 0.0 : faceL[c + 1];
    };
    for (int c = 0; c < n; ++c) {
        const double qm = at(m, c - 1), q0 = m[c], qp = at(m, c + 1);
        if (!((qp - q0) * (q0 - qm) > 0.0)) continue;
        const double alpha = (qp - q0) / (qp - qm);  // cell mean match
        const double bvW = std::abs(faceL[c] - nb_faceR(c)) +
                           std::abs(faceR[c] - nb_faceL(c));
        const double bvT = std::abs(qm - nb_faceR(c)) +
                           std::abs(qp - nb_faceL(c));
        if (bvT < bvW) {
            Recon& r = rec[c];
            r.step = true;
            r.lo = qm;
            r.hi = qp;
            r.alpha = alpha;
        }
    }

    // Spike pairs: a near-delta blob of m occupies two adjacent cells
    // as a box roughly one cell wide straddling their shared face.
    // Neither single-cell candidate can express that -- the peak cell
    // is an extremum (no step) and the shoulder's step would borrow
    // the peak's MEAN as its plateau, misplacing the sub-cell mass.
    // So reconstruct the pair jointly: one box of height H over the
    // baseline k, flush against the shared face, with the partition
    // of the excess mass between the two cells fixing the edges.  A
    // translated box is re-fitted exactly by the same rule, so an
    // isolated spike advects at the correct speed for any CFL instead
    // of accumulating a per-step position loss.  The pair is adopted
    // only when its joint boundary jump against the outer neighbors'
    // WENO faces beats the WENO pair's own (both inner faces match H
    // by construction), so smooth extrema keep the high-order path.
    std::vector<char> claimed(n, 0);
    for (int c = 0; c < n; ++c) {
        const double qm = at(m, c - 1), q0 = m[c], qp = at(m, c + 1);
        if (!(q0 > qm && q0 > qp)) continue;  // strict local max
        const bool lean_right = qp >= qm;
        const int s_off = lean_right ? 1 : -1;
        const int s_raw = c + s_off;
        int s = s_raw;
        if (g.boundary == Boundary::periodic) s = (s % n + n) % n;
        else if (s < 0 || s >= n) continue;
        if (claimed[c] || claimed[s]) continue;
        const double k = std::max(lean_right ? qm : qp, 0.0);
        const double d = std::max(at(m, lean_right ? c + 2 : c - 2), 0.0);
        const double a = q0 - k, b = m[s] - k;
        if (!(a > 0.0 && b > 0.0)) continue;
        const double H = k + a + b;
        if (!(H > d && m[s] >= d)) continue;
        // joint jump of the pair candidate vs the WENO pair, over the
        // pair's two outer faces plus the (candidate-exact) inner face
        double bvP, bvW;
        if (lean_right) {
            bvP = std::abs(k - nb_faceR(c)) + std::abs(d - nb_faceL(s));
            bvW = std::abs(faceL[c] - nb_faceR(c)) +
                  std::abs(faceR[c] - faceL[s]) +
                  std::abs(faceR[s] - nb_faceL(s));
        } else {
            bvP = std::abs(k - nb_faceL(c)) + std::abs(d - nb_faceR(s));
            bvW = std::abs(faceR[c] - nb_faceL(c)) +
                  std::abs(faceL[c] - faceR[s]) +
                  std::abs(faceL[s] - nb_faceR(s));
        }
        if (bvP >= bvW) continue;
        Recon& rp = rec[c];
        Recon& rs = rec[s];
        rp.step = rs.step = true;
        claimed[c] = claimed[s] = 1;
        if (lean_right) {
            rp.lo = k;
            rp.hi = H;
            rp.alpha = b / (a + b);  // box covers the right a/(a+b)
            rs.lo = H;
            rs.hi = d;
            rs.alpha = (m[s] - d) / (H - d);
        } else {
            rp.lo = H;
            rp.hi = k;
            rp.alpha = a / (a + b);
            rs.lo = d;
            rs.hi = H;
            rs.alpha = 1.0 - (m[s] - d) / (H - d);
        }
    }

    // swept-mass fluxes, in units of m * dx; the upwind cell is the
    // one the swept interval lies in (|d| <= dx by the advective CFL
    // bound; clamped for safety so the interval stays in one cell)
    std::vector<double> phi(n + 1, 0.0);
    auto cell_flux = [&](int j) {
        const double d = std::max(-1.0, std::min(1.0, w[j] * dt / dx));
        if (d == 0.0) return 0.0;
        int cu = d > 0.0 ? j - 1 : j;
        if (g.boundary == Boundary::periodic) {
            cu = (cu % n + n) % n;
        } else if (cu < 0 || cu >= n) {
            return 0.0;  // ghost cells of a decaying grid hold zero
        }
        double f = d > 0.0 ? rec[cu].integral(0.5 - d, 0.5)
                           : -rec[cu].integral(-0.5, -0.5 - d);
        // the magnitude of a swept mass can neither be negative nor
        // exceed the (nonnegative part of the) cell content
        const double lim = std::max(m[cu], 0.0);
        if (d > 0.0)
            f = std::min(std::max(f, 0.0), lim);
        else
            f = std::max(std::min(f, 0.0), -lim);
        return f;
    };
    for (int j = 0; j <= n; ++j) {
        if (g.boundary == Boundary::periodic && j == n) {
            phi[j] = phi[0];
            continue;
        }
        phi[j] = cell_flux(j);
    }

    // outflow cap: cell c's outflow faces are exactly the faces whose
    // upwind side is cell c, so scaling those fluxes by theta_c caps
    // its total outflow at its content while only reducing the
    // neighbors' inflow
    const double lam = dt / dx;
    std::vector<double> theta(n, 1.0);
    for (int c = 0; c < n; ++c) {
        const double out = std::max(phi[c + 1], 0.0) + std::max(-phi[c], 0.0);
        const double cap =
            std::max(m[c] + lam * m_src[c] * (w[c + 1] - w[c]), 0.0);
        if (out > cap) theta[c] = cap / out;
    }
    auto upwind_theta = [&](int j) {
        int cell = phi[j] >= 0.0 ? j - 1 : j;
        if (g.boundary == Boundary::periodic) {
            cell = (cell % n + n) % n;
            return theta[cell];
        }
        return (cell < 0 || cell >= n) ? 1.0 : theta[cell];
    };
    for (int j = 0; j <= n; ++j) phi[j] *= upwind_theta(j);

    Field out(g);
    for (int c = 0; c < n; ++c)
        out[c] =
            m[c] - (phi[c + 1] - phi[c]) + lam * m_src[c] * (w[c + 1] - w[c]);
    return out;
}

/// One time step of the momentum transport: a half-step sweep
/// predicts the profile at t + dt/2, whose winds (and matching source
/// momentum) then drive a single full sweep from the original state
/// (midpoint rule, second order in time).  Using one sweep per step
/// -- rather than a Runge-Kutta combination of sweeps -- matters for
/// sharp fronts: convex combinations of differently-shifted steps
/// re-smear what the swept fluxes transported exactly.
Field momentum_step(const HelmholtzSolver& s, const Field& m, double dt,
                    int k) {
    Field u = s.inv_helmholtz(m);
    Field m_half = sweep(m, 0.5 * dt, face_winds(u, k), m);
    Field u_half = s.inv_helmholtz(m_half);
    return sweep(m, dt, face_winds(u_half, k), m_half);
}

Field axpy(const Field& f, double a, const Field& g) {
    Field out(f.grid);
    for (int i = 0; i < f.n(); ++i) out[i] = f[i] + a * g[i];
    return out;
}

}  // namespace

Field rhs(const HelmholtzSolver& s, const Field& u, int k) {
    if (k < 1) throw std::invalid_argument("rhs: k must be >= 1");
    if (!u.finite())
        throw blow_up_error("rhs: field contains non-finite values",
                            std::numeric_limits<double>::quiet_NaN());
    Field ux = dx1(u);
    Field F = s.flux(u, k);
    Field out(u.grid);
    for (int i = 0; i < u.n(); ++i) out[i] = -ipow(u[i], k) * ux[i] + F[i];
    return out;
}

double stable_dt(const Field& u, int k, double cfl) {
    double speed = ipow(u.max_abs(), k);
    return cfl * u.grid.dx / std::max(1e-8, speed);
}

Field step_rk4(const HelmholtzSolver& s, const Field& u, double dt, int k) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("step_rk4: dt must be positive and finite");
    Field k1 = rhs(s, u, k);
    Field k2 = rhs(s, axpy(u, 0.5 * dt, k1), k);
    Field k3 = rhs(s, axpy(u, 0.5 * dt, k2), k);
    Field k4 = rhs(s, axpy(u, dt, k3), k);
    Field out(u.grid);
    for (int i = 0; i < u.n(); ++i)
        out[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!out.finite())
        throw blow_up_error("step_rk4: step produced non-finite values",
                            std::numeric_limits<double>::quiet_NaN());
    return out;
}

namespace {

struct Event {
    double t;
    bool snapshot;
    bool monitor;
};

/// Multiples of the two cadences up to t_end, merged and sorted, with
/// t_end itself always a snapshot-and-monitor event.  Times are the
/// literal products j * cadence so repeated runs agree bitwise.
std::vector<Event> schedule(const SolverConfig& c) {
    std::vector<Event> ev;
    const double cut = c.t_end * (1.0 - 1e-12);
    for (int j = 1; j * c.snapshot_every < cut; ++j)
        ev.push_back({j * c.snapshot_every, true, false});
    for (int j = 1; j * c.monitor_every < cut; ++j)
        ev.push_back({j * c.monitor_every, false, true});
    ev.push_back({c.t_end, true, true});
    std::sort(ev.begin(), ev.end(),
              [](const Event& a, const Event& b) { return a.t < b.t; });
    std::vector<Event> merged;
    const double tol = 1e-12 * std::max(1.0, c.t_end);
    for (const Event& e : ev) {
        if (!merged.empty() && e.t - merged.back().t <= tol) {
            merged.back().snapshot |= e.snapshot;
            merged.back().monitor |= e.monitor;
        } else {
            merged.push_back(e);
        }
    }
    return merged;
}

}  // namespace

Trajectory simulate(const Field& u0, const SolverConfig& config,
                    const FieldCallback& snapshot_cb,
                    const FieldCallback& monitor_cb) {
    config.validate();
    u0.grid.validate();
    if (!u0.finite())
        throw blow_up_error("simulate: initial datum contains non-finite values",
                            0.0);
    if (u0.grid.boundary == Boundary::decaying) {
        const double scale = u0.max_abs();
        if (scale > 0.0 && (std::abs(u0[0]) >= 1e-8 * scale ||
                            std::abs(u0[u0.n() - 1]) >= 1e-8 * scale))
            throw std::invalid_argument(
                "simulate: datum does not decay at the ends of the grid "
                "(|u0| >= 1e-8 * max|u0| at an endpoint)");
    }

    HelmholtzSolver solver(u0.grid);
    Trajectory traj;
    traj.config = config;
    traj.times.push_back(0.0);
    traj.snapshots.push_back(u0);
    if (snapshot_cb) snapshot_cb(0.0, u0);
    if (monitor_cb) monitor_cb(0.0, u0);

    Field m = solver.momentum(u0);
    Field u = u0;
    double t = 0.0;
    const double arrive_tol = 1e-13 * std::max(1.0, config.t_end);

    for (const Event& ev : schedule(config)) {
        while (ev.t - t > arrive_tol) {
            double dt = stable_dt(u, config.k, config.cfl);
            if (!(dt > 0.0) || !std::isfinite(dt))
                throw simulation_blow_up("simulate: transport speed overflow",
                                         t, traj);
            bool lands = false;
            if (dt >= ev.t - t) {
                dt = ev.t - t;
                lands = true;
            }
            Field m_next = momentum_step(solver, m, dt, config.k);
            if (!m_next.finite())
                throw simulation_blow_up(
                    "simulate: step produced non-finite values", t + dt, traj);
            m = std::move(m_next);
            u = solver.inv_helmholtz(m);
            t = lands ? ev.t : t + dt;
        }
        t = ev.t;
        if (ev.snapshot) {
            traj.times.push_back(ev.t);
            traj.snapshots.push_back(u);
            if (snapshot_cb) snapshot_cb(ev.t, u);
        }
        if (ev.monitor && monitor_cb) monitor_cb(ev.t, u);
    }
    return traj;
}

}  // namespace g0hs

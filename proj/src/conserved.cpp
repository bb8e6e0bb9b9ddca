#include "g0hs/conserved.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <stdexcept>

namespace g0hs {

namespace {

Field abs_field(const Field& u) {
    Field out = u;
    for (int i = 0; i < out.n(); ++i) out[i] = std::fabs(out[i]);
    return out;
}

double min_value(const Field& u) {
    double lo = u[0];
    for (int i = 1; i < u.n(); ++i) lo = std::min(lo, u[i]);
    return lo;
}

/// Fraction of the field's energy in the top octave of wavenumbers,
/// estimated with the second-difference high-pass v_i = (u_{i-1} - 2u_i
/// + u_{i+1})/4.  Its Fourier response sin^2(theta/2) passes half the
/// amplitude at theta = pi/2 and all of it at the Nyquist mode, so
/// |v|^2 / |u|^2 is an octave-energy proxy that needs no transform.
double top_octave_ratio(const Field& u) {
    const std::size_t n = u.n();
    if (n < 3) return 0.0;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) den += u[i] * u[i];
    if (den == 0.0) return 0.0;
    auto at = [&](std::ptrdiff_t i) -> double {
        const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
        if (u.grid.boundary == Boundary::periodic) return u[((i % sn) + sn) % sn];
        if (i < 0 || i >= sn) return 0.0;
        return u[i];
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double v =
            0.25 * (at(static_cast<std::ptrdiff_t>(i) - 1) - 2.0 * u[i] +
                    at(static_cast<std::ptrdiff_t>(i) + 1));
        num += v * v;
    }
    return num / den;
}

}  // namespace

double h0(const Field& u) { return quadrature(u); }

double h1(const Field& u) {
    const Field ux = dx1(u);
    Field density = u;
    for (int i = 0; i < u.n(); ++i)
        density[i] = 0.5 * (u[i] * u[i] + ux[i] * ux[i]);
    return quadrature(density);
}

double i3(const Field& u) {
    const double ratio = top_octave_ratio(u);
    if (ratio > 0.1) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "warning: i3: %.1f%% of the field energy sits at grid "
                      "scale; the third-derivative term is unreliable\n",
                      100.0 * ratio);
        std::cerr << buf;
    }
    const Field ux = dx1(u);
    const Field uxx = dx2(u);
    const Field uxxx = dx1(uxx);
    Field density = u;
    for (int i = 0; i < u.n(); ++i) {
        density[i] = 0.25 * (u[i] * u[i] + 3.0 * ux[i] * ux[i] +
                             4.0 * uxx[i] * uxx[i] + 2.0 * uxxx[i] * uxxx[i]);
    }
    return quadrature(density);
}

double l1(const Field& u) { return quadrature(abs_field(u)); }

double u_plus_ux_min(const HelmholtzSolver& s, const Field& u) {
    if (!(u.grid == s.grid()))
        throw std::invalid_argument("u_plus_ux_min: field grid does not match solver grid");
    const Field ux = dx1(u);
    double lo = u[0] + ux[0];
    for (int i = 1; i < u.n(); ++i) lo = std::min(lo, u[i] + ux[i]);
    return lo;
}

ConservationReport report(const HelmholtzSolver& s, const Trajectory& traj) {
    if (traj.times.size() != traj.snapshots.size())
        throw std::invalid_argument("report: trajectory times and snapshots disagree in length");
    ConservationReport rep;
    const std::size_t n = traj.times.size();
    rep.times.reserve(n);
    rep.h0.reserve(n);
    rep.h1.reserve(n);
    rep.i3.reserve(n);
    rep.l1_u.reserve(n);
    rep.l1_m.reserve(n);
    rep.min_m.reserve(n);
    rep.min_u_plus_ux.reserve(n);
    rep.min_ux.reserve(n);
    rep.sup_abs_u.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Field& u = traj.snapshots[i];
        if (!(u.grid == s.grid()))
            throw std::invalid_argument("report: snapshot grid does not match solver grid");
        const Field m = s.momentum(u);
        rep.times.push_back(traj.times[i]);
        rep.h0.push_back(h0(u));
        rep.h1.push_back(h1(u));
        rep.i3.push_back(i3(u));
        rep.l1_u.push_back(l1(u));
        rep.l1_m.push_back(l1(m));
        rep.min_m.push_back(min_value(m));
        rep.min_u_plus_ux.push_back(u_plus_ux_min(s, u));
        rep.min_ux.push_back(min_value(dx1(u)));
        rep.sup_abs_u.push_back(u.max_abs());
    }
    return rep;
}

bool groenwall_check(const ConservationReport& rep, double kappa) {
    if (rep.times.empty()) throw std::invalid_argument("groenwall_check: empty report");
    double slope_floor = 0.0;
    for (double v : rep.min_ux) slope_floor = std::max(slope_floor, -v);
    if (!(kappa >= std::max(0.0, slope_floor)))
        throw std::invalid_argument(
            "groenwall_check: kappa is below the run's empirical slope floor");
    const double e0 = rep.i3.front();
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        const double t = rep.times[i] - rep.times.front();
        const double bound = e0 * std::exp(3.0 * kappa * t) * (1.0 + 1e-3);
        if (!(rep.i3[i] <= bound)) return false;
    }
    return true;
}

std::string to_csv(const ConservationReport& rep) {
    std::string out = "t,h0,h1,i3,l1_u,l1_m,min_m,min_u_plus_ux,min_ux,sup_abs_u\n";
    char buf[32];
    auto append = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        out += sep;
    };
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        append(rep.times[i], ',');
        append(rep.h0[i], ',');
        append(rep.h1[i], ',');
        append(rep.i3[i], ',');
        append(rep.l1_u[i], ',');
        append(rep.l1_m[i], ',');
        append(rep.min_m[i], ',');
        append(rep.min_u_plus_ux[i], ',');
        append(rep.min_ux[i], ',');
        append(rep.sup_abs_u[i], '\n');
    }
    return out;
}

}  // namespace g0hs

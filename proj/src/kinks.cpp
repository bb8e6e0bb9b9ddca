#include "g0hs/kinks.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "g0hs/helmholtz.hpp"

namespace g0hs {

namespace {

double sgn(double x) { return (x > 0.0) ? 1.0 : (x < 0.0) ? -1.0 : 0.0; }

/// One cliff term evaluated at x: c + b sgn(x - p)(1 - e^{-|x - p|}).
/// The expm1 form keeps the profile accurate near its own position.
double cliff(double c, double b, double p, double x) {
    return c + b * sgn(x - p) * -std::expm1(-std::abs(x - p));
}

KinkEnsemble advance(const KinkEnsemble& e, const KinkDerivs& d, double h) {
    KinkEnsemble out = e;
    for (std::size_t i = 0; i < e.p.size(); ++i) {
        out.c[i] += h * d.dc[i];
        out.b[i] += h * d.db[i];
        out.p[i] += h * d.dp[i];
    }
    return out;
}

KinkEnsemble rk4_step(const KinkEnsemble& e, double h) {
    const KinkDerivs d1 = kink_rhs(e);
    const KinkDerivs d2 = kink_rhs(advance(e, d1, 0.5 * h));
    const KinkDerivs d3 = kink_rhs(advance(e, d2, 0.5 * h));
    const KinkDerivs d4 = kink_rhs(advance(e, d3, h));
    KinkEnsemble out = e;
    for (std::size_t i = 0; i < e.p.size(); ++i) {
        out.c[i] += h / 6.0 * (d1.dc[i] + 2.0 * d2.dc[i] + 2.0 * d3.dc[i] + d4.dc[i]);
        out.b[i] += h / 6.0 * (d1.db[i] + 2.0 * d2.db[i] + 2.0 * d3.db[i] + d4.db[i]);
        out.p[i] += h / 6.0 * (d1.dp[i] + 2.0 * d2.dp[i] + 2.0 * d3.dp[i] + d4.dp[i]);
    }
    return out;
}

/// Shared fixed-step schedule: literal multiples of dt, landing exactly
/// on t_end (a final multiple within round-off of t_end is merged).
std::vector<double> step_times(double t_end, double dt, const char* who) {
    char buf[96];
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        std::snprintf(buf, sizeof buf, "%s: t_end must be positive and finite", who);
        throw std::invalid_argument(buf);
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        std::snprintf(buf, sizeof buf, "%s: dt must be positive and finite", who);
        throw std::invalid_argument(buf);
    }
    if (t_end / dt > 1e8) {
        std::snprintf(buf, sizeof buf, "%s: more than 1e8 steps requested", who);
        throw std::invalid_argument(buf);
    }
    std::vector<double> times{0.0};
    const double cut = t_end * (1.0 - 1e-12);
    for (long i = 1; i * dt < cut; ++i) times.push_back(i * dt);
    times.push_back(t_end);
    return times;
}

}  // namespace

void KinkEnsemble::validate() const {
    if (k < 1)
        throw std::invalid_argument("kink ensemble: k must be a positive integer");
    if (c.empty() || c.size() != b.size() || c.size() != p.size())
        throw std::invalid_argument(
            "kink ensemble: c, b and p must be nonempty and equally sized");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isfinite(c[i]) || !std::isfinite(b[i]) || !std::isfinite(p[i]))
            throw std::invalid_argument("kink ensemble: non-finite entry");
        if (b[i] == 0.0 && p[i] != 0.0)
            throw std::invalid_argument(
                "kink ensemble: a zero-amplitude cliff must sit at p = 0");
    }
}

Field kink_field(const KinkEnsemble& e, const Grid& g) {
    e.validate();
    g.validate();
    Field u(g);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < e.p.size(); ++j)
            acc += cliff(e.c[j], e.b[j], e.p[j], x);
        u[i] = acc;
    }
    return u;
}

KinkDerivs kink_rhs(const KinkEnsemble& e) {
    e.validate();
    const std::size_t n = e.p.size();
    KinkDerivs d{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                 std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double u = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            u += cliff(e.c[j], e.b[j], e.p[j], e.p[i]);
        d.dp[i] = ipow(u, e.k);
    }
    return d;
}

KinkTrajectory integrate_kinks(const KinkEnsemble& e0, double t_end,
                               double dt) {
    e0.validate();
    const std::vector<double> times = step_times(t_end, dt, "integrate_kinks");

    KinkTrajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    traj.states.push_back(e0);

    KinkEnsemble e = e0;
    for (std::size_t s = 0; s + 1 < times.size(); ++s) {
        e = rk4_step(e, times[s + 1] - times[s]);
        // The offsets and amplitudes have identically zero derivatives;
        // anything else indicates a broken right-hand side.
        for (std::size_t i = 0; i < e.p.size(); ++i)
            if (e.c[i] != e0.c[i] || e.b[i] != e0.b[i])
                throw std::logic_error(
                    "integrate_kinks: offsets or amplitudes drifted");
        traj.states.push_back(e);
    }
    return traj;
}

KinkEnsemble symmetric_pair(int k, double p0) {
    if (k < 1)
        throw std::invalid_argument("symmetric_pair: k must be a positive integer");
    if (k % 2 == 0)
        throw std::invalid_argument(
            "symmetric_pair: the mirror constraint b_2^k = -b_1^k has no real "
            "solution for even k; use integrate_symmetric_pair instead");
    if (!(p0 > 0.0) || !std::isfinite(p0))
        throw std::invalid_argument("symmetric_pair: p0 must be positive and finite");
    return KinkEnsemble{k, {0.0, 0.0}, {1.0, 1.0}, {p0, -p0}};
}

SymmetricPairTrajectory integrate_symmetric_pair(int k, double p0,
                                                 double t_end, double dt) {
    if (k < 1)
        throw std::invalid_argument(
            "integrate_symmetric_pair: k must be a positive integer");
    if (!(p0 > 0.0) || !std::isfinite(p0))
        throw std::invalid_argument(
            "integrate_symmetric_pair: p0 must be positive and finite");
    const std::vector<double> times =
        step_times(t_end, dt, "integrate_symmetric_pair");

    // The half-gap speed (1 - e^{-2p})^k, in expm1 form for small p.
    auto rhs = [k](double p) { return ipow(-std::expm1(-2.0 * p), k); };

    SymmetricPairTrajectory traj;
    traj.times = times;
    traj.p.reserve(times.size());
    traj.p.push_back(p0);
    double p = p0;
    for (std::size_t s = 0; s + 1 < times.size(); ++s) {
        const double h = times[s + 1] - times[s];
        const double d1 = rhs(p);
        const double d2 = rhs(p + 0.5 * h * d1);
        const double d3 = rhs(p + 0.5 * h * d2);
        const double d4 = rhs(p + h * d3);
        p += h / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
        traj.p.push_back(p);
    }
    return traj;
}

double exact_symmetric_kink_position(double p0, double t) {
    if (!(p0 > 0.0) || !std::isfinite(p0))
        throw std::invalid_argument(
            "exact_symmetric_kink_position: p0 must be positive and finite");
    // (1/2) ln[1 + (e^{2 p0} - 1) e^{2t}]: factoring e^{2t} out of the
    // logarithm avoids overflow once t is large, where
    // p(t) = t + (1/2) ln(e^{2 p0} - 1) up to an e^{-2t} correction.
    if (t < 0.0)
        return 0.5 * std::log1p(std::expm1(2.0 * p0) * std::exp(2.0 * t));
    return t + 0.5 * std::log(std::expm1(2.0 * p0) + std::exp(-2.0 * t));
}

Field exact_two_kink_field(double p0, double t, const Grid& g) {
    g.validate();
    const double p = exact_symmetric_kink_position(p0, t);
    Field u(g);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        u[i] = cliff(0.0, 1.0, p, x) + cliff(0.0, 1.0, -p, x);
    }
    return u;
}

std::string to_csv(const KinkTrajectory& traj) {
    if (traj.states.empty() || traj.times.size() != traj.states.size())
        throw std::invalid_argument("to_csv: empty or malformed cliff trajectory");
    const std::size_t n = traj.states[0].p.size();
    std::string out = "t";
    char buf[32];
    for (const char* name : {"c", "b", "p"})
        for (std::size_t j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, ",%s_%zu", name, j + 1);
            out += buf;
        }
    out += '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.times[i]);
        out += buf;
        for (const std::vector<double>* arr :
             {&traj.states[i].c, &traj.states[i].b, &traj.states[i].p})
            for (double v : *arr) {
                std::snprintf(buf, sizeof buf, ",%.17g", v);
                out += buf;
            }
        out += '\n';
    }
    return out;
}

}  // namespace g0hs

#include "g0hs/peakons.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "g0hs/helmholtz.hpp"

namespace g0hs {

namespace {

double sgn(double x) { return (x > 0.0) ? 1.0 : (x < 0.0) ? -1.0 : 0.0; }

/// x^m for any integer m (x^0 = 1; negative m divides).
double zpow(double x, int m) {
    if (m == 0) return 1.0;
    return m > 0 ? ipow(x, m) : 1.0 / ipow(x, -m);
}

PeakonEnsemble advance(const PeakonEnsemble& e, const PeakonDerivs& d,
                       double h) {
    PeakonEnsemble out = e;
    for (std::size_t i = 0; i < e.p.size(); ++i) {
        out.p[i] += h * d.dp[i];
        out.q[i] += h * d.dq[i];
    }
    return out;
}

PeakonEnsemble rk4_step(const PeakonEnsemble& e, double h) {
    const PeakonDerivs d1 = peakon_rhs(e);
    const PeakonDerivs d2 = peakon_rhs(advance(e, d1, 0.5 * h));
    const PeakonDerivs d3 = peakon_rhs(advance(e, d2, 0.5 * h));
    const PeakonDerivs d4 = peakon_rhs(advance(e, d3, h));
    PeakonEnsemble out = e;
    for (std::size_t i = 0; i < e.p.size(); ++i) {
        out.p[i] += h / 6.0 * (d1.dp[i] + 2.0 * d2.dp[i] + 2.0 * d3.dp[i] + d4.dp[i]);
        out.q[i] += h / 6.0 * (d1.dq[i] + 2.0 * d2.dq[i] + 2.0 * d3.dq[i] + d4.dq[i]);
    }
    return out;
}

}  // namespace

void PeakonEnsemble::validate() const {
    if (k == 0)
        throw std::invalid_argument("peakon ensemble: k must be a nonzero integer");
    if (p.empty() || p.size() != q.size())
        throw std::invalid_argument(
            "peakon ensemble: p and q must be nonempty and equally sized");
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!std::isfinite(p[i]) || !std::isfinite(q[i]))
            throw std::invalid_argument("peakon ensemble: non-finite entry");
}

Field peakon_field(const PeakonEnsemble& e, const Grid& g) {
    e.validate();
    g.validate();
    Field u(g);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < e.p.size(); ++j)
            acc += e.p[j] * std::exp(-std::abs(x - e.q[j]));
        u[i] = acc;
    }
    return u;
}

PeakonDerivs peakon_rhs(const PeakonEnsemble& e) {
    e.validate();
    const std::size_t n = e.p.size();
    PeakonDerivs d{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double u = 0.0, ux = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double dq = e.q[i] - e.q[j];
            const double w = e.p[j] * std::exp(-std::abs(dq));
            u += w;
            ux -= sgn(dq) * w;
        }
        if (e.k <= 0 && std::abs(u) < 1e-10) {
            char buf[96];
            std::snprintf(buf, sizeof buf,
                          "peakon_rhs: |u(q_%zu)| < 1e-10 with k = %d", i, e.k);
            throw singularity_error(buf, 0.0, static_cast<int>(i));
        }
        d.dq[i] = zpow(u, e.k);
        d.dp[i] = e.k * e.p[i] * zpow(u, e.k - 1) * ux;
    }
    return d;
}

PeakonTrajectory integrate_peakons(const PeakonEnsemble& e0, double t_end,
                                   double dt) {
    e0.validate();
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw std::invalid_argument("integrate_peakons: t_end must be positive and finite");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("integrate_peakons: dt must be positive and finite");
    if (t_end / dt > 1e8)
        throw std::invalid_argument("integrate_peakons: more than 1e8 steps requested");

    // Literal i*dt times are bitwise reproducible; the final step lands
    // exactly on t_end (merged when i*dt is already within round-off).
    std::vector<double> times{0.0};
    const double cut = t_end * (1.0 - 1e-12);
    for (long i = 1; i * dt < cut; ++i) times.push_back(i * dt);
    times.push_back(t_end);

    PeakonTrajectory traj;
    auto record = [&](double t, const PeakonEnsemble& e) {
        for (std::size_t i = 0; i < e.q.size(); ++i) {
            for (std::size_t j = i + 1; j < e.q.size(); ++j) {
                if (std::abs(e.q[i] - e.q[j]) < 1e-6) {
                    char buf[96];
                    std::snprintf(buf, sizeof buf,
                                  "pulse collision: |q_%zu - q_%zu| < 1e-6 at t = %.17g",
                                  i, j, t);
                    throw peakon_collision(buf, t, std::move(traj));
                }
            }
        }
        traj.times.push_back(t);
        traj.states.push_back(e);
    };

    PeakonEnsemble e = e0;
    record(0.0, e);
    for (std::size_t s = 0; s + 1 < times.size(); ++s) {
        const double h = times[s + 1] - times[s];
        try {
            e = rk4_step(e, h);
        } catch (const singularity_error& ex) {
            throw singularity_error(ex.what(), times[s], ex.index());
        }
        for (std::size_t i = 0; i < e.p.size(); ++i)
            if (!std::isfinite(e.p[i]) || !std::isfinite(e.q[i]))
                throw blow_up_error("integrate_peakons: non-finite state",
                                    times[s + 1]);
        record(times[s + 1], e);
    }
    return traj;
}

double two_peakon_invariant(double p, double q, int k) {
    if (k % 2 == 0)
        throw std::invalid_argument("two_peakon_invariant: k must be odd");
    if (!(q > 0.0))
        throw std::invalid_argument("two_peakon_invariant: q must be positive");
    if (!(p > 0.0))
        throw std::invalid_argument("two_peakon_invariant: p must be positive");
    const double one_minus = -std::expm1(-2.0 * q);  // 1 - e^{-2q}, accurately
    return p * p * zpow(one_minus, -k);
}

double exact_single_peakon(double c, int k, double q0, double t, double x) {
    if (!(c > 0.0))
        throw std::invalid_argument("exact_single_peakon: c must be positive");
    if (k == 0)
        throw std::invalid_argument("exact_single_peakon: k must be nonzero");
    return std::pow(c, 1.0 / k) * std::exp(-std::abs(x - c * t - q0));
}

std::array<double, 4> neg_k_two_peakon_rhs(double p1, double p2, double q1,
                                           double q2) {
    if (std::abs(p1) < 1e-10 || std::abs(p2) < 1e-10)
        throw singularity_error("neg_k_two_peakon_rhs: amplitude below 1e-10",
                                0.0, std::abs(p1) < 1e-10 ? 0 : 1);
    const double interaction = 2.0 * p1 * p2 * std::exp(-std::abs(q1 - q2));
    const double H = p1 * p1 + interaction + p2 * p2;
    const double bracket = interaction / (2.0 * p1 * p2);
    if (!(bracket >= -1e-10 && bracket <= 1.0 + 1e-10))
        throw std::invalid_argument(
            "neg_k_two_peakon_rhs: interaction bracket outside [0, 1]");
    const double a1 = (H + p1 * p1 - p2 * p2) / (2.0 * p1);
    const double a2 = (H - p1 * p1 + p2 * p2) / (2.0 * p2);
    if (std::abs(a1) < 1e-10 || std::abs(a2) < 1e-10)
        throw singularity_error("neg_k_two_peakon_rhs: u(q_i) below 1e-10",
                                0.0, std::abs(a1) < 1e-10 ? 0 : 1);
    const double s = sgn(q1 - q2);
    const double num = H - p1 * p1 - p2 * p2;
    return {s * num / (2.0 * a1 * a1), -s * num / (2.0 * a2 * a2), 1.0 / a1,
            1.0 / a2};
}

std::string to_csv(const PeakonTrajectory& traj) {
    if (traj.states.empty() || traj.times.size() != traj.states.size())
        throw std::invalid_argument("to_csv: empty or malformed pulse trajectory");
    const std::size_t n = traj.states[0].p.size();
    std::string out = "t";
    char buf[32];
    for (std::size_t j = 0; j < n; ++j) {
        std::snprintf(buf, sizeof buf, ",p_%zu", j + 1);
        out += buf;
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::snprintf(buf, sizeof buf, ",q_%zu", j + 1);
        out += buf;
    }
    out += '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.times[i]);
        out += buf;
        for (double v : traj.states[i].p) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            out += buf;
        }
        for (double v : traj.states[i].q) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace g0hs

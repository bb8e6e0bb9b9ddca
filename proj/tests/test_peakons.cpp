#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "g0hs/grid.hpp"
#include "g0hs/helmholtz.hpp"
#include "g0hs/peakons.hpp"

using namespace g0hs;

namespace {

// Interaction energy of a two-pulse state, p1^2 + 2 p1 p2 e^{-|q1-q2|} + p2^2.
double pair_energy(const PeakonEnsemble& e) {
    return e.p[0] * e.p[0] +
           2.0 * e.p[0] * e.p[1] * std::exp(-std::abs(e.q[0] - e.q[1])) +
           e.p[1] * e.p[1];
}

}  // namespace

TEST_SUITE_BEGIN("peakons");

TEST_CASE("peakon_field reproduces the pulse ansatz bitwise") {
    Grid g{-10.0, 20.0 / 64, 64, Boundary::decaying};

    Field one = peakon_field({1, {1.0}, {0.0}}, g);
    for (int i = 0; i < g.n; ++i)
        CHECK(one[i] == std::exp(-std::abs(g.x(i))));

    // Opposite amplitudes at the same position cancel exactly.
    Field zero = peakon_field({1, {1.0, -1.0}, {0.0, 0.0}}, g);
    for (int i = 0; i < g.n; ++i) CHECK(zero[i] == 0.0);

    Field pair = peakon_field({1, {1.0, -1.0}, {-1.0, 0.0}}, g);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        CHECK(pair[i] == std::exp(-std::abs(x + 1.0)) - std::exp(-std::abs(x)));
    }
}

TEST_CASE("ensemble validation rejects malformed states") {
    Grid g{-10.0, 20.0 / 64, 64, Boundary::decaying};
    CHECK_THROWS_AS(peakon_field({0, {1.0}, {0.0}}, g), std::invalid_argument);
    CHECK_THROWS_AS(peakon_field({1, {}, {}}, g), std::invalid_argument);
    CHECK_THROWS_AS(peakon_field({1, {1.0, 2.0}, {0.0}}, g), std::invalid_argument);
    CHECK_THROWS_AS(peakon_field({1, {1.0}, {NAN}}, g), std::invalid_argument);
    CHECK_THROWS_AS(peakon_rhs({2, {INFINITY}, {0.0}}), std::invalid_argument);
}

TEST_CASE("single pulse is an exact equilibrium of the amplitude equation") {
    // A lone pulse does not advect itself (sgn(0) = 0), so p' = 0 exactly
    // and q' = p^k = c for the amplitude p = c^{1/k}.
    const double c = 2.0;
    for (int k : {1, 2, 3, -1}) {
        const PeakonDerivs d = peakon_rhs({k, {std::pow(c, 1.0 / k)}, {0.4}});
        CHECK(d.dp[0] == 0.0);
        CHECK(d.dq[0] == doctest::Approx(c).epsilon(1e-12));
    }
}

TEST_CASE("antisymmetric pair derivatives match the closed form") {
    const double a = 1.3, b = 0.7;
    const double E = std::exp(-2.0 * b);
    for (int k : {1, 3}) {
        const PeakonDerivs d = peakon_rhs({k, {a, -a}, {b, -b}});
        // u(q_1) = a (1 - e^{-2b}) and u_x(q_1) = a e^{-2b}, so
        // p_1' = k a^{k+1} (1-E)^{k-1} E and q_1' = a^k (1-E)^k.
        const double dp1 = k * std::pow(a, k + 1) * std::pow(1.0 - E, k - 1) * E;
        const double dq1 = std::pow(a * (1.0 - E), k);
        CHECK(d.dp[0] == doctest::Approx(dp1).epsilon(1e-13));
        CHECK(d.dq[0] == doctest::Approx(dq1).epsilon(1e-13));
        // Odd powers preserve the mirror symmetry to the last bit.
        CHECK(d.dp[1] == -d.dp[0]);
        CHECK(d.dq[1] == -d.dq[0]);
    }
}

TEST_CASE("even k breaks the antisymmetry of the mirrored pair") {
    // With k = 2 both pulses see the same squared velocity, so the pair
    // translates instead of expanding.
    const double a = 1.3, b = 0.7;
    const double E = std::exp(-2.0 * b);
    const PeakonDerivs d = peakon_rhs({2, {a, -a}, {b, -b}});
    CHECK(d.dq[1] == d.dq[0]);
    CHECK(d.dq[0] > 0.0);
    CHECK(d.dp[1] == d.dp[0]);
    CHECK(d.dp[0] ==
          doctest::Approx(2.0 * a * a * a * (1.0 - E) * E).epsilon(1e-13));
}

TEST_CASE("negative k rejects velocities at the singular threshold") {
    // Near-cancelling pulses at nearly equal positions drive u(q_0) to ~1e-12.
    try {
        peakon_rhs({-1, {1.0, -1.0}, {0.0, 1e-12}});
        FAIL("expected singularity_error");
    } catch (const singularity_error& ex) {
        CHECK(ex.index() == 0);
        CHECK(std::string(ex.what()).find("q_0") != std::string::npos);
    }
    CHECK_THROWS_AS(peakon_rhs({-2, {1.0, -1.0}, {0.0, 1e-12}}),
                    singularity_error);
}

TEST_CASE("integration records literal multiples of dt and lands on t_end") {
    const PeakonEnsemble e{1, {1.0}, {0.0}};
    PeakonTrajectory tr = integrate_peakons(e, 1.0, 0.3);
    REQUIRE(tr.times.size() == 5);
    CHECK(tr.times[1] == 0.3);
    CHECK(tr.times[2] == 0.6);
    CHECK(tr.times[3] == 3 * 0.3);
    CHECK(tr.times.back() == 1.0);

    // A final multiple within round-off of t_end is merged, not duplicated.
    tr = integrate_peakons(e, 0.9, 0.3);
    REQUIRE(tr.times.size() == 4);
    CHECK(tr.times.back() == 0.9);
}

TEST_CASE("integration validates its arguments") {
    const PeakonEnsemble e{1, {1.0}, {0.0}};
    CHECK_THROWS_AS(integrate_peakons(e, 0.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_peakons(e, -1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_peakons(e, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_peakons(e, 1.0, -1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_peakons(e, 1.0, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(integrate_peakons({0, {1.0}, {0.0}}, 1.0, 1e-3),
                    std::invalid_argument);
}

TEST_CASE("single pulse travels at its exact speed for every power") {
    // p = 1 gives unit speed for all k; RK4 increments of a constant
    // velocity telescope exactly, so the drift is at round-off.
    for (int k : {1, 2, 3, -1}) {
        PeakonTrajectory tr = integrate_peakons({k, {1.0}, {0.0}}, 10.0, 1e-3);
        REQUIRE(tr.times.size() == 10001);
        double qe = 0.0, pe = 0.0;
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            qe = std::max(qe, std::abs(tr.states[i].q[0] - tr.times[i]));
            pe = std::max(pe, std::abs(tr.states[i].p[0] - 1.0));
        }
        INFO("k = " << k << ": max|q - t| = " << qe << ", max|p - 1| = " << pe);
        CHECK(qe <= 1e-9);
        CHECK(pe <= 1e-12);

        // The integrated endpoint agrees with the traveling-wave formula.
        Grid g{-10.0, 40.0 / 1024, 1024, Boundary::decaying};
        Field u = peakon_field(tr.states.back(), g);
        double fe = 0.0;
        for (int i = 0; i < g.n; ++i)
            fe = std::max(fe,
                          std::abs(u[i] - exact_single_peakon(1.0, k, 0.0, 10.0,
                                                              g.x(i))));
        CHECK(fe <= 1e-12);
    }
}

TEST_CASE("single pulse with non-unit speed stays on the ray q = c t") {
    PeakonTrajectory tr =
        integrate_peakons({2, {std::sqrt(2.0)}, {-1.0}}, 10.0, 1e-3);
    double qe = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        qe = std::max(qe, std::abs(tr.states[i].q[0] - (2.0 * tr.times[i] - 1.0)));
    INFO("max|q - (2t - 1)| = " << qe);
    CHECK(qe <= 1e-12);
}

TEST_CASE("expanding pair conserves its first integral") {
    // Pulse/anti-pulse pair p = (p, -p) at q = (q, -q): J = p^2 (1-e^{-2q})^{-k}
    // is constant along the flow for odd k.
    const struct {
        int k;
        double p3, q3;
    } expected[] = {{1, 1.075272, 4.115337}, {3, 1.243726, 6.061884}};
    for (const auto& ex : expected) {
        PeakonTrajectory tr =
            integrate_peakons({ex.k, {1.0, -1.0}, {1.0, -1.0}}, 3.0, 1e-3);
        const double j0 = two_peakon_invariant(1.0, 1.0, ex.k);
        double jd = 0.0;
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            const PeakonEnsemble& s = tr.states[i];
            jd = std::max(jd, std::abs(two_peakon_invariant(s.p[0], s.q[0], ex.k) -
                                       j0));
            // The mirror symmetry survives in floating point bit for bit.
            CHECK(s.p[1] == -s.p[0]);
            CHECK(s.q[1] == -s.q[0]);
            if (i > 0) {
                CHECK(s.p[0] > tr.states[i - 1].p[0]);
                CHECK(s.q[0] > tr.states[i - 1].q[0]);
            }
        }
        INFO("k = " << ex.k << ": |dJ|/J0 = " << jd / j0);
        CHECK(jd / j0 <= 1e-12);
        CHECK(tr.states.back().p[0] == doctest::Approx(ex.p3).epsilon(5e-6));
        CHECK(tr.states.back().q[0] == doctest::Approx(ex.q3).epsilon(5e-6));
    }
}

TEST_CASE("same-sign pair conserves total momentum") {
    PeakonTrajectory tr =
        integrate_peakons({1, {1.0, 0.5}, {-5.0, 5.0}}, 3.0, 1e-3);
    double d = 0.0;
    for (const auto& s : tr.states) {
        d = std::max(d, std::abs(2.0 * (s.p[0] + s.p[1]) - 3.0));
        CHECK(s.q[1] > s.q[0]);
    }
    INFO("max|2 sum(p) - 3| = " << d);
    CHECK(d <= 1e-12);
}

TEST_CASE("overtaking pulses halt with a collision carrying the prefix") {
    // The rear pulse outruns the front one; the gap decays through the
    // 1e-6 threshold at t = 2.589 for this datum.
    const PeakonEnsemble e{1, {1.5, 0.5}, {0.0, 1e-4}};
    try {
        integrate_peakons(e, 10.0, 1e-3);
        FAIL("expected peakon_collision");
    } catch (const peakon_collision& c) {
        CHECK(c.time() == doctest::Approx(2.589).epsilon(1e-12));
        REQUIRE(c.partial().times.size() == 2589);
        REQUIRE(c.partial().states.size() == 2589);
        CHECK(c.partial().times.back() == doctest::Approx(2.588).epsilon(1e-12));
        const PeakonEnsemble& last = c.partial().states.back();
        const double gap = std::abs(last.q[1] - last.q[0]);
        INFO("last recorded gap = " << gap);
        CHECK(gap >= 1e-6);
        CHECK(gap <= 2e-6);
        double d = 0.0;
        for (const auto& s : c.partial().states)
            d = std::max(d, std::abs(s.p[0] + s.p[1] - 2.0));
        INFO("max|sum(p) - 2| over the prefix = " << d);
        CHECK(d <= 1e-10);
    }
    // The halt is also catchable through the event base class.
    CHECK_THROWS_AS(integrate_peakons(e, 10.0, 1e-3), collision_event);
}

TEST_CASE("an initial collision yields an empty prefix") {
    try {
        integrate_peakons({1, {1.0, 1.0}, {0.0, 5e-7}}, 1.0, 1e-3);
        FAIL("expected peakon_collision");
    } catch (const peakon_collision& c) {
        CHECK(c.time() == 0.0);
        CHECK(c.partial().times.empty());
        CHECK(c.partial().states.empty());
    }
}

TEST_CASE("k = -1 pair conserves the interaction energy") {
    PeakonTrajectory tr =
        integrate_peakons({-1, {1.0, 0.5}, {-3.0, 3.0}}, 3.0, 1e-3);
    const double h0 = pair_energy(tr.states[0]);
    CHECK(h0 == doctest::Approx(1.25 + std::exp(-6.0)).epsilon(1e-12));
    double hd = 0.0;
    for (const auto& s : tr.states) {
        hd = std::max(hd, std::abs(pair_energy(s) - h0));
        // (H0 - p1^2 - p2^2) / (2 p1 p2) reconstructs e^{-|q1-q2|} from the
        // conserved energy; it must stay inside [0, 1] up to round-off.
        const double br =
            (h0 - s.p[0] * s.p[0] - s.p[1] * s.p[1]) / (2.0 * s.p[0] * s.p[1]);
        CHECK(br >= -1e-10);
        CHECK(br <= 1.0 + 1e-10);
        CHECK(br > 0.0);
    }
    INFO("|dH|/H0 = " << hd / h0);
    CHECK(hd / h0 <= 1e-12);
}

TEST_CASE("reduced k = -1 derivatives match the general system") {
    const struct {
        double p1, p2, q1, q2;
    } states[] = {{1.0, 0.5, -3.0, 3.0}, {0.8, 1.7, 2.0, -0.4}};
    for (const auto& s : states) {
        const PeakonDerivs d = peakon_rhs({-1, {s.p1, s.p2}, {s.q1, s.q2}});
        const std::array<double, 4> r =
            neg_k_two_peakon_rhs(s.p1, s.p2, s.q1, s.q2);
        CHECK(r[0] == doctest::Approx(d.dp[0]).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(d.dp[1]).epsilon(1e-12));
        CHECK(r[2] == doctest::Approx(d.dq[0]).epsilon(1e-12));
        CHECK(r[3] == doctest::Approx(d.dq[1]).epsilon(1e-12));
    }
}

TEST_CASE("reduced k = -1 derivatives at degenerate and separated states") {
    // Coincident equal pulses: no drift, both move at 1/(2p).
    const std::array<double, 4> co = neg_k_two_peakon_rhs(0.7, 0.7, 1.0, 1.0);
    CHECK(co[0] == 0.0);
    CHECK(co[1] == 0.0);
    CHECK(co[2] == doctest::Approx(1.0 / 1.4).epsilon(1e-14));
    CHECK(co[3] == co[2]);

    // Wide separation: each pulse reduces to a free one with speed 1/p.
    const std::array<double, 4> far = neg_k_two_peakon_rhs(2.0, 3.0, -50.0, 50.0);
    CHECK(std::abs(far[0]) <= 1e-40);
    CHECK(std::abs(far[1]) <= 1e-40);
    CHECK(far[2] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(far[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("reduced k = -1 derivatives reject singular states") {
    try {
        neg_k_two_peakon_rhs(1e-12, 1.0, 0.0, 1.0);
        FAIL("expected singularity_error");
    } catch (const singularity_error& ex) {
        CHECK(ex.index() == 0);
    }
    try {
        neg_k_two_peakon_rhs(1.0, 1e-12, 0.0, 1.0);
        FAIL("expected singularity_error");
    } catch (const singularity_error& ex) {
        CHECK(ex.index() == 1);
    }
    // p = (1, -2) at gap ln 2 makes u(q_1) = 1 - 2 e^{-ln 2} vanish.
    try {
        neg_k_two_peakon_rhs(1.0, -2.0, 0.0, std::log(2.0));
        FAIL("expected singularity_error");
    } catch (const singularity_error& ex) {
        CHECK(ex.index() == 0);
    }
}

TEST_CASE("integration rethrows a singular velocity with the step time") {
    // p = (0.5, -1) at gap ln 2 cancels u(q_0) exactly at t = 0, so the
    // first RK4 stage already trips the threshold.
    try {
        integrate_peakons({-1, {0.5, -1.0}, {0.0, std::log(2.0)}}, 1.0, 1e-3);
        FAIL("expected singularity_error");
    } catch (const singularity_error& ex) {
        CHECK(ex.time() == 0.0);
        CHECK(ex.index() == 0);
    }
}

TEST_CASE("two-pulse invariant evaluates its closed form") {
    // 1 - e^{-2 ln 2} = 3/4, so J = 4 / (3/4)^k for p = 2, q = ln 2.
    CHECK(two_peakon_invariant(2.0, std::log(2.0), 1) ==
          doctest::Approx(16.0 / 3.0).epsilon(1e-14));
    CHECK(two_peakon_invariant(2.0, std::log(2.0), 3) ==
          doctest::Approx(256.0 / 27.0).epsilon(1e-14));
    // Far-separated pulses decouple: J -> p^2.
    CHECK(two_peakon_invariant(1.0, 50.0, 1) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(two_peakon_invariant(1.0, 1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(two_peakon_invariant(1.0, 1.0, -2), std::invalid_argument);
    CHECK_THROWS_AS(two_peakon_invariant(1.0, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(two_peakon_invariant(1.0, -1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(two_peakon_invariant(0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(two_peakon_invariant(-1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("traveling-wave formula evaluates amplitude and phase") {
    CHECK(exact_single_peakon(2.0, 1, 0.0, 0.5, 1.0) == 2.0);
    CHECK(exact_single_peakon(8.0, 3, 0.0, 0.0, 0.0) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(exact_single_peakon(0.5, -1, 0.0, 0.0, 0.0) == 2.0);
    CHECK(exact_single_peakon(2.0, 1, 1.0, 2.0, 6.5) ==
          doctest::Approx(2.0 * std::exp(-1.5)).epsilon(1e-14));

    CHECK_THROWS_AS(exact_single_peakon(0.0, 1, 0.0, 0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(exact_single_peakon(-1.0, 1, 0.0, 0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(exact_single_peakon(1.0, 0, 0.0, 0.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("each pulse carries momentum mass 2p in the discretized field") {
    // m = u - u_xx of a pulse is a spike of mass 2p at its position; a
    // window of half-width 1/2 around each well-separated pulse captures
    // that mass up to discretization error.
    const PeakonEnsemble e{1, {1.0, 0.5}, {-2.0, 6.5}};
    const int n = 8192;
    Grid g{-40.0, 80.0 / (n - 1), n, Boundary::decaying};
    HelmholtzSolver s(g);
    Field m = s.momentum(peakon_field(e, g));
    for (std::size_t pulse = 0; pulse < e.p.size(); ++pulse) {
        Field w(g);
        for (int i = 0; i < n; ++i)
            w[i] = std::abs(g.x(i) - e.q[pulse]) <= 0.5 ? m[i] : 0.0;
        const double mass = quadrature(w);
        INFO("pulse " << pulse << ": windowed mass " << mass << " vs "
                      << 2.0 * e.p[pulse]);
        CHECK(mass == doctest::Approx(2.0 * e.p[pulse]).epsilon(5e-5));
    }
}

TEST_CASE("trajectory serialization is exact and round-trips") {
    PeakonTrajectory tiny;
    tiny.times = {0.0, 0.5};
    tiny.states = {{1, {1.0, -1.0}, {-1.0, 1.0}}, {1, {0.5, -0.5}, {-2.0, 2.0}}};
    CHECK(to_csv(tiny) ==
          "t,p_1,p_2,q_1,q_2\n"
          "0,1,-1,-1,1\n"
          "0.5,0.5,-0.5,-2,2\n");

    CHECK_THROWS_AS(to_csv(PeakonTrajectory{}), std::invalid_argument);
    PeakonTrajectory ragged;
    ragged.times = {0.0, 0.5};
    ragged.states = {{1, {1.0}, {0.0}}};
    CHECK_THROWS_AS(to_csv(ragged), std::invalid_argument);

    // 17 significant digits reproduce every double bit for bit.
    PeakonTrajectory run =
        integrate_peakons({1, {0.75, 0.25}, {-1.0, 2.0}}, 0.005, 1e-3);
    const std::string csv = to_csv(run);
    const char* c = csv.c_str() + csv.find('\n') + 1;
    for (std::size_t i = 0; i < run.times.size(); ++i) {
        const double vals[5] = {run.times[i], run.states[i].p[0],
                                run.states[i].p[1], run.states[i].q[0],
                                run.states[i].q[1]};
        for (double v : vals) {
            char* end = nullptr;
            CHECK(std::strtod(c, &end) == v);
            c = end + 1;  // past the comma or newline
        }
    }
}

TEST_SUITE_END();

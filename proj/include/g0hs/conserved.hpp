#ifndef G0HS_CONSERVED_HPP
#define G0HS_CONSERVED_HPP

#include <string>
#include <vector>

#include "g0hs/evolution.hpp"
#include "g0hs/grid.hpp"
#include "g0hs/helmholtz.hpp"

namespace g0hs {

/// Conserved and controlled functionals evaluated along a trajectory,
/// one entry per snapshot time.
struct ConservationReport {
    std::vector<double> times;
    std::vector<double> h0;             ///< integral of u
    std::vector<double> h1;             ///< (1/2) integral of u^2 + u_x^2
    std::vector<double> i3;             ///< H^3-equivalent energy, see i3()
    std::vector<double> l1_u;           ///< integral of |u|
    std::vector<double> l1_m;           ///< integral of |m|
    std::vector<double> min_m;          ///< min over the grid of m
    std::vector<double> min_u_plus_ux;  ///< min over the grid of u + u_x
    std::vector<double> min_ux;         ///< min over the grid of u_x
    std::vector<double> sup_abs_u;      ///< max over the grid of |u|
};

/// H0[u] = integral of u over the domain.  Conserved in time for k = 1.
double h0(const Field& u);

/// H[u] = (1/2) integral of u^2 + u_x^2: the square of the H^1 norm up
/// to the factor.  Recorded for every run; conservation is a theorem
/// only for the k = -1 peakon reduction, so no drift assertion is made
/// for PDE evolution.
double h1(const Field& u);

/// I[u] = (1/4) integral of u^2 + 3 u_x^2 + 4 u_xx^2 + 2 u_xxx^2.
/// Equivalent to the squared H^3 norm: the coefficient vector (1,3,4,2)/4
/// is bounded between 1/4 and 1 entrywise, so
/// |u|_{H^3}/2 <= sqrt(i3(u)) <= |u|_{H^3} with the same discrete
/// derivatives.  If more than a tenth of the field's energy sits in
/// grid-scale oscillation (measured by the second-difference high-pass
/// (u_{i-1} - 2u_i + u_{i+1})/4, whose response is sin^2 of the half
/// wavenumber and hence is concentrated on the top octave), u_xxx is
/// not resolvable and a warning is printed to stderr; monitoring never
/// aborts a run over resolution.
double i3(const Field& u);

/// L1 norm: integral of |u|.  Conserved for k = 1 with single-signed
/// momentum, for both the profile and its momentum.
double l1(const Field& u);

/// Minimum over the grid of u + dx1(u).  For nonnegative initial
/// momentum the continuum identity (u+u_x)(x) = e^{-x} * integral over
/// s < x of e^{s} m(s) ds keeps this nonnegative; the solver argument
/// pins the grid the check runs on.
double u_plus_ux_min(const HelmholtzSolver& s, const Field& u);

/// Evaluate every functional above, plus min m, min u_x and max|u|,
/// at each snapshot of the trajectory.  min_m and l1_m use the
/// solver-consistent momentum stencil (the one inv_helmholtz inverts
/// exactly), so sign persistence is judged against the same discrete m
/// the evolution preserves.
ConservationReport report(const HelmholtzSolver& s, const Trajectory& traj);

/// True iff i3[t] <= i3[0] * e^{3 kappa t} * (1 + 1e-3) at every
/// recorded time: the energy growth bound that holds whenever the
/// slope stays above -kappa.  Requires kappa >= max(0, -min min_ux)
/// (the empirical slope floor of the run); throws std::invalid_argument
/// otherwise.
bool groenwall_check(const ConservationReport& rep, double kappa);

/// CSV serialization: header
/// `t,h0,h1,i3,l1_u,l1_m,min_m,min_u_plus_ux,min_ux,sup_abs_u`,
/// one row per time, every value with 17 significant digits so parsing
/// the text reproduces the doubles exactly.
std::string to_csv(const ConservationReport& rep);

}  // namespace g0hs

#endif

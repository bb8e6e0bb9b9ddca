#ifndef G0HS_KINKS_HPP
#define G0HS_KINKS_HPP

#include <string>
#include <vector>

#include "g0hs/grid.hpp"

namespace g0hs {

/// N superposed cliff profiles u = sum_j [c_j + b_j sgn(x - p_j)
/// (1 - e^{-|x - p_j|})]: bounded and monotone in x when all b_j have one
/// sign, with a slope kink at each p_j.  Valid for positive integer k
/// (the profile does not decay, so negative powers of u are excluded).
struct KinkEnsemble {
    int k = 1;              ///< positive power of u in the transport speed
    std::vector<double> c;  ///< constant offsets
    std::vector<double> b;  ///< cliff amplitudes
    std::vector<double> p;  ///< cliff positions

    /// Throws std::invalid_argument unless k >= 1, the arrays are equally
    /// sized, nonempty and finite, and every b_j = 0 comes with p_j = 0
    /// (a zero-amplitude cliff has no meaningful position).
    void validate() const;
};

/// ODE state history: one ensemble per recorded time.
struct KinkTrajectory {
    std::vector<double> times;
    std::vector<KinkEnsemble> states;
};

/// Sample the cliff ansatz on a grid (as a formula on the line; the
/// profile is not periodic and never wraps).  sgn(0) = 0, so each term
/// contributes exactly c_j at its own position.
Field kink_field(const KinkEnsemble& e, const Grid& g);

/// Time derivatives of the ensemble.
struct KinkDerivs {
    std::vector<double> dc;
    std::vector<double> db;
    std::vector<double> dp;
};

/// The cliff ODE: offsets and amplitudes are frozen (c_j' = b_j' = 0)
/// and positions advect at the local field speed,
///     p_i' = [sum_j (c_j + b_j sgn(p_i - p_j)(1 - e^{-|p_i - p_j|}))]^k.
/// The sgn(0) = 0 convention kills the self-term, so coincident
/// positions are regular and a single cliff with c = 0 is stationary.
KinkDerivs kink_rhs(const KinkEnsemble& e);

/// Fixed-step RK4 on the cliff ODE, recording every step (times are
/// i*dt, with a final shorter step landing exactly on t_end).  The
/// offsets and amplitudes are checked to be constant after every step;
/// the velocity is bounded by (sum |c_j| + sum |b_j|)^k, so the flow
/// cannot blow up.
KinkTrajectory integrate_kinks(const KinkEnsemble& e0, double t_end,
                               double dt);

/// The expanding mirror pair c = (0, 0), b = (1, 1), p = (p0, -p0) with
/// p0 > 0.  The mirror symmetry requires b_2^k = (-1)^{k+1} b_1^k, which
/// has no real nonzero solution for even k: those throw
/// std::invalid_argument, and their half-gap dynamics lives only in the
/// scalar reduction integrate_symmetric_pair.
KinkEnsemble symmetric_pair(int k, double p0);

/// Scalar reduction of the expanding pair: the half-gap obeys
///     p' = (1 - e^{-2p})^k,   p(0) = p0 > 0,
/// for any positive integer k.  p is strictly increasing and the slope
/// tends to 1 as p grows.
struct SymmetricPairTrajectory {
    std::vector<double> times;
    std::vector<double> p;
};
SymmetricPairTrajectory integrate_symmetric_pair(int k, double p0,
                                                 double t_end, double dt);

/// Closed-form half-gap for k = 1:  p(t) = (1/2) ln[1 + (e^{2 p0} - 1)
/// e^{2t}], evaluated in a form that is stable for large t (where
/// p(t) - t -> (1/2) ln(e^{2 p0} - 1)).  Requires p0 > 0.
double exact_symmetric_kink_position(double p0, double t);

/// The k = 1 expanding-pair solution: two stacked unit cliffs at
/// x = +-p(t) with p(t) = exact_symmetric_kink_position(p0, t),
///     u(t, x) = sgn(x - p)(1 - e^{-|x - p|}) + sgn(x + p)(1 - e^{-|x + p|}),
/// an odd function of x with limits +-2.  Requires p0 > 0.
Field exact_two_kink_field(double p0, double t, const Grid& g);

/// CSV serialization: header `t,c_1..c_N,b_1..b_N,p_1..p_N`, one row per
/// time, 17 significant digits.
std::string to_csv(const KinkTrajectory& traj);

}  // namespace g0hs

#endif

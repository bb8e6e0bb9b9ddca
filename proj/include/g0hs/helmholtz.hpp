#ifndef G0HS_HELMHOLTZ_HPP
#define G0HS_HELMHOLTZ_HPP

#include <vector>

#include "g0hs/grid.hpp"

namespace g0hs {

/// Direct solver for the discrete Helmholtz operator 1 - d^2/dx^2 on
/// one grid, using the three-point Laplacian.  The same stencil is
/// used by `momentum`, so momentum(inv_helmholtz(f)) == f to round-off:
/// the two operations are exact discrete inverses of each other.
///
/// decaying grids get a tridiagonal factorization with zero-Dirichlet
/// exterior; periodic grids get the cyclic variant (Sherman-Morrison
/// on the same factorization).  The solver is immutable after
/// construction and reusable for any number of solves.
class HelmholtzSolver {
public:
    explicit HelmholtzSolver(const Grid& g);

    const Grid& grid() const { return grid_; }

    /// w = (1 - d^2/dx^2)^{-1} f: the discrete counterpart of
    /// convolution with the kernel e^{-|x|}/2.
    Field inv_helmholtz(const Field& f) const;

    /// m = u - u_xx with the solver's own three-point second
    /// difference (NOT the fourth-order dx2), so that this is the
    /// exact inverse of inv_helmholtz.
    Field momentum(const Field& u) const;

    /// The nonlocal flux F of the transport form u_t + u^k u_x = F:
    ///
    ///   F = (k(k-1)/2) * inv(u^{k-2} u_x^3)
    ///       - (3k/2)   * d/dx inv(u^{k-1} u_x^2)
    ///
    /// where inv = (1 - d^2/dx^2)^{-1} and d/dx is dx1.  For k = 1 the
    /// first coefficient is zero and the term is skipped entirely, so
    /// u^{k-2} is never formed with a negative exponent.  Requires
    /// k >= 1.
    Field flux(const Field& u, int k) const;

    /// dx1(flux(u, k)), provided as a named operation.
    Field flux_dx(const Field& u, int k) const;

private:
    std::vector<double> solve(const std::vector<double>& rhs) const;

    Grid grid_;
    // Thomas factorization of the (non-cyclic) tridiagonal system:
    // forward-elimination multipliers and modified diagonal.
    std::vector<double> diag_;   // modified pivots
    std::vector<double> lower_;  // elimination multipliers
    // Sherman-Morrison correction vector for the periodic (cyclic)
    // system: z = T^{-1} w with the rank-one corner correction w.
    std::vector<double> z_;
    double corner_ = 0.0;  // off-diagonal coupling -1/dx^2
    double gamma_ = 0.0;   // Sherman-Morrison gamma
};

/// Integer power by repeated multiplication (k may be negative; x != 0
/// is the caller's responsibility for k < 0).  Deterministic and fast
/// for the small exponents used here.
double ipow(double x, int k);

}  // namespace g0hs

#endif

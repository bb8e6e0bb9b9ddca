#include "g0hs/helmholtz.hpp"

#include <cmath>
#include <stdexcept>

namespace g0hs {

double ipow(double x, int k) {
    if (k < 0) return 1.0 / ipow(x, -k);
    double r = 1.0, b = x;
    for (int e = k; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

HelmholtzSolver::HelmholtzSolver(const Grid& g) : grid_(g) {
    g.validate();
    const int n = g.n;
    const double dx2i = 1.0 / (g.dx * g.dx);
    const double a = 1.0 + 2.0 * dx2i;  // diagonal of 1 - d^2/dx^2
    corner_ = -dx2i;                    // off-diagonal coupling

    // Diagonal of the tridiagonal system to factorize.  For the
    // periodic grid the cyclic corners are removed by a rank-one
    // (Sherman-Morrison) correction with gamma = -a, which modifies
    // the first and last diagonal entries.
    std::vector<double> d0(n, a);
    if (g.boundary == Boundary::periodic) {
        gamma_ = -a;
        d0[0] = a - gamma_;
        d0[n - 1] = a - corner_ * corner_ / gamma_;
    }

    diag_.resize(n);
    lower_.resize(n, 0.0);
    diag_[0] = d0[0];
    for (int i = 1; i < n; ++i) {
        lower_[i] = corner_ / diag_[i - 1];
        diag_[i] = d0[i] - corner_ * lower_[i];
    }

    if (g.boundary == Boundary::periodic) {
        std::vector<double> w(n, 0.0);
        w[0] = gamma_;
        w[n - 1] = corner_;
        z_ = solve(w);
    }
}

std::vector<double> HelmholtzSolver::solve(
    const std::vector<double>& rhs) const {
    const int n = grid_.n;
    std::vector<double> y(n);
    y[0] = rhs[0];
    for (int i = 1; i < n; ++i) y[i] = rhs[i] - lower_[i] * y[i - 1];
    y[n - 1] /= diag_[n - 1];
    for (int i = n - 2; i >= 0; --i)
        y[i] = (y[i] - corner_ * y[i + 1]) / diag_[i];
    return y;
}

Field HelmholtzSolver::inv_helmholtz(const Field& f) const {
    if (!(f.grid == grid_))
        throw std::invalid_argument("inv_helmholtz: field on a different grid");
    Field out(grid_);
    out.values = solve(f.values);
    if (grid_.boundary == Boundary::periodic) {
        // Sherman-Morrison correction for the cyclic corners.
        const int n = grid_.n;
        const double vy =
            out.values[0] + (corner_ / gamma_) * out.values[n - 1];
        const double vz = z_[0] + (corner_ / gamma_) * z_[n - 1];
        const double fact = vy / (1.0 + vz);
        for (int i = 0; i < n; ++i) out.values[i] -= fact * z_[i];
    }
    return out;
}

Field HelmholtzSolver::momentum(const Field& u) const {
    if (!(u.grid == grid_))
        throw std::invalid_argument("momentum: field on a different grid");
    const int n = grid_.n;
    const double dx2i = 1.0 / (grid_.dx * grid_.dx);
    Field m(grid_);
    auto left = [&](int i) {
        if (i > 0) return u[i - 1];
        return grid_.boundary == Boundary::periodic ? u[n - 1] : 0.0;
    };
    auto right = [&](int i) {
        if (i < n - 1) return u[i + 1];
        return grid_.boundary == Boundary::periodic ? u[0] : 0.0;
    };
    for (int i = 0; i < n; ++i)
        m[i] = u[i] - (right(i) - 2.0 * u[i] + left(i)) * dx2i;
    return m;
}

Field HelmholtzSolver::flux(const Field& u, int k) const {
    if (k < 1)
        throw std::invalid_argument("flux: requires k >= 1");
    if (!(u.grid == grid_))
        throw std::invalid_argument("flux: field on a different grid");
    const int n = grid_.n;
    const Field ux = dx1(u);

    // second term: -(3k/2) d/dx inv(u^{k-1} u_x^2)
    Field g2(grid_);
    for (int i = 0; i < n; ++i)
        g2[i] = ipow(u[i], k - 1) * ux[i] * ux[i];
    Field F = dx1(inv_helmholtz(g2));
    const double c2 = -1.5 * k;
    for (int i = 0; i < n; ++i) F[i] *= c2;

    // first term: (k(k-1)/2) inv(u^{k-2} u_x^3); the coefficient is
    // zero for k = 1 and the term is skipped before any
    // exponentiation, so u^{k-2} is never formed with k - 2 < 0.
    if (k >= 2) {
        const double c1 = 0.5 * k * (k - 1);
        Field g1(grid_);
        for (int i = 0; i < n; ++i)
            g1[i] = ipow(u[i], k - 2) * ux[i] * ux[i] * ux[i];
        const Field w1 = inv_helmholtz(g1);
        for (int i = 0; i < n; ++i) F[i] += c1 * w1[i];
    }
    return F;
}

Field HelmholtzSolver::flux_dx(const Field& u, int k) const {
    return dx1(flux(u, k));
}

}  // namespace g0hs

#ifndef G0HS_TEST_UTIL_HPP
#define G0HS_TEST_UTIL_HPP

#include <cmath>
#include <random>
#include <vector>

#include "g0hs/grid.hpp"

// Helpers shared by the test suites: reproducible smooth random fields
// and a reference Gaussian mollifier.

namespace testutil {

/// Smooth random field: a handful of low-wavenumber Fourier modes on a
/// periodic grid, a sum of wide Gaussians on a decaying grid.  Both
/// have max amplitude O(1) and are resolved at any n >= 64.
inline g0hs::Field random_smooth_field(const g0hs::Grid& g,
                                       std::mt19937& rng) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    g0hs::Field f(g);
    if (g.boundary == g0hs::Boundary::periodic) {
        const double L = g.n * g.dx;
        std::uniform_int_distribution<int> mode(1, 5);
        for (int c = 0; c < 4; ++c) {
            const double a = 0.4 * amp(rng);
            const int m = mode(rng);
            const double ph = M_PI * amp(rng);
            for (int i = 0; i < g.n; ++i)
                f[i] += a * std::cos(2.0 * M_PI * m * g.x(i) / L + ph);
        }
    } else {
        const double lo = g.x_min + 0.25 * (g.n - 1) * g.dx;
        const double hi = g.x_min + 0.75 * (g.n - 1) * g.dx;
        std::uniform_real_distribution<double> center(lo, hi);
        std::uniform_real_distribution<double> width(0.5, 2.0);
        for (int c = 0; c < 4; ++c) {
            const double a = 0.4 * amp(rng), x0 = center(rng),
                         w = width(rng);
            for (int i = 0; i < g.n; ++i) {
                const double z = (g.x(i) - x0) / w;
                f[i] += a * std::exp(-0.5 * z * z);
            }
        }
    }
    return f;
}

/// Discrete Gaussian convolution with standard deviation sigma (in x
/// units); kernel truncated at 6 sigma and normalized to unit sum.
inline g0hs::Field mollify_gauss(const g0hs::Field& f, double sigma) {
    const g0hs::Grid& g = f.grid;
    const int r = std::max(1, static_cast<int>(std::ceil(6.0 * sigma / g.dx)));
    std::vector<double> w(2 * r + 1);
    double s = 0.0;
    for (int j = -r; j <= r; ++j) {
        const double z = j * g.dx / sigma;
        w[j + r] = std::exp(-0.5 * z * z);
        s += w[j + r];
    }
    for (double& v : w) v /= s;
    g0hs::Field out(g);
    for (int i = 0; i < g.n; ++i) {
        double acc = 0.0;
        for (int j = -r; j <= r; ++j) {
            int idx = i + j;
            if (g.boundary == g0hs::Boundary::periodic) {
                idx %= g.n;
                if (idx < 0) idx += g.n;
            } else if (idx < 0 || idx >= g.n) {
                continue;
            }
            acc += w[j + r] * f[idx];
        }
        out[i] = acc;
    }
    return out;
}

}  // namespace testutil

#endif

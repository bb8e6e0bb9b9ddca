#include "g0hs/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace g0hs {

void Grid::validate() const {
    if (!(dx > 0.0)) throw std::invalid_argument("grid: dx must be > 0");
    if (n < 8) throw std::invalid_argument("grid: n must be >= 8");
}

bool Field::finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// Access with the grid's out-of-range policy: wrap (periodic) or zero
// (decaying).
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

}  // namespace

Field dx1(const Field& f) {
    const Grid& g = f.grid;
    g.validate();
    const int n = g.n;
    const double dx = g.dx;
    Field out(g);

    auto central4 = [&](int i) {
        return (at(f, i - 2) - 8.0 * at(f, i - 1) + 8.0 * at(f, i + 1) -
                at(f, i + 2)) /
               (12.0 * dx);
    };

    if (g.boundary == Boundary::periodic) {
        for (int i = 0; i < n; ++i) out[i] = central4(i);
        return out;
    }

    // decaying: reduced-order stencils at the two points nearest each
    // end (the fields this solver evolves are ~0 there, so the lower
    // order does not pollute interior accuracy).
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    out[1] = (f[2] - f[0]) / (2.0 * dx);
    for (int i = 2; i < n - 2; ++i) out[i] = central4(i);
    out[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * dx);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
    return out;
}

Field dx2(const Field& f) {
    const Grid& g = f.grid;
    g.validate();
    const int n = g.n;
    const double dx2i = 1.0 / (g.dx * g.dx);
    Field out(g);

    auto central4 = [&](int i) {
        return (-at(f, i - 2) + 16.0 * at(f, i - 1) - 30.0 * at(f, i) +
                16.0 * at(f, i + 1) - at(f, i + 2)) *
               dx2i / 12.0;
    };

    if (g.boundary == Boundary::periodic) {
        for (int i = 0; i < n; ++i) out[i] = central4(i);
        return out;
    }

    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * dx2i;
    out[1] = (f[0] - 2.0 * f[1] + f[2]) * dx2i;
    for (int i = 2; i < n - 2; ++i) out[i] = central4(i);
    out[n - 2] = (f[n - 3] - 2.0 * f[n - 2] + f[n - 1]) * dx2i;
    out[n - 1] =
        (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * dx2i;
    return out;
}

double quadrature(const Field& f) {
    const Grid& g = f.grid;
    g.validate();
    double s = 0.0;
    for (double v : f.values) s += v;
    if (g.boundary == Boundary::decaying)
        s -= 0.5 * (f[0] + f[g.n - 1]);  // trapezoid end correction
    return s * g.dx;
}

double sample(const Field& f, double x) {
    const Grid& g = f.grid;
    g.validate();
    const int n = g.n;
    double pos = (x - g.x_min) / g.dx;

    if (g.boundary == Boundary::periodic) {
        pos = std::fmod(pos, static_cast<double>(n));
        if (pos < 0.0) pos += n;
    } else if (pos < 0.0 || pos > n - 1) {
        return 0.0;  // outside a decaying domain the field is zero
    }

    int j = static_cast<int>(std::floor(pos));
    if (j > n - 1) j = n - 1;  // guard pos == n after fmod round-off
    double th = pos - j;

    // Cubic Lagrange through nodes j-1, j, j+1, j+2.  At th == 0 the
    // weights are exactly (0, 1, 0, 0), so grid nodes reproduce stored
    // values.
    const double w0 = -th * (th - 1.0) * (th - 2.0) / 6.0;
    const double w1 = (th * th - 1.0) * (th - 2.0) / 2.0;
    const double w2 = -th * (th + 1.0) * (th - 2.0) / 2.0;
    const double w3 = th * (th * th - 1.0) / 6.0;
    return w0 * at(f, j - 1) + w1 * at(f, j) + w2 * at(f, j + 1) +
           w3 * at(f, j + 2);
}

std::string to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "decaying";
}

}  // namespace g0hs

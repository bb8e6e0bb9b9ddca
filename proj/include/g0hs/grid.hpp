#ifndef G0HS_GRID_HPP
#define G0HS_GRID_HPP

#include <string>
#include <vector>

namespace g0hs {

enum class Boundary { periodic, decaying };

/// Uniform 1-D spatial grid.
///
/// periodic: the domain is [x_min, x_min + n*dx) and index arithmetic
/// wraps modulo n.  decaying: values beyond [x_min, x_min + (n-1)*dx]
/// are treated as zero (fields are assumed negligible at the ends).
struct Grid {
    double x_min = 0.0;
    double dx = 1.0;
    int n = 8;
    Boundary boundary = Boundary::periodic;

    double x(int i) const { return x_min + i * dx; }
    double length() const { return n * dx; }
    bool operator==(const Grid& o) const {
        return x_min == o.x_min && dx == o.dx && n == o.n &&
               boundary == o.boundary;
    }

    /// Throws std::invalid_argument unless dx > 0 and n >= 8.
    void validate() const;
};

/// Real-valued samples of a function (u, m, F, ...) on a Grid.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(g.n, 0.0) {}
    Field(const Grid& g, std::vector<double> v)
        : grid(g), values(std::move(v)) {}

    int n() const { return grid.n; }
    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }

    /// True iff every entry is finite.
    bool finite() const;
    double max_abs() const;
};

/// First derivative: fourth-order central stencil in the interior.
/// periodic grids wrap; decaying grids switch to reduced-order
/// (second-order central, then one-sided) stencils at the two points
/// nearest each end.
Field dx1(const Field& f);

/// Second derivative, same boundary policy as dx1; fourth-order
/// central stencil in the interior.
Field dx2(const Field& f);

/// Integral over the domain: rectangle rule for periodic grids (exact
/// for the wrapped topology), trapezoid rule for decaying grids.
double quadrature(const Field& f);

/// Off-grid evaluation by cubic Lagrange interpolation through the
/// four nearest grid nodes.  periodic wraps; decaying uses zero for
/// nodes outside the grid and returns 0 for x outside the domain.
double sample(const Field& f, double x);

std::string to_string(Boundary b);

}  // namespace g0hs

#endif

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace egf {

enum class Boundary {
    Periodic,    ///< grid covers one period [x0, x0 + count*dx)
    Extrapolate, ///< grid covers [x0, x0 + (count-1)*dx], linear continuation outside
};

/// Uniform 1-D grid along an N-curve.
struct Grid {
    double x0 = 0.0;
    double dx = 1.0;
    std::size_t count = 0;
    Boundary boundary = Boundary::Periodic;

    double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
    double length() const { return dx * static_cast<double>(count); }
    /// Build from an interval. Periodic grids exclude the right endpoint.
    static Grid over(double a, double b, std::size_t cells, Boundary bc);
};

/// Sampled scalar function of arclength along an N-curve.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(Grid grid, std::vector<double> values);
    ScalarField(Grid grid, const std::function<double(double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Cubic (4-point Lagrange) interpolation at arbitrary x.
    double sample(double x) const;
    /// Derivative of the interpolant at arbitrary x.
    double sample_derivative(double x) const;

    /// Second-order centered first derivative on the grid.
    ScalarField derivative() const;
    /// Second-order centered second derivative on the grid.
    ScalarField second_derivative() const;

    double min() const;
    double max() const;
    double max_abs() const;
    bool all_finite() const;

    /// max_i |a_i - b_i| on the shared grid.
    static double max_abs_diff(const ScalarField& a, const ScalarField& b);

    ScalarField map(const std::function<double(double)>& f) const;

private:
    // value at integer (possibly out-of-range) index, honoring the boundary rule
    double at_index(long i) const;

    Grid grid_;
    std::vector<double> values_;
};

/// Time-stamped sequence of fields, the common return of the evolution solvers.
struct FieldHistory {
    std::vector<double> times;
    std::vector<ScalarField> fields;

    bool empty() const { return times.empty(); }
    /// Linear-in-time interpolation; clamps outside the stored range.
    ScalarField at_time(double t) const;
    double value_at(double x, double t) const;
};

/// Cumulative integral F(x_i) = int_{x_0}^{x_i} f, composite Simpson refined
/// over `oversample` sub-intervals of the field's interpolant per cell.
ScalarField cumulative_integral(const ScalarField& f, int oversample = 4);

/// Trapezoid quadrature over the whole grid (periodic grids wrap the last cell).
double integrate(const ScalarField& f);

} // namespace egf

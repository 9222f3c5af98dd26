#include "egf/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "egf/errors.hpp"

namespace egf {

Grid Grid::over(double a, double b, std::size_t cells, Boundary bc) {
    if (cells < 2 || !(b > a))
        throw InvalidInput("Grid::over: need b > a and at least 2 cells");
    Grid g;
    g.x0 = a;
    g.count = cells;
    g.boundary = bc;
    g.dx = (bc == Boundary::Periodic) ? (b - a) / static_cast<double>(cells)
                                      : (b - a) / static_cast<double>(cells - 1);
    return g;
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.count)
        throw InvalidInput("ScalarField: value count does not match grid");
    if (grid_.count < 2 || grid_.dx <= 0.0)
        throw InvalidInput("ScalarField: degenerate grid");
}

ScalarField::ScalarField(Grid grid, const std::function<double(double)>& f)
    : grid_(grid) {
    if (grid_.count < 2 || grid_.dx <= 0.0)
        throw InvalidInput("ScalarField: degenerate grid");
    values_.resize(grid_.count);
    for (std::size_t i = 0; i < grid_.count; ++i) values_[i] = f(grid_.x(i));
}

double ScalarField::at_index(long i) const {
    const long n = static_cast<long>(values_.size());
    if (grid_.boundary == Boundary::Periodic) {
        long k = i % n;
        if (k < 0) k += n;
        return values_[static_cast<std::size_t>(k)];
    }
    if (i < 0)
        return values_[0] + static_cast<double>(i) * (values_[1] - values_[0]);
    if (i >= n)
        return values_[n - 1] +
               static_cast<double>(i - (n - 1)) * (values_[n - 1] - values_[n - 2]);
    return values_[static_cast<std::size_t>(i)];
}

double ScalarField::sample(double x) const {
    const double s = (x - grid_.x0) / grid_.dx;
    const double fl = std::floor(s);
    long i = static_cast<long>(fl);
    double u = s - fl; // in [0,1)
    // snap to nodes so that zero shifts reproduce the data bit-exactly
    if (u < 1e-13) u = 0.0;
    if (u > 1.0 - 1e-13) {
        u = 0.0;
        ++i;
    }
    if (u == 0.0) return at_index(i);
    // 4-point Lagrange on nodes i-1..i+2, exact for cubics
    const double ym1 = at_index(i - 1), y0 = at_index(i), y1 = at_index(i + 1),
                 y2 = at_index(i + 2);
    const double c_m1 = -u * (u - 1.0) * (u - 2.0) / 6.0;
    const double c_0 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    const double c_1 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    const double c_2 = (u + 1.0) * u * (u - 1.0) / 6.0;
    return c_m1 * ym1 + c_0 * y0 + c_1 * y1 + c_2 * y2;
}

double ScalarField::sample_derivative(double x) const {
    const double s = (x - grid_.x0) / grid_.dx;
    const double fl = std::floor(s);
    const long i = static_cast<long>(fl);
    const double u = s - fl;
    const double ym1 = at_index(i - 1), y0 = at_index(i), y1 = at_index(i + 1),
                 y2 = at_index(i + 2);
    const double d_m1 = -(3.0 * u * u - 6.0 * u + 2.0) / 6.0;
    const double d_0 = (3.0 * u * u - 4.0 * u - 1.0) / 2.0;
    const double d_1 = -(3.0 * u * u - 2.0 * u - 2.0) / 2.0;
    const double d_2 = (3.0 * u * u - 1.0) / 6.0;
    return (d_m1 * ym1 + d_0 * y0 + d_1 * y1 + d_2 * y2) / grid_.dx;
}

ScalarField ScalarField::derivative() const {
    std::vector<double> out(values_.size());
    const long n = static_cast<long>(values_.size());
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            (at_index(i + 1) - at_index(i - 1)) / (2.0 * grid_.dx);
    if (grid_.boundary == Boundary::Extrapolate && n >= 3) {
        // second-order one-sided stencils at the ends
        out[0] = (-3.0 * values_[0] + 4.0 * values_[1] - values_[2]) / (2.0 * grid_.dx);
        out[n - 1] = (3.0 * values_[n - 1] - 4.0 * values_[n - 2] + values_[n - 3]) /
                     (2.0 * grid_.dx);
    }
    return ScalarField(grid_, std::move(out));
}

ScalarField ScalarField::second_derivative() const {
    std::vector<double> out(values_.size());
    const long n = static_cast<long>(values_.size());
    const double dx2 = grid_.dx * grid_.dx;
    for (long i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            (at_index(i + 1) - 2.0 * at_index(i) + at_index(i - 1)) / dx2;
    if (grid_.boundary == Boundary::Extrapolate && n >= 4) {
        out[0] = (2.0 * values_[0] - 5.0 * values_[1] + 4.0 * values_[2] - values_[3]) / dx2;
        out[n - 1] = (2.0 * values_[n - 1] - 5.0 * values_[n - 2] + 4.0 * values_[n - 3] -
                      values_[n - 4]) /
                     dx2;
    }
    return ScalarField(grid_, std::move(out));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double ScalarField::max_abs_diff(const ScalarField& a, const ScalarField& b) {
    if (a.size() != b.size())
        throw InvalidInput("max_abs_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

ScalarField ScalarField::map(const std::function<double(double)>& f) const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = f(values_[i]);
    return ScalarField(grid_, std::move(out));
}

ScalarField FieldHistory::at_time(double t) const {
    if (empty()) throw InvalidInput("FieldHistory: empty");
    if (t <= times.front()) return fields.front();
    if (t >= times.back()) return fields.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times.begin());
    const double t0 = times[k - 1], t1 = times[k];
    const double w = (t - t0) / (t1 - t0);
    std::vector<double> out(fields[k - 1].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w) * fields[k - 1][i] + w * fields[k][i];
    return ScalarField(fields[k - 1].grid(), std::move(out));
}

double FieldHistory::value_at(double x, double t) const {
    if (empty()) throw InvalidInput("FieldHistory: empty");
    if (t <= times.front()) return fields.front().sample(x);
    if (t >= times.back()) return fields.back().sample(x);
    auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times.begin());
    const double t0 = times[k - 1], t1 = times[k];
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * fields[k - 1].sample(x) + w * fields[k].sample(x);
}

ScalarField cumulative_integral(const ScalarField& f, int oversample) {
    if (oversample < 1) oversample = 1;
    const Grid& g = f.grid();
    std::vector<double> out(f.size(), 0.0);
    const double h = g.dx / (2.0 * oversample);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < f.size() || (g.boundary == Boundary::Periodic && i < f.size()); ++i) {
        // Simpson over each sub-interval of the cell [x_i, x_{i+1}]
        const double xl = g.x(i);
        double cell = 0.0;
        for (int k = 0; k < oversample; ++k) {
            const double a = xl + 2.0 * h * k;
            cell += (h / 3.0) * (f.sample(a) + 4.0 * f.sample(a + h) + f.sample(a + 2.0 * h));
        }
        acc += cell;
        if (i + 1 < f.size()) out[i + 1] = acc;
        if (i + 1 == f.size()) break;
    }
    return ScalarField(g, std::move(out));
}

double integrate(const ScalarField& f) {
    const Grid& g = f.grid();
    double s = 0.0;
    if (g.boundary == Boundary::Periodic) {
        for (std::size_t i = 0; i < f.size(); ++i) s += f[i];
        return s * g.dx;
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = (i == 0 || i + 1 == f.size()) ? 0.5 : 1.0;
        s += w * f[i];
    }
    return s * g.dx;
}

} // namespace egf

#include "betalike/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "betalike/errors.hpp"

namespace betalike {

namespace {

void check_axis(const std::vector<double>& pts, const char* name) {
    if (pts.size() < 2) throw ValidationError(std::string(name) + ": need at least two points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!std::isfinite(pts[i])) throw ValidationError(std::string(name) + ": non-finite point");
        if (i > 0 && pts[i] <= pts[i - 1])
            throw ValidationError(std::string(name) + ": points must be strictly increasing");
    }
}

void check_sizes(const Grid1D& g) {
    check_axis(g.points, "Grid1D.points");
    if (g.values.size() != g.points.size())
        throw ValidationError("Grid1D: points/values length mismatch");
}

void check_sizes(const Grid2D& g) {
    check_axis(g.axis1, "Grid2D.axis1");
    check_axis(g.axis2, "Grid2D.axis2");
    if (g.values.size() != g.axis1.size() * g.axis2.size())
        throw ValidationError("Grid2D: values size does not match axes");
}

}  // namespace

std::vector<double> trapezoid_weights(const std::vector<double>& points) {
    const std::size_t n = points.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = 0.5 * (points[i + 1] - points[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    return w;
}

double trapezoid(const Grid1D& g) {
    check_sizes(g);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < g.points.size(); ++i)
        sum += 0.5 * (g.values[i] + g.values[i + 1]) * (g.points[i + 1] - g.points[i]);
    return sum;
}

double trapezoid(const Grid2D& g) {
    check_sizes(g);
    const auto w1 = trapezoid_weights(g.axis1);
    const auto w2 = trapezoid_weights(g.axis2);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.axis1.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.axis2.size(); ++j) row += w2[j] * g.at(i, j);
        sum += w1[i] * row;
    }
    return sum;
}

namespace {

double checked_mass(double mass, const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("normalize_grid: non-finite value");
        if (v < 0.0) throw ValidationError("normalize_grid: negative value");
    }
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw ValidationError("normalize_grid: grid has zero or non-finite mass");
    return mass;
}

}  // namespace

Normalized1D normalize_grid(const Grid1D& g) {
    const double mass = checked_mass(trapezoid(g), g.values);
    Normalized1D out{g, mass};
    for (double& v : out.grid.values) v /= mass;
    return out;
}

Normalized2D normalize_grid(const Grid2D& g) {
    const double mass = checked_mass(trapezoid(g), g.values);
    Normalized2D out{g, mass};
    for (double& v : out.grid.values) v /= mass;
    return out;
}

Grid1D marginalize(const Grid2D& g, int axis) {
    check_sizes(g);
    if (axis != 1 && axis != 2) throw ValidationError("marginalize: axis must be 1 or 2");
    for (double v : g.values)
        if (!std::isfinite(v)) throw ValidationError("marginalize: non-finite value");

    Grid1D out;
    if (axis == 2) {
        // integrate over axis2, keep axis1
        const auto w2 = trapezoid_weights(g.axis2);
        out.points = g.axis1;
        out.values.resize(g.axis1.size(), 0.0);
        for (std::size_t i = 0; i < g.axis1.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < g.axis2.size(); ++j) s += w2[j] * g.at(i, j);
            out.values[i] = s;
        }
    } else {
        const auto w1 = trapezoid_weights(g.axis1);
        out.points = g.axis2;
        out.values.resize(g.axis2.size(), 0.0);
        for (std::size_t j = 0; j < g.axis2.size(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < g.axis1.size(); ++i) s += w1[i] * g.at(i, j);
            out.values[j] = s;
        }
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) throw ValidationError("linspace: need at least two points");
    std::vector<double> pts(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) pts[i] = lo + step * static_cast<double>(i);
    pts.back() = hi;
    return pts;
}

}  // namespace betalike

#pragma once

#include <cstddef>
#include <vector>

namespace betalike {

/// Tabulated function of one variable on a strictly increasing abscissa.
struct Grid1D {
    std::vector<double> points;
    std::vector<double> values;
};

/// Tabulated function of two variables, row-major over (axis1, axis2).
struct Grid2D {
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> values;

    double& at(std::size_t i, std::size_t j) { return values[i * axis2.size() + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * axis2.size() + j]; }
};

/// Composite trapezoid weights for an arbitrary strictly increasing abscissa.
std::vector<double> trapezoid_weights(const std::vector<double>& points);

double trapezoid(const Grid1D& g);
double trapezoid(const Grid2D& g);

struct Normalized1D {
    Grid1D grid;
    double constant;  // mass of the input grid; output integrates to one
};
struct Normalized2D {
    Grid2D grid;
    double constant;
};

/// Rescales a nonnegative grid so its trapezoid integral is one.
/// Throws ValidationError on all-zero or non-finite mass.
Normalized1D normalize_grid(const Grid1D& g);
Normalized2D normalize_grid(const Grid2D& g);

/// Integrates out the named axis (1 or 2) by trapezoid rule. The returned
/// grid lives on the remaining axis; total mass is conserved.
Grid1D marginalize(const Grid2D& g, int axis);

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace betalike

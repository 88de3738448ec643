#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "betalike/errors.hpp"

namespace betalike {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    int intervals = 0;
    bool converged = false;
};

namespace quad_detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
// Nodes are interior, so endpoint singularities are never sampled.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gk15(F& f, double a, double b) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    double fv1[7], fv2[7];
    const double fc = f(centr);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::fabs(resk);
    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;  // Gauss nodes sit at the odd Kronrod indices
        const double absc = hlgth * kXgk[jtw];
        const double f1 = f(centr - absc);
        const double f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::fabs(f1) + std::fabs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        const double f1 = f(centr - absc);
        const double f2 = f(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

    const double result = resk * hlgth;
    resabs *= std::fabs(hlgth);
    resasc *= std::fabs(hlgth);
    double abserr = std::fabs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps)) abserr = std::max(eps * 50.0 * resabs, abserr);
    return Panel{a, b, result, abserr};
}

}  // namespace quad_detail

/// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b].
/// Keeps bisecting the worst panel until the summed error estimate drops
/// below max(rel_tol * |integral|, abs_tol).
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-9,
                              double abs_tol = 0.0, int max_intervals = 2000) {
    if (!(a < b)) throw ValidationError("integrate_adaptive: requires a < b");
    auto& fn = f;

    std::priority_queue<quad_detail::Panel> heap;
    quad_detail::Panel first = quad_detail::gk15(fn, a, b);
    double total = first.value;
    double errsum = first.error;
    heap.push(first);
    int count = 1;

    auto tolerance = [&](double t) { return std::max(rel_tol * std::fabs(t), abs_tol); };

    while (errsum > tolerance(total) && count < max_intervals) {
        quad_detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at floating-point resolution; keep its contribution as-is.
            total += 0.0;
            errsum -= worst.error;
            worst.error = 0.0;
            heap.push(worst);
            continue;
        }
        quad_detail::Panel left = quad_detail::gk15(fn, worst.a, mid);
        quad_detail::Panel right = quad_detail::gk15(fn, mid, worst.b);
        total += left.value + right.value - worst.value;
        errsum += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }

    QuadResult out;
    out.value = total;
    out.error = errsum;
    out.intervals = count;
    out.converged = std::isfinite(total) && errsum <= tolerance(total);
    return out;
}

/// Convenience wrapper: returns the value, throws NumericalError (carrying the
/// best estimate and error bound) when the tolerance could not be met.
template <typename F>
double integrate_1d(F&& f, double a, double b, double rel_tol = 1e-9) {
    QuadResult r = integrate_adaptive(std::forward<F>(f), a, b, rel_tol);
    if (!r.converged) {
        if (!std::isfinite(r.value))
            throw NumericalError("integrate_1d: integrand produced non-finite values", r.value,
                                 r.error);
        throw NumericalError("integrate_1d: failed to reach tolerance " + std::to_string(rel_tol) +
                                 " after " + std::to_string(r.intervals) + " intervals",
                             r.value, r.error);
    }
    return r.value;
}

/// Integral over [a, infinity) via the rational map x = a + u/(1-u).
template <typename F>
double integrate_semi_infinite(F&& f, double a, double rel_tol = 1e-9) {
    auto g = [&](double u) {
        const double om = 1.0 - u;
        const double x = a + u / om;
        return f(x) / (om * om);
    };
    return integrate_1d(g, 0.0, 1.0, rel_tol);
}

}  // namespace betalike

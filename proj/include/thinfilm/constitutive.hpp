#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "thinfilm/errors.hpp"
#include "thinfilm/fluid.hpp"

namespace thinfilm {

/// Total shear stress phi(t) = nu (1-r) t + nu r t / (1 + lambda*^2 t^2).
/// Odd, smooth, strictly increasing for r < 8/9.
inline double total_shear_stress(double rate, const FluidParams& p) noexcept {
    const double lt = p.lambda_star * rate;
    return p.nu * (1.0 - p.r) * rate + p.nu * p.r * rate / (1.0 + lt * lt);
}

/// Slope phi'(t) = nu (1-r) + nu r (1 - lambda*^2 t^2) / (1 + lambda*^2 t^2)^2.
/// Bounded by nu (1 - 9r/8) <= phi' <= nu for every t.
inline double total_shear_stress_slope(double rate, const FluidParams& p) noexcept {
    const double u = p.lambda_star * p.lambda_star * rate * rate;
    const double den = 1.0 + u;
    return p.nu * (1.0 - p.r) + p.nu * p.r * (1.0 - u) / (den * den);
}

/// Elastic contribution sigma12 = nu r t / (1 + lambda*^2 t^2).
/// Satisfies phi(t) = nu (1-r) t + elastic_shear_stress(t) identically and
/// |sigma12| <= r nu / (2 lambda*) when lambda* > 0.
inline double elastic_shear_stress(double rate, const FluidParams& p) noexcept {
    const double lt = p.lambda_star * rate;
    return p.nu * p.r * rate / (1.0 + lt * lt);
}

/// d(sigma12)/dt = nu r (1 - lambda*^2 t^2) / (1 + lambda*^2 t^2)^2.
inline double elastic_shear_stress_slope(double rate, const FluidParams& p) noexcept {
    const double u = p.lambda_star * p.lambda_star * rate * rate;
    const double den = 1.0 + u;
    return p.nu * p.r * (1.0 - u) / (den * den);
}

/// Normal stresses (sigma11, sigma22) with
/// sigma22 = -sigma11 = lambda* t sigma12(t); sigma11 <= 0 always since
/// t sigma12(t) >= 0. The trace sigma11 + sigma22 vanishes exactly as
/// computed (one value and its negation).
inline std::pair<double, double> elastic_normal_stresses(double rate, const FluidParams& p) noexcept {
    const double s22 = p.lambda_star * rate * elastic_shear_stress(rate, p);
    return {-s22, s22};
}

/// Inverse constitutive map psi = phi^{-1}, evaluated by a safeguarded
/// Newton iteration with a bisection fallback.
///
/// The mean value theorem gives the enclosure
///     y / nu <= psi(y) <= y / (nu (1 - 9r/8))   (for y > 0, mirrored below 0)
/// because phi' lies between those two slopes, so the root is bracketed
/// before the first iteration. Newton converges quadratically (phi' is
/// bounded away from zero) and each step is clamped into the current
/// bracket. The iteration is pushed to machine-level residuals; downstream
/// quadratures rely on that headroom.
///
/// Throws MonotonicityViolated when r >= 8/9 and NoConvergence when the
/// iteration budget is exhausted (indicates misconfiguration; does not
/// happen for valid parameters).
inline double shear_rate_of_stress(double stress, const FluidParams& p) {
    if (!p.monotone_constitutive())
        throw MonotonicityViolated("shear_rate_of_stress: requires r < 8/9, got r = " + std::to_string(p.r));
    if (stress == 0.0) return 0.0;
    if (p.lambda_star == 0.0 || p.r == 0.0) return stress / p.nu; // exact linear branch

    double lo = stress / p.nu;
    double hi = stress / p.slope_min();
    if (stress < 0.0) std::swap(lo, hi);

    auto residual = [&](double t) { return total_shear_stress(t, p) - stress; };

    // Round-off safety: widen geometrically in the unlikely case the
    // analytic enclosure does not bracket numerically.
    {
        double pad = 1e-12 * (1.0 + std::abs(hi - lo));
        lo -= pad;
        hi += pad;
        int guard = 0;
        while (residual(lo) > 0.0 && guard++ < 64) lo -= (pad *= 2.0);
        guard = 0;
        while (residual(hi) < 0.0 && guard++ < 64) hi += (pad *= 2.0);
    }

    const double eps = std::numeric_limits<double>::epsilon();
    double t = std::clamp(stress / p.nu, lo, hi);
    double f = residual(t);

    for (int it = 0; it < 100; ++it) {
        const double scale = std::max({1.0, std::abs(stress), p.nu * std::abs(t)});
        if (std::abs(f) <= 4.0 * eps * scale) return t;

        if (f > 0.0) hi = t; else lo = t;

        const double fp = total_shear_stress_slope(t, p);
        double t_next = t - f / fp;
        if (!(t_next > lo && t_next < hi)) t_next = 0.5 * (lo + hi); // bisect when Newton leaves the bracket

        if (std::abs(t_next - t) <= 2.0 * eps * std::abs(t)) return t_next;
        t = t_next;
        f = residual(t);
    }

    if (std::abs(f) <= 1e-12 * std::max(1.0, std::abs(stress))) return t; // contract tolerance
    throw NoConvergence("shear_rate_of_stress: no convergence after 100 iterations");
}

/// Slope of the inverse map at the stress value phi(rate):
/// psi'(phi(rate)) = 1 / phi'(rate).
inline double inverse_slope_at_rate(double rate, const FluidParams& p) noexcept {
    return 1.0 / total_shear_stress_slope(rate, p);
}

} // namespace thinfilm

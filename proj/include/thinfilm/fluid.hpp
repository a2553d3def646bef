#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace thinfilm {

/// Rheological and kinematic constants of the film problem.
///
/// The shear-rate/shear-stress law used throughout is
///     phi(t) = nu (1-r) t + nu r t / (1 + lambda_star^2 t^2),
/// i.e. a Newtonian part of weight (1-r) plus an elastic part of weight r
/// with rescaled relaxation time lambda_star. Two regime thresholds matter:
///   * r < 8/9 : phi is strictly increasing, so its inverse exists globally;
///   * r < 2/9 : the pressure-gradient mobility keeps one sign, which the
///               Reynolds-type solvers require.
struct FluidParams {
    double nu = 1.0;          ///< dynamic viscosity, > 0
    double r = 0.0;           ///< elastic fraction, in [0, 1)
    double lambda_star = 0.0; ///< rescaled relaxation time, >= 0
    double s = 0.0;           ///< lower-wall sliding speed (signed)
    double rho = 1.0;         ///< density; bookkeeping only, unused by the limit solve

    /// Throws std::invalid_argument when a basic data invariant fails.
    void validate() const {
        if (!(std::isfinite(nu) && nu > 0.0))
            throw std::invalid_argument("FluidParams: nu must be finite and > 0, got " + std::to_string(nu));
        if (!(std::isfinite(r) && r >= 0.0 && r < 1.0))
            throw std::invalid_argument("FluidParams: r must lie in [0, 1), got " + std::to_string(r));
        if (!(std::isfinite(lambda_star) && lambda_star >= 0.0))
            throw std::invalid_argument("FluidParams: lambda_star must be >= 0, got " + std::to_string(lambda_star));
        if (!std::isfinite(s))
            throw std::invalid_argument("FluidParams: s must be finite");
        if (!(std::isfinite(rho) && rho > 0.0))
            throw std::invalid_argument("FluidParams: rho must be finite and > 0");
    }

    /// True when the constitutive law is globally invertible (r < 8/9).
    bool monotone_constitutive() const noexcept { return r < 8.0 / 9.0; }

    /// True when the Reynolds-type solvers are admissible (r < 2/9).
    bool reynolds_admissible() const noexcept { return r < 2.0 / 9.0; }

    /// Infimum of the stress-law slope phi': nu (1 - 9r/8).
    double slope_min() const noexcept { return nu * (1.0 - 9.0 * r / 8.0); }

    /// Supremum of the stress-law slope phi': nu (attained at zero shear).
    double slope_max() const noexcept { return nu; }

    /// m = 1/nu, the infimum of the inverse-law slope psi'.
    double psi_slope_min() const noexcept { return 1.0 / nu; }

    /// M = 1/(nu (1 - 9r/8)), the supremum of the inverse-law slope psi'.
    double psi_slope_max() const noexcept { return 1.0 / slope_min(); }

    /// Smallness threshold chi = (nu/6) sqrt(r (1-r)) used by the
    /// convergence-regime checks.
    double chi() const noexcept { return nu / 6.0 * std::sqrt(r * (1.0 - r)); }
};

} // namespace thinfilm

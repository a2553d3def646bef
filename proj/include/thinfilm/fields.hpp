#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "thinfilm/constitutive.hpp"
#include "thinfilm/errors.hpp"
#include "thinfilm/fd_weights.hpp"
#include "thinfilm/fluid.hpp"
#include "thinfilm/gap_profile.hpp"
#include "thinfilm/quadrature.hpp"
#include "thinfilm/reynolds.hpp"
#include "thinfilm/wall_closure.hpp"

namespace thinfilm {

/// Velocity and stress fields of the limit solution on a tensor grid:
/// uniform stations in x, cosine-clustered heights z_j = h (1 - cos(pi j/M))/2
/// per station (dense near both walls, where the shear peaks). All arrays
/// are indexed [station][row]. kappa/kprime store the wall-stress closure
/// per station. epsilon is 1 until rescale_to_epsilon is applied.
struct LimitFields {
    std::vector<double> x;
    std::vector<std::vector<double>> z;
    std::vector<std::vector<double>> u1, u2, s11, s12, s22;
    std::vector<std::vector<double>> dzu1, dzzu1, dxu1;
    std::vector<double> kappa, kprime;
    PressureSolution pressure;
    double epsilon = 1.0;

    std::size_t stations() const noexcept { return x.size(); }
    std::size_t rows() const noexcept { return z.empty() ? 0 : z.front().size(); }
};

namespace detail {

inline void require_in_gap(double z, double h, const char* where) {
    const double slack = 1e-12 * std::max(1.0, h);
    if (!(z >= -slack && z <= h + slack))
        throw OutOfGap(std::string(where) + ": z = " + std::to_string(z) +
                       " outside [0, " + std::to_string(h) + "]");
}

/// u1(z) = s + int_0^z psi(q t + kappa) dt for a known wall stress; defined
/// for any z (the stress profile extends smoothly past the wall), which the
/// finite-difference residual probes rely on.
inline double u1_formula(double z, const GapConditions& gc, double kappa, const FluidParams& p) {
    const double tol = 1e-13 * closure_scale(gc, kappa, p);
    auto integrand = [&](double t) { return shear_rate_of_stress(gc.q * t + kappa, p); };
    return gc.s + integrate_adaptive_scalar(integrand, 0.0, z, tol);
}

} // namespace detail

/// u1(x, z) = s + int_0^z psi(q t + kappa) dt with the wall stress solved
/// from the no-slip closure; equal to s at z = 0 and (to closure tolerance)
/// zero at z = h.
inline double streamwise_velocity(double z, const GapConditions& gc, const FluidParams& p) {
    detail::require_in_gap(z, gc.h, "streamwise_velocity");
    return detail::u1_formula(z, gc, solve_wall_stress(gc, p), p);
}

/// (du1/dz, d2u1/dz2) = (psi(q z + kappa), q psi'(q z + kappa)).
inline std::pair<double, double> shear_profile(double z, const GapConditions& gc, const FluidParams& p) {
    detail::require_in_gap(z, gc.h, "shear_profile");
    const double kappa = solve_wall_stress(gc, p);
    const double rate = shear_rate_of_stress(gc.q * z + kappa, p);
    return {rate, gc.q * inverse_slope_at_rate(rate, p)};
}

/// (sigma11, sigma12, sigma22) at height z, from the algebraic closures on
/// the local shear rate.
inline std::array<double, 3> stress_at(double z, const GapConditions& gc, const FluidParams& p) {
    detail::require_in_gap(z, gc.h, "stress_at");
    const double kappa = solve_wall_stress(gc, p);
    const double rate = shear_rate_of_stress(gc.q * z + kappa, p);
    const auto [n11, n22] = elastic_normal_stresses(rate, p);
    return {n11, elastic_shear_stress(rate, p), n22};
}

/// d u1 / dx = int_0^z psi'(q t + kappa) (q' t + kappa') dt with
/// kappa' = dK/dh h' + dK/dq q' (chain rule through the closure).
inline double streamwise_velocity_dx(double z, const GapConditions& gc, double dh, double dq,
                                     const FluidParams& p) {
    detail::require_in_gap(z, gc.h, "streamwise_velocity_dx");
    const WallClosure wc = resolve_wall_closure(gc, p);
    const double kprime = wc.dh() * dh + wc.dq() * dq;
    const double tol = 1e-13 * detail::closure_scale(gc, wc.kappa, p);
    auto integrand = [&](double t) {
        const double rate = shear_rate_of_stress(gc.q * t + wc.kappa, p);
        return inverse_slope_at_rate(rate, p) * (dq * t + kprime);
    };
    return integrate_adaptive_scalar(integrand, 0.0, z, tol);
}

/// u2(x, z) = -int_0^z du1/dx dt = -int_0^z (z - t) psi'(q t + kappa)(q' t + kappa') dt;
/// vanishes at both walls (bottom by construction, top because the flux is
/// independent of x).
inline double cross_velocity(double z, const GapConditions& gc, double dh, double dq,
                             const FluidParams& p) {
    detail::require_in_gap(z, gc.h, "cross_velocity");
    const WallClosure wc = resolve_wall_closure(gc, p);
    const double kprime = wc.dh() * dh + wc.dq() * dq;
    const double tol = 1e-13 * detail::closure_scale(gc, wc.kappa, p) * std::max(1.0, z);
    auto integrand = [&](double t) {
        const double rate = shear_rate_of_stress(gc.q * t + wc.kappa, p);
        return (z - t) * inverse_slope_at_rate(rate, p) * (dq * t + kprime);
    };
    return -integrate_adaptive_scalar(integrand, 0.0, z, tol);
}

/// Assemble the full field set from a pressure solution. Each station does
/// one wall-stress solve and a single cumulative walk up the column:
/// 16-point panels between consecutive rows feed u1, du1/dx and u2 at once,
/// so the per-station cost is O(M) inverse-map evaluations.
inline LimitFields assemble_fields(const PressureSolution& ps, const GapProfile& gp,
                                   const FluidParams& p, int M) {
    if (M < 8) throw std::invalid_argument("assemble_fields: need M >= 8");
    p.validate();

    const std::size_t cols = ps.x.size();
    LimitFields f;
    f.x = ps.x;
    f.pressure = ps;
    f.z.resize(cols);
    f.u1.resize(cols);
    f.u2.resize(cols);
    f.s11.resize(cols);
    f.s12.resize(cols);
    f.s22.resize(cols);
    f.dzu1.resize(cols);
    f.dzzu1.resize(cols);
    f.dxu1.resize(cols);
    f.kappa.resize(cols);
    f.kprime.resize(cols);

    const std::size_t rows = static_cast<std::size_t>(M) + 1;
    for (std::size_t i = 0; i < cols; ++i) {
        const double h = gp.h(ps.x[i]);
        const double dh = gp.dh(ps.x[i]);
        const GapConditions gc{h, ps.q[i], p.s};
        const WallClosure wc = resolve_wall_closure(gc, p);
        const double kprime = wc.dh() * dh + wc.dq() * ps.dq[i];
        f.kappa[i] = wc.kappa;
        f.kprime[i] = kprime;

        auto& z = f.z[i];
        z.resize(rows);
        for (std::size_t j = 0; j < rows; ++j)
            z[j] = h * (1.0 - std::cos(M_PI * static_cast<double>(j) / M)) / 2.0;
        z.back() = h;

        f.u1[i].resize(rows);
        f.u2[i].resize(rows);
        f.s11[i].resize(rows);
        f.s12[i].resize(rows);
        f.s22[i].resize(rows);
        f.dzu1[i].resize(rows);
        f.dzzu1[i].resize(rows);
        f.dxu1[i].resize(rows);

        double u1 = p.s;   // int of psi from the bottom wall, plus slip speed
        double a = 0.0;    // int_0^z psi' (q' t + kappa') dt  ==  du1/dx
        double b = 0.0;    // int_0^z (z - t) psi' (q' t + kappa') dt  ==  -u2
        for (std::size_t j = 0; j < rows; ++j) {
            if (j > 0) {
                const double z0 = z[j - 1], z1 = z[j];
                auto panel = gl16_panel<3>(
                    [&](double t) {
                        const double rate = shear_rate_of_stress(gc.q * t + wc.kappa, p);
                        const double g = inverse_slope_at_rate(rate, p) * (ps.dq[i] * t + kprime);
                        return std::array<double, 3>{rate, g, (z1 - t) * g};
                    },
                    z0, z1);
                u1 += panel[0];
                b += (z1 - z0) * a + panel[2];
                a += panel[1];
            }
            const double rate = (j + 1 == rows) ? wc.rate_top
                                                : shear_rate_of_stress(gc.q * z[j] + wc.kappa, p);
            f.u1[i][j] = u1;
            f.dxu1[i][j] = a;
            f.u2[i][j] = -b;
            f.dzu1[i][j] = rate;
            f.dzzu1[i][j] = gc.q * inverse_slope_at_rate(rate, p);
            const auto [n11, n22] = elastic_normal_stresses(rate, p);
            f.s11[i][j] = n11;
            f.s22[i][j] = n22;
            f.s12[i][j] = elastic_shear_stress(rate, p);
        }
    }
    return f;
}

/// Max-norm residuals of the limit system evaluated on the stored grid.
struct ResidualReport {
    double momentum = 0.0;   ///< (1-r) nu d2z u1 - dx p + dz sigma12
    double dzp = 0.0;        ///< z-derivative of the pressure (zero by construction)
    double divergence = 0.0; ///< dx u1 + dz u2
    double closure11 = 0.0;  ///< lambda* dzu1 sigma12 + sigma11
    double closure12 = 0.0;  ///< -lambda*/2 dzu1 (sigma11 - sigma22) + sigma12 - r nu dzu1
    double closure22 = 0.0;  ///< -lambda* dzu1 sigma12 + sigma22
};

/// Evaluate the residuals. The algebraic closures are checked pointwise at
/// every node. The momentum residual differentiates the stored u1/sigma12
/// columns with seven-point stencils (rows hugging the walls are excluded:
/// the clustered spacing there makes second differences round-off bound
/// while the algebraic and boundary checks already cover the walls). The
/// divergence residual compares a seven-point x-difference of the velocity
/// formula against the stored analytic du1/dx = -dz u2.
inline ResidualReport system_residuals(const LimitFields& f, const GapProfile& gp, const FluidParams& p) {
    ResidualReport rep;
    const std::size_t cols = f.stations();
    const std::size_t rows = f.rows();

    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = 0; j < rows; ++j) {
            const double t = f.dzu1[i][j];
            const double c11 = p.lambda_star * t * f.s12[i][j] + f.s11[i][j];
            const double c12 = -0.5 * p.lambda_star * t * (f.s11[i][j] - f.s22[i][j]) +
                               f.s12[i][j] - p.r * p.nu * t;
            const double c22 = -p.lambda_star * t * f.s12[i][j] + f.s22[i][j];
            rep.closure11 = std::max(rep.closure11, std::abs(c11));
            rep.closure12 = std::max(rep.closure12, std::abs(c12));
            rep.closure22 = std::max(rep.closure22, std::abs(c22));
        }
    }

    // momentum balance across each column
    for (std::size_t i = 0; i < cols; ++i) {
        const double h = gp.h(f.x[i]);
        const auto& z = f.z[i];
        for (std::size_t j = 0; j < rows; ++j) {
            if (z[j] < 0.02 * h || z[j] > 0.98 * h) continue;
            const auto lo = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
                static_cast<std::ptrdiff_t>(j) - 3, 0, static_cast<std::ptrdiff_t>(rows) - 7));
            std::array<double, 7> zn{};
            for (std::size_t k = 0; k < 7; ++k) zn[k] = z[lo + k];
            const auto w2 = fd_weights(z[j], zn, 2);
            const auto w1 = fd_weights(z[j], zn, 1);
            double d2u1 = 0.0, ds12 = 0.0;
            for (std::size_t k = 0; k < 7; ++k) {
                d2u1 += w2[k] * f.u1[i][lo + k];
                ds12 += w1[k] * f.s12[i][lo + k];
            }
            const double resid = (1.0 - p.r) * p.nu * d2u1 - f.pressure.q[i] + ds12;
            rep.momentum = std::max(rep.momentum, std::abs(resid));
        }
    }

    // divergence: x-difference of the velocity formula against the built-in
    // dz u2 = -du1/dx. The probe stations re-solve the flux constraint at
    // half grid spacing around each interior node, so the seven-point
    // stencil measures the derivative of the underlying solution rather
    // than interpolation of the stored samples. Table gaps are only C^1 at
    // their sample knots; the stencil must not straddle one, so the spacing
    // shrinks near knots and stations essentially on a knot are skipped.
    if (cols >= 5) {
        const double dx = (f.x.back() - f.x.front()) / static_cast<double>(cols - 1);
        const double span = f.x.back() - f.x.front();
        const std::vector<double>* knots =
            (gp.kind() == GapProfile::Kind::Table) ? &gp.table_x() : nullptr;
        for (std::size_t i = 2; i + 2 < cols; ++i) {
            double delta = 0.5 * dx;
            if (knots) {
                double dist = span;
                for (std::size_t k = 1; k + 1 < knots->size(); ++k)
                    dist = std::min(dist, std::abs(f.x[i] - (*knots)[k]));
                if (dist < 1e-3 * span) continue;
                delta = std::min(delta, dist / 4.0);
            }
            std::array<double, 7> xs{}, qs{}, ks{};
            for (std::size_t idx = 0; idx < 7; ++idx) {
                const double xp = f.x[i] + (static_cast<double>(idx) - 3.0) * delta;
                xs[idx] = xp;
                if (idx == 3) {
                    qs[idx] = f.pressure.q[i];
                    ks[idx] = f.kappa[i];
                } else {
                    qs[idx] = solve_node_gradient(gp.h(xp), p, f.pressure.flux, f.pressure.q[i]);
                    ks[idx] = resolve_wall_closure({gp.h(xp), qs[idx], p.s}, p).kappa;
                }
            }
            const auto w = fd_weights(f.x[i], xs, 1);
            for (std::size_t j = 0; j < rows; ++j) {
                const double zj = f.z[i][j];
                double du1dx = 0.0;
                for (std::size_t k = 0; k < 7; ++k)
                    du1dx += w[k] * detail::u1_formula(zj, {gp.h(xs[k]), qs[k], p.s}, ks[k], p);
                rep.divergence = std::max(rep.divergence, std::abs(du1dx - f.dxu1[i][j]));
            }
        }
    }
    return rep;
}

/// Map the limit fields to the physical fields of a film of relative
/// thickness eps in (0, 1]: heights contract to y = eps z, the cross
/// velocity scales by eps, the stresses by 1/eps and the pressure (and its
/// gradient) by 1/eps^2; the streamwise velocity is unchanged. A single
/// application only; eps = 1 is the identity.
inline LimitFields rescale_to_epsilon(const LimitFields& f, double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw InvalidEpsilon("rescale_to_epsilon: eps must lie in (0, 1], got " + std::to_string(eps));
    if (f.epsilon != 1.0)
        throw InvalidEpsilon("rescale_to_epsilon: fields were already rescaled; start from the limit fields");

    LimitFields out = f;
    if (eps == 1.0) return out;

    const double inv = 1.0 / eps;
    const double inv2 = inv * inv;
    auto scale = [](std::vector<std::vector<double>>& arr, double c) {
        for (auto& col : arr)
            for (double& v : col) v *= c;
    };
    scale(out.z, eps);
    scale(out.u2, eps);
    scale(out.s11, inv);
    scale(out.s12, inv);
    scale(out.s22, inv);
    scale(out.dzu1, inv);
    scale(out.dzzu1, inv2);
    for (double& v : out.pressure.p) v *= inv2;
    for (double& v : out.pressure.q) v *= inv2;
    for (double& v : out.pressure.dq) v *= inv2;
    for (double& v : out.kappa) v *= inv;
    for (double& v : out.kprime) v *= inv;
    out.epsilon = eps;
    return out;
}

} // namespace thinfilm

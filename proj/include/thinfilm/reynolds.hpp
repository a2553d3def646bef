#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "thinfilm/errors.hpp"
#include "thinfilm/fd_weights.hpp"
#include "thinfilm/fluid.hpp"
#include "thinfilm/gap_profile.hpp"
#include "thinfilm/ode45.hpp"
#include "thinfilm/wall_closure.hpp"

namespace thinfilm {

enum class SolveMethod { Pointwise, Ode };

/// Pressure gradient q = p' and pressure p sampled on a uniform grid over
/// [0, L], together with the flux the solution carries. p is normalized to
/// h-weighted zero mean. dq stores q' (analytic -V/U on the ODE path,
/// fourth-order differences on the pointwise path).
struct PressureSolution {
    std::vector<double> x, q, p, dq;
    double flux = 0.0;
    double L = 0.0;
    SolveMethod method = SolveMethod::Pointwise;
};

namespace detail {

inline void require_reynolds_regime(const FluidParams& p, const char* where) {
    if (!p.reynolds_admissible())
        throw RheologyOutOfRange(std::string(where) + ": requires r < 2/9, got r = " + std::to_string(p.r));
}

/// Mobility and forcing of the gradient equation U q' = -V at one station,
/// assembled from a solved wall closure.
struct StationOperators {
    WallClosure closure;
    double mobility = 0.0; ///< U(x, q) = d flux / dq, strictly negative
    double forcing = 0.0;  ///< V(x, q) = h' dK/dh int_0^h (h - t) psi'
};

inline StationOperators station_operators(double h, double dh, double q, const FluidParams& p) {
    GapConditions gc{h, q, p.s};
    StationOperators ops{resolve_wall_closure(gc, p), 0.0, 0.0};
    ops.mobility = ops.closure.flux_dq();
    if (!(ops.mobility < 0.0))
        throw InvariantViolation("station_operators: mobility lost strict negativity");
    const GapMoments& m = ops.closure.moments;
    ops.forcing = dh * ops.closure.dh() * (h * m.slope0 - m.slope1);
    return ops;
}

} // namespace detail

/// U(x, q): sensitivity of the gap flux to the pressure gradient,
/// int_0^h -t (t + dK/dq) psi'(q t + K) dt, always strictly negative for
/// r < 2/9. Satisfies h^3 (m/3 - M/4) <= -U <= h^3 (M/3 - m/4) with
/// m = 1/nu, M = 1/(nu (1 - 9r/8)).
inline double flux_mobility(double x, double q, const GapProfile& gp, const FluidParams& p) {
    detail::require_reynolds_regime(p, "flux_mobility");
    return detail::station_operators(gp.h(x), gp.dh(x), q, p).mobility;
}

/// V(x, q) = h'(x) dK/dh int_0^h (h - t) psi'(q t + K) dt; vanishes where
/// the gap is flat.
inline double geometry_forcing(double x, double q, const GapProfile& gp, const FluidParams& p) {
    detail::require_reynolds_regime(p, "geometry_forcing");
    return detail::station_operators(gp.h(x), gp.dh(x), q, p).forcing;
}

/// Pure-shear default flux s h(0) / 2 (the value a constant-gap drag flow
/// carries, so a constant profile solves to q = 0 out of the box).
inline double default_flux(const GapProfile& gp, const FluidParams& p) {
    return p.s * gp.h(0.0) / 2.0;
}

/// Solve gap_flux(h, q, s) = Q for q at one station by safeguarded Newton.
/// The flux is strictly decreasing in q with |d flux / dq| >= h^3 (m/3 - M/4),
/// so the first residual brackets the root; Newton uses the exact
/// derivative (the mobility) and is clamped into the shrinking bracket.
inline double solve_node_gradient(double h, const FluidParams& p, double Q, double hint) {
    detail::require_reynolds_regime(p, "solve_node_gradient");
    if (!(h > 0.0)) throw InvalidGap("solve_node_gradient: gap height must be > 0");

    const double m = p.psi_slope_min(), M = p.psi_slope_max();
    const double mobility_floor = h * h * h * (m / 3.0 - M / 4.0);
    const double flux_scale = std::max({1.0, std::abs(Q), std::abs(p.s) * h});

    double q = hint;
    auto eval = [&](double qq) {
        GapConditions gc{h, qq, p.s};
        WallClosure wc = resolve_wall_closure(gc, p);
        return std::pair<double, double>{wc.flux(gc) - Q, wc.flux_dq()};
    };
    auto [g, U] = eval(q);
    if (std::abs(g) <= 1e-12 * flux_scale) return q;

    // Bracket [lo, hi] with g(lo) >= 0 >= g(hi) (g decreases in q); the
    // current point pins one side, the slope floor reaches the other.
    double lo = q, hi = q;
    {
        const double reach = std::abs(g) / mobility_floor * (1.0 + 1e-9) + 1e-300;
        int guard = 0;
        double step = reach;
        if (g > 0.0) {
            hi = q + reach;
            while (eval(hi).first > 0.0) {
                hi += step;
                step *= 2.0;
                if (++guard > 64)
                    throw FluxUnreachable("solve_node_gradient: no pressure gradient reaches the requested flux");
            }
        } else {
            lo = q - reach;
            while (eval(lo).first < 0.0) {
                lo -= step;
                step *= 2.0;
                if (++guard > 64)
                    throw FluxUnreachable("solve_node_gradient: no pressure gradient reaches the requested flux");
            }
        }
    }

    for (int it = 0; it < 100; ++it) {
        if (std::abs(g) <= 1e-12 * flux_scale) return q;
        if (g > 0.0) lo = q; else hi = q;

        double next = q - g / U;
        if (!(next > std::min(lo, hi) && next < std::max(lo, hi))) next = 0.5 * (lo + hi);
        if (next == q) return q; // bracket exhausted at round-off
        q = next;
        std::tie(g, U) = eval(q);
    }
    if (std::abs(g) <= 1e-8 * std::max(1.0, std::abs(Q))) return q;
    throw NoConvergence("solve_node_gradient: flux iteration did not converge");
}

/// Cumulative integral of uniformly sampled data (node spacing dx), exact
/// for cubics: each sub-interval integrates the cubic through the four
/// nearest samples. Returns the running integral at every node, zero at the
/// first.
inline std::vector<double> cumulative_integral(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * dx * (f[0] + f[1]);
        return out;
    }
    if (n == 3) {
        out[1] = dx / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
        out[2] = out[1] + dx / 12.0 * (-f[0] + 8.0 * f[1] + 5.0 * f[2]);
        return out;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double inc;
        if (i == 0)
            inc = dx / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
        else if (i + 2 == n)
            inc = dx / 24.0 * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
        else
            inc = dx / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
        out[i + 1] = out[i] + inc;
    }
    return out;
}

/// Composite Simpson integral of uniformly sampled data; odd interval
/// counts finish with a 3/8 rule.
inline double simpson_integral(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * dx * (f[0] + f[1]);
    const std::size_t intervals = n - 1;
    double total = 0.0;
    std::size_t even_end = intervals;
    if (intervals % 2 != 0) {
        if (intervals < 3) return 0.5 * dx * (f[0] + f[1]);
        even_end = intervals - 3;
        const std::size_t j = even_end;
        total += 3.0 * dx / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
    }
    for (std::size_t i = 0; i + 2 <= even_end; i += 2)
        total += dx / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    return total;
}

/// Integrate the sampled gradient to a pressure and shift it to h-weighted
/// zero mean (the pressure is independent of z, so the domain mean over the
/// film equals the h-weighted mean over [0, L]).
inline std::vector<double> assemble_pressure(std::span<const double> q, const GapProfile& gp) {
    const std::size_t n = q.size();
    const double dx = gp.length() / static_cast<double>(n - 1);
    std::vector<double> p = cumulative_integral(q, dx);

    std::vector<double> ph(n), hh(n);
    for (std::size_t i = 0; i < n; ++i) {
        hh[i] = gp.h(dx * static_cast<double>(i));
        ph[i] = p[i] * hh[i];
    }
    const double shift = simpson_integral(ph, dx) / simpson_integral(hh, dx);
    for (double& v : p) v -= shift;
    return p;
}

namespace detail {

inline std::vector<double> uniform_grid(double L, int N) {
    std::vector<double> x(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) x[static_cast<std::size_t>(i)] = L * static_cast<double>(i) / N;
    x.back() = L;
    return x;
}

inline void require_grid(int N, const char* where) {
    if (N < 16) throw std::invalid_argument(std::string(where) + ": need N >= 16");
}

} // namespace detail

/// Node-by-node solution of the flux constraint gap_flux(h(x), q(x), s) = Q.
/// The flux of the reconstructed velocity field is independent of x, so
/// the constraint holds pointwise; this path needs no integration in x and
/// is unconditionally stable. q' comes from differentiating the flux
/// constraint itself, U q' = -V, the same operators the gradient equation
/// integrates.
inline PressureSolution solve_reynolds_pointwise(const GapProfile& gp, const FluidParams& p, double Q, int N) {
    detail::require_reynolds_regime(p, "solve_reynolds_pointwise");
    detail::require_grid(N, "solve_reynolds_pointwise");
    p.validate();

    PressureSolution sol;
    sol.L = gp.length();
    sol.flux = Q;
    sol.method = SolveMethod::Pointwise;
    sol.x = detail::uniform_grid(sol.L, N);
    sol.q.resize(sol.x.size());

    const double h0 = gp.h(0.0);
    double hint = 12.0 * p.nu * (p.s * h0 / 2.0 - Q) / (h0 * h0 * h0);
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
        sol.q[i] = solve_node_gradient(gp.h(sol.x[i]), p, Q, hint);
        hint = sol.q[i];
    }

    sol.dq.resize(sol.q.size());
    for (std::size_t i = 0; i < sol.q.size(); ++i) {
        const auto ops = detail::station_operators(gp.h(sol.x[i]), gp.dh(sol.x[i]), sol.q[i], p);
        sol.dq[i] = -ops.forcing / ops.mobility;
    }

    sol.p = assemble_pressure(sol.q, gp);
    return sol;
}

/// Integrate the gradient equation U(x, q) q' = -V(x, q) from x = 0, where
/// q(0) reproduces the requested flux. Dormand-Prince 5(4) with dense
/// output, resampled to the uniform grid; q' is the analytic -V/U at the
/// sampled nodes.
inline PressureSolution solve_reynolds_ode(const GapProfile& gp, const FluidParams& p, double Q, int N,
                                           double rtol = 1e-9, double atol = 1e-12) {
    detail::require_reynolds_regime(p, "solve_reynolds_ode");
    detail::require_grid(N, "solve_reynolds_ode");
    p.validate();

    PressureSolution sol;
    sol.L = gp.length();
    sol.flux = Q;
    sol.method = SolveMethod::Ode;
    sol.x = detail::uniform_grid(sol.L, N);

    const double h0 = gp.h(0.0);
    const double q0 = solve_node_gradient(h0, p, Q,
                                          12.0 * p.nu * (p.s * h0 / 2.0 - Q) / (h0 * h0 * h0));

    auto rhs = [&](double x, double q) {
        const auto ops = detail::station_operators(gp.h(x), gp.dh(x), q, p);
        return -ops.forcing / ops.mobility;
    };
    const Dopri5Solution dense = integrate_dopri5(rhs, 0.0, sol.L, q0, rtol, atol);

    sol.q.resize(sol.x.size());
    sol.dq.resize(sol.x.size());
    sol.q.front() = q0;
    for (std::size_t i = 1; i < sol.x.size(); ++i) sol.q[i] = dense(sol.x[i]);
    for (std::size_t i = 0; i < sol.x.size(); ++i) sol.dq[i] = rhs(sol.x[i], sol.q[i]);

    sol.p = assemble_pressure(sol.q, gp);
    return sol;
}

/// Largest violation of the flux constraint over the solution nodes,
/// |gap_flux(h(x_i), q_i, s) - Q|; the a-posteriori certificate that the
/// reconstructed field carries one x-independent flux.
inline double flux_residual_max(const PressureSolution& sol, const GapProfile& gp, const FluidParams& p) {
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
        const double f = gap_flux({gp.h(sol.x[i]), sol.q[i], p.s}, p);
        worst = std::max(worst, std::abs(f - sol.flux));
    }
    return worst;
}

} // namespace thinfilm

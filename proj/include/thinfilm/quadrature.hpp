#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace thinfilm {

namespace detail {

/// Positive abscissas and weights of the 16-point Gauss-Legendre rule on
/// [-1, 1], computed once by Newton iteration on the Legendre recurrence
/// (no transcription of tables).
struct Gauss16 {
    std::array<double, 8> node{};
    std::array<double, 8> weight{};

    Gauss16() {
        constexpr int n = 16;
        for (int k = 0; k < 8; ++k) {
            double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) {
                    p0 = 1.0; p1 = x;
                    for (int j = 2; j <= n; ++j) {
                        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                        p0 = p1;
                        p1 = p2;
                    }
                    const double d = n * (x * p1 - p0) / (x * x - 1.0);
                    node[k] = x;
                    weight[k] = 2.0 / ((1.0 - x * x) * d * d);
                    break;
                }
            }
        }
    }
};

inline const Gauss16& gauss16() {
    static const Gauss16 rule;
    return rule;
}

} // namespace detail

/// 16-point Gauss-Legendre panel over [a, b]; f returns an array of K
/// integrand components evaluated at one abscissa.
template <std::size_t K, class F>
std::array<double, K> gl16_panel(F&& f, double a, double b) {
    const auto& rule = detail::gauss16();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, K> acc{};
    for (int k = 0; k < 8; ++k) {
        const double dx = half * rule.node[k];
        const auto fp = f(mid + dx);
        const auto fm = f(mid - dx);
        for (std::size_t c = 0; c < K; ++c) acc[c] += rule.weight[k] * (fp[c] + fm[c]);
    }
    for (std::size_t c = 0; c < K; ++c) acc[c] *= half;
    return acc;
}

/// Scalar convenience wrapper.
template <class F>
double gl16(F&& f, double a, double b) {
    auto wrapped = [&](double t) { return std::array<double, 1>{f(t)}; };
    return gl16_panel<1>(wrapped, a, b)[0];
}

/// Adaptive composite Gauss-Legendre integration of a K-component integrand.
///
/// Panels are bisected until the difference between a panel estimate and the
/// sum of its two halves drops below abs_tol distributed proportionally to
/// panel length, then the refined halves are accumulated. max_depth bounds
/// the recursion; panels at the depth limit are accepted as-is (smooth
/// integrands in this project never reach it).
template <std::size_t K, class F>
std::array<double, K> integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 26) {
    std::array<double, K> total{};
    if (a == b) return total;

    struct Panel {
        double a, b;
        std::array<double, K> coarse;
        int depth;
    };
    std::vector<Panel> work;
    work.push_back({a, b, gl16_panel<K>(f, a, b), 0});
    const double span = std::abs(b - a);

    while (!work.empty()) {
        const Panel panel = work.back();
        work.pop_back();
        const double mid = 0.5 * (panel.a + panel.b);
        const auto left = gl16_panel<K>(f, panel.a, mid);
        const auto right = gl16_panel<K>(f, mid, panel.b);

        double diff = 0.0;
        for (std::size_t c = 0; c < K; ++c)
            diff = std::max(diff, std::abs(left[c] + right[c] - panel.coarse[c]));

        const double budget = abs_tol * (std::abs(panel.b - panel.a) / span);
        if (diff <= budget || panel.depth >= max_depth) {
            for (std::size_t c = 0; c < K; ++c) total[c] += left[c] + right[c];
        } else {
            work.push_back({panel.a, mid, left, panel.depth + 1});
            work.push_back({mid, panel.b, right, panel.depth + 1});
        }
    }
    return total;
}

/// Scalar adaptive integration.
template <class F>
double integrate_adaptive_scalar(F&& f, double a, double b, double abs_tol, int max_depth = 26) {
    auto wrapped = [&](double t) { return std::array<double, 1>{f(t)}; };
    return integrate_adaptive<1>(wrapped, a, b, abs_tol, max_depth)[0];
}

/// Clenshaw-Curtis weights for the cosine-clustered nodes
/// z_j = h (1 - cos(pi j / m)) / 2, j = 0..m, integrating over [0, h].
/// Interpolatory, hence exact for polynomials up to degree m and spectrally
/// accurate for smooth integrands.
inline std::vector<double> clenshaw_curtis_weights(int m, double h) {
    std::vector<double> w(static_cast<std::size_t>(m) + 1, 0.0);
    for (int j = 0; j <= m; ++j) {
        const double cj = (j == 0 || j == m) ? 0.5 : 1.0;
        double sum = 0.0;
        for (int k = 0; k <= m; k += 2) {
            double term = 2.0 / (1.0 - static_cast<double>(k) * k);
            if (k == 0 || k == m) term *= 0.5;
            sum += term * std::cos(k * j * M_PI / m);
        }
        w[static_cast<std::size_t>(j)] = (2.0 / m) * cj * sum * (0.5 * h);
    }
    return w;
}

} // namespace thinfilm

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace thinfilm {

/// Finite-difference weights on arbitrarily spaced nodes (Fornberg's
/// recursion). Returns, for each node x[i], the weight of f(x[i]) in the
/// approximation of the m-th derivative of f at x0. Exact for polynomials
/// of degree < x.size().
inline std::vector<double> fd_weights(double x0, std::span<const double> x, int m) {
    const std::size_t n = x.size();
    const std::size_t cols = static_cast<std::size_t>(m) + 1;
    std::vector<double> c(n * cols, 0.0);
    auto C = [&](std::size_t i, std::size_t k) -> double& { return c[i * cols + k]; };

    double c1 = 1.0;
    double c4 = x[0] - x0;
    C(0, 0) = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = static_cast<int>(std::min<std::size_t>(i, static_cast<std::size_t>(m)));
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }

    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = C(i, static_cast<std::size_t>(m));
    return w;
}

} // namespace thinfilm

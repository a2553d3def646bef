#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "thinfilm/errors.hpp"

namespace thinfilm {

/// One accepted Dormand-Prince 5(4) step with the stage derivatives needed
/// for dense output.
struct DenseStep {
    double x0 = 0.0, dx = 0.0;
    double y0 = 0.0, y1 = 0.0;
    double k1 = 0.0, k3 = 0.0, k4 = 0.0, k5 = 0.0, k6 = 0.0, k7 = 0.0;
};

/// Continuous solution of a scalar initial value problem on [x0, x1].
class Dopri5Solution {
public:
    explicit Dopri5Solution(std::vector<DenseStep> steps) : steps_(std::move(steps)) {}

    double x_begin() const noexcept { return steps_.front().x0; }
    double x_end() const noexcept { return steps_.back().x0 + steps_.back().dx; }
    std::size_t step_count() const noexcept { return steps_.size(); }

    /// Fifth-order-accurate interpolation inside any accepted step.
    double operator()(double x) const {
        const DenseStep& st = locate(x);
        const double theta = (x - st.x0) / st.dx;

        const double x1c = 5.0 * (2558722523.0 - 31403016.0 * theta) / 11282082432.0;
        const double x3c = 100.0 * (882725551.0 - 15701508.0 * theta) / 32700410799.0;
        const double x4c = 25.0 * (443332067.0 - 31403016.0 * theta) / 1880347072.0;
        const double x5c = 32805.0 * (23143187.0 - 3489224.0 * theta) / 199316789632.0;
        const double x6c = 55.0 * (29972135.0 - 7076736.0 * theta) / 822651844.0;
        const double x7c = 10.0 * (7414447.0 - 829305.0 * theta) / 29380423.0;

        const double tm1 = theta - 1.0;
        const double th2 = theta * theta;
        const double a = th2 * (3.0 - 2.0 * theta);
        const double b = th2 * tm1;
        const double c = th2 * tm1 * tm1;
        const double d = theta * tm1 * tm1;

        const double b1 = a * (35.0 / 384.0) - c * x1c + d;
        const double b3 = a * (500.0 / 1113.0) + c * x3c;
        const double b4 = a * (125.0 / 192.0) - c * x4c;
        const double b5 = a * (-2187.0 / 6784.0) + c * x5c;
        const double b6 = a * (11.0 / 84.0) - c * x6c;
        const double b7 = b + c * x7c;

        return st.y0 + st.dx * (b1 * st.k1 + b3 * st.k3 + b4 * st.k4 +
                                b5 * st.k5 + b6 * st.k6 + b7 * st.k7);
    }

private:
    const DenseStep& locate(double x) const {
        std::size_t lo = 0, hi = steps_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi + 1) / 2;
            if (steps_[mid].x0 <= x) lo = mid; else hi = mid - 1;
        }
        return steps_[lo];
    }

    std::vector<DenseStep> steps_;
};

/// Adaptive Dormand-Prince 5(4) integration of y' = f(x, y) from x0 to x1
/// (x1 > x0), with error control err = |e| / (atol + rtol max(|y0|,|y1|))
/// and the classic 0.9 err^(-1/5) step update clamped to [0.2, 5].
///
/// Throws StepFailure when the controller stalls (step underflow) or the
/// step budget is exhausted.
template <class F>
Dopri5Solution integrate_dopri5(F&& f, double x0, double x1, double y0, double rtol, double atol,
                                double max_step = std::numeric_limits<double>::infinity()) {
    const double span = x1 - x0;
    if (!(span > 0.0)) throw StepFailure("integrate_dopri5: empty or reversed interval");

    std::vector<DenseStep> steps;
    double x = x0, y = y0;
    double k1 = f(x, y);
    double dx = std::min({span / 64.0, max_step, span});
    const double dx_min = 64.0 * std::numeric_limits<double>::epsilon() * span;

    long budget = 1000000;
    while (x < x1) {
        if (--budget < 0) throw StepFailure("integrate_dopri5: step budget exhausted");
        dx = std::min({dx, x1 - x, max_step});
        if (dx < dx_min) throw StepFailure("integrate_dopri5: step size underflow");

        const double k2 = f(x + dx / 5.0, y + dx * (k1 / 5.0));
        const double k3 = f(x + 3.0 * dx / 10.0, y + dx * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
        const double k4 = f(x + 4.0 * dx / 5.0,
                            y + dx * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
        const double k5 = f(x + 8.0 * dx / 9.0,
                            y + dx * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                                      64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
        const double k6 = f(x + dx,
                            y + dx * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                      46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                      5103.0 / 18656.0 * k5));
        const double y1_trial = y + dx * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                                          125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                                          11.0 / 84.0 * k6);
        const double k7 = f(x + dx, y1_trial);

        // difference between the 5th- and embedded 4th-order solutions
        const double e = dx * ((35.0 / 384.0 - 5179.0 / 57600.0) * k1 +
                               (500.0 / 1113.0 - 7571.0 / 16695.0) * k3 +
                               (125.0 / 192.0 - 393.0 / 640.0) * k4 +
                               (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5 +
                               (11.0 / 84.0 - 187.0 / 2100.0) * k6 +
                               (-1.0 / 40.0) * k7);
        const double tol = atol + rtol * std::max(std::abs(y), std::abs(y1_trial));
        const double err = std::abs(e) / tol;

        if (err <= 1.0) {
            steps.push_back({x, dx, y, y1_trial, k1, k3, k4, k5, k6, k7});
            x += dx;
            y = y1_trial;
            k1 = k7; // first-same-as-last
        }
        const double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        dx *= std::clamp(factor, 0.2, 5.0);
    }
    return Dopri5Solution(std::move(steps));
}

} // namespace thinfilm

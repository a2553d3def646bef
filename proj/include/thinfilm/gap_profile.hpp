#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinfilm {

/// Gap height h(x) over the film domain [0, L], with C^1 evaluation of both
/// h and h'. Analytic presets cover the common bearing geometries; sampled
/// tables are interpolated with shape-preserving (monotone) cubic Hermite
/// polynomials, so a strictly positive table yields a strictly positive gap.
class GapProfile {
public:
    enum class Kind { Constant, Slider, Cosine, Table };

    static GapProfile constant(double h0, double L) {
        GapProfile gp(Kind::Constant, L);
        gp.a_ = h0;
        gp.hmin_ = h0;
        gp.validate_common();
        return gp;
    }

    /// Linear slider from h(0) = h1 to h(L) = h2.
    static GapProfile slider(double h1, double h2, double L) {
        GapProfile gp(Kind::Slider, L);
        gp.a_ = h1;
        gp.b_ = h2;
        gp.hmin_ = std::min(h1, h2);
        gp.validate_common();
        return gp;
    }

    /// h(x) = mean + amplitude cos(2 pi x / L); requires |amplitude| < mean.
    static GapProfile cosine(double mean, double amplitude, double L) {
        GapProfile gp(Kind::Cosine, L);
        gp.a_ = mean;
        gp.b_ = amplitude;
        gp.hmin_ = mean - std::abs(amplitude);
        gp.validate_common();
        return gp;
    }

    /// Sampled profile; x must be strictly increasing with x.front() == 0,
    /// all heights strictly positive. L is x.back().
    static GapProfile table(std::vector<double> x, std::vector<double> h) {
        if (x.size() != h.size() || x.size() < 2)
            throw std::invalid_argument("GapProfile::table: need >= 2 samples with matching sizes");
        if (x.front() != 0.0)
            throw std::invalid_argument("GapProfile::table: first sample must sit at x = 0");
        for (std::size_t i = 1; i < x.size(); ++i)
            if (!(x[i] > x[i - 1]))
                throw std::invalid_argument("GapProfile::table: x samples must increase strictly");
        GapProfile gp(Kind::Table, x.back());
        gp.hmin_ = *std::min_element(h.begin(), h.end());
        gp.tx_ = std::move(x);
        gp.th_ = std::move(h);
        gp.td_ = pchip_slopes(gp.tx_, gp.th_);
        gp.validate_common();
        return gp;
    }

    double h(double x) const {
        switch (kind_) {
            case Kind::Constant: return a_;
            case Kind::Slider: return a_ + (b_ - a_) * x / L_;
            case Kind::Cosine: return a_ + b_ * std::cos(2.0 * M_PI * x / L_);
            case Kind::Table: return table_eval(x, false);
        }
        return a_;
    }

    double dh(double x) const {
        switch (kind_) {
            case Kind::Constant: return 0.0;
            case Kind::Slider: return (b_ - a_) / L_;
            case Kind::Cosine: return -b_ * (2.0 * M_PI / L_) * std::sin(2.0 * M_PI * x / L_);
            case Kind::Table: return table_eval(x, true);
        }
        return 0.0;
    }

    double length() const noexcept { return L_; }
    double min_gap() const noexcept { return hmin_; }
    Kind kind() const noexcept { return kind_; }

    double param_a() const noexcept { return a_; } ///< h0 / h1 / mean
    double param_b() const noexcept { return b_; } ///< h2 / amplitude
    const std::vector<double>& table_x() const noexcept { return tx_; }
    const std::vector<double>& table_h() const noexcept { return th_; }

private:
    GapProfile(Kind kind, double L) : kind_(kind), L_(L) {}

    void validate_common() const {
        if (!(std::isfinite(L_) && L_ > 0.0))
            throw std::invalid_argument("GapProfile: domain length must be > 0");
        if (!(std::isfinite(hmin_) && hmin_ > 0.0))
            throw std::invalid_argument("GapProfile: gap must stay strictly positive, min is " +
                                        std::to_string(hmin_));
    }

    /// Fritsch-Carlson derivative limiting: no overshoot beyond the data.
    static std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
        const std::size_t n = x.size();
        std::vector<double> dx(n - 1), delta(n - 1), d(n);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            dx[i] = x[i + 1] - x[i];
            delta[i] = (y[i + 1] - y[i]) / dx[i];
        }
        if (n == 2) {
            d[0] = d[1] = delta[0];
            return d;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                d[i] = 0.0;
            } else {
                const double w1 = 2.0 * dx[i] + dx[i - 1];
                const double w2 = dx[i] + 2.0 * dx[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d[0] = edge_slope(dx[0], dx[1], delta[0], delta[1]);
        d[n - 1] = edge_slope(dx[n - 2], dx[n - 3], delta[n - 2], delta[n - 3]);
        return d;
    }

    static double edge_slope(double dx0, double dx1, double delta0, double delta1) {
        double d = ((2.0 * dx0 + dx1) * delta0 - dx0 * delta1) / (dx0 + dx1);
        if (d * delta0 <= 0.0)
            d = 0.0;
        else if (delta0 * delta1 < 0.0 && std::abs(d) > 3.0 * std::abs(delta0))
            d = 3.0 * delta0;
        return d;
    }

    double table_eval(double x, bool derivative) const {
        const std::size_t n = tx_.size();
        double xc = std::clamp(x, tx_.front(), tx_.back());
        std::size_t i = static_cast<std::size_t>(
            std::upper_bound(tx_.begin(), tx_.end(), xc) - tx_.begin());
        i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
        const double w = tx_[i + 1] - tx_[i];
        const double t = (xc - tx_[i]) / w;
        const double y0 = th_[i], y1 = th_[i + 1];
        const double m0 = td_[i] * w, m1 = td_[i + 1] * w;
        if (!derivative) {
            const double t2 = t * t, t3 = t2 * t;
            return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 +
                   (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
        }
        const double t2 = t * t;
        return ((6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 +
                (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * m1) / w;
    }

    Kind kind_;
    double L_;
    double hmin_ = 0.0;
    double a_ = 0.0, b_ = 0.0;
    std::vector<double> tx_, th_, td_;
};

} // namespace thinfilm

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tunnelstat {

// Monotone cubic (Fritsch-Carlson) interpolation on a strictly ascending
// grid. Does not overshoot the local data range, so probability-like data
// stays within bounds.
class Pchip {
public:
    Pchip() = default;

    Pchip(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const size_t n = x_.size();
        if (n != y_.size() || n < 2)
            throw std::invalid_argument("Pchip: need >= 2 matching samples");
        for (size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("Pchip: grid not strictly ascending");
        d_.resize(n);
        compute_slopes();
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }

    double operator()(double xq) const {
        if (xq < x_.front() || xq > x_.back())
            throw std::out_of_range("Pchip: query outside grid");
        size_t i = std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin();
        if (i > 0) --i;
        if (i >= x_.size() - 1) i = x_.size() - 2;
        const double h = x_[i + 1] - x_[i];
        const double t = (xq - x_[i]) / h;
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
    }

private:
    void compute_slopes() {
        const size_t n = x_.size();
        std::vector<double> h(n - 1), delta(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            delta[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        if (n == 2) {
            d_[0] = d_[1] = delta[0];
            return;
        }
        for (size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] == 0.0 || delta[i] == 0.0 ||
                (delta[i - 1] > 0) != (delta[i] > 0)) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2 * h[i] + h[i - 1];
                const double w2 = h[i] + 2 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    // One-sided three-point estimate, clamped for shape preservation.
    static double edge_slope(double h0, double h1, double del0, double del1) {
        double d = ((2 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d * del0 <= 0.0) {
            d = 0.0;
        } else if (del0 * del1 <= 0.0 && std::abs(d) > 3 * std::abs(del0)) {
            d = 3 * del0;
        }
        return d;
    }

    std::vector<double> x_, y_, d_;
};

}  // namespace tunnelstat

#pragma once

#include <cmath>
#include <complex>
#include <queue>
#include <stdexcept>
#include <vector>

namespace tunnelstat {

// Adaptive Gauss(7)-Kronrod(15) quadrature on a finite interval.
// Works for double and std::complex<double> integrands; intervals are
// split globally (worst error first) until the summed error estimate
// drops below max(abs_tol, rel_tol*|integral|).

namespace gk {

// Kronrod-15 abscissae (positive half) with Gauss-7 and Kronrod-15 weights.
inline constexpr double kNodes[8] = {
    0.0000000000000000000,
    0.2077849550078984676,
    0.4058451513773971669,
    0.5860872354676911303,
    0.7415311855993944399,
    0.8648644233597690728,
    0.9491079123427585245,
    0.9914553711208126392,
};
inline constexpr double kWeightGauss[8] = {
    0.4179591836734693878, 0.0,
    0.3818300505051189450, 0.0,
    0.2797053914892766679, 0.0,
    0.1294849661688696933, 0.0,
};
inline constexpr double kWeightKronrod[8] = {
    0.2094821410847278280, 0.2044329400752988924,
    0.1903505780647854099, 0.1690047266392679028,
    0.1406532597155259187, 0.1047900103222501838,
    0.0630920926299785533, 0.0229353220105292250,
};

}  // namespace gk

template <typename T>
struct GkEstimate {
    T value;
    double error;
};

template <typename F, typename T = std::invoke_result_t<F, double>>
GkEstimate<T> gk15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    T f0 = f(mid);
    T gauss = gk::kWeightGauss[0] * f0;
    T kron = gk::kWeightKronrod[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * gk::kNodes[i];
        T fi = f(mid + dx) + f(mid - dx);
        gauss += gk::kWeightGauss[i] * fi;
        kron += gk::kWeightKronrod[i] * fi;
    }
    gauss *= half;
    kron *= half;
    return {kron, std::abs(kron - gauss)};
}

struct QuadOptions {
    double abs_tol = 1e-14;
    double rel_tol = 1e-12;
    int max_intervals = 40000;
};

// Globally adaptive integration of f over [a, b].
template <typename F, typename T = std::invoke_result_t<F, double>>
T integrate(const F& f, double a, double b, const QuadOptions& opt = {}) {
    if (!(b > a)) {
        if (a == b) return T{};
        throw std::invalid_argument("integrate: requires b > a");
    }

    struct Piece {
        double a, b, err;
        T val;
        bool operator<(const Piece& o) const { return err < o.err; }
    };

    auto first = gk15(f, a, b);
    std::priority_queue<Piece> pieces;
    pieces.push({a, b, first.error, first.value});
    T total = first.value;
    double total_err = first.error;

    int n = 1;
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
           n < opt.max_intervals) {
        Piece worst = pieces.top();
        pieces.pop();
        const double m = 0.5 * (worst.a + worst.b);
        auto left = gk15(f, worst.a, m);
        auto right = gk15(f, m, worst.b);
        total += left.value + right.value - worst.val;
        total_err += left.error + right.error - worst.err;
        pieces.push({worst.a, m, left.error, left.value});
        pieces.push({m, worst.b, right.error, right.value});
        n += 2;
    }
    return total;
}

}  // namespace tunnelstat

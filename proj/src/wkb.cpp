#include "tunnelstat/wkb.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tunnelstat {

ActionExpansion action_expansion(double V, double d, double p0, double m,
                                 double sigma) {
    if (!(d > 0.0)) throw std::invalid_argument("action_expansion: d > 0 required");
    if (!(p0 > 0.0) || !(m > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("action_expansion: p0, m, sigma must be > 0");
    const double k0sq = 2.0 * m * V - p0 * p0;
    if (!(k0sq > 0.0)) {
        std::ostringstream os;
        os << "action_expansion: above-barrier input (p0^2 = " << p0 * p0
           << " >= 2mV = " << 2.0 * m * V << ")";
        throw std::invalid_argument(os.str());
    }
    const double k0 = std::sqrt(k0sq);
    ActionExpansion e;
    e.S0 = d * k0;
    e.S1 = -p0 * d / k0;
    e.S2 = -2.0 * m * V * d / (k0 * k0 * k0);
    e.p0 = p0;
    e.k0 = k0;
    e.T0 = m * sigma / p0;
    e.sigma = sigma;
    e.d = d;
    return e;
}

double gaussian_decay_coefficient(const ActionExpansion& exp) {
    const double s2k3 = exp.sigma * exp.sigma * exp.k0 * exp.k0 * exp.k0;
    const double den = s2k3 - 2.0 * (exp.p0 * exp.p0 + exp.k0 * exp.k0) * exp.d;
    if (!(den > 0.0)) {
        std::ostringstream os;
        os << "gaussian_decay_coefficient: outside validity domain (denominator = "
           << den << " <= 0)";
        throw std::domain_error(os.str());
    }
    return s2k3 / den;
}

double gaussian_decay_coefficient_from_derivatives(const ActionExpansion& exp) {
    const double den = exp.sigma * exp.sigma + 2.0 * exp.S2;
    if (!(den > 0.0))
        throw std::domain_error(
            "gaussian_decay_coefficient_from_derivatives: sigma^2 + 2 S2 <= 0");
    return exp.sigma * exp.sigma / den;
}

double broad_barrier_ptt(const ActionExpansion& exp, double PT, double T) {
    if (T < 0.0) throw std::invalid_argument("broad_barrier_ptt: T >= 0");
    if (!(PT >= 0.0 && PT <= 1.0))
        throw std::invalid_argument("broad_barrier_ptt: PT outside [0,1]");
    const double coeff = gaussian_decay_coefficient(exp);
    const double u = T / exp.T0;
    return PT * PT * (1.0 - std::exp(-u * u * coeff));
}

NarrowingResult narrowing_check(const GaussianPacket& pkt,
                                const AmplitudeTable& table) {
    validate(pkt);
    if (!table.covers(pkt.p_lo(), pkt.p_hi()))
        throw std::invalid_argument("narrowing_check: table does not cover packet");
    if (!table.has_finite_log())
        throw std::runtime_error(
            "narrowing_check: transmitted mass identically zero (opaque table)");

    const double lo = pkt.p_lo(), hi = pkt.p_hi();
    double peak = -1e308;
    for (int i = 0; i <= 512; ++i) {
        const double p = lo + (hi - lo) * i / 512;
        peak = std::max(peak, table.log_transparency_at(p) +
                                  std::log(momentum_density(pkt, p)));
    }
    auto trans_weight = [&](double p) {
        return std::exp(table.log_transparency_at(p) +
                        std::log(momentum_density(pkt, p)) - peak);
    };
    auto inc_weight = [&](double p) { return momentum_density(pkt, p); };

    auto moments = [&](auto w) {
        const double m0 = integrate(w, lo, hi);
        if (!(m0 > 1e-300))
            throw std::runtime_error("narrowing_check: transmitted mass below floor");
        const double m1 = integrate([&](double p) { return p * w(p); }, lo, hi);
        const double mean = m1 / m0;
        const double m2 = integrate(
            [&](double p) { return (p - mean) * (p - mean) * w(p); }, lo, hi);
        return std::pair<double, double>(mean, std::sqrt(m2 / m0));
    };

    const auto [mean_inc, rms_inc] = moments(inc_weight);
    const auto [mean_tr, rms_tr] = moments(trans_weight);
    return {rms_tr / rms_inc, mean_inc, mean_tr};
}

}  // namespace tunnelstat

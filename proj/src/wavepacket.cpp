#include "tunnelstat/wavepacket.hpp"

#include <cmath>
#include <stdexcept>

namespace tunnelstat {

namespace {
constexpr double kWindowHalfWidths = 10.0;  // in units of 1/sigma
constexpr double kTwoPi = 6.283185307179586476925287;
}  // namespace

void validate(const GaussianPacket& pkt) {
    if (!(pkt.sigma > 0.0) || !std::isfinite(pkt.sigma))
        throw std::invalid_argument("GaussianPacket: sigma must be > 0");
    if (!(pkt.m > 0.0) || !std::isfinite(pkt.m))
        throw std::invalid_argument("GaussianPacket: mass must be > 0");
    if (!(pkt.p0 > 0.0) || !std::isfinite(pkt.p0))
        throw std::invalid_argument("GaussianPacket: p0 must be > 0");
    if (pkt.p0 * pkt.sigma < 5.0)
        throw std::invalid_argument(
            "GaussianPacket: p0*sigma >= 5 required (negative-momentum weight)");
}

double GaussianPacket::p_lo() const {
    const double lo = p0 - kWindowHalfWidths / sigma;
    return lo > 0.0 ? lo : 1e-12 * p0;
}

double GaussianPacket::p_hi() const { return p0 + kWindowHalfWidths / sigma; }

double GaussianPacket::truncated_mass() const {
    // |A|^2 is Gaussian with standard deviation 1/sigma.
    const double zl = (p_lo() - p0) * sigma / std::sqrt(2.0);
    const double zh = (p_hi() - p0) * sigma / std::sqrt(2.0);
    return 0.5 * std::erfc(-zl) + 0.5 * std::erfc(zh);
}

double momentum_amplitude(const GaussianPacket& pkt, double p) {
    validate(pkt);
    const double u = p - pkt.p0;
    return std::sqrt(pkt.sigma) / std::pow(kTwoPi, 0.25) *
           std::exp(-u * u * pkt.sigma * pkt.sigma / 4.0);
}

double momentum_density(const GaussianPacket& pkt, double p) {
    const double u = (p - pkt.p0) * pkt.sigma;
    return pkt.sigma / std::sqrt(kTwoPi) * std::exp(-u * u / 2.0);
}

std::complex<double> position_wavefunction(const GaussianPacket& pkt, double x,
                                           double t) {
    validate(pkt);
    if (t < 0.0) throw std::invalid_argument("position_wavefunction: t >= 0");
    using C = std::complex<double>;
    const double tau = t + pkt.t_emit;
    const double alpha = pkt.sigma * pkt.sigma / 4.0;
    const C gamma(alpha, tau / (2.0 * pkt.m));
    const C lin(2.0 * alpha * pkt.p0, x - pkt.x0);
    const C exponent = lin * lin / (4.0 * gamma) - alpha * pkt.p0 * pkt.p0;
    const double norm =
        std::sqrt(pkt.sigma) / std::pow(kTwoPi, 0.25) / std::sqrt(kTwoPi);
    return norm * std::sqrt(M_PI / gamma) * std::exp(exponent);
}

double initial_overlap_decay(const GaussianPacket& pkt, double T) {
    validate(pkt);
    if (T < 0.0) throw std::invalid_argument("initial_overlap_decay: T >= 0");
    using C = std::complex<double>;
    const double w = T / (2.0 * pkt.m);
    const C value = integrate(
        [&](double p) {
            return momentum_density(pkt, p) * std::exp(C(0.0, -w * p * p));
        },
        pkt.p_lo(), pkt.p_hi());
    const double mass = integrate(
        [&](double p) { return momentum_density(pkt, p); }, pkt.p_lo(), pkt.p_hi());
    return std::norm(value / mass);
}

double initial_overlap_decay_closed_form(const GaussianPacket& pkt, double T) {
    const double alpha = pkt.sigma * pkt.sigma / 2.0;
    const double beta = T / (2.0 * pkt.m);
    const double mod2 = alpha * alpha + beta * beta;
    const double mag =
        pkt.sigma * pkt.sigma / (2.0 * std::sqrt(mod2)) *
        std::exp(-2.0 * alpha * beta * beta * pkt.p0 * pkt.p0 / mod2);
    return mag;
}

}  // namespace tunnelstat

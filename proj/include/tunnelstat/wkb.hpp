#pragma once

#include "tunnelstat/scattering.hpp"
#include "tunnelstat/wavepacket.hpp"

namespace tunnelstat {

// Quadratic expansion of the tunnelling action S(p, d) = d sqrt(2mV - p^2)
// about the packet's mean momentum. S2 is the exact second derivative
// -2mV d / k0^3 (negative: the transmitted momentum distribution broadens).
struct ActionExpansion {
    double S0;  // d k0
    double S1;  // -p0 d / k0
    double S2;  // -2mV d / k0^3
    double p0;
    double k0;  // sqrt(2mV - p0^2)
    double T0;  // m sigma / p0
    double sigma;
    double d;
};

// Requires p0^2 < 2mV and d > 0.
ActionExpansion action_expansion(double V, double d, double p0, double m,
                                 double sigma);

// Coefficient of -(T/T0)^2 in the Gaussian exchange decay,
// k0^3 sigma^2 / (sigma^2 k0^3 - 2 (p0^2 + k0^2) d); throws outside the
// validity domain (denominator <= 0).
double gaussian_decay_coefficient(const ActionExpansion& exp);

// Same coefficient reconstructed from the quadratic action model,
// sigma^2 / (sigma^2 + 2 S2); algebraically identical to the above.
double gaussian_decay_coefficient_from_derivatives(const ActionExpansion& exp);

// P_TT(T) ~ PT^2 {1 - exp[-(T/T0)^2 * coefficient]}.
double broad_barrier_ptt(const ActionExpansion& exp, double PT, double T);

// Ratio of RMS momentum widths, transmitted over incident, evaluated with
// the peak log-transparency factored out. > 1 means broadening.
struct NarrowingResult {
    double width_ratio;
    double incident_mean;
    double transmitted_mean;
};
NarrowingResult narrowing_check(const GaussianPacket& pkt,
                                const AmplitudeTable& table);

}  // namespace tunnelstat

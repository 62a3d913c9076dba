#pragma once

#include <complex>

#include "tunnelstat/quadrature.hpp"

namespace tunnelstat {

// One-particle Gaussian state (hbar = 1): momentum amplitude
//   A(p) = sigma^{1/2} (2 pi)^{-1/4} exp[-(p - p0)^2 sigma^2 / 4],
// emitted from x0; t_emit adds to the evolution time, so a packet launched
// earlier by T carries t_emit = T.
struct GaussianPacket {
    double p0 = 1.0;      // mean momentum, > 0
    double sigma = 1.0;   // spatial width parameter, > 0
    double m = 1.0;       // mass
    double x0 = 0.0;      // source position
    double t_emit = 0.0;  // head start relative to the common clock

    // Quadrature window; |A|^2 mass outside is the reported truncation.
    double p_lo() const;
    double p_hi() const;
    double truncated_mass() const;
};

// Throws unless sigma > 0, m > 0 and p0 sigma >= 5 (negligible
// negative-momentum content).
void validate(const GaussianPacket& pkt);

// A(p); real and positive (source/emission phases applied by callers).
double momentum_amplitude(const GaussianPacket& pkt, double p);

double momentum_density(const GaussianPacket& pkt, double p);

// Closed-form free evolution of the packet at laboratory time t >= 0.
std::complex<double> position_wavefunction(const GaussianPacket& pkt, double x,
                                           double t);

// deltaP_init(T) = |integral |A(p)|^2 e^{-i p^2 T / 2m} dp|^2 by quadrature,
// normalised over the covered window.
double initial_overlap_decay(const GaussianPacket& pkt, double T);

// Closed-form Gaussian evaluation of the same integral (used as an oracle).
double initial_overlap_decay_closed_form(const GaussianPacket& pkt, double T);

}  // namespace tunnelstat

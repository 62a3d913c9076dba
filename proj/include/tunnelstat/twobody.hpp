#pragma once

#include <complex>
#include <vector>

#include "tunnelstat/scattering.hpp"
#include "tunnelstat/wavepacket.hpp"

namespace tunnelstat {

enum class StatisticsKind {
    Fermionised,  // impenetrable bosons / polarised fermions (upper sign)
    Boson,        // non-interacting bosons (lower sign)
};

// Two-particle outcome statistics at emission delay T.
struct OutcomeStats {
    double PT = 0.0;
    double PR = 0.0;
    double deltaP = 0.0;
    double P_TT = 0.0;
    double P_RT = 0.0;
    double P_RR = 0.0;
    StatisticsKind kind = StatisticsKind::Fermionised;
    double T = 0.0;
};

// Single-particle transmission/reflection probabilities: quadrature of
// |A|^2 |B^{T,R}|^2 with interpolated amplitudes, normalised over the
// covered window so PT + PR = 1 exactly.
struct OneParticleProbabilities {
    double PT;
    double PR;
};
OneParticleProbabilities one_particle_probabilities(const GaussianPacket& pkt,
                                                    const AmplitudeTable& table);

// deltaP(T) = |integral |B^T|^2 |A|^2 e^{-i p^2 T / 2m} dp|^2.
double exchange_term(const GaussianPacket& pkt, const AmplitudeTable& table,
                     double T);

// deltaP(T) / PT^2 evaluated with the peak log-transparency factored out,
// valid even when |B^T|^2 itself underflows (broad-barrier regime).
double exchange_ratio(const GaussianPacket& pkt, const AmplitudeTable& table,
                      double T);

// Algebra of the outcome triple from (PT, deltaP); components below
// -1e-12 signal an inconsistent deltaP and throw.
OutcomeStats outcome_probabilities(double PT, double deltaP, StatisticsKind kind,
                                   double T = 0.0);

// <n>_T = 2 P_TT + P_RT; equals 2 PT for any deltaP and kind.
double mean_transmitted_number(const OutcomeStats& stats);

// Wavefunctions sampled on a uniform spatial grid.
struct SampledWavefunction {
    double x0 = 0.0;  // position of values[0]
    double dx = 1.0;
    std::vector<std::complex<double>> values;

    double x_at(size_t i) const { return x0 + dx * static_cast<double>(i); }
    double x_max() const { return x_at(values.empty() ? 0 : values.size() - 1); }
};

struct Interval {
    double lo;
    double hi;
};

// Probability that particle 1 lies in r1 and particle 2 in r2 for the
// (anti)symmetrised pair state built from psi1, psi2. Interval ends snap
// to the nearest grid points.
double quadrant_probability(const SampledWavefunction& psi1,
                            const SampledWavefunction& psi2, Interval r1,
                            Interval r2, StatisticsKind kind);

}  // namespace tunnelstat

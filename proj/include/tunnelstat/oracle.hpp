#pragma once

#include <iosfwd>
#include <vector>

#include "tunnelstat/barrier.hpp"
#include "tunnelstat/twobody.hpp"
#include "tunnelstat/wavepacket.hpp"

namespace tunnelstat {

// Wavefunction on a uniform spatial grid with hard-wall ends.
struct GridState {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<std::complex<double>> values;
    double t = 0.0;
    double m = 1.0;

    double x_at(size_t i) const { return x0 + dx * static_cast<double>(i); }
    double x_max() const { return x_at(values.empty() ? 0 : values.size() - 1); }
    double norm() const;

    SampledWavefunction sampled() const { return {x0, dx, values}; }
};

struct PropagationParams {
    double dt = 1e-3;
    double norm_tolerance = 1e-6;
    // Probability allowed near the hard walls before the run aborts.
    double edge_mass_tolerance = 1e-8;
};

// Packet sampled on a grid at laboratory time t (closed-form free state).
GridState sample_packet(const GaussianPacket& pkt, double x_lo, double x_hi,
                        double dx, double t = 0.0);

// Norm-preserving Crank-Nicolson evolution under -d^2/2m + V(x). Delta
// potentials become single-cell spikes of area Omega (width dx).
GridState propagate(const GridState& initial, const BarrierSpec& spec,
                    double t_final, const PropagationParams& params);

void dump_density_csv(const GridState& state, std::ostream& os);

struct OracleParams {
    double points_per_wavelength = 52.0;  // at the top of the momentum band
    double dt_phase = 0.15;               // max E_hi * dt per step
    double residual_target = 9e-5;        // stop once in-barrier mass drops below
    double min_settle_time = 0.0;         // wait at least this past first arrival
    double max_settle_time = 120.0;       // abort if the residual never drains
    double region_pad_sigmas = 5.0;       // quadrant boundaries: edges +- pad
    double refine = 1.0;                  // 2 halves dx and dt
};

struct OracleOutcome {
    OutcomeStats stats;
    double T = 0.0;
    // Diagnostics of the underlying run.
    double snapshot_time = 0.0;
    double residual_mid_mass = 0.0;   // in-barrier probability at the snapshot
    double transmitted_mass = 0.0;    // one-particle T-region probability
    double reflected_mass = 0.0;
    double raw_sum = 0.0;             // outcome sum before renormalisation
    double full_overlap_sq = 0.0;     // |<Psi_1|Psi_2>|^2 at observation
    double exchange_ratio_tt = 0.0;   // |I_T(1,2)|^2 / (I_T(1,1) I_T(2,2))
};

// Full time-domain outcome statistics: propagate the emitted packet through
// the exact potential, realise the delay T by pairing the snapshot with its
// freely-advanced copy, and integrate the quadrants of Eq-style overlaps.
// One propagation serves all requested delays.
std::vector<OracleOutcome> two_particle_outcomes_sweep(
    const GaussianPacket& pkt, const BarrierSpec& spec,
    const std::vector<double>& delays, StatisticsKind kind,
    const OracleParams& params = {});

OracleOutcome two_particle_outcomes(const GaussianPacket& pkt,
                                    const BarrierSpec& spec, double T,
                                    StatisticsKind kind,
                                    const OracleParams& params = {});

}  // namespace tunnelstat

#pragma once

#include <map>
#include <string>
#include <vector>

#include "tunnelstat/resonance.hpp"
#include "tunnelstat/scattering.hpp"
#include "tunnelstat/twobody.hpp"
#include "tunnelstat/wavepacket.hpp"

namespace tunnelstat {

// Columnar dataset with '#'-prefixed metadata, written as CSV.
struct Dataset {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> meta;

    void add_meta(const std::string& key, double value);
    void add_meta(const std::string& key, const std::string& value);
    std::string to_csv() const;
};

// Built-in double-delta study (strength * spacing = 50, m = d = 1). The
// packet parameters are implementation-chosen documented constants: the
// narrow-band packet rides the first transparency peak, the wide-band one
// weights the first two peaks equally.
struct DoubleDeltaStudy {
    BarrierSpec barrier;
    double m = 1.0;
    std::vector<Resonance> resonances;  // at least two
    GaussianPacket one_peak_packet;     // probes n = 1 only
    GaussianPacket two_peak_packet;     // probes n = 1 and n = 2
    AmplitudeTable table;               // covers both packets
};
const DoubleDeltaStudy& double_delta_study();

// Built-in broad rectangular barrier: p0 d = 400, p0^2/(2mV) = 0.5,
// sigma = d/2 (deep-tunnelling regime, transparency handled in log space).
struct BroadBarrierStudy {
    BarrierSpec barrier;
    double m = 1.0;
    GaussianPacket packet;
    AmplitudeTable table;
};
const BroadBarrierStudy& broad_barrier_study();

// Reduced-opacity rectangular variant (2 S0 ~ 30) where the time-domain
// pipeline is also computable.
BarrierSpec reduced_opacity_barrier();
GaussianPacket reduced_opacity_packet();

// Named built-in datasets: fig2, fig3a, fig3b, fig4a, fig4b.
Dataset run_figure(const std::string& tag);

std::vector<std::string> figure_tags();

}  // namespace tunnelstat

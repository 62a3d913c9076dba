#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tunnelstat/scattering.hpp"
#include "tunnelstat/twobody.hpp"
#include "tunnelstat/wavepacket.hpp"

namespace tunnelstat {

// An isolated transparency peak with its Lorentzian half-width (in energy).
struct Resonance {
    int n = 0;           // 1-based index, ordered by energy
    double E_r = 0.0;    // peak energy
    double p_r = 0.0;    // sqrt(2 m E_r)
    double Gamma = 0.0;  // half-width at half-maximum
    double peak_transparency = 1.0;
};

struct EnergyWindow {
    double lo;
    double hi;
};

// Peaks of transparency(E) inside the window, refined to ~1e-10 relative;
// Gamma from the half-maximum crossings polished by a local Lorentzian
// least-squares fit. Peaks with transparency < 0.5 are background-dominated
// and are skipped. No peaks -> empty list.
std::vector<Resonance> find_resonances(const BarrierSpec& spec, double m,
                                       EnergyWindow window,
                                       int scan_points = 8192);

// Same search on an arbitrary transparency profile (used for synthetic input).
std::vector<Resonance> find_resonance_peaks(
    const std::function<double(double)>& transparency_of_E, double m,
    EnergyWindow window, int scan_points = 8192);

// Sum of Lorentzians: sum_n Gamma_n^2 / ((p^2/2m - E_n)^2 + Gamma_n^2).
double breit_wigner_transparency(const std::vector<Resonance>& resonances,
                                 double p, double m);

// Uniform momentum grid plus dense patches (spacing Gamma_p / 10) around
// each resonance; suitable for build_table when narrow peaks are present.
std::vector<double> resonance_refined_grid(double p_lo, double p_hi,
                                           int base_points,
                                           const std::vector<Resonance>& res,
                                           double m,
                                           double patch_density = 10.0);

// Validity gate for the isolated-resonance predictions below: the packet
// must be broad compared to Gamma in momentum, narrow enough to skip the
// other listed resonances, and the peaks well separated and near-unity.
struct BwPrediction {
    double value;
    bool reliable;
    std::string diagnostics;
};

// Single-resonance double transmission P_TT(T) = PT^2 [1 - e^{-2 Gamma T}]
// with PT = (m pi / p_r) |A(p_r)|^2 Gamma.
BwPrediction single_resonance_ptt(const GaussianPacket& pkt, const Resonance& res,
                                  double T,
                                  const std::vector<Resonance>& others = {});

double single_resonance_pt(const GaussianPacket& pkt, const Resonance& res);

// Two-resonance exchange term: decaying diagonal weights plus the
// cos[(E2-E1) T] cross term with rate Gamma_1 + Gamma_2.
BwPrediction two_resonance_delta_p(const GaussianPacket& pkt, const Resonance& r1,
                                   const Resonance& r2, double T);

}  // namespace tunnelstat

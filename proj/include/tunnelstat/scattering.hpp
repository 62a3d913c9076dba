#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "tunnelstat/barrier.hpp"
#include "tunnelstat/interp.hpp"

namespace tunnelstat {

using Complex = std::complex<double>;

// Stationary scattering amplitudes for a left-incident plane wave of
// momentum p (hbar = 1). BT multiplies the transmitted e^{ipx}, BR the
// reflected e^{-ipx}.
struct AmplitudePair {
    Complex BT;
    Complex BR;
};

struct ScatterResult {
    AmplitudePair amp;
    double log_transparency;  // ln |BT|^2, finite even when |BT|^2 underflows
};

inline constexpr double kFluxTolerance = 1e-10;

// Exact amplitudes composed from 2x2 transfer matrices in the
// (psi, psi') basis. Evanescent segments are evaluated with the growing
// exponential factored out, so deep tunnelling (2S ~ 800) neither
// overflows nor loses the log-transparency.
ScatterResult scatter(const BarrierSpec& spec, double p, double m);

AmplitudePair amplitudes(const BarrierSpec& spec, double p, double m);

// |BT|^2 in [0, 1].
double transparency(const BarrierSpec& spec, double p, double m);

double log_transparency(const BarrierSpec& spec, double p, double m);

// Momentum-sampled amplitudes with monotone-cubic interpolation of the
// transparency (linear in log space below the underflow threshold).
class AmplitudeTable {
public:
    AmplitudeTable() = default;

    // Samples must correspond pointwise to the ascending positive grid.
    AmplitudeTable(std::vector<double> p_grid, std::vector<AmplitudePair> pairs,
                   std::vector<double> log_t, double mass);

    static AmplitudeTable fully_transparent(std::vector<double> p_grid, double mass);
    static AmplitudeTable fully_opaque(std::vector<double> p_grid, double mass);
    // Synthetic table from a transparency profile (e.g. a Breit-Wigner model);
    // BR magnitude is fixed by flux conservation, phases set to zero.
    static AmplitudeTable from_transparency(std::vector<double> p_grid,
                                            const std::vector<double>& transparency,
                                            double mass);

    const std::vector<double>& p_grid() const { return p_; }
    const std::vector<AmplitudePair>& pairs() const { return pairs_; }
    double mass() const { return mass_; }
    bool empty() const { return p_.empty(); }
    double min_p() const { return p_.front(); }
    double max_p() const { return p_.back(); }

    bool covers(double lo, double hi) const {
        return !p_.empty() && p_.front() <= lo && p_.back() >= hi;
    }

    double transparency_at(double p) const;
    // Finite value everywhere T > 0; -inf only for exact zeros.
    double log_transparency_at(double p) const;
    bool has_finite_log() const { return finite_log_; }

private:
    std::vector<double> p_;
    std::vector<AmplitudePair> pairs_;
    std::vector<double> log_t_;
    double mass_ = 1.0;
    bool finite_log_ = false;
    Pchip t_interp_;
    Pchip log_interp_;

    void build_interpolants();
};

AmplitudeTable build_table(const BarrierSpec& spec, const std::vector<double>& p_grid,
                           double m);

}  // namespace tunnelstat

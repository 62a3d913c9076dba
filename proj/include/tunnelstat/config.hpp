#pragma once

#include <stdexcept>
#include <string>

#include "tunnelstat/figures.hpp"
#include "tunnelstat/oracle.hpp"
#include "tunnelstat/resonance.hpp"

namespace tunnelstat {

// Raised when an emitted row fails the statistics identities; the CLI maps
// it to its own exit code.
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Flat key-value run description (sections via dotted prefixes, '#' comments):
//   barrier.type = delta_comb | rectangular | piecewise
//   barrier.positions = 0, 1          barrier.strengths = 50, 50
//   barrier.height = 162.5            barrier.width = 1
//   barrier.left_edge = 0
//   barrier.breakpoints = ...         barrier.heights = ...
//   packet.p0 / packet.sigma / packet.m / packet.x0
//   sweep.T_min / sweep.T_max / sweep.count
//   statistics.kind = fermionised | boson
//   mode = exact | breit-wigner | wkb | oracle
//   window.E_lo / window.E_hi         (resonance search)
//   output.path = sweep.csv           (optional; --out overrides)
//   oracle.points_per_wavelength, oracle.dt_phase, oracle.residual_target,
//   oracle.max_settle_time, oracle.min_settle_time, oracle.refine
struct RunConfig {
    BarrierSpec barrier;
    GaussianPacket packet;
    double T_min = 0.0;
    double T_max = 0.0;
    int T_count = 1;
    StatisticsKind kind = StatisticsKind::Fermionised;
    std::string mode = "exact";
    std::string output_path;
    EnergyWindow window{0.0, 0.0};
    bool has_window = false;
    OracleParams oracle;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// One row per T with the outcome triple and identities re-asserted;
// mode-specific model columns appended.
Dataset run_sweep(const RunConfig& config);

Dataset run_resonances(const RunConfig& config);

// Momentum-space pipeline vs time-domain propagation, row per T.
Dataset run_oracle_check(const RunConfig& config);

}  // namespace tunnelstat

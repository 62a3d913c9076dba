#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tunnelstat {

// Declarative 1D potentials. All variants are asymptotically free
// (zero potential outside the outermost feature).

struct DeltaComb {
    std::vector<double> positions;  // strictly ascending
    std::vector<double> strengths;  // energy*length, one per position
};

struct Rectangular {
    double height = 0.0;     // energy
    double width = 1.0;      // length, > 0
    double left_edge = 0.0;  // length
};

struct PiecewiseConstant {
    std::vector<double> breakpoints;  // strictly ascending, >= 2 entries
    std::vector<double> heights;      // one per segment between breakpoints
};

using BarrierSpec = std::variant<DeltaComb, Rectangular, PiecewiseConstant>;

void validate(const BarrierSpec& spec);

// Mirror image about x = 0; transparency must be invariant under this.
BarrierSpec mirrored(const BarrierSpec& spec);

// Highest segment potential (0 for a pure delta comb).
double max_height(const BarrierSpec& spec);

std::string describe(const BarrierSpec& spec);

}  // namespace tunnelstat

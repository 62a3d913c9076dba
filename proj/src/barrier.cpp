#include "tunnelstat/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tunnelstat {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("BarrierSpec: " + msg);
}

void check_ascending(const std::vector<double>& xs, const char* what) {
    for (double x : xs)
        require(std::isfinite(x), std::string(what) + " not finite");
    for (size_t i = 1; i < xs.size(); ++i)
        require(xs[i] > xs[i - 1], std::string(what) + " not strictly ascending");
}

}  // namespace

void validate(const BarrierSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DeltaComb>) {
                require(!s.positions.empty(), "delta comb needs >= 1 position");
                require(s.positions.size() == s.strengths.size(),
                        "positions/strengths length mismatch");
                check_ascending(s.positions, "delta positions");
                for (double w : s.strengths)
                    require(std::isfinite(w), "delta strength not finite");
            } else if constexpr (std::is_same_v<T, Rectangular>) {
                require(std::isfinite(s.height), "height not finite");
                require(std::isfinite(s.left_edge), "left edge not finite");
                require(s.width > 0 && std::isfinite(s.width), "width must be > 0");
            } else {
                require(s.breakpoints.size() >= 2, "need >= 2 breakpoints");
                require(s.heights.size() == s.breakpoints.size() - 1,
                        "heights must have one entry per segment");
                check_ascending(s.breakpoints, "breakpoints");
                for (double v : s.heights)
                    require(std::isfinite(v), "segment height not finite");
            }
        },
        spec);
}

BarrierSpec mirrored(const BarrierSpec& spec) {
    return std::visit(
        [](const auto& s) -> BarrierSpec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DeltaComb>) {
                DeltaComb out;
                out.positions.assign(s.positions.rbegin(), s.positions.rend());
                for (double& x : out.positions) x = -x;
                out.strengths.assign(s.strengths.rbegin(), s.strengths.rend());
                return out;
            } else if constexpr (std::is_same_v<T, Rectangular>) {
                return Rectangular{s.height, s.width, -(s.left_edge + s.width)};
            } else {
                PiecewiseConstant out;
                out.breakpoints.assign(s.breakpoints.rbegin(), s.breakpoints.rend());
                for (double& x : out.breakpoints) x = -x;
                out.heights.assign(s.heights.rbegin(), s.heights.rend());
                return out;
            }
        },
        spec);
}

double max_height(const BarrierSpec& spec) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DeltaComb>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Rectangular>) {
                return std::max(0.0, s.height);
            } else {
                double v = 0.0;
                for (double h : s.heights) v = std::max(v, h);
                return v;
            }
        },
        spec);
}

std::string describe(const BarrierSpec& spec) {
    std::ostringstream os;
    std::visit(
        [&os](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DeltaComb>) {
                os << "delta_comb n=" << s.positions.size();
                for (size_t i = 0; i < s.positions.size(); ++i)
                    os << " (x=" << s.positions[i] << ", strength=" << s.strengths[i]
                       << ")";
            } else if constexpr (std::is_same_v<T, Rectangular>) {
                os << "rectangular V=" << s.height << " d=" << s.width
                   << " left=" << s.left_edge;
            } else {
                os << "piecewise segments=" << s.heights.size();
            }
        },
        spec);
    return os.str();
}

}  // namespace tunnelstat

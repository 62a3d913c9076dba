#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "tunnelstat/scattering.hpp"

using namespace tunnelstat;

namespace {

// Hand-derived matching solution for one delta of strength Omega.
double single_delta_transparency(double p, double m, double omega) {
    return p * p / (p * p + m * m * omega * omega);
}

// Textbook rectangular-barrier transmission, evanescent case.
double rectangular_transparency(double p, double m, double V, double d) {
    const double k2 = 2.0 * m * V - p * p;
    if (k2 > 0.0) {
        const double k = std::sqrt(k2);
        const double s = std::sinh(k * d);
        const double q = (p * p + k * k) / (2.0 * p * k);
        return 1.0 / (1.0 + q * q * s * s);
    }
    const double k = std::sqrt(-k2);
    const double s = std::sin(k * d);
    const double q = (p * p - k * k) / (2.0 * p * k);
    return 1.0 / (1.0 + q * q * s * s);
}

}  // namespace

TEST_CASE("free delta comb transmits exactly") {
    BarrierSpec spec = DeltaComb{{-1.0, 0.5, 2.0}, {0.0, 0.0, 0.0}};
    for (double p : {0.1, 1.0, 7.3}) {
        const AmplitudePair a = amplitudes(spec, p, 1.0);
        CHECK(std::abs(a.BT - std::complex<double>(1.0, 0.0)) < 1e-14);
        CHECK(std::abs(a.BR) < 1e-14);
    }
}

TEST_CASE("single delta matches the closed form over three decades") {
    for (double omega : {0.3, 2.0, 50.0}) {
        for (double m : {0.5, 1.0}) {
            BarrierSpec spec = DeltaComb{{0.0}, {omega}};
            for (double p = 0.05; p <= 50.0; p *= 1.31) {
                const double t = transparency(spec, p, m);
                CHECK(std::abs(t - single_delta_transparency(p, m, omega)) < 1e-12);
            }
        }
    }
}

TEST_CASE("rectangular barrier matches the textbook formula on both branches") {
    const double m = 1.0, V = 5.0, d = 2.0;
    BarrierSpec spec = Rectangular{V, d, -0.7};
    for (double p = 0.2; p < 9.0; p += 0.173) {
        const double t = transparency(spec, p, m);
        CHECK(t == doctest::Approx(rectangular_transparency(p, m, V, d))
                       .epsilon(1e-12));
    }
}

TEST_CASE("flux conservation across the three families") {
    const double m = 1.0;
    const std::vector<BarrierSpec> specs = {
        DeltaComb{{0.0, 1.0}, {50.0, 50.0}},
        Rectangular{8.0, 1.5, 0.0},
        PiecewiseConstant{{0.0, 0.5, 1.2, 2.0}, {4.0, -1.0, 7.5}},
    };
    for (const auto& spec : specs) {
        for (double p = 0.05; p < 40.0; p *= 1.09) {
            const AmplitudePair a = amplitudes(spec, p, m);
            CHECK(std::abs(std::norm(a.BT) + std::norm(a.BR) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("transparency of the mirrored barrier is unchanged") {
    const double m = 1.0;
    const std::vector<BarrierSpec> specs = {
        DeltaComb{{0.0, 0.7, 1.0}, {3.0, 11.0, 50.0}},
        Rectangular{8.0, 1.5, 0.3},
        PiecewiseConstant{{0.0, 0.5, 1.2, 2.0}, {4.0, -1.0, 7.5}},
    };
    for (const auto& spec : specs) {
        const BarrierSpec mir = mirrored(spec);
        for (double p = 0.3; p < 12.0; p *= 1.4) {
            CHECK(transparency(spec, p, m) ==
                  doctest::Approx(transparency(mir, p, m)).epsilon(1e-11));
        }
    }
}

TEST_CASE("continuity across the evanescent-propagating switch") {
    const double m = 1.0, V = 5.0;
    BarrierSpec spec = Rectangular{V, 2.0, 0.0};
    const double pc = std::sqrt(2.0 * m * V);
    const double t0 = transparency(spec, pc, m);  // k = 0 exactly
    CHECK(std::isfinite(t0));
    CHECK(std::abs(transparency(spec, pc * (1 - 1e-9), m) - t0) < 1e-8);
    CHECK(std::abs(transparency(spec, pc * (1 + 1e-9), m) - t0) < 1e-8);
    // At E = V the exact limit is 1 / (1 + p^2 d^2 / 4).
    const double q = 1.0 + pc * pc * 2.0 * 2.0 / 4.0;
    CHECK(t0 == doctest::Approx(1.0 / q).epsilon(1e-9));
}

TEST_CASE("deep rectangular tunnelling: log-transparency slope is -2k") {
    const double m = 1.0, V = 5.0, p = 1.0;
    const double k = std::sqrt(2.0 * m * V - p * p);
    const double l1 = log_transparency(Rectangular{V, 6.0, 0.0}, p, m);
    const double l2 = log_transparency(Rectangular{V, 11.0, 0.0}, p, m);
    const double slope = (l2 - l1) / 5.0;
    CHECK(std::abs(slope + 2.0 * k) < 0.01 * 2.0 * k);
}

TEST_CASE("extreme opacity neither overflows nor loses the log") {
    const double lt = log_transparency(Rectangular{160000.0, 1.0, 0.0}, 400.0, 1.0);
    // 2 S0 = 800 with prefactor 16 p^2 k^2/(p^2+k^2)^2 = 4 at p = k.
    CHECK(lt == doctest::Approx(-800.0 + std::log(4.0)).epsilon(1e-6));
    const AmplitudePair a = amplitudes(Rectangular{160000.0, 1.0, 0.0}, 400.0, 1.0);
    CHECK(std::abs(std::norm(a.BR) - 1.0) < 1e-10);
}

TEST_CASE("high-momentum limit is transparent") {
    BarrierSpec spec = Rectangular{8.0, 1.5, 0.0};
    CHECK(transparency(spec, 2.0e3, 1.0) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("piecewise-constant single segment equals the rectangle") {
    BarrierSpec rect = Rectangular{3.7, 1.1, 0.2};
    BarrierSpec pw = PiecewiseConstant{{0.2, 1.3}, {3.7}};
    for (double p = 0.4; p < 8.0; p *= 1.5) {
        CHECK(transparency(rect, p, 1.0) ==
              doctest::Approx(transparency(pw, p, 1.0)).epsilon(1e-13));
    }
}

TEST_CASE("input validation") {
    BarrierSpec good = DeltaComb{{0.0}, {1.0}};
    CHECK_THROWS_AS(amplitudes(good, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(amplitudes(good, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(amplitudes(good, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(
        amplitudes(BarrierSpec(DeltaComb{{1.0, 0.0}, {1.0, 1.0}}), 1.0, 1.0),
        std::invalid_argument);
    CHECK_THROWS_AS(amplitudes(BarrierSpec(DeltaComb{{0.0}, {1.0, 2.0}}), 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(amplitudes(BarrierSpec(Rectangular{1.0, -2.0, 0.0}), 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        amplitudes(BarrierSpec(PiecewiseConstant{{0.0, 1.0}, {1.0, 2.0}}), 1.0, 1.0),
        std::invalid_argument);
}

TEST_CASE("build_table: trivial grids") {
    const AmplitudeTable empty = build_table(DeltaComb{{0.0}, {1.0}}, {}, 1.0);
    CHECK(empty.empty());

    BarrierSpec free_comb = DeltaComb{{0.0}, {0.0}};
    const AmplitudeTable two = build_table(free_comb, {1.0, 2.0}, 1.0);
    CHECK(two.pairs().size() == 2);
    for (const AmplitudePair& a : two.pairs()) {
        CHECK(std::abs(a.BT - std::complex<double>(1.0, 0.0)) < 1e-14);
        CHECK(std::abs(a.BR) < 1e-14);
    }
}

TEST_CASE("build_table reports the offending grid index") {
    BarrierSpec spec = DeltaComb{{0.0}, {1.0}};
    try {
        build_table(spec, {1.0, 2.0, -3.0}, 1.0);
        FAIL("expected an exception");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("index 2") != std::string::npos);
    }
}

TEST_CASE("table interpolation tracks the exact transparency") {
    BarrierSpec spec = DeltaComb{{0.0, 1.0}, {8.0, 8.0}};
    std::vector<double> grid;
    for (int i = 0; i <= 3000; ++i) grid.push_back(0.5 + 6.5 * i / 3000.0);
    const AmplitudeTable table = build_table(spec, grid, 1.0);
    double worst = 0.0;
    for (double p = 0.6; p < 6.9; p += 0.00837) {
        worst = std::max(worst, std::abs(table.transparency_at(p) -
                                         transparency(spec, p, 1.0)));
    }
    CHECK(worst < 1e-4);
}

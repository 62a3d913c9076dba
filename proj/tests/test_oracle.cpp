#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "tunnelstat/figures.hpp"
#include "tunnelstat/oracle.hpp"

using namespace tunnelstat;

TEST_CASE("free propagation reproduces the closed-form spreading Gaussian") {
    GaussianPacket pkt{6.0, 1.5, 1.0, -14.0, 0.0};
    GridState st = sample_packet(pkt, -34.0, 30.0, 0.002);
    CHECK(std::abs(st.norm() - 1.0) < 1e-8);

    PropagationParams prop;
    prop.dt = 2e-4;
    BarrierSpec nothing = DeltaComb{{0.0}, {0.0}};
    const double t_final = 2.0;
    const GridState out = propagate(st, nothing, t_final, prop);
    CHECK(std::abs(out.norm() - 1.0) < 1e-9);

    // Centroid and RMS width against the exact spreading solution, to 1e-4
    // of the travelled distance and of the width respectively.
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (size_t i = 0; i < out.values.size(); ++i) {
        const double w = std::norm(out.values[i]);
        m0 += w;
        m1 += w * out.x_at(i);
    }
    m1 /= m0;
    for (size_t i = 0; i < out.values.size(); ++i) {
        const double w = std::norm(out.values[i]);
        m2 += w * (out.x_at(i) - m1) * (out.x_at(i) - m1);
    }
    m2 = std::sqrt(m2 / m0);

    const double travel = pkt.p0 * t_final / pkt.m;
    const double spread_factor = 2.0 * t_final / (pkt.m * pkt.sigma * pkt.sigma);
    const double width_ref =
        0.5 * pkt.sigma * std::sqrt(1.0 + spread_factor * spread_factor);
    CHECK(std::abs(m1 - (pkt.x0 + travel)) < 1e-4 * travel);
    CHECK(std::abs(m2 - width_ref) < 1e-4 * width_ref);
}

TEST_CASE("single-delta transmitted mass matches the momentum-space pipeline") {
    const double omega = 2.0;
    BarrierSpec spec = DeltaComb{{0.0}, {omega}};
    GaussianPacket pkt{2.0, 4.0, 1.0, -30.0, 0.0};

    std::vector<double> grid;
    for (int i = 0; i <= 1200; ++i)
        grid.push_back(pkt.p_lo() + (pkt.p_hi() - pkt.p_lo()) * i / 1200.0);
    const auto [pt, pr] = one_particle_probabilities(pkt, build_table(spec, grid, 1.0));
    (void)pr;

    GridState st = sample_packet(pkt, -160.0, 160.0, 0.02);
    PropagationParams prop;
    prop.dt = 2e-3;
    const GridState out = propagate(st, spec, 50.0, prop);
    double transmitted = 0.0;
    for (size_t i = 0; i < out.values.size(); ++i)
        if (out.x_at(i) > 5.0) transmitted += std::norm(out.values[i]);
    transmitted *= out.dx;
    CHECK(std::abs(transmitted - pt) < 1e-3);
}

TEST_CASE("norm drift and domain exhaustion are reported") {
    GaussianPacket pkt{6.0, 1.5, 1.0, -10.0, 0.0};
    GridState st = sample_packet(pkt, -20.0, 20.0, 0.01);
    PropagationParams prop;
    prop.dt = 1e-3;
    BarrierSpec nothing = DeltaComb{{0.0}, {0.0}};
    CHECK_THROWS_WITH_AS(propagate(st, nothing, 10.0, prop),
                         doctest::Contains("boundary"), std::runtime_error);
}

TEST_CASE("transparent barrier: both atoms pass") {
    BarrierSpec weak = DeltaComb{{0.0}, {0.0}};
    GaussianPacket pkt{6.0, 1.5, 1.0, -12.0, 0.0};
    OracleParams params;
    params.points_per_wavelength = 40.0;
    params.max_settle_time = 10.0;
    const OracleOutcome oc =
        two_particle_outcomes(pkt, weak, 3.0, StatisticsKind::Fermionised, params);
    CHECK(oc.stats.P_TT == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(oc.stats.P_RR == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(oc.residual_mid_mass < 1e-4);
}

TEST_CASE("half-open delta: boson bunching mirrors fermionised antibunching") {
    const double omega = 2.0;
    BarrierSpec spec = DeltaComb{{0.0}, {omega}};
    GaussianPacket pkt{2.0, 4.0, 1.0, -32.0, 0.0};
    OracleParams params;
    params.points_per_wavelength = 48.0;
    params.max_settle_time = 30.0;
    const double T = 9.0;

    const OracleOutcome f =
        two_particle_outcomes(pkt, spec, T, StatisticsKind::Fermionised, params);
    const OracleOutcome b =
        two_particle_outcomes(pkt, spec, T, StatisticsKind::Boson, params);

    // The sign flip moves P_TT by 2 deltaP in opposite directions.
    CHECK(std::abs((b.stats.P_TT - f.stats.P_TT) - 2.0 * f.stats.deltaP) < 2e-3);
    CHECK(f.stats.deltaP > 1e-3);  // non-vacuous: the exchange term is visible

    // Cross-check the triple against the momentum-space pipeline.
    std::vector<double> grid;
    for (int i = 0; i <= 1500; ++i)
        grid.push_back(pkt.p_lo() + (pkt.p_hi() - pkt.p_lo()) * i / 1500.0);
    const AmplitudeTable table = build_table(spec, grid, 1.0);
    const auto [pt, pr] = one_particle_probabilities(pkt, table);
    (void)pr;
    const double dp = exchange_term(pkt, table, T);
    const OutcomeStats ref =
        outcome_probabilities(pt, dp, StatisticsKind::Fermionised, T);
    CHECK(std::abs(f.stats.P_TT - ref.P_TT) < 1e-3);
    CHECK(std::abs(f.stats.P_RT - ref.P_RT) < 1e-3);
    CHECK(std::abs(f.stats.P_RR - ref.P_RR) < 1e-3);
}

TEST_CASE("outcomes are independent of the observation time") {
    const double omega = 2.0;
    BarrierSpec spec = DeltaComb{{0.0}, {omega}};
    GaussianPacket pkt{2.0, 4.0, 1.0, -32.0, 0.0};
    OracleParams params;
    params.points_per_wavelength = 40.0;
    params.max_settle_time = 40.0;
    const double T = 9.0;

    const OracleOutcome a =
        two_particle_outcomes(pkt, spec, T, StatisticsKind::Fermionised, params);
    params.min_settle_time = a.snapshot_time - 32.0 / (pkt.p0 / pkt.m) + 8.0;
    const OracleOutcome b =
        two_particle_outcomes(pkt, spec, T, StatisticsKind::Fermionised, params);
    CHECK(b.snapshot_time > a.snapshot_time + 4.0);
    CHECK(std::abs(a.stats.P_TT - b.stats.P_TT) < 1e-3);
    CHECK(std::abs(a.stats.P_RT - b.stats.P_RT) < 1e-3);
    CHECK(std::abs(a.stats.P_RR - b.stats.P_RR) < 1e-3);
}

TEST_CASE("resonant double delta: oracle triple matches the pipeline") {
    // The n = 2 peak has ~8x the width of n = 1, so the barrier drains fast
    // enough for a unit test.
    const DoubleDeltaStudy& st = double_delta_study();
    const Resonance& r2 = st.resonances[1];
    GaussianPacket pkt{r2.p_r, 8.0, 1.0, -45.0, 0.0};

    OracleParams params;
    params.points_per_wavelength = 48.0;
    params.max_settle_time = 140.0;
    const double T = 20.0;
    const OracleOutcome oc =
        two_particle_outcomes(pkt, st.barrier, T, StatisticsKind::Fermionised,
                              params);
    CHECK(oc.residual_mid_mass < 1e-4);

    const auto [pt, pr] = one_particle_probabilities(pkt, st.table);
    (void)pr;
    const double dp = exchange_term(pkt, st.table, T);
    const OutcomeStats ref =
        outcome_probabilities(pt, dp, StatisticsKind::Fermionised, T);
    CHECK(std::abs(oc.stats.P_TT - ref.P_TT) < 1e-3);
    CHECK(std::abs(oc.stats.P_RT - ref.P_RT) < 1e-3);
    CHECK(std::abs(oc.stats.P_RR - ref.P_RR) < 1e-3);
    CHECK(std::abs(oc.transmitted_mass - pt) < 1e-3);
}

TEST_CASE("delays must be non-negative and the packet must start on the left") {
    BarrierSpec spec = DeltaComb{{0.0}, {1.0}};
    GaussianPacket pkt{2.0, 4.0, 1.0, -30.0, 0.0};
    CHECK_THROWS_AS(
        two_particle_outcomes(pkt, spec, -1.0, StatisticsKind::Fermionised),
        std::invalid_argument);
    GaussianPacket bad{2.0, 4.0, 1.0, 5.0, 0.0};
    CHECK_THROWS_AS(
        two_particle_outcomes(bad, spec, 1.0, StatisticsKind::Fermionised),
        std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "tunnelstat/quadrature.hpp"
#include "tunnelstat/wavepacket.hpp"

using namespace tunnelstat;
using C = std::complex<double>;

namespace {

// Brute-force Fourier quadrature of the momentum representation.
C fourier_oracle(const GaussianPacket& pkt, double x, double t) {
    const double tau = t + pkt.t_emit;
    return integrate(
               [&](double p) {
                   const double a = momentum_amplitude(pkt, p);
                   const double phase =
                       p * (x - pkt.x0) - p * p * tau / (2.0 * pkt.m);
                   return C(a * std::cos(phase), a * std::sin(phase));
               },
               pkt.p0 - 12.0 / pkt.sigma, pkt.p0 + 12.0 / pkt.sigma) /
           std::sqrt(2.0 * M_PI);
}

}  // namespace

TEST_CASE("momentum amplitude peak and width") {
    GaussianPacket pkt{20.0, 1.5, 1.0, 0.0, 0.0};
    const double peak = std::sqrt(pkt.sigma) / std::pow(2.0 * M_PI, 0.25);
    CHECK(momentum_amplitude(pkt, pkt.p0) == doctest::Approx(peak).epsilon(1e-14));
    CHECK(momentum_amplitude(pkt, pkt.p0 + 2.0 / pkt.sigma) ==
          doctest::Approx(peak * std::exp(-1.0)).epsilon(1e-13));
    CHECK(momentum_amplitude(pkt, pkt.p0 - 2.0 / pkt.sigma) ==
          doctest::Approx(peak * std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("momentum density integrates to one") {
    GaussianPacket pkt{20.0, 1.0, 1.0, 0.0, 0.0};
    const double mass = integrate(
        [&](double p) { return momentum_density(pkt, p); }, pkt.p_lo(), pkt.p_hi());
    CHECK(std::abs(mass - 1.0) < 1e-10);
    CHECK(pkt.truncated_mass() < 1e-20);
}

TEST_CASE("position wavefunction at t = 0 is the minimum-uncertainty Gaussian") {
    GaussianPacket pkt{8.0, 2.0, 1.0, -3.0, 0.0};
    const double d0 = std::norm(position_wavefunction(pkt, pkt.x0, 0.0));
    for (double dx : {0.3, 0.9, 1.7}) {
        const double ratio = std::norm(position_wavefunction(pkt, pkt.x0 + dx, 0.0)) / d0;
        CHECK(ratio == doctest::Approx(std::exp(-2.0 * dx * dx /
                                                (pkt.sigma * pkt.sigma)))
                           .epsilon(1e-10));
    }
}

TEST_CASE("centroid moves at p0 t / m and the norm is preserved") {
    GaussianPacket pkt{8.0, 2.0, 1.0, -3.0, 0.0};
    for (double t : {0.0, 0.4, 1.3}) {
        const double lo = pkt.x0 - 30.0, hi = pkt.x0 + 30.0 + pkt.p0 * t;
        const double norm = integrate(
            [&](double x) { return std::norm(position_wavefunction(pkt, x, t)); },
            lo, hi);
        CHECK(std::abs(norm - 1.0) < 1e-8);
        const double centroid =
            integrate(
                [&](double x) {
                    return x * std::norm(position_wavefunction(pkt, x, t));
                },
                lo, hi) /
            norm;
        CHECK(centroid ==
              doctest::Approx(pkt.x0 + pkt.p0 * t / pkt.m).epsilon(1e-8));
    }
}

TEST_CASE("closed-form evolution equals the Fourier quadrature") {
    GaussianPacket pkt{8.0, 2.0, 1.0, -3.0, 0.5};
    int n = 0;
    for (double t : {0.0, 0.7, 2.1, 4.9, 9.3}) {
        for (double x : {-3.0, 1.5 + 8.0 * t}) {
            const C a = position_wavefunction(pkt, x, t);
            const C b = fourier_oracle(pkt, x, t);
            CHECK(std::abs(a - b) < 1e-8);
            ++n;
        }
    }
    CHECK(n == 10);
}

TEST_CASE("initial overlap: exact limits and closed form") {
    GaussianPacket pkt{20.0, 1.0, 1.0, 0.0, 0.0};
    CHECK(initial_overlap_decay(pkt, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double T : {0.01, 0.05, 0.1, 0.3}) {
        CHECK(std::abs(initial_overlap_decay(pkt, T) -
                       initial_overlap_decay_closed_form(pkt, T)) < 1e-6);
    }
}

TEST_CASE("initial overlap decays monotonically until the noise floor") {
    GaussianPacket pkt{20.0, 1.0, 1.0, 0.0, 0.0};
    double prev = 1.0;
    for (double T = 0.01; T <= 0.16; T += 0.01) {
        const double v = initial_overlap_decay(pkt, T);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("separation condition: p0 T / m = 10 sigma suppresses the overlap") {
    GaussianPacket pkt{20.0, 1.0, 1.0, 0.0, 0.0};  // p0 sigma = 20
    const double T = 10.0 * pkt.sigma * pkt.m / pkt.p0;
    CHECK(initial_overlap_decay(pkt, T) < 1e-3);
}

TEST_CASE("overlap depends only on the scale-invariant combinations") {
    GaussianPacket a{12.0, 1.5, 1.0, 0.0, 0.0};
    const double lambda = 2.0;
    GaussianPacket b{12.0 * lambda, 1.5 / lambda, 1.0, 0.0, 0.0};
    for (double T : {0.02, 0.1, 0.25}) {
        CHECK(std::abs(initial_overlap_decay(a, T) -
                       initial_overlap_decay(b, T / (lambda * lambda))) < 1e-8);
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(validate(GaussianPacket{1.0, 1.0, 1.0, 0.0, 0.0}),
                    std::invalid_argument);  // p0 sigma < 5
    CHECK_THROWS_AS(validate(GaussianPacket{10.0, -1.0, 1.0, 0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(GaussianPacket{10.0, 1.0, 0.0, 0.0, 0.0}),
                    std::invalid_argument);
    GaussianPacket ok{10.0, 1.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(position_wavefunction(ok, 0.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(initial_overlap_decay(ok, -1.0), std::invalid_argument);
}

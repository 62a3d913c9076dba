#include "tunnelstat/twobody.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tunnelstat {

namespace {

constexpr double kNegativeTolerance = 1e-12;

void check_support(const GaussianPacket& pkt, const AmplitudeTable& table) {
    if (table.p_grid().size() < 2)
        throw std::invalid_argument("AmplitudeTable has fewer than 2 samples");
    if (std::abs(table.mass() - pkt.m) > 1e-12 * pkt.m)
        throw std::invalid_argument("packet and table mass differ");
    if (!table.covers(pkt.p_lo(), pkt.p_hi())) {
        const double lo = std::max(pkt.p_lo(), table.min_p());
        const double hi = std::min(pkt.p_hi(), table.max_p());
        double covered = 0.0;
        if (hi > lo)
            covered = integrate(
                [&](double p) { return momentum_density(pkt, p); }, lo, hi);
        std::ostringstream os;
        os << "amplitude table [" << table.min_p() << ", " << table.max_p()
           << "] does not cover packet support [" << pkt.p_lo() << ", "
           << pkt.p_hi() << "]; uncovered |A|^2 mass = " << 1.0 - covered;
        throw std::invalid_argument(os.str());
    }
}

double window_mass(const GaussianPacket& pkt) {
    return integrate([&](double p) { return momentum_density(pkt, p); },
                     pkt.p_lo(), pkt.p_hi());
}

}  // namespace

OneParticleProbabilities one_particle_probabilities(const GaussianPacket& pkt,
                                                    const AmplitudeTable& table) {
    validate(pkt);
    check_support(pkt, table);
    const double mass = window_mass(pkt);
    const double pt = integrate(
        [&](double p) {
            return momentum_density(pkt, p) * table.transparency_at(p);
        },
        pkt.p_lo(), pkt.p_hi());
    const double PT = std::clamp(pt / mass, 0.0, 1.0);
    return {PT, 1.0 - PT};
}

double exchange_term(const GaussianPacket& pkt, const AmplitudeTable& table,
                     double T) {
    validate(pkt);
    if (T < 0.0) throw std::invalid_argument("exchange_term: T >= 0");
    check_support(pkt, table);
    using C = std::complex<double>;
    const double w = T / (2.0 * pkt.m);
    const double mass = window_mass(pkt);
    const C value = integrate(
        [&](double p) {
            return momentum_density(pkt, p) * table.transparency_at(p) *
                   std::exp(C(0.0, -w * p * p));
        },
        pkt.p_lo(), pkt.p_hi());
    return std::norm(value / mass);
}

double exchange_ratio(const GaussianPacket& pkt, const AmplitudeTable& table,
                      double T) {
    validate(pkt);
    if (T < 0.0) throw std::invalid_argument("exchange_ratio: T >= 0");
    check_support(pkt, table);
    if (!table.has_finite_log())
        throw std::runtime_error(
            "exchange_ratio: table transparency has exact zeros (opaque)");

    // Factor the peak of ln(|B^T|^2 |A|^2) out of both integrals; the offset
    // cancels in the ratio, so the computation survives |B^T|^2 ~ e^{-800}.
    const double lo = pkt.p_lo(), hi = pkt.p_hi();
    double peak = -std::numeric_limits<double>::infinity();
    const int scan = 512;
    for (int i = 0; i <= scan; ++i) {
        const double p = lo + (hi - lo) * i / scan;
        const double v = table.log_transparency_at(p) +
                         std::log(momentum_density(pkt, p));
        peak = std::max(peak, v);
    }
    using C = std::complex<double>;
    const double w = T / (2.0 * pkt.m);
    auto scaled_weight = [&](double p) {
        return std::exp(table.log_transparency_at(p) +
                        std::log(momentum_density(pkt, p)) - peak);
    };
    const C num = integrate(
        [&](double p) { return scaled_weight(p) * std::exp(C(0.0, -w * p * p)); },
        lo, hi);
    const double den = integrate(scaled_weight, lo, hi);
    if (!(den > 0.0))
        throw std::runtime_error("exchange_ratio: transmitted mass vanished");
    return std::norm(num / den);
}

OutcomeStats outcome_probabilities(double PT, double deltaP, StatisticsKind kind,
                                   double T) {
    if (!(PT >= 0.0 && PT <= 1.0))
        throw std::invalid_argument("outcome_probabilities: PT outside [0,1]");
    if (!(deltaP >= 0.0))
        throw std::invalid_argument("outcome_probabilities: deltaP must be >= 0");
    const double PR = 1.0 - PT;
    const double sign = (kind == StatisticsKind::Fermionised) ? 1.0 : -1.0;

    auto settle = [](double v, const char* name) {
        if (v < -kNegativeTolerance) {
            std::ostringstream os;
            os << "outcome_probabilities: " << name << " = " << v
               << " (deltaP inconsistent with PT)";
            throw std::invalid_argument(os.str());
        }
        return v < 0.0 ? 0.0 : v;
    };

    OutcomeStats st;
    st.PT = PT;
    st.PR = PR;
    st.deltaP = deltaP;
    st.kind = kind;
    st.T = T;
    st.P_TT = settle(PT * PT - sign * deltaP, "P_TT");
    st.P_RT = settle(2.0 * (PT * PR + sign * deltaP), "P_RT");
    st.P_RR = settle(PR * PR - sign * deltaP, "P_RR");
    return st;
}

double mean_transmitted_number(const OutcomeStats& stats) {
    return 2.0 * stats.P_TT + stats.P_RT;
}

namespace {

using C = std::complex<double>;

struct Overlaps {
    C i11, i22, i12;  // integrals over one interval
};

size_t snap_index(const SampledWavefunction& psi, double x, const char* what) {
    const double fi = (x - psi.x0) / psi.dx;
    const long i = std::lround(fi);
    if (i < 0 || static_cast<size_t>(i) >= psi.values.size()) {
        std::ostringstream os;
        os << "quadrant_probability: " << what << " = " << x
           << " outside sampled grid [" << psi.x0 << ", " << psi.x_max() << "]";
        throw std::invalid_argument(os.str());
    }
    return static_cast<size_t>(i);
}

// Trapezoid overlaps of psi_i^* psi_j over [ia, ib].
Overlaps overlaps_on(const SampledWavefunction& a, const SampledWavefunction& b,
                     size_t ia, size_t ib) {
    Overlaps o{};
    for (size_t i = ia; i <= ib; ++i) {
        const double w = (i == ia || i == ib) ? 0.5 : 1.0;
        o.i11 += w * std::conj(a.values[i]) * a.values[i];
        o.i22 += w * std::conj(b.values[i]) * b.values[i];
        o.i12 += w * std::conj(a.values[i]) * b.values[i];
    }
    o.i11 *= a.dx;
    o.i22 *= a.dx;
    o.i12 *= a.dx;
    return o;
}

}  // namespace

double quadrant_probability(const SampledWavefunction& psi1,
                            const SampledWavefunction& psi2, Interval r1,
                            Interval r2, StatisticsKind kind) {
    if (psi1.values.size() != psi2.values.size() || psi1.values.size() < 2 ||
        std::abs(psi1.x0 - psi2.x0) > 1e-12 || std::abs(psi1.dx - psi2.dx) > 1e-15)
        throw std::invalid_argument(
            "quadrant_probability: wavefunctions must share one grid");
    if (!(r1.hi > r1.lo) || !(r2.hi > r2.lo))
        throw std::invalid_argument("quadrant_probability: empty interval");

    const double sign = (kind == StatisticsKind::Fermionised) ? 1.0 : -1.0;

    const Overlaps full =
        overlaps_on(psi1, psi2, 0, psi1.values.size() - 1);
    const double n2 =
        2.0 * (full.i11.real() * full.i22.real() - sign * std::norm(full.i12));
    if (!(n2 > 0.0))
        throw std::runtime_error(
            "quadrant_probability: degenerate pair state (normalisation <= 0)");

    const Overlaps o1 = overlaps_on(psi1, psi2, snap_index(psi1, r1.lo, "r1.lo"),
                                    snap_index(psi1, r1.hi, "r1.hi"));
    const Overlaps o2 = overlaps_on(psi1, psi2, snap_index(psi1, r2.lo, "r2.lo"),
                                    snap_index(psi1, r2.hi, "r2.hi"));

    // Expansion of the quadrant integral of |Psi|^2 into one-particle
    // overlaps; reduces to 2 N^{-2} [I11 I22 - |I12|^2] when r1 = r2.
    const double direct = o1.i11.real() * o2.i22.real() +
                          o1.i22.real() * o2.i11.real();
    const double exch = 2.0 * (o1.i12 * std::conj(o2.i12)).real();
    return (direct - sign * exch) / n2;
}

}  // namespace tunnelstat

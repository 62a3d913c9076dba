#include "tunnelstat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <sstream>
#include <stdexcept>

#if defined(__SSE2__) || defined(_M_X64)
#include <immintrin.h>
#define TUNNELSTAT_HAS_FTZ 1
#endif

namespace tunnelstat {

namespace {

using C = std::complex<double>;

// The packet tails underflow gradually into denormal range over most of the
// grid; hardware denormal handling would dominate the run time. Values below
// ~1e-308 carry no physics, so the steppers run in flush-to-zero mode.
class FlushDenormalsGuard {
public:
#ifdef TUNNELSTAT_HAS_FTZ
    FlushDenormalsGuard() : csr_(_mm_getcsr()) { _mm_setcsr(csr_ | 0x8040); }
    ~FlushDenormalsGuard() { _mm_setcsr(csr_); }

private:
    unsigned csr_;
#endif
};

struct Extent {
    double lo;
    double hi;
};

Extent barrier_extent(const BarrierSpec& spec) {
    return std::visit(
        [](const auto& s) -> Extent {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DeltaComb>) {
                return {s.positions.front(), s.positions.back()};
            } else if constexpr (std::is_same_v<T, Rectangular>) {
                return {s.left_edge, s.left_edge + s.width};
            } else {
                return {s.breakpoints.front(), s.breakpoints.back()};
            }
        },
        spec);
}

// Cell-averaged potential samples; deltas become single-cell spikes of the
// right area. Assumes the grid was aligned so feature positions sit on nodes.
std::vector<double> sample_potential(const BarrierSpec& spec, double x0, double dx,
                                     size_t n) {
    std::vector<double> v(n, 0.0);
    auto cell_overlap = [&](size_t j, double a, double b) {
        const double cl = x0 + dx * j - 0.5 * dx;
        const double ch = cl + dx;
        return std::max(0.0, std::min(b, ch) - std::max(a, cl));
    };
    auto add_segment = [&](double a, double b, double height) {
        if (!(b > a) || height == 0.0) return;
        const long j_lo = std::max(0L, std::lround((a - x0) / dx) - 1);
        const long j_hi =
            std::min(static_cast<long>(n) - 1, std::lround((b - x0) / dx) + 1);
        for (long j = j_lo; j <= j_hi; ++j)
            v[j] += height * cell_overlap(j, a, b) / dx;
    };
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DeltaComb>) {
                for (size_t i = 0; i < s.positions.size(); ++i) {
                    const long j = std::lround((s.positions[i] - x0) / dx);
                    if (j < 0 || j >= static_cast<long>(n))
                        throw std::invalid_argument(
                            "oracle: delta position outside grid");
                    v[j] += s.strengths[i] / dx;
                }
            } else if constexpr (std::is_same_v<T, Rectangular>) {
                add_segment(s.left_edge, s.left_edge + s.width, s.height);
            } else {
                for (size_t i = 0; i < s.heights.size(); ++i)
                    add_segment(s.breakpoints[i], s.breakpoints[i + 1],
                                s.heights[i]);
            }
        },
        spec);
    return v;
}

// Crank-Nicolson stepper with a precomputed Thomas factorisation.
// (I + i dt H / 2) psi' = (I - i dt H / 2) psi, H = -d^2/(2m dx^2) + V.
class CrankNicolson {
public:
    CrankNicolson(const std::vector<double>& v, double dx, double dt, double m)
        : n_(v.size()), off_im_(-dt / (4.0 * m * dx * dx)), h_(n_), wr_(n_),
          wi_(n_), vr_(n_), vi_(n_), yr_(n_), yi_(n_) {
        const double kin = dt * 0.5 / (m * dx * dx);
        for (size_t j = 0; j < n_; ++j) h_[j] = kin + 0.5 * dt * v[j];
        // LU of the tridiagonal A = [off, 1 + i h_j, off], off = i off_im_.
        double dr = 1.0, di = h_[0];
        double inv = 1.0 / (dr * dr + di * di);
        vr_[0] = dr * inv;
        vi_[0] = -di * inv;
        for (size_t j = 1; j < n_; ++j) {
            // w_j = off * inv_{j-1} (off purely imaginary)
            wr_[j] = -off_im_ * vi_[j - 1];
            wi_[j] = off_im_ * vr_[j - 1];
            // denom_j = (1 + i h_j) - w_j * off
            dr = 1.0 + wi_[j] * off_im_;
            di = h_[j] - wr_[j] * off_im_;
            inv = 1.0 / (dr * dr + di * di);
            vr_[j] = dr * inv;
            vi_[j] = -di * inv;
        }
    }

    void step(std::vector<C>& psi) {
        const size_t n = n_;
        const double bu = -off_im_;  // B off-diagonal = -off = i bu
        // rhs then forward elimination into (yr, yi)
        {
            double pl_r = 0.0, pl_i = 0.0;  // psi_{j-1}
            double pc_r = psi[0].real(), pc_i = psi[0].imag();
            for (size_t j = 0; j < n; ++j) {
                const double pn_r = (j + 1 < n) ? psi[j + 1].real() : 0.0;
                const double pn_i = (j + 1 < n) ? psi[j + 1].imag() : 0.0;
                const double sr = pl_r + pn_r;
                const double si = pl_i + pn_i;
                // rhs = (1 - i h_j) psi_j + i bu (psi_{j-1} + psi_{j+1})
                double rr = pc_r + h_[j] * pc_i - bu * si;
                double ri = pc_i - h_[j] * pc_r + bu * sr;
                if (j > 0) {
                    rr -= wr_[j] * yr_[j - 1] - wi_[j] * yi_[j - 1];
                    ri -= wr_[j] * yi_[j - 1] + wi_[j] * yr_[j - 1];
                }
                yr_[j] = rr;
                yi_[j] = ri;
                pl_r = pc_r;
                pl_i = pc_i;
                pc_r = pn_r;
                pc_i = pn_i;
            }
        }
        // back substitution
        {
            double nx_r = 0.0, nx_i = 0.0;  // psi_{j+1}
            for (size_t jj = n; jj-- > 0;) {
                // y_j - off * psi_{j+1}, off = i off_im_
                const double tr = yr_[jj] + off_im_ * nx_i;
                const double ti = yi_[jj] - off_im_ * nx_r;
                const double pr = tr * vr_[jj] - ti * vi_[jj];
                const double pi = tr * vi_[jj] + ti * vr_[jj];
                psi[jj] = C(pr, pi);
                nx_r = pr;
                nx_i = pi;
            }
        }
    }

private:
    size_t n_;
    double off_im_;
    std::vector<double> h_, wr_, wi_, vr_, vi_, yr_, yi_;
};

double mass_between(const GridState& st, double lo, double hi) {
    double sum = 0.0;
    const long n = static_cast<long>(st.values.size());
    long ia = std::max(0L, std::lround((lo - st.x0) / st.dx));
    long ib = std::min(n - 1, std::lround((hi - st.x0) / st.dx));
    for (long i = ia; i <= ib; ++i) sum += std::norm(st.values[i]);
    return sum * st.dx;
}

void check_monitors(const GridState& st, const PropagationParams& params) {
    const double nrm = st.norm();
    if (std::abs(nrm - 1.0) > params.norm_tolerance) {
        std::ostringstream os;
        os << "oracle: norm drift " << nrm - 1.0 << " at t = " << st.t;
        throw std::runtime_error(os.str());
    }
    const size_t n = st.values.size();
    const size_t guard = std::min<size_t>(16, n / 4);
    double edge = 0.0;
    for (size_t i = 0; i < guard; ++i)
        edge += std::norm(st.values[i]) + std::norm(st.values[n - 1 - i]);
    if (edge * st.dx > params.edge_mass_tolerance) {
        std::ostringstream os;
        os << "oracle: packet reached grid boundary (edge mass = " << edge * st.dx
           << " at t = " << st.t << "); enlarge the domain";
        throw std::runtime_error(os.str());
    }
}

}  // namespace

double GridState::norm() const {
    double s = 0.0;
    for (const C& v : values) s += std::norm(v);
    return s * dx;
}

GridState sample_packet(const GaussianPacket& pkt, double x_lo, double x_hi,
                        double dx, double t) {
    validate(pkt);
    if (!(x_hi > x_lo) || !(dx > 0.0))
        throw std::invalid_argument("sample_packet: bad grid request");
    GridState st;
    st.x0 = x_lo;
    st.dx = dx;
    st.t = t;
    st.m = pkt.m;
    const size_t n = static_cast<size_t>(std::ceil((x_hi - x_lo) / dx)) + 1;
    st.values.resize(n);
    for (size_t i = 0; i < n; ++i)
        st.values[i] = position_wavefunction(pkt, st.x_at(i), t);
    return st;
}

GridState propagate(const GridState& initial, const BarrierSpec& spec,
                    double t_final, const PropagationParams& params) {
    validate(spec);
    if (initial.values.size() < 32)
        throw std::invalid_argument("propagate: grid too small");
    if (!(params.dt > 0.0)) throw std::invalid_argument("propagate: dt > 0");
    if (t_final < initial.t)
        throw std::invalid_argument("propagate: t_final before initial time");

    GridState st = initial;
    const std::vector<double> v =
        sample_potential(spec, st.x0, st.dx, st.values.size());
    CrankNicolson cn(v, st.dx, params.dt, st.m);
    FlushDenormalsGuard ftz;

    const long steps = std::lround((t_final - initial.t) / params.dt);
    const long monitor_every = std::max(32L, steps / 512);
    for (long s = 0; s < steps; ++s) {
        cn.step(st.values);
        st.t += params.dt;
        if (s % monitor_every == 0 || s + 1 == steps) check_monitors(st, params);
    }
    return st;
}

void dump_density_csv(const GridState& state, std::ostream& os) {
    os << "x,density\n";
    char buf[64];
    for (size_t i = 0; i < state.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.16e,%.16e\n", state.x_at(i),
                      std::norm(state.values[i]));
        os << buf;
    }
}

namespace {

// Band-limited discrete Fourier data of a snapshot, used to advance the
// state by an exact free evolution when building the delayed partner.
struct BandSpectrum {
    std::vector<double> p;
    std::vector<C> amp;  // psi~(p) = dx sum_j psi_j e^{-i p x_j}
    double dp = 0.0;
    double m = 1.0;
};

BandSpectrum band_spectrum(const GridState& st, double p_center, double half_width,
                           double dp) {
    BandSpectrum sp;
    sp.dp = dp;
    sp.m = st.m;
    const int nb = static_cast<int>(std::ceil(2.0 * half_width / dp));
    sp.p.reserve(2 * (nb + 1));
    sp.amp.reserve(2 * (nb + 1));
    const size_t n = st.values.size();
    for (int side = 0; side < 2; ++side) {
        const double centre = side == 0 ? p_center : -p_center;
        for (int k = 0; k <= nb; ++k) {
            const double p = centre - half_width + k * dp;
            // Keep the two bands on strictly opposite sides of p = 0.
            if (side == 0 && p <= 1e-12) continue;
            if (side == 1 && p >= -1e-12) continue;
            const double rot_r = std::cos(p * st.dx);
            const double rot_i = -std::sin(p * st.dx);
            double ph_r = std::cos(p * st.x0);
            double ph_i = -std::sin(p * st.x0);
            double acc_r = 0.0, acc_i = 0.0;
            for (size_t j = 0; j < n; ++j) {
                const double vr = st.values[j].real();
                const double vi = st.values[j].imag();
                acc_r += vr * ph_r - vi * ph_i;
                acc_i += vr * ph_i + vi * ph_r;
                const double t = ph_r * rot_r - ph_i * rot_i;
                ph_i = ph_r * rot_i + ph_i * rot_r;
                ph_r = t;
            }
            sp.p.push_back(p);
            sp.amp.push_back(C(acc_r, acc_i) * st.dx);
        }
    }
    return sp;
}

// psi(x, t + T) on the requested grid from the band data.
SampledWavefunction reconstruct_after(const BandSpectrum& sp, double T, double x0,
                                      double dx, size_t n) {
    SampledWavefunction out;
    out.x0 = x0;
    out.dx = dx;
    std::vector<double> re(n, 0.0), im(n, 0.0);
    const double scale = sp.dp / (2.0 * M_PI);
    for (size_t k = 0; k < sp.p.size(); ++k) {
        const double p = sp.p[k];
        const C coeff =
            sp.amp[k] * std::exp(C(0.0, -p * p * T / (2.0 * sp.m))) * scale;
        const double cr = coeff.real(), ci = coeff.imag();
        const double rot_r = std::cos(p * dx);
        const double rot_i = std::sin(p * dx);
        double ph_r = std::cos(p * x0);
        double ph_i = std::sin(p * x0);
        for (size_t j = 0; j < n; ++j) {
            re[j] += cr * ph_r - ci * ph_i;
            im[j] += cr * ph_i + ci * ph_r;
            const double t = ph_r * rot_r - ph_i * rot_i;
            ph_i = ph_r * rot_i + ph_i * rot_r;
            ph_r = t;
        }
    }
    out.values.resize(n);
    for (size_t j = 0; j < n; ++j) out.values[j] = C(re[j], im[j]);
    return out;
}

}  // namespace

std::vector<OracleOutcome> two_particle_outcomes_sweep(
    const GaussianPacket& pkt, const BarrierSpec& spec,
    const std::vector<double>& delays, StatisticsKind kind,
    const OracleParams& params) {
    validate(pkt);
    validate(spec);
    for (double T : delays)
        if (T < 0.0)
            throw std::invalid_argument("two_particle_outcomes: delays must be >= 0");
    if (delays.empty()) return {};

    const Extent ext = barrier_extent(spec);
    const double sigma = pkt.sigma;
    if (!(pkt.x0 + 5.0 * sigma < ext.lo))
        throw std::invalid_argument(
            "two_particle_outcomes: packet must start left of the barrier");

    const double p_hi = pkt.p0 + 10.0 / sigma;
    const double v_hi = p_hi / pkt.m;
    const double t_arrive = (ext.hi - pkt.x0 + 8.0 * sigma) / (pkt.p0 / pkt.m);
    const double t_cap = t_arrive + params.max_settle_time;
    const double t_max_delay = *std::max_element(delays.begin(), delays.end());

    // Spatial grid: aligned so barrier features sit on nodes; sized so both
    // scattered packets stay clear of the walls until the residual drains.
    double dx = 2.0 * M_PI / (p_hi * params.points_per_wavelength * params.refine);
    const double span = ext.hi - ext.lo;
    if (span > 0.0) dx = span / std::max(1.0, std::round(span / dx));
    const double spread =
        0.5 * sigma * std::hypot(1.0, 2.0 * t_cap / (pkt.m * sigma * sigma));
    const double x_lo_raw = pkt.x0 - v_hi * t_cap - 10.0 * spread;
    const double x_hi_raw = ext.hi + v_hi * t_cap + 10.0 * spread;
    const double x_lo = ext.lo - std::ceil((ext.lo - x_lo_raw) / dx) * dx;
    const size_t n = static_cast<size_t>(std::ceil((x_hi_raw - x_lo) / dx)) + 1;

    PropagationParams prop;
    prop.dt = params.dt_phase / (p_hi * p_hi / (2.0 * pkt.m)) / params.refine;

    GridState st;
    st.x0 = x_lo;
    st.dx = dx;
    st.m = pkt.m;
    st.values.resize(n);
    for (size_t i = 0; i < n; ++i)
        st.values[i] = position_wavefunction(pkt, st.x_at(i), 0.0);
    const std::vector<double> v = sample_potential(spec, st.x0, st.dx, n);
    CrankNicolson cn(v, dx, prop.dt, pkt.m);
    FlushDenormalsGuard ftz;

    const double pad = params.region_pad_sigmas * sigma;
    const double mid_lo = ext.lo - pad;
    const double mid_hi = ext.hi + pad;

    // Propagate until the barrier region has drained.
    const long check_every = std::max(8L, std::lround(0.5 / prop.dt));
    double residual = 1.0;
    while (true) {
        for (long s = 0; s < check_every; ++s) {
            cn.step(st.values);
            st.t += prop.dt;
        }
        check_monitors(st, prop);
        residual = mass_between(st, mid_lo, mid_hi);
        if (st.t >= t_arrive + params.min_settle_time &&
            residual < params.residual_target)
            break;
        if (st.t > t_cap) {
            std::ostringstream os;
            os << "two_particle_outcomes: scattering incomplete (in-barrier "
                  "probability "
               << residual << " > " << params.residual_target << " at t = " << st.t
               << ")";
            throw std::runtime_error(os.str());
        }
    }

    const double snapshot_time = st.t;
    const double transmitted = mass_between(st, mid_hi, st.x_max());
    const double reflected = mass_between(st, st.x0, mid_lo);

    // Spectrum once; each delay only needs a fresh free advance of packet 1.
    const double band_half = 10.0 / sigma;
    const double ext_len = v_hi * t_max_delay + 12.0 * spread;
    const size_t n_pad = static_cast<size_t>(std::ceil(ext_len / dx));
    const size_t n_ext = n + 2 * n_pad;
    const double x0_ext = st.x0 - dx * n_pad;
    const double dp = M_PI / (dx * (n_ext + 1));
    const BandSpectrum spectrum =
        band_spectrum(st, pkt.p0, band_half, std::min(dp, band_half / 64.0));

    SampledWavefunction psi2;  // the later packet: snapshot, zero-padded
    psi2.x0 = x0_ext;
    psi2.dx = dx;
    psi2.values.assign(n_ext, C(0.0, 0.0));
    std::copy(st.values.begin(), st.values.end(), psi2.values.begin() + n_pad);

    const Interval r_trans{mid_hi, x0_ext + dx * (n_ext - 1)};
    const Interval r_refl{x0_ext, mid_lo};

    std::vector<OracleOutcome> out;
    out.reserve(delays.size());
    for (double T : delays) {
        const SampledWavefunction psi1 =
            reconstruct_after(spectrum, T, x0_ext, dx, n_ext);

        const double q_tt = quadrant_probability(psi1, psi2, r_trans, r_trans, kind);
        const double q_rr = quadrant_probability(psi1, psi2, r_refl, r_refl, kind);
        const double q_rt = quadrant_probability(psi1, psi2, r_trans, r_refl, kind) +
                            quadrant_probability(psi1, psi2, r_refl, r_trans, kind);

        OracleOutcome oc;
        oc.T = T;
        oc.snapshot_time = snapshot_time;
        oc.residual_mid_mass = residual;
        oc.transmitted_mass = transmitted;
        oc.reflected_mass = reflected;
        oc.raw_sum = q_tt + q_rt + q_rr;

        OutcomeStats stats;
        stats.kind = kind;
        stats.T = T;
        stats.P_TT = q_tt / oc.raw_sum;
        stats.P_RT = q_rt / oc.raw_sum;
        stats.P_RR = q_rr / oc.raw_sum;
        stats.PT = 0.5 * (2.0 * stats.P_TT + stats.P_RT);
        stats.PR = 1.0 - stats.PT;
        const double sign = kind == StatisticsKind::Fermionised ? 1.0 : -1.0;
        stats.deltaP = sign * (stats.PT * stats.PT - stats.P_TT);
        if (stats.deltaP < 0.0 && stats.deltaP > -1e-8) stats.deltaP = 0.0;
        oc.stats = stats;

        // Diagnostics: full-line and transmitted-region pair overlaps.
        {
            const size_t last = n_ext - 1;
            auto trapz = [&](size_t ia, size_t ib) {
                C i12(0.0, 0.0);
                double i11 = 0.0, i22 = 0.0;
                for (size_t i = ia; i <= ib; ++i) {
                    const double w = (i == ia || i == ib) ? 0.5 : 1.0;
                    i12 += w * std::conj(psi1.values[i]) * psi2.values[i];
                    i11 += w * std::norm(psi1.values[i]);
                    i22 += w * std::norm(psi2.values[i]);
                }
                return std::tuple<C, double, double>(i12 * dx, i11 * dx, i22 * dx);
            };
            const auto [c_full, n1, n2] = trapz(0, last);
            (void)n1;
            (void)n2;
            oc.full_overlap_sq = std::norm(c_full);
            const size_t ta =
                static_cast<size_t>(std::lround((mid_hi - x0_ext) / dx));
            const auto [i12_t, i11_t, i22_t] = trapz(ta, last);
            oc.exchange_ratio_tt =
                (i11_t > 0 && i22_t > 0) ? std::norm(i12_t) / (i11_t * i22_t) : 0.0;
        }
        out.push_back(oc);
    }
    return out;
}

OracleOutcome two_particle_outcomes(const GaussianPacket& pkt,
                                    const BarrierSpec& spec, double T,
                                    StatisticsKind kind,
                                    const OracleParams& params) {
    return two_particle_outcomes_sweep(pkt, spec, {T}, kind, params).front();
}

}  // namespace tunnelstat

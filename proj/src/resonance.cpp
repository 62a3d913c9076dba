#include "tunnelstat/resonance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace tunnelstat {

namespace {

constexpr double kBackgroundCutoff = 0.5;

// Golden-section maximisation on a bracketed peak.
double refine_peak(const std::function<double(double)>& f, double a, double b,
                   double rel_tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while ((b - a) > rel_tol * (std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Bisect f(E) = level between E_in (above) and E_out (below).
double crossing(const std::function<double(double)>& f, double e_in, double e_out,
                double level) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (e_in + e_out);
        if (f(mid) >= level)
            e_in = mid;
        else
            e_out = mid;
        if (std::abs(e_out - e_in) < 1e-14 * (std::abs(e_in) + 1.0)) break;
    }
    return 0.5 * (e_in + e_out);
}

// Weighted least squares of 1/T = a u^2 + b u + c with u = E - e0, the
// linearised Lorentzian in peak-centred coordinates; returns the refined
// (E0, Gamma) or false if the fit degenerates.
bool lorentz_fit(const std::function<double(double)>& f, double e0, double gam,
                 double* e_fit, double* g_fit) {
    const int n = 41;
    double s[5] = {0, 0, 0, 0, 0};  // sums of w u^k
    double r[3] = {0, 0, 0};        // sums of w y u^k, y = 1/T
    for (int i = 0; i < n; ++i) {
        const double u = gam * (-2.0 + 4.0 * i / (n - 1));
        const double t = f(e0 + u);
        if (!(t > 0.0)) continue;
        const double w = t * t;
        const double y = 1.0 / t;
        double uk = 1.0;
        for (int k = 0; k < 5; ++k) {
            s[k] += w * uk;
            if (k < 3) r[k] += w * y * uk;
            uk *= u;
        }
    }
    std::array<std::array<double, 4>, 3> aug = {{{s[0], s[1], s[2], r[0]},
                                                 {s[1], s[2], s[3], r[1]},
                                                 {s[2], s[3], s[4], r[2]}}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int i = col + 1; i < 3; ++i)
            if (std::abs(aug[i][col]) > std::abs(aug[piv][col])) piv = i;
        if (std::abs(aug[piv][col]) < 1e-300) return false;
        std::swap(aug[piv], aug[col]);
        for (int i = 0; i < 3; ++i) {
            if (i == col) continue;
            const double fac = aug[i][col] / aug[col][col];
            for (int j = col; j < 4; ++j) aug[i][j] -= fac * aug[col][j];
        }
    }
    const double c = aug[0][3] / aug[0][0];
    const double b = aug[1][3] / aug[1][1];
    const double a = aug[2][3] / aug[2][2];
    if (!(a > 0.0)) return false;
    const double u0 = -b / (2.0 * a);
    const double g2 = c / a - u0 * u0;
    if (!(g2 > 0.0)) return false;
    *e_fit = e0 + u0;
    *g_fit = std::sqrt(g2);
    return true;
}

}  // namespace

std::vector<Resonance> find_resonance_peaks(
    const std::function<double(double)>& t_of_e, double m, EnergyWindow window,
    int scan_points) {
    if (!(window.lo > 0.0) || !(window.hi > window.lo))
        throw std::invalid_argument("find_resonances: window must be positive");
    if (!(m > 0.0))
        throw std::invalid_argument("find_resonances: mass must be positive");
    if (scan_points < 16)
        throw std::invalid_argument("find_resonances: scan too coarse");

    std::vector<double> es(scan_points + 1), ts(scan_points + 1);
    for (int i = 0; i <= scan_points; ++i) {
        es[i] = window.lo + (window.hi - window.lo) * i / scan_points;
        ts[i] = t_of_e(es[i]);
    }

    std::vector<Resonance> out;
    for (int i = 1; i < scan_points; ++i) {
        if (!(ts[i] > ts[i - 1] && ts[i] >= ts[i + 1])) continue;
        const double e_peak = refine_peak(t_of_e, es[i - 1], es[i + 1], 1e-11);
        const double t_peak = t_of_e(e_peak);
        if (t_peak < kBackgroundCutoff) continue;  // background-dominated

        const double half = 0.5 * t_peak;
        // Walk outward on the scan grid to bracket the half-maximum crossings.
        int li = i;
        while (li > 0 && ts[li] >= half) --li;
        int ri = i;
        while (ri < scan_points && ts[ri] >= half) ++ri;
        if (ts[li] >= half || ts[ri] >= half) continue;  // wider than the window
        const double e_lo = crossing(t_of_e, e_peak, es[li], half);
        const double e_hi = crossing(t_of_e, e_peak, es[ri], half);
        double gamma = 0.5 * (e_hi - e_lo);

        double e_fit = e_peak, g_fit = gamma;
        if (lorentz_fit(t_of_e, e_peak, gamma, &e_fit, &g_fit) &&
            std::abs(e_fit - e_peak) < gamma) {
            gamma = g_fit;
        }

        Resonance res;
        res.E_r = e_peak;
        res.p_r = std::sqrt(2.0 * m * e_peak);
        res.Gamma = gamma;
        res.peak_transparency = t_peak;
        out.push_back(res);
    }
    std::sort(out.begin(), out.end(),
              [](const Resonance& a, const Resonance& b) { return a.E_r < b.E_r; });
    for (size_t i = 0; i < out.size(); ++i) out[i].n = static_cast<int>(i) + 1;
    return out;
}

std::vector<Resonance> find_resonances(const BarrierSpec& spec, double m,
                                       EnergyWindow window, int scan_points) {
    validate(spec);
    return find_resonance_peaks(
        [&](double e) { return transparency(spec, std::sqrt(2.0 * m * e), m); }, m,
        window, scan_points);
}

std::vector<double> resonance_refined_grid(double p_lo, double p_hi,
                                           int base_points,
                                           const std::vector<Resonance>& res,
                                           double m, double patch_density) {
    if (!(p_hi > p_lo) || base_points < 2 || !(patch_density > 0.0))
        throw std::invalid_argument("resonance_refined_grid: bad request");
    std::vector<double> g(base_points);
    for (int i = 0; i < base_points; ++i)
        g[i] = p_lo + (p_hi - p_lo) * i / (base_points - 1);
    for (const Resonance& r : res) {
        const double gp = r.Gamma * m / r.p_r;
        const double lo = std::max(p_lo, r.p_r - 12.0 * gp);
        const double hi = std::min(p_hi, r.p_r + 12.0 * gp);
        for (double p = lo; p <= hi; p += gp / patch_density) g.push_back(p);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double a, double b) { return b - a < 1e-13; }),
            g.end());
    return g;
}

double breit_wigner_transparency(const std::vector<Resonance>& resonances,
                                 double p, double m) {
    if (resonances.empty())
        throw std::invalid_argument("breit_wigner_transparency: empty list");
    const double e = p * p / (2.0 * m);
    double t = 0.0;
    for (const Resonance& r : resonances) {
        const double de = e - r.E_r;
        t += r.Gamma * r.Gamma / (de * de + r.Gamma * r.Gamma);
    }
    return t;
}

namespace {

// BW applicability: near-unity isolated peak, packet momentum spread well
// above the resonance width, negligible weight at the other resonances.
void gate_packet_resonance(const GaussianPacket& pkt, const Resonance& res,
                           std::ostringstream& diag, bool* ok) {

    const double gamma_p = res.Gamma * pkt.m / res.p_r;
    if (gamma_p * pkt.sigma > 0.2) {
        diag << "packet momentum spread not broad vs resonance (Gamma_p*sigma = "
             << gamma_p * pkt.sigma << "); ";
        *ok = false;
    }
    if (res.peak_transparency < 0.9) {
        diag << "peak transparency " << res.peak_transparency << " < 0.9; ";
        *ok = false;
    }
}

double bw_weight(const GaussianPacket& pkt, const Resonance& res) {
    const double a2 = momentum_density(pkt, res.p_r);
    return pkt.m * M_PI / res.p_r * a2 * res.Gamma;
}

}  // namespace

double single_resonance_pt(const GaussianPacket& pkt, const Resonance& res) {
    validate(pkt);
    return bw_weight(pkt, res);
}

BwPrediction single_resonance_ptt(const GaussianPacket& pkt, const Resonance& res,
                                  double T, const std::vector<Resonance>& others) {
    validate(pkt);
    if (T < 0.0) throw std::invalid_argument("single_resonance_ptt: T >= 0");
    std::ostringstream diag;
    bool ok = true;
    gate_packet_resonance(pkt, res, diag, &ok);
    const double own = bw_weight(pkt, res);
    for (const Resonance& o : others) {
        if (o.n == res.n && o.E_r == res.E_r) continue;
        if (bw_weight(pkt, o) > 1e-3 * own) {
            diag << "resonance n=" << o.n << " also probed (weight ratio "
                 << bw_weight(pkt, o) / own << "); ";
            ok = false;
        }
        if (std::abs(o.E_r - res.E_r) < 5.0 * (o.Gamma + res.Gamma)) {
            diag << "resonance n=" << o.n << " overlaps at the fit level; ";
            ok = false;
        }
    }
    const double pt = own;
    const double value = pt * pt * (1.0 - std::exp(-2.0 * res.Gamma * T));
    return {value, ok, diag.str()};
}

BwPrediction two_resonance_delta_p(const GaussianPacket& pkt, const Resonance& r1,
                                   const Resonance& r2, double T) {
    validate(pkt);
    if (T < 0.0) throw std::invalid_argument("two_resonance_delta_p: T >= 0");
    std::ostringstream diag;
    bool ok = true;
    gate_packet_resonance(pkt, r1, diag, &ok);
    gate_packet_resonance(pkt, r2, diag, &ok);
    if (std::abs(r2.E_r - r1.E_r) < 5.0 * (r1.Gamma + r2.Gamma)) {
        diag << "resonances overlap at the fit level; ";
        ok = false;
    }
    const double w1 = bw_weight(pkt, r1);
    const double w2 = bw_weight(pkt, r2);
    const double value =
        w1 * w1 * std::exp(-2.0 * r1.Gamma * T) +
        w2 * w2 * std::exp(-2.0 * r2.Gamma * T) +
        2.0 * w1 * w2 * std::exp(-(r1.Gamma + r2.Gamma) * T) *
            std::cos((r2.E_r - r1.E_r) * T);
    return {value, ok, diag.str()};
}

}  // namespace tunnelstat

#include "tunnelstat/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tunnelstat/wkb.hpp"

namespace tunnelstat {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace

void Dataset::add_meta(const std::string& key, double value) {
    meta.emplace_back(key, fmt(value));
}

void Dataset::add_meta(const std::string& key, const std::string& value) {
    meta.emplace_back(key, value);
}

std::string Dataset::to_csv() const {
    std::string out;
    for (const auto& [k, v] : meta) out += "# " + k + " = " + v + "\n";
    for (size_t c = 0; c < columns.size(); ++c) {
        out += columns[c];
        out += (c + 1 < columns.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::logic_error("Dataset: row width != header width");
        for (size_t c = 0; c < row.size(); ++c) {
            out += fmt(row[c]);
            out += (c + 1 < row.size()) ? ',' : '\n';
        }
    }
    return out;
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

DoubleDeltaStudy make_double_delta_study() {
    DoubleDeltaStudy st;
    st.barrier = DeltaComb{{0.0, 1.0}, {50.0, 50.0}};
    st.m = 1.0;
    st.resonances = find_resonances(st.barrier, st.m, {0.5, 25.0});
    if (st.resonances.size() < 2)
        throw std::runtime_error("double_delta_study: expected >= 2 resonances");
    const Resonance& r1 = st.resonances[0];
    const Resonance& r2 = st.resonances[1];

    // Narrow-band probe: sits on the first peak, momentum spread 1/sigma
    // far above Gamma_p yet far below the peak spacing.
    st.one_peak_packet = GaussianPacket{r1.p_r, 20.0, st.m, -110.0, 0.0};

    // Wide-band probe: weights the two peaks equally,
    // |A(p1)|^2 Gamma_1 / p1 = |A(p2)|^2 Gamma_2 / p2.
    const double sigma2 = 1.2;
    const double bias = std::log(r2.Gamma * r1.p_r / (r1.Gamma * r2.p_r));
    const double p0 = 0.5 * (r1.p_r + r2.p_r) -
                      bias / ((r2.p_r - r1.p_r) * sigma2 * sigma2);
    st.two_peak_packet = GaussianPacket{p0, sigma2, st.m, -20.0, 0.0};

    const double lo = std::min(st.two_peak_packet.p_lo(), st.one_peak_packet.p_lo());
    const double hi = std::max(st.two_peak_packet.p_hi(), st.one_peak_packet.p_hi());
    st.table = build_table(
        st.barrier, resonance_refined_grid(lo, hi, 4000, st.resonances, st.m),
        st.m);
    return st;
}

BroadBarrierStudy make_broad_barrier_study() {
    BroadBarrierStudy st;
    const double d = 1.0, p0 = 400.0, m = 1.0;
    const double V = p0 * p0 / m;  // p0^2 / 2mV = 0.5
    st.barrier = Rectangular{V, d, 0.0};
    st.m = m;
    st.packet = GaussianPacket{p0, 0.5 * d, m, -10.0, 0.0};
    st.table = build_table(
        st.barrier, linspace(st.packet.p_lo(), st.packet.p_hi(), 1201), m);
    return st;
}

}  // namespace

const DoubleDeltaStudy& double_delta_study() {
    static const DoubleDeltaStudy st = make_double_delta_study();
    return st;
}

const BroadBarrierStudy& broad_barrier_study() {
    static const BroadBarrierStudy st = make_broad_barrier_study();
    return st;
}

BarrierSpec reduced_opacity_barrier() {
    // k0 d = 15, so the one-way opacity 2 S0 is ~30 and the time-domain
    // pipeline still resolves the transmitted amplitude.
    return Rectangular{162.5, 1.0, 0.0};
}

GaussianPacket reduced_opacity_packet() {
    return GaussianPacket{10.0, 1.2, 1.0, -10.0, 0.0};
}

namespace {

Dataset figure2() {
    const DoubleDeltaStudy& st = double_delta_study();
    Dataset ds;
    ds.add_meta("figure", std::string("fig2"));
    ds.add_meta("barrier", describe(st.barrier));
    ds.add_meta("m", st.m);
    for (const Resonance& r : st.resonances) {
        ds.add_meta("E_r_" + std::to_string(r.n), r.E_r);
        ds.add_meta("Gamma_" + std::to_string(r.n), r.Gamma);
    }
    ds.add_meta("probe_one_p0", st.one_peak_packet.p0);
    ds.add_meta("probe_one_sigma", st.one_peak_packet.sigma);
    ds.add_meta("probe_two_p0", st.two_peak_packet.p0);
    ds.add_meta("probe_two_sigma", st.two_peak_packet.sigma);
    ds.columns = {"p", "transparency", "breit_wigner", "probe_one_res",
                  "probe_two_res"};

    std::vector<Resonance> first_two(st.resonances.begin(),
                                     st.resonances.begin() + 2);
    const double a1max = momentum_density(st.one_peak_packet,
                                          st.one_peak_packet.p0);
    const double a2max = momentum_density(st.two_peak_packet,
                                          st.two_peak_packet.p0);
    for (double p : linspace(2.0, 7.2, 1301)) {
        ds.rows.push_back({p, transparency(st.barrier, p, st.m),
                           breit_wigner_transparency(first_two, p, st.m),
                           momentum_density(st.one_peak_packet, p) / a1max,
                           momentum_density(st.two_peak_packet, p) / a2max});
    }
    return ds;
}

Dataset figure3a() {
    const DoubleDeltaStudy& st = double_delta_study();
    const Resonance& r1 = st.resonances[0];
    const GaussianPacket& pkt = st.one_peak_packet;

    const double pt_bw = single_resonance_pt(pkt, r1);
    const auto [pt, pr] = one_particle_probabilities(pkt, st.table);
    (void)pr;
    const double delta0 = exchange_term(pkt, st.table, 0.0);

    Dataset ds;
    ds.add_meta("figure", std::string("fig3a"));
    ds.add_meta("barrier", describe(st.barrier));
    ds.add_meta("p0", pkt.p0);
    ds.add_meta("sigma", pkt.sigma);
    ds.add_meta("Gamma1", r1.Gamma);
    ds.add_meta("PT", pt);
    ds.add_meta("PT_bw", pt_bw);
    ds.add_meta("deltaP0", delta0);
    ds.add_meta("deltaP0_over_PT2", delta0 / (pt * pt));
    ds.columns = {"T", "deltaP", "deltaP_bw", "deltaP_init"};

    // Plotted range: from full launch separation out to 2 Gamma T = 4.
    const double t_lo = 30.0;
    const double t_hi = 2.0 / r1.Gamma;
    for (double T : linspace(t_lo, t_hi, 64)) {
        const double dp = exchange_term(pkt, st.table, T);
        const double dbw = pt_bw * pt_bw * std::exp(-2.0 * r1.Gamma * T);
        ds.rows.push_back({T, dp, dbw, initial_overlap_decay(pkt, T)});
    }
    return ds;
}

Dataset figure3b() {
    const DoubleDeltaStudy& st = double_delta_study();
    const Resonance& r1 = st.resonances[0];
    const Resonance& r2 = st.resonances[1];
    const GaussianPacket& pkt = st.two_peak_packet;

    Dataset ds;
    ds.add_meta("figure", std::string("fig3b"));
    ds.add_meta("barrier", describe(st.barrier));
    ds.add_meta("p0", pkt.p0);
    ds.add_meta("sigma", pkt.sigma);
    ds.add_meta("Gamma1", r1.Gamma);
    ds.add_meta("Gamma2", r2.Gamma);
    ds.add_meta("oscillation_period", 2.0 * M_PI / (r2.E_r - r1.E_r));
    ds.columns = {"T", "deltaP", "deltaP_bw", "deltaP_init"};

    const double period = 2.0 * M_PI / (r2.E_r - r1.E_r);
    const double t_hi = 28.0 * period;
    const int n = 24 * 28 + 1;  // 24 samples per oscillation
    for (double T : linspace(period / 24.0, t_hi, n)) {
        const double dp = exchange_term(pkt, st.table, T);
        const auto bw = two_resonance_delta_p(pkt, r1, r2, T);
        ds.rows.push_back({T, dp, bw.value, initial_overlap_decay(pkt, T)});
    }
    return ds;
}

Dataset figure4a() {
    const BroadBarrierStudy& st = broad_barrier_study();
    const GaussianPacket& pkt = st.packet;
    const Rectangular& rect = std::get<Rectangular>(st.barrier);
    const ActionExpansion exp_ =
        action_expansion(rect.height, rect.width, pkt.p0, st.m, pkt.sigma);

    Dataset ds;
    ds.add_meta("figure", std::string("fig4a"));
    ds.add_meta("barrier", describe(st.barrier));
    ds.add_meta("p0", pkt.p0);
    ds.add_meta("sigma", pkt.sigma);
    ds.add_meta("S0", exp_.S0);
    ds.add_meta("S1", exp_.S1);
    ds.add_meta("S2", exp_.S2);
    ds.columns = {"p", "incident", "transmitted", "transmitted_model"};

    const std::vector<double> ps = linspace(pkt.p_lo(), pkt.p_hi(), 801);
    std::vector<double> inc(ps.size()), tr(ps.size()), model(ps.size());
    double tr_max = -1e308, model_max = -1e308, inc_max = 0.0;
    for (size_t i = 0; i < ps.size(); ++i) {
        const double p = ps[i];
        const double la = std::log(momentum_density(pkt, p));
        inc[i] = momentum_density(pkt, p);
        tr[i] = st.table.log_transparency_at(p) + la;
        const double u = p - pkt.p0;
        model[i] = -2.0 * (exp_.S0 + exp_.S1 * u + 0.5 * exp_.S2 * u * u) + la;
        inc_max = std::max(inc_max, inc[i]);
        tr_max = std::max(tr_max, tr[i]);
        model_max = std::max(model_max, model[i]);
    }
    for (size_t i = 0; i < ps.size(); ++i) {
        ds.rows.push_back({ps[i], inc[i] / inc_max, std::exp(tr[i] - tr_max),
                           std::exp(model[i] - model_max)});
    }
    return ds;
}

Dataset figure4b() {
    const BroadBarrierStudy& st = broad_barrier_study();
    const GaussianPacket& pkt = st.packet;
    const Rectangular& rect = std::get<Rectangular>(st.barrier);
    const ActionExpansion exp_ =
        action_expansion(rect.height, rect.width, pkt.p0, st.m, pkt.sigma);
    const double coeff = gaussian_decay_coefficient(exp_);

    Dataset ds;
    ds.add_meta("figure", std::string("fig4b"));
    ds.add_meta("barrier", describe(st.barrier));
    ds.add_meta("p0", pkt.p0);
    ds.add_meta("sigma", pkt.sigma);
    ds.add_meta("T0", exp_.T0);
    ds.add_meta("decay_coefficient", coeff);
    ds.columns = {"T", "T_over_T0", "deltaP_init", "deltaP_ratio", "ratio_model"};

    for (double u : linspace(0.0, 3.0, 61)) {
        const double T = u * exp_.T0;
        ds.rows.push_back({T, u, initial_overlap_decay(pkt, T),
                           exchange_ratio(pkt, st.table, T),
                           std::exp(-coeff * u * u)});
    }
    return ds;
}

}  // namespace

std::vector<std::string> figure_tags() {
    return {"fig2", "fig3a", "fig3b", "fig4a", "fig4b"};
}

Dataset run_figure(const std::string& tag) {
    if (tag == "fig2") return figure2();
    if (tag == "fig3a") return figure3a();
    if (tag == "fig3b") return figure3b();
    if (tag == "fig4a") return figure4a();
    if (tag == "fig4b") return figure4b();
    throw std::invalid_argument("run_figure: unknown tag '" + tag +
                                "' (expected fig2, fig3a, fig3b, fig4a, fig4b)");
}

}  // namespace tunnelstat

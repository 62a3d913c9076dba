#include "tunnelstat/config.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <thread>

#include "tunnelstat/wkb.hpp"

namespace tunnelstat {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

class KeyValues {
public:
    explicit KeyValues(const std::string& text) {
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": empty key");
            kv_[key] = trim(line.substr(eq + 1));
        }
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string str(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError("config: missing key '" + key + "'");
        return it->second;
    }

    std::string str_or(const std::string& key, const std::string& dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : it->second;
    }

    double num(const std::string& key) const { return to_num(key, str(key)); }

    double num_or(const std::string& key, double dflt) const {
        return has(key) ? num(key) : dflt;
    }

    std::vector<double> num_list(const std::string& key) const {
        std::vector<double> out;
        std::istringstream is(str(key));
        std::string item;
        while (std::getline(is, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            out.push_back(to_num(key, item));
        }
        if (out.empty()) throw ConfigError("config: '" + key + "' is empty");
        return out;
    }

private:
    static double to_num(const std::string& key, const std::string& v) {
        try {
            size_t used = 0;
            const double x = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw ConfigError("config: '" + key + "' is not a number: '" + v + "'");
        }
    }

    std::map<std::string, std::string> kv_;
};

BarrierSpec parse_barrier(const KeyValues& kv) {
    const std::string type = kv.str("barrier.type");
    if (type == "delta_comb" || type == "double_delta") {
        DeltaComb comb{kv.num_list("barrier.positions"),
                       kv.num_list("barrier.strengths")};
        BarrierSpec spec = comb;
        validate(spec);
        return spec;
    }
    if (type == "rectangular") {
        BarrierSpec spec = Rectangular{kv.num("barrier.height"),
                                       kv.num("barrier.width"),
                                       kv.num_or("barrier.left_edge", 0.0)};
        validate(spec);
        return spec;
    }
    if (type == "piecewise") {
        BarrierSpec spec = PiecewiseConstant{kv.num_list("barrier.breakpoints"),
                                             kv.num_list("barrier.heights")};
        validate(spec);
        return spec;
    }
    throw ConfigError("config: barrier.type '" + type +
                      "' not one of delta_comb, rectangular, piecewise");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    const KeyValues kv(text);
    RunConfig cfg;
    try {
        cfg.barrier = parse_barrier(kv);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: barrier.*: ") + e.what());
    }

    cfg.packet.p0 = kv.num("packet.p0");
    cfg.packet.sigma = kv.num("packet.sigma");
    cfg.packet.m = kv.num_or("packet.m", 1.0);
    cfg.packet.x0 = kv.num_or("packet.x0", 0.0);
    try {
        validate(cfg.packet);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: packet.*: ") + e.what());
    }

    cfg.T_min = kv.num_or("sweep.T_min", 0.0);
    cfg.T_max = kv.num_or("sweep.T_max", cfg.T_min);
    cfg.T_count = static_cast<int>(kv.num_or("sweep.count", 1));
    if (cfg.T_count < 1) throw ConfigError("config: sweep.count must be >= 1");
    if (cfg.T_min < 0.0) throw ConfigError("config: sweep.T_min must be >= 0");
    if (cfg.T_max < cfg.T_min)
        throw ConfigError("config: sweep.T_max must be >= sweep.T_min");

    const std::string kind = kv.str_or("statistics.kind", "fermionised");
    if (kind == "fermionised" || kind == "fermionized")
        cfg.kind = StatisticsKind::Fermionised;
    else if (kind == "boson")
        cfg.kind = StatisticsKind::Boson;
    else
        throw ConfigError("config: statistics.kind '" + kind +
                          "' not one of fermionised, boson");

    cfg.mode = kv.str_or("mode", "exact");
    if (cfg.mode != "exact" && cfg.mode != "breit-wigner" && cfg.mode != "wkb" &&
        cfg.mode != "oracle")
        throw ConfigError("config: mode '" + cfg.mode +
                          "' not one of exact, breit-wigner, wkb, oracle");

    cfg.output_path = kv.str_or("output.path", "");
    if (kv.has("window.E_lo") || kv.has("window.E_hi")) {
        cfg.window = {kv.num("window.E_lo"), kv.num("window.E_hi")};
        if (!(cfg.window.lo > 0.0) || !(cfg.window.hi > cfg.window.lo))
            throw ConfigError("config: window.E_lo/E_hi must be 0 < lo < hi");
        cfg.has_window = true;
    }

    cfg.oracle.points_per_wavelength =
        kv.num_or("oracle.points_per_wavelength", cfg.oracle.points_per_wavelength);
    cfg.oracle.dt_phase = kv.num_or("oracle.dt_phase", cfg.oracle.dt_phase);
    cfg.oracle.residual_target =
        kv.num_or("oracle.residual_target", cfg.oracle.residual_target);
    cfg.oracle.min_settle_time =
        kv.num_or("oracle.min_settle_time", cfg.oracle.min_settle_time);
    cfg.oracle.max_settle_time =
        kv.num_or("oracle.max_settle_time", cfg.oracle.max_settle_time);
    cfg.oracle.refine = kv.num_or("oracle.refine", cfg.oracle.refine);

    // Mode-specific requirements checked before any computation starts.
    if (cfg.mode == "wkb") {
        if (!std::holds_alternative<Rectangular>(cfg.barrier))
            throw ConfigError("config: mode wkb requires a rectangular barrier");
        const auto& r = std::get<Rectangular>(cfg.barrier);
        if (cfg.packet.p0 * cfg.packet.p0 >= 2.0 * cfg.packet.m * r.height)
            throw ConfigError("config: mode wkb requires p0^2 < 2 m V");
    }
    if (cfg.mode == "oracle" &&
        !(cfg.packet.x0 + 5.0 * cfg.packet.sigma <
          std::visit([](const auto& s) {
              using T = std::decay_t<decltype(s)>;
              if constexpr (std::is_same_v<T, DeltaComb>) return s.positions.front();
              else if constexpr (std::is_same_v<T, Rectangular>) return s.left_edge;
              else return s.breakpoints.front();
          }, cfg.barrier)))
        throw ConfigError("config: mode oracle requires packet.x0 + 5 sigma left of the barrier");

    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

std::vector<double> sweep_times(const RunConfig& cfg) {
    std::vector<double> ts(cfg.T_count);
    for (int i = 0; i < cfg.T_count; ++i)
        ts[i] = cfg.T_count == 1
                    ? cfg.T_min
                    : cfg.T_min + (cfg.T_max - cfg.T_min) * i / (cfg.T_count - 1);
    return ts;
}

AmplitudeTable table_for(const RunConfig& cfg,
                         std::vector<Resonance>* resonances_out) {
    const GaussianPacket& pkt = cfg.packet;
    const double lo = pkt.p_lo(), hi = pkt.p_hi();
    // Resonances inside the packet band need a locally refined grid.
    EnergyWindow w{lo * lo / (2.0 * pkt.m), hi * hi / (2.0 * pkt.m)};
    std::vector<Resonance> res;
    if (w.hi > w.lo * (1.0 + 1e-12))
        res = find_resonances(cfg.barrier, pkt.m, w);
    if (resonances_out) *resonances_out = res;

    return build_table(cfg.barrier,
                       resonance_refined_grid(lo, hi, 3001, res, pkt.m), pkt.m);
}

void assert_row_identities(const OutcomeStats& st) {
    const double sum = st.P_TT + st.P_RT + st.P_RR;
    if (std::abs(sum - 1.0) > 1e-10)
        throw InvariantViolation("row at T = " + std::to_string(st.T) +
                                 ": outcome sum deviates by " +
                                 std::to_string(sum - 1.0));
    const double mean_n = mean_transmitted_number(st);
    if (std::abs(mean_n - 2.0 * st.PT) > 1e-10)
        throw InvariantViolation("row at T = " + std::to_string(st.T) +
                                 ": <n> != 2 PT");
}

template <typename F>
std::vector<std::vector<double>> parallel_rows(const std::vector<double>& ts,
                                               F&& row_of) {
    const unsigned workers =
        std::min<unsigned>(8, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::vector<double>> rows(ts.size());
    std::vector<std::future<void>> fs;
    std::atomic<size_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        fs.push_back(std::async(std::launch::async, [&]() {
            for (size_t i = next.fetch_add(1); i < ts.size();
                 i = next.fetch_add(1))
                rows[i] = row_of(ts[i]);
        }));
    }
    for (auto& f : fs) f.get();
    return rows;
}

}  // namespace

Dataset run_sweep(const RunConfig& cfg) {
    std::vector<Resonance> res;
    const AmplitudeTable table = table_for(cfg, &res);
    const auto [pt, pr] = one_particle_probabilities(cfg.packet, table);
    (void)pr;

    Dataset ds;
    ds.add_meta("command", std::string("sweep"));
    ds.add_meta("mode", cfg.mode);
    ds.add_meta("barrier", describe(cfg.barrier));
    ds.add_meta("packet.p0", cfg.packet.p0);
    ds.add_meta("packet.sigma", cfg.packet.sigma);
    ds.add_meta("packet.m", cfg.packet.m);
    ds.add_meta("packet.x0", cfg.packet.x0);
    ds.add_meta("statistics.kind",
                std::string(cfg.kind == StatisticsKind::Fermionised ? "fermionised"
                                                                    : "boson"));
    ds.add_meta("PT", pt);
    ds.columns = {"T", "PT", "deltaP", "P_TT", "P_RT", "P_RR", "mean_n"};

    const std::vector<double> ts = sweep_times(cfg);

    if (cfg.mode == "oracle") {
        ds.columns.insert(ds.columns.end(),
                          {"oracle_P_TT", "oracle_P_RT", "oracle_P_RR"});
        const auto outcomes =
            two_particle_outcomes_sweep(cfg.packet, cfg.barrier, ts, cfg.kind,
                                        cfg.oracle);
        for (size_t i = 0; i < ts.size(); ++i) {
            const double dp = exchange_term(cfg.packet, table, ts[i]);
            const OutcomeStats st = outcome_probabilities(pt, dp, cfg.kind, ts[i]);
            assert_row_identities(st);
            ds.rows.push_back({st.T, st.PT, st.deltaP, st.P_TT, st.P_RT, st.P_RR,
                               mean_transmitted_number(st),
                               outcomes[i].stats.P_TT, outcomes[i].stats.P_RT,
                               outcomes[i].stats.P_RR});
        }
        return ds;
    }

    const bool bw_mode = cfg.mode == "breit-wigner";
    const bool wkb_mode = cfg.mode == "wkb";
    if (bw_mode) {
        if (res.empty())
            throw ConfigError(
                "mode breit-wigner: no resonances inside the packet band");
        ds.columns.push_back("deltaP_bw");
        ds.columns.push_back("P_TT_bw");
    }
    ActionExpansion wkb_exp{};
    double wkb_coeff = 0.0;
    if (wkb_mode) {
        const auto& r = std::get<Rectangular>(cfg.barrier);
        wkb_exp = action_expansion(r.height, r.width, cfg.packet.p0, cfg.packet.m,
                                   cfg.packet.sigma);
        wkb_coeff = gaussian_decay_coefficient(wkb_exp);
        ds.columns.push_back("deltaP_ratio");
        ds.columns.push_back("ratio_model");
    }

    const double pt_cap = pt;
    auto row_of = [&](double T) {
        const double dp = exchange_term(cfg.packet, table, T);
        const OutcomeStats st = outcome_probabilities(pt_cap, dp, cfg.kind, T);
        std::vector<double> row = {st.T,   st.PT,   st.deltaP,
                                   st.P_TT, st.P_RT, st.P_RR,
                                   mean_transmitted_number(st)};
        if (bw_mode) {
            double dbw;
            if (res.size() >= 2) {
                dbw = two_resonance_delta_p(cfg.packet, res[0], res[1], T).value;
            } else {
                const double w1 = single_resonance_pt(cfg.packet, res[0]);
                dbw = w1 * w1 * std::exp(-2.0 * res[0].Gamma * T);
            }
            row.push_back(dbw);
            row.push_back(std::max(0.0, pt_cap * pt_cap - dbw));
        }
        if (wkb_mode) {
            const double u = T / wkb_exp.T0;
            row.push_back(exchange_ratio(cfg.packet, table, T));
            row.push_back(std::exp(-wkb_coeff * u * u));
        }
        return row;
    };
    ds.rows = parallel_rows(ts, row_of);
    for (const auto& row : ds.rows) {
        OutcomeStats st;
        st.T = row[0];
        st.PT = row[1];
        st.P_TT = row[3];
        st.P_RT = row[4];
        st.P_RR = row[5];
        assert_row_identities(st);
    }
    return ds;
}

Dataset run_resonances(const RunConfig& cfg) {
    EnergyWindow w = cfg.window;
    if (!cfg.has_window) {
        const double lo = cfg.packet.p_lo(), hi = cfg.packet.p_hi();
        w = {lo * lo / (2.0 * cfg.packet.m), hi * hi / (2.0 * cfg.packet.m)};
    }
    const auto res = find_resonances(cfg.barrier, cfg.packet.m, w);
    Dataset ds;
    ds.add_meta("command", std::string("resonances"));
    ds.add_meta("barrier", describe(cfg.barrier));
    ds.add_meta("E_lo", w.lo);
    ds.add_meta("E_hi", w.hi);
    ds.columns = {"n", "E_r", "p_r", "Gamma", "peak_transparency"};
    for (const Resonance& r : res)
        ds.rows.push_back({static_cast<double>(r.n), r.E_r, r.p_r, r.Gamma,
                           r.peak_transparency});
    return ds;
}

Dataset run_oracle_check(const RunConfig& cfg) {
    const AmplitudeTable table = table_for(cfg, nullptr);
    const auto [pt, pr] = one_particle_probabilities(cfg.packet, table);
    (void)pr;
    const std::vector<double> ts = sweep_times(cfg);
    const auto oracle =
        two_particle_outcomes_sweep(cfg.packet, cfg.barrier, ts, cfg.kind,
                                    cfg.oracle);

    Dataset ds;
    ds.add_meta("command", std::string("oracle-check"));
    ds.add_meta("barrier", describe(cfg.barrier));
    ds.add_meta("packet.p0", cfg.packet.p0);
    ds.add_meta("packet.sigma", cfg.packet.sigma);
    ds.add_meta("PT_pipeline", pt);
    ds.add_meta("snapshot_time", oracle.front().snapshot_time);
    ds.add_meta("residual_mid_mass", oracle.front().residual_mid_mass);
    ds.columns = {"T",           "P_TT",        "P_RT",        "P_RR",
                  "oracle_P_TT", "oracle_P_RT", "oracle_P_RR", "max_abs_diff"};
    double worst = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
        const double dp = exchange_term(cfg.packet, table, ts[i]);
        const OutcomeStats st = outcome_probabilities(pt, dp, cfg.kind, ts[i]);
        const OutcomeStats& oc = oracle[i].stats;
        const double diff = std::max({std::abs(st.P_TT - oc.P_TT),
                                      std::abs(st.P_RT - oc.P_RT),
                                      std::abs(st.P_RR - oc.P_RR)});
        worst = std::max(worst, diff);
        ds.rows.push_back({ts[i], st.P_TT, st.P_RT, st.P_RR, oc.P_TT, oc.P_RT,
                           oc.P_RR, diff});
    }
    ds.add_meta("max_abs_diff", worst);
    return ds;
}

}  // namespace tunnelstat

#include "tunnelstat/scattering.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tunnelstat {

namespace {

struct Mat2 {
    Complex a, b, c, d;  // [[a, b], [c, d]]
};

Mat2 mul(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

// Unified event list: delta kicks at breakpoints, constant segments between.
struct Profile {
    std::vector<double> x;
    std::vector<double> delta_strength;  // Omega at each breakpoint (0 if none)
    std::vector<double> height;          // V on each segment (size x.size()-1)
};

Profile profile_of(const BarrierSpec& spec) {
    Profile pr;
    std::visit(
        [&pr](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DeltaComb>) {
                pr.x = s.positions;
                pr.delta_strength = s.strengths;
                pr.height.assign(pr.x.size() - 1, 0.0);
            } else if constexpr (std::is_same_v<T, Rectangular>) {
                pr.x = {s.left_edge, s.left_edge + s.width};
                pr.delta_strength = {0.0, 0.0};
                pr.height = {s.height};
            } else {
                pr.x = s.breakpoints;
                pr.delta_strength.assign(pr.x.size(), 0.0);
                pr.height = s.heights;
            }
        },
        spec);
    return pr;
}

// Transfer matrix of one constant segment in the (psi, psi') basis with the
// growth factor e^{chi} (chi = Im(k d) >= 0) scaled out. Entire in k^2, so
// the propagating/evanescent switch is seamless, including k = 0 exactly.
void apply_segment(Mat2& m, double& chi, double k2, double d) {
    const Complex k = std::sqrt(Complex(k2, 0.0));  // Im k >= 0
    const Complex theta = k * d;
    const double seg_chi = theta.imag();
    const double re = theta.real();

    const Complex e_plus = std::exp(Complex(-2.0 * seg_chi, re));   // e^{i theta - chi}
    const Complex e_minus = std::exp(Complex(0.0, -re));            // e^{-i theta - chi}
    const Complex cos_s = 0.5 * (e_plus + e_minus);
    const Complex sin_s = (e_plus - e_minus) / Complex(0.0, 2.0);

    Complex sinc_s;  // e^{-chi} sin(theta)/theta
    if (std::abs(theta) < 1e-5) {
        const Complex t2 = theta * theta;
        sinc_s = (1.0 - t2 / 6.0 + t2 * t2 / 120.0) * std::exp(-seg_chi);
    } else {
        sinc_s = sin_s / theta;
    }
    const Complex b = d * sinc_s;          // e^{-chi} sin(theta)/k
    const Complex c = -k2 * b;             // -e^{-chi} k sin(theta)

    m = mul(Mat2{cos_s, b, c, cos_s}, m);
    chi += seg_chi;
}

void apply_delta(Mat2& m, double g) {
    if (g == 0.0) return;
    // [[1, 0], [g, 1]] * m
    m.c += g * m.a;
    m.d += g * m.b;
}

}  // namespace

ScatterResult scatter(const BarrierSpec& spec, double p, double m) {
    validate(spec);
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("scatter: momentum must be positive");
    if (!(m > 0.0) || !std::isfinite(m))
        throw std::invalid_argument("scatter: mass must be positive");

    const Profile pr = profile_of(spec);
    const size_t n = pr.x.size();

    Mat2 mat{1.0, 0.0, 0.0, 1.0};
    double chi = 0.0;
    for (size_t j = 0; j < n; ++j) {
        apply_delta(mat, 2.0 * m * pr.delta_strength[j]);
        if (j + 1 < n)
            apply_segment(mat, chi, p * p - 2.0 * m * pr.height[j],
                          pr.x[j + 1] - pr.x[j]);
    }

    // Convert to the plane-wave basis at the outer edges.
    const Complex i_unit(0.0, 1.0);
    const Complex w21 = 0.5 * (mat.a - mat.d + i_unit * (p * mat.b + mat.c / p));
    const Complex w22 = 0.5 * (mat.a + mat.d + i_unit * (mat.c / p - p * mat.b));

    const double span = pr.x.back() - pr.x.front();
    const Complex bt = std::exp(-chi) * std::exp(Complex(0.0, -p * span)) / w22;
    const Complex br = -(w21 / w22) * std::exp(Complex(0.0, 2.0 * p * pr.x.front()));
    const double log_t = -2.0 * chi - 2.0 * std::log(std::abs(w22));

    const double flux = std::norm(bt) + std::norm(br);
    if (std::abs(flux - 1.0) > kFluxTolerance) {
        std::ostringstream os;
        os << "scatter: flux conservation lost (|BT|^2+|BR|^2-1 = " << flux - 1.0
           << " at p = " << p << ", " << describe(spec) << ")";
        throw std::runtime_error(os.str());
    }
    return {AmplitudePair{bt, br}, log_t};
}

AmplitudePair amplitudes(const BarrierSpec& spec, double p, double m) {
    return scatter(spec, p, m).amp;
}

double transparency(const BarrierSpec& spec, double p, double m) {
    return std::exp(scatter(spec, p, m).log_transparency);
}

double log_transparency(const BarrierSpec& spec, double p, double m) {
    return scatter(spec, p, m).log_transparency;
}

AmplitudeTable::AmplitudeTable(std::vector<double> p_grid,
                               std::vector<AmplitudePair> pairs,
                               std::vector<double> log_t, double mass)
    : p_(std::move(p_grid)), pairs_(std::move(pairs)), log_t_(std::move(log_t)),
      mass_(mass) {
    if (p_.size() != pairs_.size() || p_.size() != log_t_.size())
        throw std::invalid_argument("AmplitudeTable: column lengths differ");
    for (size_t i = 0; i < p_.size(); ++i) {
        if (!(p_[i] > 0.0))
            throw std::invalid_argument("AmplitudeTable: momenta must be positive");
        if (i > 0 && !(p_[i] > p_[i - 1]))
            throw std::invalid_argument("AmplitudeTable: grid not strictly ascending");
    }
    build_interpolants();
}

void AmplitudeTable::build_interpolants() {
    if (p_.size() < 2) return;
    std::vector<double> t(p_.size());
    for (size_t i = 0; i < p_.size(); ++i) t[i] = std::norm(pairs_[i].BT);
    // Below the double underflow threshold the sampled |BT|^2 is 0; the log
    // column still carries the value, so interpolate that too.
    for (size_t i = 0; i < p_.size(); ++i)
        if (log_t_[i] > -700.0) t[i] = std::exp(log_t_[i]);
    t_interp_ = Pchip(p_, t);
    finite_log_ = true;
    for (double lt : log_t_)
        if (!std::isfinite(lt)) finite_log_ = false;
    if (finite_log_) log_interp_ = Pchip(p_, log_t_);
}

double AmplitudeTable::transparency_at(double p) const {
    if (p_.size() < 2) throw std::out_of_range("AmplitudeTable: too few samples");
    return t_interp_(p);
}

double AmplitudeTable::log_transparency_at(double p) const {
    if (p_.size() < 2) throw std::out_of_range("AmplitudeTable: too few samples");
    if (!finite_log_)
        throw std::runtime_error(
            "AmplitudeTable: log-transparency undefined (exact zeros present)");
    return log_interp_(p);
}

AmplitudeTable AmplitudeTable::fully_transparent(std::vector<double> p_grid,
                                                 double mass) {
    std::vector<AmplitudePair> pairs(p_grid.size(), AmplitudePair{1.0, 0.0});
    std::vector<double> log_t(p_grid.size(), 0.0);
    return AmplitudeTable(std::move(p_grid), std::move(pairs), std::move(log_t), mass);
}

AmplitudeTable AmplitudeTable::fully_opaque(std::vector<double> p_grid, double mass) {
    std::vector<AmplitudePair> pairs(p_grid.size(), AmplitudePair{0.0, 1.0});
    std::vector<double> log_t(p_grid.size(),
                              -std::numeric_limits<double>::infinity());
    return AmplitudeTable(std::move(p_grid), std::move(pairs), std::move(log_t), mass);
}

AmplitudeTable AmplitudeTable::from_transparency(std::vector<double> p_grid,
                                                 const std::vector<double>& t,
                                                 double mass) {
    if (t.size() != p_grid.size())
        throw std::invalid_argument("from_transparency: length mismatch");
    std::vector<AmplitudePair> pairs(t.size());
    std::vector<double> log_t(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] >= 0.0) || t[i] > 1.0)
            throw std::invalid_argument("from_transparency: values must be in [0,1]");
        pairs[i] = {std::sqrt(t[i]), std::sqrt(1.0 - t[i])};
        log_t[i] = std::log(t[i]);
    }
    return AmplitudeTable(std::move(p_grid), std::move(pairs), std::move(log_t), mass);
}

AmplitudeTable build_table(const BarrierSpec& spec, const std::vector<double>& p_grid,
                           double m) {
    std::vector<AmplitudePair> pairs;
    std::vector<double> log_t;
    pairs.reserve(p_grid.size());
    log_t.reserve(p_grid.size());
    for (size_t i = 0; i < p_grid.size(); ++i) {
        try {
            ScatterResult r = scatter(spec, p_grid[i], m);
            pairs.push_back(r.amp);
            log_t.push_back(r.log_transparency);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << "build_table: grid index " << i << " (p = " << p_grid[i]
               << "): " << e.what();
            throw std::runtime_error(os.str());
        }
    }
    return AmplitudeTable(p_grid, std::move(pairs), std::move(log_t), m);
}

}  // namespace tunnelstat

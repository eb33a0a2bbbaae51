#include "rfsir/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "rfsir/errors.hpp"

namespace rfsir {

FrequencyGrid::FrequencyGrid(std::vector<double> pts) : points_hz(std::move(pts)) {
    validate();
}

FrequencyGrid FrequencyGrid::linspace(double start_hz, double stop_hz, double step_hz) {
    if (step_hz <= 0) throw validation_error("grid step must be > 0");
    if (stop_hz <= start_hz) throw validation_error("grid stop must exceed start");
    auto n = static_cast<std::size_t>(std::floor((stop_hz - start_hz) / step_hz + 0.5));
    std::vector<double> pts(n + 1);
    for (std::size_t i = 0; i <= n; ++i) pts[i] = start_hz + static_cast<double>(i) * step_hz;
    if (pts.back() > stop_hz + step_hz * 0.5) pts.pop_back();
    return FrequencyGrid(std::move(pts));
}

void FrequencyGrid::validate() const {
    if (points_hz.empty()) throw validation_error("frequency grid is empty");
    double prev = 0;
    for (double f : points_hz) {
        if (!(f > 0)) throw validation_error("frequency grid values must be > 0");
        if (f <= prev) throw validation_error("frequency grid must be strictly increasing");
        prev = f;
    }
}

void TwoPortSweep::validate() const {
    grid.validate();
    const std::size_t n = grid.size();
    if (s11.size() != n || s21.size() != n || s12.size() != n || s22.size() != n)
        throw validation_error("sweep parameter arrays must match the grid length");
    if (!(z_ref_ohm > 0)) throw validation_error("reference impedance must be > 0");
}

void BandSpec::validate() const {
    if (!(f_lo_hz > 0) || !(f_hi_hz > f_lo_hz))
        throw validation_error("band requires 0 < f_lo < f_hi");
    if (stop_lo_hz > f_lo_hz || stop_hi_hz < f_hi_hz)
        throw validation_error("stopband windows must not overlap the passband");
}

double magnitude_db(cplx s) {
    const double m = std::abs(s);
    if (m == 0.0) return kNegInfDb;
    return 20.0 * std::log10(m);
}

namespace {

// dB of |S21| / |S11| per grid point.
std::vector<double> db_trace(const std::vector<cplx>& s) {
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = magnitude_db(s[i]);
    return out;
}

std::size_t lower_index(const std::vector<double>& f, double x) {
    auto it = std::upper_bound(f.begin(), f.end(), x);
    if (it == f.begin()) return 0;
    return static_cast<std::size_t>(it - f.begin()) - 1;
}

// Linear interpolation of a dB trace at frequency x (x inside the grid span).
double interp_db(const std::vector<double>& f, const std::vector<double>& v, double x) {
    std::size_t i = lower_index(f, x);
    if (i + 1 >= f.size()) return v.back();
    if (x <= f[i]) return v[i];
    const double t = (x - f[i]) / (f[i + 1] - f[i]);
    if (std::isinf(v[i]) || std::isinf(v[i + 1])) return t < 1.0 ? v[i] : v[i + 1];
    return v[i] + t * (v[i + 1] - v[i]);
}

// Frequency where the segment (f1,v1)-(f2,v2) crosses `level`. An infinite
// endpoint pins the crossing to the finite side's neighbor (a hard
// brick-wall transition has zero width).
double crossing(double f1, double v1, double f2, double v2, double level) {
    if (std::isinf(v2)) return f2;
    if (std::isinf(v1)) return f1;
    if (v2 == v1) return f2;
    return f1 + (level - v1) / (v2 - v1) * (f2 - f1);
}

// Walk from start_idx in `dir` until the trace drops to `level` or below;
// returns the interpolated crossing frequency.
std::optional<double> find_crossing(const std::vector<double>& f, const std::vector<double>& v,
                                    std::size_t start_idx, int dir, double level) {
    std::size_t i = start_idx;
    while (true) {
        if (dir > 0 && i + 1 >= f.size()) return std::nullopt;
        if (dir < 0 && i == 0) return std::nullopt;
        const std::size_t j = dir > 0 ? i + 1 : i - 1;
        if (v[j] <= level && v[i] > level)
            return crossing(f[i], v[i], f[j], v[j], level);
        if (v[j] <= level) return f[j];
        i = j;
    }
}

} // namespace

PassbandMetrics passband_metrics(const TwoPortSweep& sweep, const BandSpec& band,
                                 double rejection_threshold_db) {
    sweep.validate();
    band.validate();
    if (!(rejection_threshold_db < -3.0))
        throw validation_error("rejection threshold must be below -3 dB");

    const auto& f = sweep.grid.points_hz;
    if (band.f_lo_hz < f.front() || band.f_hi_hz > f.back())
        throw range_error("band edges lie outside the sweep grid span");
    if (band.stop_lo_hz < f.front() || band.stop_hi_hz > f.back())
        throw range_error("stopband edges lie outside the sweep grid span");

    const auto d21 = db_trace(sweep.s21);
    const auto d11 = db_trace(sweep.s11);

    PassbandMetrics m;
    // In-band extrema over the grid samples plus interpolated values at the
    // exact band edges.
    double il_best = interp_db(f, d21, band.f_lo_hz);
    double il_worst = il_best;
    double rl_worst = interp_db(f, d11, band.f_lo_hz);
    std::size_t best_idx = lower_index(f, band.f_lo_hz);
    {
        const double e21 = interp_db(f, d21, band.f_hi_hz);
        il_best = std::max(il_best, e21);
        il_worst = std::min(il_worst, e21);
        rl_worst = std::max(rl_worst, interp_db(f, d11, band.f_hi_hz));
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < band.f_lo_hz || f[i] > band.f_hi_hz) continue;
        if (d21[i] > il_best) { il_best = d21[i]; best_idx = i; }
        il_worst = std::min(il_worst, d21[i]);
        rl_worst = std::max(rl_worst, d11[i]);
    }
    m.il_best_db = il_best;
    m.il_worst_db = il_worst;
    m.rl_worst_db = rl_worst;

    // Rejection floor over the stopband windows (including the window edges).
    double rej = kNegInfDb;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] <= band.stop_lo_hz || f[i] >= band.stop_hi_hz) rej = std::max(rej, d21[i]);
    rej = std::max(rej, interp_db(f, d21, band.stop_lo_hz));
    rej = std::max(rej, interp_db(f, d21, band.stop_hi_hz));
    m.rejection_floor_db = rej;

    // Roll-off per side: from the -3 dB point (relative to il_best) out to the
    // rejection-threshold crossing, walking away from the best in-band sample.
    const double edge_level = il_best - 3.0;
    for (int dir : {-1, +1}) {
        auto f_edge = find_crossing(f, d21, best_idx, dir, edge_level);
        std::optional<double> roll;
        if (f_edge) {
            auto f_thr = find_crossing(f, d21, best_idx, dir, rejection_threshold_db);
            if (f_thr) roll = std::abs(*f_thr - *f_edge);
        }
        if (dir < 0) m.rolloff_lower_hz = roll;
        else m.rolloff_upper_hz = roll;
    }
    return m;
}

std::optional<double> rolloff_from_band_edge(const TwoPortSweep& sweep, const BandSpec& band,
                                             double threshold_db, Side side) {
    sweep.validate();
    band.validate();
    const auto& f = sweep.grid.points_hz;
    if (band.f_lo_hz < f.front() || band.f_hi_hz > f.back())
        throw range_error("band edges lie outside the sweep grid span");
    const auto d21 = db_trace(sweep.s21);
    const double start_f = side == Side::Lower ? band.f_lo_hz : band.f_hi_hz;
    const int dir = side == Side::Lower ? -1 : +1;
    std::size_t idx = lower_index(f, start_f);
    if (dir > 0 && f[idx] < start_f && idx + 1 < f.size()) ++idx;
    auto f_thr = find_crossing(f, d21, idx, dir, threshold_db);
    if (!f_thr) return std::nullopt;
    return std::abs(*f_thr - start_f);
}

} // namespace rfsir

#include "rfsir/sir.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "rfsir/errors.hpp"
#include "rfsir/network.hpp"

namespace rfsir {

void FoldSpec::validate() const {
    if (n_bends < 0 || n_bends % 2 != 0)
        throw validation_error("fold bend count must be even and >= 0");
    if (!(min_gap_m > 0)) throw validation_error("fold min_gap must be > 0");
    if (bend_allowance_m < 0) throw validation_error("bend allowance must be >= 0");
}

void SirGeometry::validate() const {
    if (!(z_low_ohm > 0) || !(z_high_ohm > 0))
        throw validation_error("section impedances must be > 0");
    if (!(len_low_m > 0) || !(len_high_m > 0))
        throw validation_error("section lengths must be > 0");
    if (!(w_low_m > 0) || !(w_high_m > 0))
        throw validation_error("section widths must be > 0");
    if (!(eps_eff_low >= 1) || !(eps_eff_high >= 1))
        throw validation_error("effective permittivities must be >= 1");
    if (!(k_ratio > 0)) throw validation_error("impedance ratio must be > 0");
    if (std::abs(k_ratio * z_high_ohm - z_low_ohm) > 1e-6 * z_low_ohm)
        throw validation_error("k_ratio must equal z_low/z_high");
    fold.validate();
}

namespace {

struct Angles {
    double c1, c2; // theta per Hz for the two sections
};

Angles angle_rates(const SirGeometry& g) {
    return {2.0 * M_PI * std::sqrt(g.eps_eff_low) * g.len_low_m / kSpeedOfLight,
            2.0 * M_PI * std::sqrt(g.eps_eff_high) * g.len_high_m / kSpeedOfLight};
}

} // namespace

std::vector<double> resonance_spectrum(const SirGeometry& g, double f_max_hz, int scan_points) {
    g.validate();
    if (!(f_max_hz > 0)) throw validation_error("f_max must be > 0");
    if (scan_points < 10) throw validation_error("scan_points too small");

    const auto [c1, c2] = angle_rates(g);
    const double K = g.k_ratio;
    const auto odd_family = [&](double f) {
        const double t1 = c1 * f, t2 = c2 * f;
        return std::sin(t1) * std::sin(t2) - K * std::cos(t1) * std::cos(t2);
    };
    const auto even_family = [&](double f) {
        const double t1 = c1 * f, t2 = c2 * f;
        return K * std::cos(t1) * std::sin(t2) + std::sin(t1) * std::cos(t2);
    };

    std::vector<double> roots;
    const double step = f_max_hz / static_cast<double>(scan_points);
    for (const auto& fn : {std::function<double(double)>(odd_family),
                           std::function<double(double)>(even_family)}) {
        double f_prev = step * 1e-6; // skip the trivial f = 0 zero of the even family
        double v_prev = fn(f_prev);
        for (int i = 1; i <= scan_points; ++i) {
            const double f_cur = step * i;
            const double v_cur = fn(f_cur);
            if (v_prev == 0.0) roots.push_back(f_prev);
            else if (v_prev * v_cur < 0) {
                double lo = f_prev, hi = f_cur, v_lo = v_prev;
                while (hi - lo > 1.0) {
                    const double mid = 0.5 * (lo + hi);
                    const double v_mid = fn(mid);
                    if (v_mid == 0.0) { lo = hi = mid; break; }
                    if (v_lo * v_mid < 0) hi = mid;
                    else { lo = mid; v_lo = v_mid; }
                }
                roots.push_back(0.5 * (lo + hi));
            }
            f_prev = f_cur;
            v_prev = v_cur;
        }
        if (v_prev == 0.0) roots.push_back(f_prev);
    }
    std::sort(roots.begin(), roots.end());
    // Collapse near-duplicates (coincident roots of the two families).
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || r - out.back() > 2.0) out.push_back(r);
    return out;
}

SirGeometry design_sir(double f0_hz, double k_ratio, double w_low_m, double w_high_m,
                       const SubstrateSpec& sub, double split, const FoldSpec& fold) {
    if (!(f0_hz > 0)) throw validation_error("f0 must be > 0");
    if (!(k_ratio > 0)) throw validation_error("k_ratio must be > 0");
    if (!(split > 0) || !(split < 1)) throw validation_error("split must lie in (0, 1)");
    fold.validate();

    const LineParams low = analyze_line(w_low_m, sub);
    const LineParams high = analyze_line(w_high_m, sub);
    const double K = low.z0_ohm / high.z0_ohm;
    if (std::abs(K - k_ratio) > 0.25 * k_ratio) {
        std::ostringstream os;
        os << "k_ratio " << k_ratio << " inconsistent with width-derived z_low/z_high = " << K;
        throw validation_error(os.str());
    }

    // Smallest theta_t with tan(split*t)*tan((1-split)*t) = K; the product is
    // strictly increasing from 0 and diverges when either angle reaches pi/2.
    const double t_upper = M_PI_2 / std::max(split, 1.0 - split);
    double lo = 1e-9, hi = t_upper * (1.0 - 1e-12);
    const auto fval = [&](double t) {
        return std::tan(split * t) * std::tan((1.0 - split) * t) - K;
    };
    if (fval(hi) < 0) throw validation_error("no resonance solution below the section limits");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * t_upper; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (fval(mid) < 0) lo = mid;
        else hi = mid;
    }
    const double theta_t = 0.5 * (lo + hi);
    const double theta1 = split * theta_t;
    const double theta2 = (1.0 - split) * theta_t;

    SirGeometry g;
    g.z_low_ohm = low.z0_ohm;
    g.z_high_ohm = high.z0_ohm;
    g.w_low_m = w_low_m;
    g.w_high_m = w_high_m;
    g.eps_eff_low = low.eps_eff;
    g.eps_eff_high = high.eps_eff;
    g.k_ratio = K;
    g.len_low_m = theta1 * kSpeedOfLight / (2.0 * M_PI * f0_hz * std::sqrt(low.eps_eff));
    g.len_high_m = theta2 * kSpeedOfLight / (2.0 * M_PI * f0_hz * std::sqrt(high.eps_eff));
    g.fold = fold;
    g.validate();
    return g;
}

Footprint fold_layout(const SirGeometry& g, const FoldSpec& fold, int n_resonators,
                      const std::vector<double>& gaps_m) {
    g.validate();
    fold.validate();
    if (n_resonators < 1) throw validation_error("need at least one resonator");
    if (gaps_m.size() != static_cast<std::size_t>(n_resonators - 1))
        throw validation_error("need exactly n_resonators-1 gaps");
    for (double s : gaps_m)
        if (s < fold.min_gap_m)
            throw validation_error("inter-resonator gap below the minimum clearance");

    const int arms = fold.n_bends + 1;
    const double arm_len = 2.0 * g.len_high_m / arms;

    double span; // occupied extent of one resonator along the array
    if (fold.n_bends > 0) {
        const double arm_clearance = 2.0 * fold.bend_allowance_m - g.w_high_m;
        if (arm_clearance < fold.min_gap_m) {
            std::ostringstream os;
            os << "folded arm clearance " << arm_clearance << " m below min gap " << fold.min_gap_m
               << " m (resonators 1-" << n_resonators << " share this geometry)";
            throw layout_error(os.str());
        }
        span = std::max(g.w_low_m,
                        fold.n_bends * 2.0 * fold.bend_allowance_m + g.w_high_m);
    } else {
        span = std::max(g.w_low_m, g.w_high_m);
    }

    Footprint fp;
    fp.width_m = 2.0 * g.len_low_m + arm_len + fold.n_bends * fold.bend_allowance_m;
    fp.length_m = n_resonators * span + 2.0 * g.len_low_m; // feed pads at both ends
    for (double s : gaps_m) fp.length_m += s;
    return fp;
}

} // namespace rfsir

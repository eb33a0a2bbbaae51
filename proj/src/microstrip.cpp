#include "rfsir/microstrip.hpp"

#include <cmath>
#include <sstream>

#include "rfsir/errors.hpp"
#include "rfsir/network.hpp"

namespace rfsir {

void SubstrateSpec::validate() const {
    if (!(eps_r >= 1)) throw validation_error("substrate eps_r must be >= 1");
    if (!(h_m > 0)) throw validation_error("substrate thickness must be > 0");
    if (tan_delta < 0) throw validation_error("tan_delta must be >= 0");
    if (t_cond_m < 0) throw validation_error("conductor thickness must be >= 0");
    if (rs_cond_ohm < 0) throw validation_error("surface resistance must be >= 0");
    if (!(f_rs_hz > 0)) throw validation_error("surface-resistance reference frequency must be > 0");
}

namespace {

// Hammerstad-Jensen closed forms in u = w/h.
double hj_a(double u) {
    const double u4 = u * u * u * u;
    return 1.0 + std::log((u4 + std::pow(u / 52.0, 2)) / (u4 + 0.432)) / 49.0 +
           std::log(1.0 + std::pow(u / 18.1, 3)) / 18.7;
}

double hj_b(double eps_r) {
    return 0.564 * std::pow((eps_r - 0.9) / (eps_r + 3.0), 0.053);
}

double hj_eps_eff(double u, double eps_r) {
    return (eps_r + 1.0) / 2.0 +
           (eps_r - 1.0) / 2.0 * std::pow(1.0 + 10.0 / u, -hj_a(u) * hj_b(eps_r));
}

// Air-filled impedance Z01(u); divide by sqrt(eps_eff) for the line impedance.
double hj_z01(double u) {
    const double fu = 6.0 + (2.0 * M_PI - 6.0) * std::exp(-std::pow(30.666 / u, 0.7528));
    return kFreeSpaceImpedance / (2.0 * M_PI) *
           std::log(fu / u + std::sqrt(1.0 + std::pow(2.0 / u, 2)));
}

// Classical strip-thickness increment to the effective width.
double thickness_increment(double w, double t, double h) {
    if (t <= 0) return 0;
    if (w / h >= 1.0 / (2.0 * M_PI))
        return t / M_PI * (1.0 + std::log(2.0 * h / t));
    return t / M_PI * (1.0 + std::log(4.0 * M_PI * w / t));
}

} // namespace

LineParams analyze_line(double w_m, const SubstrateSpec& sub) {
    sub.validate();
    if (!(w_m > 0)) throw validation_error("strip width must be > 0");
    double w_eff = w_m;
    if (sub.thickness_correction)
        w_eff += thickness_increment(w_m, sub.t_cond_m, sub.h_m);
    const double u = w_eff / sub.h_m;
    const double eps_eff = hj_eps_eff(u, sub.eps_r);
    LineParams lp;
    lp.w_m = w_m;
    lp.eps_eff = eps_eff;
    lp.z0_ohm = hj_z01(u) / std::sqrt(eps_eff);
    return lp;
}

double synthesize_width(double z0_target_ohm, const SubstrateSpec& sub) {
    sub.validate();
    if (!(z0_target_ohm > 0)) throw validation_error("target impedance must be > 0");
    const double u_min = 0.01, u_max = 100.0;
    double lo = u_min * sub.h_m, hi = u_max * sub.h_m;
    const double z_at_min_w = analyze_line(lo, sub).z0_ohm; // widest impedance range end
    const double z_at_max_w = analyze_line(hi, sub).z0_ohm;
    if (z0_target_ohm > z_at_min_w || z0_target_ohm < z_at_max_w) {
        std::ostringstream os;
        os << "target Z0 " << z0_target_ohm << " ohm not achievable; range on this substrate is ["
           << z_at_max_w << ", " << z_at_min_w << "] ohm for w/h in [" << u_min << ", " << u_max
           << "]";
        throw validation_error(os.str());
    }
    // Z0(w) is strictly decreasing; bisect to well past the 0.1% contract.
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (analyze_line(mid, sub).z0_ohm > z0_target_ohm) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double unloaded_q(const LineParams& line, const SubstrateSpec& sub, double f_hz) {
    sub.validate();
    if (!(f_hz > 0)) throw validation_error("frequency must be > 0");
    if (sub.rs_cond_ohm == 0 && sub.tan_delta == 0) return kInfiniteQ;

    double inv_q = 0;
    if (sub.tan_delta > 0) inv_q += sub.tan_delta; // 1/Qd
    if (sub.rs_cond_ohm > 0) {
        const double expo = sub.superconducting ? 2.0 : 0.5;
        const double rs = sub.rs_cond_ohm * std::pow(f_hz / sub.f_rs_hz, expo);
        const double alpha_c = rs / (line.z0_ohm * line.w_m); // Np/m
        const double beta = 2.0 * M_PI * f_hz * std::sqrt(line.eps_eff) / kSpeedOfLight;
        inv_q += 2.0 * alpha_c / beta; // 1/Qc
    }
    return 1.0 / inv_q;
}

} // namespace rfsir

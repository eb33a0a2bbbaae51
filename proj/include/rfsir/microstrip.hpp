#pragma once

#include <limits>

#include "rfsir/network.hpp"

namespace rfsir {

// Substrate + metallization description. rs_cond_ohm is the conductor surface
// resistance at reference frequency f_rs_hz; `superconducting` selects the
// frequency scaling law for Rs (f^2 two-fluid vs. f^0.5 skin effect).
// Loss parameters are calibrated estimates supplied by config profiles.
struct SubstrateSpec {
    double eps_r = 1.0;
    double h_m = 0;
    double tan_delta = 0;
    double t_cond_m = 0;
    double rs_cond_ohm = 0;
    double f_rs_hz = 1e9;
    bool superconducting = false;
    // Off by default (zero-thickness strip); enables the classical
    // effective-width increment w + (t/pi)*(1 + ln(2h/t)).
    bool thickness_correction = false;

    void validate() const;
};

struct LineParams {
    double z0_ohm = 0;
    double eps_eff = 1.0;
    double w_m = 0;
};

// Quasi-static characteristic impedance and effective permittivity of a
// microstrip of width w on the given substrate (Hammerstad-Jensen closed
// forms, zero-thickness strip unless the correction flag is set).
LineParams analyze_line(double w_m, const SubstrateSpec& sub);

// Invert analyze_line by bisection on the monotone Z0(w) curve over
// w/h in [0.01, 100]; result matches the target within 0.1%. Unreachable
// targets raise a validation error naming the achievable range.
double synthesize_width(double z0_target_ohm, const SubstrateSpec& sub);

// Unloaded resonator quality factor from conductor + dielectric loss:
//   Qd = 1/tan_delta
//   Qc = beta/(2*alpha_c),  alpha_c = Rs(f)/(Z0*w) in Np/m (physical strip
//        width; zero-thickness current sheet), beta = 2*pi*f*sqrt(eps_eff)/c
//   Rs(f) = rs_cond*(f/f_rs)^2 (superconducting) or ^(1/2) (normal metal)
//   Qu = 1/(1/Qc + 1/Qd); lossless inputs return +infinity.
double unloaded_q(const LineParams& line, const SubstrateSpec& sub, double f_hz);


} // namespace rfsir

#pragma once

#include <vector>

#include "rfsir/microstrip.hpp"

namespace rfsir {

// Meander fold description for one resonator. Adjacent folded arms are joined
// by hairpin turns of mean radius bend_allowance_m, so the arm center pitch is
// 2*bend_allowance_m and the clearance between arm edges must stay >= min_gap_m.
struct FoldSpec {
    int n_bends = 4;             // even; 0 = straight resonator
    double min_gap_m = 2e-4;
    double bend_allowance_m = 0; // hairpin mean radius; also added per bend to the height

    void validate() const;
};

// One symmetric stepped-impedance resonator: a wide low-impedance section of
// length len_low_m at each end and a thin high-impedance middle section of
// full length 2*len_high_m. len_high_m is the HALF middle-section length, so
// theta1/theta2 computed from len_low_m/len_high_m are the quarter-structure
// electrical angles entering the resonance conditions. k_ratio = z_low/z_high
// (< 1 for the capacitive-ends topology of interest; > 1 permitted for
// analysis of the opposite stepping).
struct SirGeometry {
    double z_low_ohm = 0;
    double len_low_m = 0;
    double w_low_m = 0;
    double z_high_ohm = 0;
    double len_high_m = 0;   // half of the middle section
    double w_high_m = 0;
    double eps_eff_low = 1;
    double eps_eff_high = 1;
    double k_ratio = 0;      // z_low/z_high
    FoldSpec fold;

    void validate() const;
};

struct Footprint {
    double length_m = 0;
    double width_m = 0;
};

// All resonance frequencies in (0, f_max]. Both symmetric-mode families of
// the stepped resonator are scanned in cleared trigonometric form (no tangent
// poles):
//   odd  (electric wall):  sin t1 sin t2 - K cos t1 cos t2 = 0   [tan t1 tan t2 = K]
//   even (magnetic wall):  K cos t1 sin t2 + sin t1 cos t2 = 0
// with t1 = 2*pi*f*sqrt(eps_eff_low)*len_low/c, t2 likewise for the high
// section. Roots located by sign-change scan over `scan_points` intervals and
// bisection to 1 Hz. The uniform limit (K = 1, equal sections) yields the
// integer harmonic ladder of a half-wave resonator.
std::vector<double> resonance_spectrum(const SirGeometry& g, double f_max_hz,
                                       int scan_points = 100000);

// Size a resonator for fundamental f0: analyze both strip widths, take the
// actual ratio K = z_low/z_high, solve the smallest theta_t with
// tan(split*theta_t)*tan((1-split)*theta_t) = K by bisection, and convert the
// two electrical angles to physical lengths at f0. The k_ratio argument is the
// caller's intent and is checked against the width-derived K (rejected when
// they disagree by more than 25%, which indicates an inconsistent config).
SirGeometry design_sir(double f0_hz, double k_ratio, double w_low_m, double w_high_m,
                       const SubstrateSpec& sub, double split, const FoldSpec& fold = {});

// Footprint of n_resonators folded resonators placed side by side with the
// given inter-resonator gaps (n_resonators-1 entries, each >= fold.min_gap_m).
// Transverse dimension (width): 2*len_low + 2*len_high/(n_bends+1)
//   + n_bends*bend_allowance. Along the array each resonator occupies
// max(w_low, (n_bends)*2*bend_allowance + w_high); total length adds the gaps
// and one len_low feed pad per end. Fold clearance (2*bend_allowance - w_high
// >= min_gap) is validated; violations raise a layout error.
Footprint fold_layout(const SirGeometry& g, const FoldSpec& fold, int n_resonators,
                      const std::vector<double>& gaps_m);

} // namespace rfsir

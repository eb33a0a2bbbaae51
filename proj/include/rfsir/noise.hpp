#pragma once

#include <utility>
#include <vector>

#include "rfsir/network.hpp"

namespace rfsir {

inline constexpr double kBoltzmann = 1.380649e-23; // J/K
inline constexpr double kT0 = 290.0;               // K, noise reference

// One receiver-chain element: an amplifier (gain + NF) or a matched
// attenuator (loss + its physical temperature).
struct CascadeStage {
    enum class Kind { Active, Passive };
    Kind kind = Kind::Active;
    double gain_db = 0;   // active
    double nf_db = 0;     // active
    double loss_db = 0;   // passive, >= 0
    double t_phys_k = kT0; // passive

    static CascadeStage active(double gain_db, double nf_db);
    static CascadeStage passive(double loss_db, double t_phys_k);
    void validate() const;
};

struct NoiseResult {
    double nf_db = 0;
    double factor = 1;  // 10^(nf_db/10)
    double te_k = 0;    // (factor-1)*290
};

// F = 10^(NF/10).
double nf_to_factor(double nf_db);

// Matched attenuator at physical temperature T: L = 10^(loss/10), gain = 1/L,
// F = 1 + (L-1)*(T/290). At T = 290 K this reduces to F = L; as T -> 0 the
// stage adds no noise.
struct PassiveFactor {
    double factor;
    double gain;
};
PassiveFactor passive_stage_factor(double loss_db, double t_phys_k);

// Cascaded noise figure: F = F1 + sum_i (F_i - 1)/prod_{j<i} G_j.
NoiseResult cascade_nf(const std::vector<CascadeStage>& stages);

// Frequency-dependent cascade: the filter's |S21| at each grid point becomes a
// passive stage (loss = -20 log10|S21|, clamped at 0) at filter_t_phys_k,
// followed by the downstream stages. |S21| above 1 (beyond 1e-9 numerical
// slack) is rejected as an active filter. Out of band the NF rises with the
// filter rejection.
std::vector<std::pair<double, double>> cascade_nf_sweep(const TwoPortSweep& filter_sweep,
                                                        double filter_t_phys_k,
                                                        const std::vector<CascadeStage>& downstream);

// Monostatic maximum-range parameters; snr_min and g_antenna in linear units.
struct RadarParams {
    double pt_w = 0;
    double g_antenna = 0;
    double lambda_m = 0;
    double sigma_m2 = 0;
    double b_hz = 0;
    double t0_k = kT0;
    double snr_min = 0;
    double f = 1; // linear noise factor
    double k_boltzmann = kBoltzmann;

    void validate() const;
};

// R_max = (Pt G^2 lambda^2 sigma / ((4 pi)^3 k T0 B F SNR_min))^(1/4).
double radar_max_range(const RadarParams& p);

// (F_old/F_new)^(1/4): range gained by lowering the receiver noise figure.
double range_improvement(double nf_old_db, double nf_new_db);

} // namespace rfsir

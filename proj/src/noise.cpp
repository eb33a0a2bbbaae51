#include "rfsir/noise.hpp"

#include <cmath>

#include "rfsir/errors.hpp"

namespace rfsir {

CascadeStage CascadeStage::active(double gain_db, double nf_db) {
    CascadeStage s;
    s.kind = Kind::Active;
    s.gain_db = gain_db;
    s.nf_db = nf_db;
    s.validate();
    return s;
}

CascadeStage CascadeStage::passive(double loss_db, double t_phys_k) {
    CascadeStage s;
    s.kind = Kind::Passive;
    s.loss_db = loss_db;
    s.t_phys_k = t_phys_k;
    s.validate();
    return s;
}

void CascadeStage::validate() const {
    if (kind == Kind::Active) {
        if (!std::isfinite(gain_db) || !std::isfinite(nf_db))
            throw validation_error("active stage gain and NF must be finite");
    } else {
        if (!(loss_db >= 0)) throw validation_error("passive stage loss must be >= 0");
        if (!(t_phys_k > 0)) throw validation_error("passive stage temperature must be > 0");
    }
}

double nf_to_factor(double nf_db) { return std::pow(10.0, nf_db / 10.0); }

PassiveFactor passive_stage_factor(double loss_db, double t_phys_k) {
    if (!(loss_db >= 0)) throw validation_error("passive loss must be >= 0");
    if (!(t_phys_k > 0)) throw validation_error("physical temperature must be > 0");
    const double loss = std::pow(10.0, loss_db / 10.0);
    return {1.0 + (loss - 1.0) * (t_phys_k / kT0), 1.0 / loss};
}

NoiseResult cascade_nf(const std::vector<CascadeStage>& stages) {
    if (stages.empty()) throw validation_error("cascade needs at least one stage");
    double f_total = 0;
    double gain_product = 1.0;
    bool first = true;
    for (const auto& st : stages) {
        st.validate();
        double f, g;
        if (st.kind == CascadeStage::Kind::Active) {
            f = nf_to_factor(st.nf_db);
            g = std::pow(10.0, st.gain_db / 10.0);
        } else {
            const auto pf = passive_stage_factor(st.loss_db, st.t_phys_k);
            f = pf.factor;
            g = pf.gain;
        }
        if (first) {
            f_total = f;
            first = false;
        } else {
            f_total += (f - 1.0) / gain_product;
        }
        gain_product *= g;
    }
    NoiseResult r;
    r.factor = f_total;
    r.nf_db = 10.0 * std::log10(f_total);
    r.te_k = (f_total - 1.0) * kT0;
    return r;
}

std::vector<std::pair<double, double>> cascade_nf_sweep(const TwoPortSweep& filter_sweep,
                                                        double filter_t_phys_k,
                                                        const std::vector<CascadeStage>& downstream) {
    filter_sweep.validate();
    if (!(filter_t_phys_k > 0)) throw validation_error("filter temperature must be > 0");

    std::vector<std::pair<double, double>> out;
    out.reserve(filter_sweep.grid.size());
    std::vector<CascadeStage> stages;
    stages.reserve(downstream.size() + 1);
    for (std::size_t i = 0; i < filter_sweep.grid.size(); ++i) {
        const double mag = std::abs(filter_sweep.s21[i]);
        if (mag > 1.0 + 1e-9)
            throw validation_error("filter sweep has |S21| > 1; cascade model requires a passive filter");
        const double loss_db = mag > 0 ? std::max(0.0, -20.0 * std::log10(mag))
                                       : 600.0; // numeric stand-in for a transmission zero
        stages.clear();
        stages.push_back(CascadeStage::passive(loss_db, filter_t_phys_k));
        stages.insert(stages.end(), downstream.begin(), downstream.end());
        out.emplace_back(filter_sweep.grid.points_hz[i], cascade_nf(stages).nf_db);
    }
    return out;
}

void RadarParams::validate() const {
    const double vals[] = {pt_w, g_antenna, lambda_m, sigma_m2, b_hz, t0_k, snr_min, f, k_boltzmann};
    for (double v : vals)
        if (!(v > 0)) throw validation_error("radar parameters must all be > 0");
}

double radar_max_range(const RadarParams& p) {
    p.validate();
    const double four_pi = 4.0 * M_PI;
    const double numer = p.pt_w * p.g_antenna * p.g_antenna * p.lambda_m * p.lambda_m * p.sigma_m2;
    const double denom = four_pi * four_pi * four_pi * p.k_boltzmann * p.t0_k * p.b_hz * p.f * p.snr_min;
    return std::pow(numer / denom, 0.25);
}

double range_improvement(double nf_old_db, double nf_new_db) {
    return std::pow(10.0, (nf_old_db - nf_new_db) / 40.0);
}

} // namespace rfsir

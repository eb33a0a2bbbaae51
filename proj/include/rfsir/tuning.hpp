#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rfsir/filter.hpp"
#include "rfsir/network.hpp"

namespace rfsir {

// Exponential gap-to-coupling surrogate k(s) = k0*exp(-s/s0), calibrated from
// sampled (gap, coupling) pairs in place of field-solver extraction.
struct CouplingModel {
    double k0 = 0;
    double s0_m = 0;

    void validate() const;
};

// Targets for the tuner. dB thresholds use the plotting sign convention:
// max_il_db = -0.5 means in-band |S21| must stay above -0.5 dB. Violations are
// squared and weighted into a hinge objective. The response used by the
// objective is evaluated on a grid spanning [band.stop_lo, band.stop_hi] with
// the given step.
struct TuneSpec {
    BandSpec band;
    double max_il_db = 0;
    double min_rl_db = 0;
    double min_rejection_db = 0;
    double weight_il = 1;
    double weight_rl = 1;
    double weight_rejection = 1;
    double objective_grid_step_hz = 1e6;

    void validate() const;
};

// Final state of a tuning run. variables holds the design vector (see tune());
// trace holds the best-so-far objective after every evaluation (monotone
// non-increasing by construction).
struct TuneResult {
    std::vector<double> variables;
    double residual = 0;
    int iterations = 0; // objective evaluations used
    bool converged = false;
    std::vector<double> trace;
};

// Least-squares fit of k(s) = k0*exp(-s/s0) in log space. Requires >= 2
// samples with distinct gaps and positive k; two samples give the exact
// interpolant. Non-decaying data (fitted s0 <= 0) is rejected.
CouplingModel calibrate_coupling(const std::vector<std::pair<double, double>>& samples);

double gap_to_coupling(double s_m, const CouplingModel& model);

// Inverse of gap_to_coupling; requires 0 < k <= k0.
double coupling_to_gap(double k, const CouplingModel& model);

// Nelder-Mead minimization of the weighted hinge objective
//   w_il*max(0, max_il - il_worst)^2 + w_rl*max(0, rl_worst - min_rl)^2
//     + w_rej*max(0, rejection_floor - min_rejection)^2
// over the design vector. Layout: the first n-1 entries are coupling gaps in
// m (mapped through the model); an optional further n entries are
// per-resonator detune offsets in Hz. Deterministic: the initial simplex
// offsets each coordinate by 5% of its value (fallback 5e-5 m for gaps,
// 5e4 Hz for detunes), equal-objective vertices rank by construction order,
// and the trace does not depend on evaluation scheduling. Converged when the
// objective drops below 1e-8 or the per-coordinate relative simplex diameter
// falls below 1e-6; a spent budget returns the best-so-far with
// converged = false (not an error).
TuneResult tune(const std::vector<double>& initial, const TuneSpec& spec,
                const CouplingModel& model, const FilterPlan& plan_template,
                int budget);

} // namespace rfsir

#include "rfsir/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rfsir/errors.hpp"

namespace rfsir {

void CouplingModel::validate() const {
    if (!(k0 > 0)) throw validation_error("coupling model k0 must be > 0");
    if (!(s0_m > 0)) throw validation_error("coupling model s0 must be > 0");
}

void TuneSpec::validate() const {
    band.validate();
    if (!std::isfinite(max_il_db) || !std::isfinite(min_rl_db) || !std::isfinite(min_rejection_db))
        throw validation_error("tune thresholds must be finite");
    if (weight_il < 0 || weight_rl < 0 || weight_rejection < 0)
        throw validation_error("tune weights must be >= 0");
    if (!(objective_grid_step_hz > 0))
        throw validation_error("objective grid step must be > 0");
}

CouplingModel calibrate_coupling(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 2)
        throw validation_error("coupling calibration needs at least 2 samples");
    for (const auto& [s, k] : samples) {
        if (!(k > 0)) throw validation_error("coupling samples must have k > 0");
        if (s < 0) throw validation_error("coupling samples must have gap >= 0");
    }
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            if (samples[i].first == samples[j].first)
                throw validation_error("coupling samples must have distinct gaps");

    // ln k = ln k0 - s/s0: ordinary least squares on (s, ln k).
    const double n = static_cast<double>(samples.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [s, k] : samples) {
        const double y = std::log(k);
        sx += s;
        sy += y;
        sxx += s * s;
        sxy += s * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    if (!(slope < 0))
        throw validation_error("coupling samples do not decay with gap; cannot fit k0*exp(-s/s0)");
    CouplingModel m;
    m.k0 = std::exp(intercept);
    m.s0_m = -1.0 / slope;
    m.validate();
    return m;
}

double gap_to_coupling(double s_m, const CouplingModel& model) {
    model.validate();
    if (s_m < 0) throw validation_error("gap must be >= 0");
    return model.k0 * std::exp(-s_m / model.s0_m);
}

double coupling_to_gap(double k, const CouplingModel& model) {
    model.validate();
    if (!(k > 0) || k > model.k0)
        throw validation_error("coupling must lie in (0, k0] to invert the gap model");
    return -model.s0_m * std::log(k / model.k0);
}

namespace {

struct Vertex {
    double obj;
    int age; // construction order; earlier ranks first on ties
    std::vector<double> x;
};

} // namespace

TuneResult tune(const std::vector<double>& initial, const TuneSpec& spec,
                const CouplingModel& model, const FilterPlan& plan_template, int budget) {
    spec.validate();
    model.validate();
    plan_template.validate();
    if (budget < 1) throw validation_error("tune budget must be >= 1");

    const int n_res = plan_template.proto.n;
    const std::size_t n_gaps = static_cast<std::size_t>(n_res) - 1;
    const bool with_detunes = initial.size() == n_gaps + static_cast<std::size_t>(n_res);
    if (!with_detunes && initial.size() != n_gaps)
        throw validation_error("design vector must hold n-1 gaps, optionally followed by n detunes");

    const FrequencyGrid obj_grid = FrequencyGrid::linspace(
        spec.band.stop_lo_hz, spec.band.stop_hi_hz, spec.objective_grid_step_hz);
    // The grid's last point may fall short of stop_hi when the step does not
    // divide the span; evaluate the stopband out to the realized grid edge.
    BandSpec band_eff = spec.band;
    band_eff.stop_lo_hz = std::max(band_eff.stop_lo_hz, obj_grid.front());
    band_eff.stop_hi_hz = std::min(band_eff.stop_hi_hz, obj_grid.back());
    band_eff.validate();

    const auto objective = [&](const std::vector<double>& x) {
        FilterPlan plan = plan_template;
        for (std::size_t i = 0; i < n_gaps; ++i)
            plan.k_adj[i] = model.k0 * std::exp(-x[i] / model.s0_m);
        if (with_detunes)
            plan.detune_hz.assign(x.begin() + static_cast<std::ptrdiff_t>(n_gaps), x.end());
        const TwoPortSweep sw = frequency_response(plan, obj_grid);
        // Roll-off is not part of the objective; any valid threshold works here.
        const PassbandMetrics m = passband_metrics(sw, band_eff, -60.0);
        const double v_il = std::max(0.0, spec.max_il_db - m.il_worst_db);
        const double v_rl = std::max(0.0, m.rl_worst_db - spec.min_rl_db);
        const double v_rej = std::isinf(m.rejection_floor_db)
                                 ? 0.0
                                 : std::max(0.0, m.rejection_floor_db - spec.min_rejection_db);
        return spec.weight_il * v_il * v_il + spec.weight_rl * v_rl * v_rl +
               spec.weight_rejection * v_rej * v_rej;
    };

    TuneResult res;
    double best_so_far = std::numeric_limits<double>::infinity();
    int evals = 0;
    const auto evaluate = [&](const std::vector<double>& x) {
        const double v = objective(x);
        ++evals;
        best_so_far = std::min(best_so_far, v);
        res.trace.push_back(best_so_far);
        return v;
    };
    const auto finish = [&](const Vertex& best, bool converged) {
        res.variables = best.x;
        res.residual = best.obj;
        res.iterations = evals;
        res.converged = converged;
        return res;
    };

    std::vector<Vertex> verts;
    int age = 0;
    verts.push_back({evaluate(initial), age++, initial});
    if (verts[0].obj < 1e-8) return finish(verts[0], true);

    const std::size_t dim = initial.size();
    for (std::size_t i = 0; i < dim && evals < budget; ++i) {
        std::vector<double> xi = initial;
        double step = 0.05 * std::abs(xi[i]);
        if (step == 0.0) step = i < n_gaps ? 5e-5 : 5e4;
        xi[i] += step;
        verts.push_back({evaluate(xi), age++, xi});
    }

    const auto order = [](const Vertex& a, const Vertex& b) {
        return a.obj != b.obj ? a.obj < b.obj : a.age < b.age;
    };

    while (true) {
        std::sort(verts.begin(), verts.end(), order);
        const Vertex& best = verts.front();
        if (best.obj < 1e-8) return finish(best, true);
        if (verts.size() == dim + 1) {
            double diam = 0;
            for (std::size_t v = 1; v < verts.size(); ++v)
                for (std::size_t i = 0; i < dim; ++i)
                    diam = std::max(diam, std::abs(verts[v].x[i] - best.x[i]) /
                                              std::max(std::abs(best.x[i]), 1e-30));
            if (diam < 1e-6) return finish(best, true);
        }
        if (evals >= budget) return finish(best, false);

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v + 1 < verts.size(); ++v)
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += verts[v].x[i];
        for (double& c : centroid) c /= static_cast<double>(verts.size() - 1);
        Vertex& worst = verts.back();

        const auto blend = [&](double coef) {
            std::vector<double> x(dim);
            for (std::size_t i = 0; i < dim; ++i)
                x[i] = centroid[i] + coef * (centroid[i] - worst.x[i]);
            return x;
        };

        auto xr = blend(1.0);
        const double fr = evaluate(xr);
        if (fr < verts.front().obj) {
            if (evals < budget) {
                auto xe = blend(2.0);
                const double fe = evaluate(xe);
                if (fe < fr) worst = {fe, age++, std::move(xe)};
                else worst = {fr, age++, std::move(xr)};
            } else {
                worst = {fr, age++, std::move(xr)};
            }
        } else if (fr < verts[verts.size() - 2].obj) {
            worst = {fr, age++, std::move(xr)};
        } else if (evals < budget) {
            auto xc = blend(-0.5); // contraction toward the centroid
            const double fc = evaluate(xc);
            if (fc < worst.obj) {
                worst = {fc, age++, std::move(xc)};
            } else {
                // Shrink every non-best vertex toward the best.
                for (std::size_t v = 1; v < verts.size() && evals < budget; ++v) {
                    for (std::size_t i = 0; i < dim; ++i)
                        verts[v].x[i] = verts[0].x[i] + 0.5 * (verts[v].x[i] - verts[0].x[i]);
                    verts[v].obj = evaluate(verts[v].x);
                    verts[v].age = age++;
                }
            }
        }
    }
}

} // namespace rfsir

// sirtool: synthesize | simulate | tune | budget | compare
//
// Exit codes: 0 success (and comparison within threshold), 1 validation or
// input error, 2 numerical/solver failure (including a tune run that spends
// its budget without converging), 3 comparison threshold exceeded.

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rfsir/config.hpp"
#include "rfsir/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rfsir;

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string db_str(double v) {
    return std::isfinite(v) ? fmt("%.4f", v) : (v > 0 ? "+inf" : "-inf");
}

struct GridArgs {
    double start_hz = 2.8e9;
    double stop_hz = 3.8e9;
    double step_hz = 1e6;
};

void add_grid_flags(CLI::App* cmd, GridArgs& g) {
    cmd->add_option("--grid-start", g.start_hz, "Sweep start frequency in Hz")
        ->capture_default_str();
    cmd->add_option("--grid-stop", g.stop_hz, "Sweep stop frequency in Hz")
        ->capture_default_str();
    cmd->add_option("--grid-step", g.step_hz, "Sweep step in Hz")->capture_default_str();
}

void write_json(const fs::path& path, const json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

ProjectConfig load_config(const std::string& path) {
    return load_project_config(resolve_config_path(path));
}

fs::path prepare_out(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

// The inter-resonator gaps used for layout/tuning seeds: through the coupling
// model when one is configured, otherwise every gap sits at the fold minimum.
std::vector<double> seed_gaps(const ProjectConfig& cfg, const FilterPlan& plan) {
    if (cfg.coupling) return gaps_for_plan(plan, *cfg.coupling);
    return std::vector<double>(plan.k_adj.size(), cfg.sir.fold.min_gap_m);
}

int cmd_synthesize(const std::string& config_path, const std::string& out) {
    const ProjectConfig cfg = load_config(config_path);
    const fs::path dir = prepare_out(out);

    const FilterPlan plan = plan_from_config(cfg);
    const SirGeometry geom = geometry_from_config(cfg);
    const std::vector<double> gaps = seed_gaps(cfg, plan);
    const Footprint fp = fold_layout(geom, cfg.sir.fold, plan.proto.n, gaps);

    write_json(dir / "plan.json", plan_to_json(plan));
    write_json(dir / "geometry.json", geometry_to_json(geom, fp));

    std::cout << "plan: n=" << plan.proto.n << ", f0=" << fmt("%.6f", plan.f0_hz / 1e9)
              << " GHz, fbw=" << fmt("%.6f", plan.fbw) << ", ripple="
              << fmt("%.6f", plan.proto.ripple_db) << " dB, qu="
              << (std::isfinite(plan.qu) ? fmt("%.1f", plan.qu) : std::string("inf")) << "\n";
    std::cout << "external Q: in " << fmt("%.4f", plan.qe_in) << ", out "
              << fmt("%.4f", plan.qe_out) << "\n";
    std::cout << "resonator: z_low " << fmt("%.3f", geom.z_low_ohm) << " ohm / z_high "
              << fmt("%.3f", geom.z_high_ohm) << " ohm, K=" << fmt("%.4f", geom.k_ratio)
              << ", len_low " << fmt("%.3f", geom.len_low_m * 1e3) << " mm, half mid "
              << fmt("%.3f", geom.len_high_m * 1e3) << " mm\n";
    std::cout << "footprint: " << fmt("%.2f", fp.length_m * 1e3) << " mm x "
              << fmt("%.2f", fp.width_m * 1e3) << " mm\n";
    if (cfg.sir.reference_footprint_m.size() == 2) {
        const double rl = cfg.sir.reference_footprint_m[0];
        const double rw = cfg.sir.reference_footprint_m[1];
        std::cout << "reference footprint (informational): " << fmt("%.2f", rl * 1e3)
                  << " mm x " << fmt("%.2f", rw * 1e3) << " mm; ratio "
                  << fmt("%.3f", fp.length_m / rl) << " x " << fmt("%.3f", fp.width_m / rw)
                  << "\n";
    }
    std::cout << "wrote " << (dir / "plan.json").string() << ", "
              << (dir / "geometry.json").string() << "\n";
    return 0;
}

void print_metrics(const PassbandMetrics& m) {
    std::cout << "IL best " << db_str(m.il_best_db) << " dB, IL worst " << db_str(m.il_worst_db)
              << " dB, RL worst " << db_str(m.rl_worst_db) << " dB, rejection floor "
              << db_str(m.rejection_floor_db) << " dB\n";
    const auto mhz = [](const std::optional<double>& v) {
        return v ? fmt("%.3f", *v / 1e6) + " MHz" : std::string("not reached");
    };
    std::cout << "roll-off (-3 dB to threshold): lower " << mhz(m.rolloff_lower_hz) << ", upper "
              << mhz(m.rolloff_upper_hz) << "\n";
}

int cmd_simulate(const std::string& config_path, const std::string& out, const GridArgs& grid_args,
                 double rejection_threshold_db) {
    const ProjectConfig cfg = load_config(config_path);
    const fs::path dir = prepare_out(out);

    const FilterPlan plan = plan_from_config(cfg);
    const FrequencyGrid grid =
        FrequencyGrid::linspace(grid_args.start_hz, grid_args.stop_hz, grid_args.step_hz);
    const TwoPortSweep sweep = frequency_response(plan, grid);

    write_file_atomic(dir / "response.s2p", write_touchstone(sweep, TouchstoneOptions{}));
    const PassbandMetrics metrics = passband_metrics(sweep, cfg.filter.band(),
                                                     rejection_threshold_db);
    write_json(dir / "metrics.json",
               metrics_to_json(metrics, cfg.filter.band(), rejection_threshold_db));

    std::cout << "simulated " << grid.size() << " points, "
              << fmt("%.4f", grid.front() / 1e9) << ".." << fmt("%.4f", grid.back() / 1e9)
              << " GHz\n";
    print_metrics(metrics);
    if (!std::isfinite(plan.qu)) {
        double dev = 0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            dev = std::max(dev, std::abs(std::norm(sweep.s11[i]) + std::norm(sweep.s21[i]) - 1.0));
        std::cout << "lossless unitarity deviation: " << fmt("%.3e", dev) << "\n";
    }
    std::cout << "wrote " << (dir / "response.s2p").string() << ", "
              << (dir / "metrics.json").string() << "\n";
    return 0;
}

int cmd_tune(const std::string& config_path, const std::string& out) {
    const ProjectConfig cfg = load_config(config_path);
    const fs::path dir = prepare_out(out);

    if (!cfg.coupling)
        throw validation_error("coupling: a coupling model is required for the tune command");
    if (!cfg.tune) throw validation_error("tune: section required for the tune command");
    const CouplingModel& model = *cfg.coupling;
    const TuneConfig& tc = *cfg.tune;

    const FilterPlan plan = plan_from_config(cfg);
    const int n = plan.proto.n;

    TuneSpec spec;
    spec.band = cfg.filter.band();
    spec.max_il_db = tc.max_il_db;
    spec.min_rl_db = tc.min_rl_db;
    spec.min_rejection_db = tc.min_rejection_db;
    spec.weight_il = tc.weight_il;
    spec.weight_rl = tc.weight_rl;
    spec.weight_rejection = tc.weight_rejection;
    spec.objective_grid_step_hz = tc.objective_grid_step_hz;

    std::vector<double> initial = seed_gaps(cfg, plan);
    if (tc.use_detunes) initial.insert(initial.end(), static_cast<std::size_t>(n), 0.0);

    // The metric grid mirrors the tuner's internal objective grid.
    const FrequencyGrid grid = FrequencyGrid::linspace(spec.band.stop_lo_hz, spec.band.stop_hi_hz,
                                                       spec.objective_grid_step_hz);
    BandSpec band_eff = spec.band;
    band_eff.stop_lo_hz = std::max(band_eff.stop_lo_hz, grid.front());
    band_eff.stop_hi_hz = std::min(band_eff.stop_hi_hz, grid.back());

    const auto realize = [&](const std::vector<double>& vars) {
        FilterPlan p = plan;
        for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(n); ++i)
            p.k_adj[i] = model.k0 * std::exp(-vars[i] / model.s0_m);
        if (vars.size() == static_cast<std::size_t>(2 * n - 1))
            p.detune_hz.assign(vars.begin() + (n - 1), vars.end());
        return p;
    };

    const PassbandMetrics before =
        passband_metrics(frequency_response(realize(initial), grid), band_eff, -60.0);

    const TuneResult result = tune(initial, spec, model, plan, tc.budget);

    const FilterPlan tuned = realize(result.variables);
    const PassbandMetrics after =
        passband_metrics(frequency_response(tuned, grid), band_eff, -60.0);

    json rj = tune_result_to_json(result);
    rj["gaps_m"] = std::vector<double>(result.variables.begin(),
                                       result.variables.begin() + (n - 1));
    rj["k_adj"] = tuned.k_adj;
    rj["detune_hz"] = tuned.detune_hz;
    write_json(dir / "tune_result.json", rj);

    std::string trace_csv = "evaluation,best_objective\n";
    for (std::size_t i = 0; i < result.trace.size(); ++i)
        trace_csv += std::to_string(i + 1) + "," + fmt("%.12g", result.trace[i]) + "\n";
    write_file_atomic(dir / "tune_trace.csv", trace_csv);

    write_json(dir / "tune_before_metrics.json", metrics_to_json(before, band_eff, -60.0));
    write_json(dir / "tune_after_metrics.json", metrics_to_json(after, band_eff, -60.0));

    std::cout << "tune: " << (result.converged ? "converged" : "budget exhausted") << " after "
              << result.iterations << " evaluations, residual " << fmt("%.6g", result.residual)
              << "\n";
    std::cout << "before: ";
    print_metrics(before);
    std::cout << "after: ";
    print_metrics(after);
    std::cout << "wrote " << (dir / "tune_result.json").string() << ", "
              << (dir / "tune_trace.csv").string() << "\n";
    return result.converged ? 0 : 2;
}

int cmd_budget(const std::string& config_path, const std::string& out,
               const GridArgs& grid_args) {
    const ProjectConfig cfg = load_config(config_path);
    const fs::path dir = prepare_out(out);

    if (cfg.cascade.empty())
        throw validation_error("cascade: at least one stage is required for the budget command");

    const NoiseResult nf_phys = cascade_nf(cfg.cascade);
    std::vector<CascadeStage> at_290 = cfg.cascade;
    for (auto& st : at_290)
        if (st.kind == CascadeStage::Kind::Passive) st.t_phys_k = kT0;
    const NoiseResult nf_290 = cascade_nf(at_290);

    std::cout << "cascade NF (physical-temperature convention): " << fmt("%.4f", nf_phys.nf_db)
              << " dB (Te " << fmt("%.2f", nf_phys.te_k) << " K)\n";
    std::cout << "cascade NF (290 K convention):                " << fmt("%.4f", nf_290.nf_db)
              << " dB\n";

    json report;
    report["nf_phys_db"] = nf_phys.nf_db;
    report["nf_290_db"] = nf_290.nf_db;
    report["te_phys_k"] = nf_phys.te_k;
    std::vector<std::string> notes;

    if (cfg.radar && cfg.radar->reference_predicted_nf_db) {
        const double ref = *cfg.radar->reference_predicted_nf_db;
        notes.push_back("modeled NF " + fmt("%.4f", nf_phys.nf_db) +
                        " dB (physical-temperature convention) differs from the configured "
                        "reference prediction " +
                        fmt("%.4f", ref) + " dB by " + fmt("%.4f", nf_phys.nf_db - ref) +
                        " dB; neither passive-stage convention reproduces that value from the "
                        "stated stage losses");
    }

    // Frequency-dependent budget: the modeled filter response replaces the
    // marked filter stage; stages before it fold in through Friis afterwards.
    const FilterPlan plan = plan_from_config(cfg);
    const FrequencyGrid grid =
        FrequencyGrid::linspace(grid_args.start_hz, grid_args.stop_hz, grid_args.step_hz);
    const TwoPortSweep sweep = frequency_response(plan, grid);

    const std::size_t split = cfg.cascade_filter_index ? *cfg.cascade_filter_index + 1 : 0;
    const std::vector<CascadeStage> upstream(cfg.cascade.begin(),
                                             cfg.cascade.begin() +
                                                 (cfg.cascade_filter_index ? *cfg.cascade_filter_index
                                                                           : 0));
    const std::vector<CascadeStage> downstream(cfg.cascade.begin() + split, cfg.cascade.end());

    auto points = cascade_nf_sweep(sweep, cfg.filter_stage_t_phys_k, downstream);
    if (!upstream.empty()) {
        const NoiseResult up = cascade_nf(upstream);
        double g_up = 1.0;
        for (const auto& st : upstream)
            g_up *= st.kind == CascadeStage::Kind::Active
                        ? std::pow(10.0, st.gain_db / 10.0)
                        : passive_stage_factor(st.loss_db, st.t_phys_k).gain;
        for (auto& [f, nf] : points) {
            const double rest = nf_to_factor(nf);
            nf = 10.0 * std::log10(up.factor + (rest - 1.0) / g_up);
        }
    }

    NfTrace trace;
    trace.grid = grid;
    trace.nf_db.reserve(points.size());
    for (const auto& [f, nf] : points) trace.nf_db.push_back(nf);
    write_file_atomic(dir / "nf_sweep.csv", write_nf_csv(trace));

    double nf_inband_max = -std::numeric_limits<double>::infinity();
    for (const auto& [f, nf] : points)
        if (f >= cfg.filter.f_lo_hz && f <= cfg.filter.f_hi_hz)
            nf_inband_max = std::max(nf_inband_max, nf);
    std::cout << "in-band NF maximum (sweep): " << fmt("%.4f", nf_inband_max) << " dB\n";
    report["nf_inband_max_db"] = nf_inband_max;

    if (cfg.radar) {
        const RadarConfig& rc = *cfg.radar;
        RadarParams p;
        p.pt_w = rc.pt_w;
        p.g_antenna = rc.g_antenna;
        p.lambda_m = rc.lambda_m;
        p.sigma_m2 = rc.sigma_m2;
        p.b_hz = rc.b_hz;
        p.t0_k = rc.t0_k;
        p.snr_min = rc.snr_min;

        p.f = nf_to_factor(rc.conventional_nf_db);
        const double r_conv = radar_max_range(p);
        p.f = nf_phys.factor;
        const double r_model = radar_max_range(p);
        const double imp_model = range_improvement(rc.conventional_nf_db, nf_phys.nf_db);

        std::cout << "radar max range at " << fmt("%.2f", rc.conventional_nf_db)
                  << " dB NF (conventional): " << fmt("%.1f", r_conv) << " m\n";
        std::cout << "radar max range at modeled NF: " << fmt("%.1f", r_model)
                  << " m (improvement x" << fmt("%.4f", imp_model) << ")\n";
        report["radar"] = {{"range_conventional_m", r_conv},
                           {"range_model_m", r_model},
                           {"improvement_model", imp_model}};
        if (rc.reference_nf_span_db.size() == 2) {
            const double i_lo = range_improvement(rc.conventional_nf_db, rc.reference_nf_span_db[0]);
            const double i_hi = range_improvement(rc.conventional_nf_db, rc.reference_nf_span_db[1]);
            std::cout << "improvement across reference NF span ["
                      << fmt("%.2f", rc.reference_nf_span_db[0]) << ", "
                      << fmt("%.2f", rc.reference_nf_span_db[1]) << "] dB: +"
                      << fmt("%.1f", (i_lo - 1) * 100) << "% to +" << fmt("%.1f", (i_hi - 1) * 100)
                      << "%\n";
            report["radar"]["improvement_span"] = {i_lo, i_hi};
        }
    }

    for (const auto& n : notes) std::cout << "note: " << n << "\n";
    report["notes"] = notes;
    write_json(dir / "budget.json", report);
    std::cout << "wrote " << (dir / "budget.json").string() << ", "
              << (dir / "nf_sweep.csv").string() << "\n";
    return 0;
}

TwoPortSweep load_sweep(const std::string& path) {
    try {
        return parse_touchstone(read_file(path)).first;
    } catch (const validation_error& e) {
        throw validation_error(path + ": " + e.what());
    }
}

int cmd_compare(const std::string& model_path, const std::string& measured_path,
                const std::string& out, const std::optional<std::string>& config_path,
                std::optional<double> f_lo, std::optional<double> f_hi,
                std::optional<double> stop_lo, std::optional<double> stop_hi,
                double threshold_db, double rejection_threshold_db) {
    const fs::path dir = prepare_out(out);
    const TwoPortSweep model = load_sweep(model_path);
    const TwoPortSweep measured = load_sweep(measured_path);

    BandSpec band;
    if (config_path) {
        band = load_config(*config_path).filter.band();
    } else if (!(f_lo && f_hi && stop_lo && stop_hi)) {
        throw validation_error(
            "compare needs --config or all of --f-lo/--f-hi/--stop-lo/--stop-hi");
    }
    if (f_lo) band.f_lo_hz = *f_lo;
    if (f_hi) band.f_hi_hz = *f_hi;
    if (stop_lo) band.stop_lo_hz = *stop_lo;
    if (stop_hi) band.stop_hi_hz = *stop_hi;
    band.validate();

    const ComparisonReport rep =
        compare(model, measured, band, threshold_db, rejection_threshold_db);

    write_json(dir / "comparison.json", comparison_to_json(rep));
    const std::string text = comparison_to_text(rep);
    write_file_atomic(dir / "comparison.txt", text);
    std::cout << text;
    std::cout << "wrote " << (dir / "comparison.json").string() << ", "
              << (dir / "comparison.txt").string() << "\n";
    return rep.notes.empty() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIR band-pass filter synthesis, simulation, and budgeting toolkit"};
    app.require_subcommand(1);

    int rc = 0;

    std::string syn_config, syn_out = ".";
    auto* syn = app.add_subcommand("synthesize", "Design a filter plan and resonator geometry");
    syn->add_option("--config", syn_config, "Project config file")->required();
    syn->add_option("--out", syn_out, "Output directory")->capture_default_str();
    syn->callback([&] { rc = cmd_synthesize(syn_config, syn_out); });

    std::string sim_config, sim_out = ".";
    GridArgs sim_grid;
    double sim_rej = -60.0;
    auto* sim = app.add_subcommand("simulate", "Evaluate the modeled S-parameter response");
    sim->add_option("--config", sim_config, "Project config file")->required();
    sim->add_option("--out", sim_out, "Output directory")->capture_default_str();
    add_grid_flags(sim, sim_grid);
    sim->add_option("--rejection-threshold-db", sim_rej,
                    "Roll-off / rejection threshold in dB (negative)")
        ->capture_default_str();
    sim->callback([&] { rc = cmd_simulate(sim_config, sim_out, sim_grid, sim_rej); });

    std::string tune_config, tune_out = ".";
    auto* tun = app.add_subcommand("tune", "Adjust gaps (and detunes) to meet the target spec");
    tun->add_option("--config", tune_config, "Project config file")->required();
    tun->add_option("--out", tune_out, "Output directory")->capture_default_str();
    tun->callback([&] { rc = cmd_tune(tune_config, tune_out); });

    std::string bud_config, bud_out = ".";
    GridArgs bud_grid;
    auto* bud = app.add_subcommand("budget", "Cascaded noise figure and radar range budget");
    bud->add_option("--config", bud_config, "Project config file")->required();
    bud->add_option("--out", bud_out, "Output directory")->capture_default_str();
    add_grid_flags(bud, bud_grid);
    bud->callback([&] { rc = cmd_budget(bud_config, bud_out, bud_grid); });

    std::string cmp_model, cmp_measured, cmp_out = ".";
    std::optional<std::string> cmp_config;
    std::optional<double> cmp_f_lo, cmp_f_hi, cmp_stop_lo, cmp_stop_hi;
    double cmp_threshold = 0.1, cmp_rej = -60.0;
    auto* cmp = app.add_subcommand("compare", "Compare a model sweep against measured data");
    cmp->add_option("model", cmp_model, "Model .s2p file")->required();
    cmp->add_option("measured", cmp_measured, "Measured .s2p file")->required();
    cmp->add_option("--config", cmp_config, "Project config supplying the band");
    cmp->add_option("--out", cmp_out, "Output directory")->capture_default_str();
    cmp->add_option("--f-lo", cmp_f_lo, "Passband lower edge in Hz");
    cmp->add_option("--f-hi", cmp_f_hi, "Passband upper edge in Hz");
    cmp->add_option("--stop-lo", cmp_stop_lo, "Lower stopband edge in Hz");
    cmp->add_option("--stop-hi", cmp_stop_hi, "Upper stopband edge in Hz");
    cmp->add_option("--threshold-db", cmp_threshold, "Max tolerated |S21| delta in dB")
        ->capture_default_str();
    cmp->add_option("--rejection-threshold-db", cmp_rej,
                    "Roll-off / rejection threshold in dB (negative)")
        ->capture_default_str();
    cmp->callback([&] {
        rc = cmd_compare(cmp_model, cmp_measured, cmp_out, cmp_config, cmp_f_lo, cmp_f_hi,
                         cmp_stop_lo, cmp_stop_hi, cmp_threshold, cmp_rej);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const numeric_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

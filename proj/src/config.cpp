#include "rfsir/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <unistd.h>

#include "rfsir/errors.hpp"

namespace rfsir {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw validation_error(path + ": " + msg);
}

const json& require_field(const json& j, const std::string& ctx, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(ctx.empty() ? key : ctx + "." + key, "missing required field");
    return *it;
}

std::string join(const std::string& ctx, const char* key) {
    return ctx.empty() ? key : ctx + "." + key;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

double get_num(const json& j, const std::string& ctx, const char* key) {
    return as_number(require_field(j, ctx, key), join(ctx, key));
}

double get_num_or(const json& j, const std::string& ctx, const char* key, double fallback) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : as_number(*it, join(ctx, key));
}

int get_int(const json& j, const std::string& ctx, const char* key) {
    const double v = get_num(j, ctx, key);
    if (v != std::floor(v)) fail(join(ctx, key), "expected an integer");
    return static_cast<int>(v);
}

int get_int_or(const json& j, const std::string& ctx, const char* key, int fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    const double v = as_number(*it, join(ctx, key));
    if (v != std::floor(v)) fail(join(ctx, key), "expected an integer");
    return static_cast<int>(v);
}

bool get_bool_or(const json& j, const std::string& ctx, const char* key, bool fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) fail(join(ctx, key), "expected true or false");
    return it->get<bool>();
}

std::string get_str(const json& j, const std::string& ctx, const char* key) {
    const auto& v = require_field(j, ctx, key);
    if (!v.is_string()) fail(join(ctx, key), "expected a string");
    return v.get<std::string>();
}

std::string get_str_or(const json& j, const std::string& ctx, const char* key,
                       const std::string& fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_string()) fail(join(ctx, key), "expected a string");
    return it->get<std::string>();
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& ctx, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) fail(join(ctx, key.c_str()), "unknown field");
    }
}

template <typename Fn>
void with_context(const std::string& ctx, Fn&& fn) {
    try {
        fn();
    } catch (const validation_error& e) {
        fail(ctx, e.what());
    }
}

SubstrateSpec parse_substrate(const json& j, const std::string& ctx) {
    expect_object(j, ctx);
    check_keys(j, ctx,
               {"eps_r", "h_m", "tan_delta", "t_cond_m", "rs_cond_ohm", "f_rs_hz",
                "superconducting", "thickness_correction"});
    SubstrateSpec s;
    s.eps_r = get_num(j, ctx, "eps_r");
    s.h_m = get_num(j, ctx, "h_m");
    s.tan_delta = get_num_or(j, ctx, "tan_delta", 0.0);
    s.t_cond_m = get_num_or(j, ctx, "t_cond_m", 0.0);
    s.rs_cond_ohm = get_num_or(j, ctx, "rs_cond_ohm", 0.0);
    s.f_rs_hz = get_num_or(j, ctx, "f_rs_hz", 1e9);
    s.superconducting = get_bool_or(j, ctx, "superconducting", false);
    s.thickness_correction = get_bool_or(j, ctx, "thickness_correction", false);
    with_context(ctx, [&] { s.validate(); });
    return s;
}

FilterConfig parse_filter(const json& j, const std::string& ctx) {
    expect_object(j, ctx);
    check_keys(j, ctx,
               {"n", "f_lo_hz", "f_hi_hz", "ripple_db", "return_loss_db", "qu", "stop_lo_hz",
                "stop_hi_hz"});
    FilterConfig f;
    f.n = get_int(j, ctx, "n");
    if (f.n < 1) fail(join(ctx, "n"), "filter order must be >= 1");
    f.f_lo_hz = get_num(j, ctx, "f_lo_hz");
    f.f_hi_hz = get_num(j, ctx, "f_hi_hz");
    if (!(f.f_lo_hz > 0) || !(f.f_hi_hz > f.f_lo_hz))
        fail(ctx, "band edges need 0 < f_lo_hz < f_hi_hz");

    const bool has_ripple = j.contains("ripple_db");
    const bool has_rl = j.contains("return_loss_db");
    if (has_ripple == has_rl)
        fail(ctx, "exactly one of ripple_db and return_loss_db must be set");
    if (has_ripple) {
        f.ripple_db = get_num(j, ctx, "ripple_db");
        if (!(*f.ripple_db > 0)) fail(join(ctx, "ripple_db"), "must be > 0");
    } else {
        f.return_loss_db = get_num(j, ctx, "return_loss_db");
        if (*f.return_loss_db == 0) fail(join(ctx, "return_loss_db"), "must be nonzero");
    }

    if (const auto it = j.find("qu"); it == j.end()) {
        f.qu_mode = FilterConfig::QuMode::FromSubstrate;
    } else if (it->is_null()) {
        f.qu_mode = FilterConfig::QuMode::Infinite;
    } else if (it->is_string()) {
        const std::string s = it->get<std::string>();
        if (s == "inf" || s == "infinite") f.qu_mode = FilterConfig::QuMode::Infinite;
        else if (s == "substrate") f.qu_mode = FilterConfig::QuMode::FromSubstrate;
        else fail(join(ctx, "qu"), "expected a number, null, \"inf\", or \"substrate\"");
    } else if (it->is_number()) {
        f.qu_mode = FilterConfig::QuMode::Explicit;
        f.qu_value = it->get<double>();
        if (!(f.qu_value > 0)) fail(join(ctx, "qu"), "must be > 0");
    } else {
        fail(join(ctx, "qu"), "expected a number, null, \"inf\", or \"substrate\"");
    }

    f.stop_lo_hz = get_num_or(j, ctx, "stop_lo_hz", f.f_lo_hz - 3e8);
    f.stop_hi_hz = get_num_or(j, ctx, "stop_hi_hz", f.f_hi_hz + 3e8);
    with_context(ctx, [&] { f.band().validate(); });
    return f;
}

FoldSpec parse_fold(const json& j, const std::string& ctx) {
    expect_object(j, ctx);
    check_keys(j, ctx, {"n_bends", "min_gap_m", "bend_allowance_m"});
    FoldSpec fold;
    fold.n_bends = get_int_or(j, ctx, "n_bends", fold.n_bends);
    fold.min_gap_m = get_num_or(j, ctx, "min_gap_m", fold.min_gap_m);
    fold.bend_allowance_m = get_num_or(j, ctx, "bend_allowance_m", fold.bend_allowance_m);
    with_context(ctx, [&] { fold.validate(); });
    return fold;
}

SirConfig parse_sir(const json& j, const std::string& ctx) {
    expect_object(j, ctx);
    check_keys(j, ctx, {"k_ratio", "w_low_m", "w_high_m", "split", "fold", "reference_footprint_m"});
    SirConfig s;
    s.k_ratio = get_num(j, ctx, "k_ratio");
    s.w_low_m = get_num(j, ctx, "w_low_m");
    s.w_high_m = get_num(j, ctx, "w_high_m");
    s.split = get_num_or(j, ctx, "split", 0.5);
    if (!(s.k_ratio > 0)) fail(join(ctx, "k_ratio"), "must be > 0");
    if (!(s.w_low_m > 0) || !(s.w_high_m > 0)) fail(ctx, "strip widths must be > 0");
    if (!(s.split > 0) || !(s.split < 1)) fail(join(ctx, "split"), "must lie in (0, 1)");
    if (const auto it = j.find("fold"); it != j.end()) s.fold = parse_fold(*it, join(ctx, "fold"));
    if (const auto it = j.find("reference_footprint_m"); it != j.end()) {
        if (!it->is_array() || it->size() != 2)
            fail(join(ctx, "reference_footprint_m"), "expected an array [length_m, width_m]");
        s.reference_footprint_m = {as_number((*it)[0], join(ctx, "reference_footprint_m")),
                                   as_number((*it)[1], join(ctx, "reference_footprint_m"))};
    }
    return s;
}

TuneConfig parse_tune(const json& j, const std::string& ctx) {
    expect_object(j, ctx);
    check_keys(j, ctx,
               {"max_il_db", "min_rl_db", "min_rejection_db", "weight_il", "weight_rl",
                "weight_rejection", "objective_grid_step_hz", "budget", "use_detunes"});
    TuneConfig t;
    t.max_il_db = get_num(j, ctx, "max_il_db");
    t.min_rl_db = get_num(j, ctx, "min_rl_db");
    t.min_rejection_db = get_num(j, ctx, "min_rejection_db");
    t.weight_il = get_num_or(j, ctx, "weight_il", 1.0);
    t.weight_rl = get_num_or(j, ctx, "weight_rl", 1.0);
    t.weight_rejection = get_num_or(j, ctx, "weight_rejection", 1.0);
    t.objective_grid_step_hz = get_num_or(j, ctx, "objective_grid_step_hz", 1e6);
    t.budget = get_int_or(j, ctx, "budget", 400);
    t.use_detunes = get_bool_or(j, ctx, "use_detunes", false);
    if (t.budget < 1) fail(join(ctx, "budget"), "must be >= 1");
    return t;
}

// is_filter is set when the stage is the band-pass filter's own budget entry
// ({"type": "filter"}); it parses as a passive stage at the filter's physical
// temperature.
CascadeStage parse_stage(const json& j, const std::string& ctx, double filter_t_phys_k,
                         bool& is_filter) {
    expect_object(j, ctx);
    const std::string type = get_str(j, ctx, "type");
    CascadeStage st;
    is_filter = false;
    if (type == "active") {
        check_keys(j, ctx, {"type", "gain_db", "nf_db"});
        const double gain = get_num(j, ctx, "gain_db");
        const double nf = get_num(j, ctx, "nf_db");
        with_context(ctx, [&] { st = CascadeStage::active(gain, nf); });
    } else if (type == "passive") {
        check_keys(j, ctx, {"type", "loss_db", "t_phys_k"});
        const double loss = get_num(j, ctx, "loss_db");
        const double t_phys = get_num_or(j, ctx, "t_phys_k", kT0);
        with_context(ctx, [&] { st = CascadeStage::passive(loss, t_phys); });
    } else if (type == "filter") {
        check_keys(j, ctx, {"type", "loss_db"});
        const double loss = get_num(j, ctx, "loss_db");
        with_context(ctx, [&] { st = CascadeStage::passive(loss, filter_t_phys_k); });
        is_filter = true;
    } else {
        fail(join(ctx, "type"), "expected \"active\", \"passive\", or \"filter\"");
    }
    return st;
}

RadarConfig parse_radar(const json& j, const std::string& ctx) {
    expect_object(j, ctx);
    check_keys(j, ctx,
               {"pt_w", "g_antenna", "lambda_m", "sigma_m2", "b_hz", "t0_k", "snr_min",
                "conventional_nf_db", "reference_nf_span_db", "reference_predicted_nf_db"});
    RadarConfig r;
    r.pt_w = get_num(j, ctx, "pt_w");
    r.g_antenna = get_num(j, ctx, "g_antenna");
    r.lambda_m = get_num(j, ctx, "lambda_m");
    r.sigma_m2 = get_num(j, ctx, "sigma_m2");
    r.b_hz = get_num(j, ctx, "b_hz");
    r.t0_k = get_num_or(j, ctx, "t0_k", kT0);
    r.snr_min = get_num(j, ctx, "snr_min");
    r.conventional_nf_db = get_num_or(j, ctx, "conventional_nf_db", 4.0);
    if (const auto it = j.find("reference_nf_span_db"); it != j.end()) {
        if (!it->is_array() || it->size() != 2)
            fail(join(ctx, "reference_nf_span_db"), "expected an array [low_db, high_db]");
        r.reference_nf_span_db = {as_number((*it)[0], join(ctx, "reference_nf_span_db")),
                                  as_number((*it)[1], join(ctx, "reference_nf_span_db"))};
    }
    if (j.contains("reference_predicted_nf_db"))
        r.reference_predicted_nf_db = get_num(j, ctx, "reference_predicted_nf_db");
    return r;
}

json db_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json opt_or_null(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json metrics_fields(const PassbandMetrics& m) {
    return {{"il_best_db", db_or_null(m.il_best_db)},
            {"il_worst_db", db_or_null(m.il_worst_db)},
            {"rl_worst_db", db_or_null(m.rl_worst_db)},
            {"rejection_floor_db", db_or_null(m.rejection_floor_db)},
            {"rolloff_lower_hz", opt_or_null(m.rolloff_lower_hz)},
            {"rolloff_upper_hz", opt_or_null(m.rolloff_upper_hz)}};
}

json band_fields(const BandSpec& b) {
    return {{"f_lo_hz", b.f_lo_hz},
            {"f_hi_hz", b.f_hi_hz},
            {"stop_lo_hz", b.stop_lo_hz},
            {"stop_hi_hz", b.stop_hi_hz}};
}

json edge_rolloff_fields(const EdgeRolloff& e) {
    return {{"lower_hz", opt_or_null(e.lower_hz)}, {"upper_hz", opt_or_null(e.upper_hz)}};
}

std::string fmt_db(double v) {
    if (!std::isfinite(v)) return v > 0 ? "+inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string fmt_mhz(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f MHz", *v / 1e6);
    return buf;
}

} // namespace

double FilterConfig::resolved_ripple_db() const {
    if (ripple_db) return *ripple_db;
    if (return_loss_db) return ripple_from_return_loss(*return_loss_db);
    throw validation_error("filter: neither ripple_db nor return_loss_db is set");
}

BandSpec FilterConfig::band() const {
    return {f_lo_hz, f_hi_hz, stop_lo_hz, stop_hi_hz};
}

const SubstrateSpec& ProjectConfig::active_substrate() const {
    const auto it = substrates.find(substrate_profile);
    if (it == substrates.end())
        throw validation_error("substrate_profile: no substrate named '" + substrate_profile + "'");
    return it->second;
}

fs::path resolve_config_path(const std::string& path) {
    fs::path p(path);
    if (fs::exists(p)) return p;
    if (p.is_relative()) {
        if (const char* dir = std::getenv(kConfigDirEnv); dir != nullptr && *dir != '\0') {
            const fs::path alt = fs::path(dir) / p;
            if (fs::exists(alt)) return alt;
            throw validation_error("config file not found: " + path + " (also tried " +
                                   alt.string() + ")");
        }
    }
    throw validation_error("config file not found: " + path);
}

ProjectConfig load_project_config(const fs::path& path) {
    const std::string content = read_file(path);
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error& e) {
        int line = 1;
        for (std::size_t i = 0; i < content.size() && i + 1 < e.byte; ++i)
            if (content[i] == '\n') ++line;
        throw parse_error(line, std::string("invalid JSON: ") + e.what());
    }
    return parse_project_config(j);
}

ProjectConfig parse_project_config(const json& j) {
    expect_object(j, "config");
    check_keys(j, "",
               {"name", "description", "substrates", "substrate_profile", "filter", "sir",
                "coupling", "tune", "cascade", "filter_stage_t_phys_k", "radar"});

    ProjectConfig cfg;
    cfg.name = get_str_or(j, "", "name", "");
    cfg.description = get_str_or(j, "", "description", "");

    const json& subs = require_field(j, "", "substrates");
    expect_object(subs, "substrates");
    if (subs.empty()) fail("substrates", "at least one substrate profile is required");
    for (const auto& [key, value] : subs.items())
        cfg.substrates.emplace(key, parse_substrate(value, "substrates." + key));

    cfg.substrate_profile = get_str(j, "", "substrate_profile");
    if (cfg.substrates.find(cfg.substrate_profile) == cfg.substrates.end())
        fail("substrate_profile", "no substrate named '" + cfg.substrate_profile + "'");

    cfg.filter = parse_filter(require_field(j, "", "filter"), "filter");
    cfg.sir = parse_sir(require_field(j, "", "sir"), "sir");

    if (const auto it = j.find("coupling"); it != j.end()) {
        expect_object(*it, "coupling");
        check_keys(*it, "coupling", {"k0", "s0_m"});
        CouplingModel m;
        m.k0 = get_num(*it, "coupling", "k0");
        m.s0_m = get_num(*it, "coupling", "s0_m");
        with_context("coupling", [&] { m.validate(); });
        cfg.coupling = m;
    }

    if (const auto it = j.find("tune"); it != j.end()) cfg.tune = parse_tune(*it, "tune");

    cfg.filter_stage_t_phys_k = get_num_or(j, "", "filter_stage_t_phys_k", 77.0);
    if (!(cfg.filter_stage_t_phys_k > 0)) fail("filter_stage_t_phys_k", "must be > 0");

    if (const auto it = j.find("cascade"); it != j.end()) {
        if (!it->is_array()) fail("cascade", "expected an array of stages");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string ctx = "cascade[" + std::to_string(i) + "]";
            bool is_filter = false;
            cfg.cascade.push_back(
                parse_stage((*it)[i], ctx, cfg.filter_stage_t_phys_k, is_filter));
            if (is_filter) {
                if (cfg.cascade_filter_index)
                    fail(ctx, "only one stage may have type \"filter\"");
                cfg.cascade_filter_index = i;
            }
        }
    }

    if (const auto it = j.find("radar"); it != j.end()) cfg.radar = parse_radar(*it, "radar");

    return cfg;
}

FilterPlan plan_from_config(const ProjectConfig& cfg) {
    const double f0 = std::sqrt(cfg.filter.f_lo_hz * cfg.filter.f_hi_hz);
    const double fbw = (cfg.filter.f_hi_hz - cfg.filter.f_lo_hz) / f0;
    const PrototypeTable proto = chebyshev_prototype(cfg.filter.n, cfg.filter.resolved_ripple_db());

    double qu = kInfiniteQ;
    switch (cfg.filter.qu_mode) {
        case FilterConfig::QuMode::Explicit:
            qu = cfg.filter.qu_value;
            break;
        case FilterConfig::QuMode::Infinite:
            qu = kInfiniteQ;
            break;
        case FilterConfig::QuMode::FromSubstrate: {
            const SubstrateSpec& sub = cfg.active_substrate();
            const LineParams line = analyze_line(cfg.sir.w_low_m, sub);
            qu = unloaded_q(line, sub, f0);
            break;
        }
    }
    return coupling_plan(proto, f0, fbw, qu);
}

SirGeometry geometry_from_config(const ProjectConfig& cfg) {
    const double f0 = std::sqrt(cfg.filter.f_lo_hz * cfg.filter.f_hi_hz);
    return design_sir(f0, cfg.sir.k_ratio, cfg.sir.w_low_m, cfg.sir.w_high_m,
                      cfg.active_substrate(), cfg.sir.split, cfg.sir.fold);
}

std::vector<double> gaps_for_plan(const FilterPlan& plan, const CouplingModel& model) {
    std::vector<double> gaps;
    gaps.reserve(plan.k_adj.size());
    for (double k : plan.k_adj) gaps.push_back(coupling_to_gap(k, model));
    return gaps;
}

json plan_to_json(const FilterPlan& plan) {
    return {{"n", plan.proto.n},
            {"f0_hz", plan.f0_hz},
            {"fbw", plan.fbw},
            {"ripple_db", plan.proto.ripple_db},
            {"g", plan.proto.g},
            {"k_adj", plan.k_adj},
            {"qe_in", plan.qe_in},
            {"qe_out", plan.qe_out},
            {"qu", std::isfinite(plan.qu) ? json(plan.qu) : json(nullptr)},
            {"detune_hz", plan.detune_hz}};
}

FilterPlan plan_from_json(const json& j) {
    expect_object(j, "plan");
    FilterPlan plan;
    plan.proto.n = get_int(j, "plan", "n");
    plan.proto.ripple_db = get_num(j, "plan", "ripple_db");
    const json& g = require_field(j, "plan", "g");
    if (!g.is_array()) fail("plan.g", "expected an array");
    for (const auto& v : g) plan.proto.g.push_back(as_number(v, "plan.g"));
    plan.f0_hz = get_num(j, "plan", "f0_hz");
    plan.fbw = get_num(j, "plan", "fbw");
    const json& k = require_field(j, "plan", "k_adj");
    if (!k.is_array()) fail("plan.k_adj", "expected an array");
    for (const auto& v : k) plan.k_adj.push_back(as_number(v, "plan.k_adj"));
    plan.qe_in = get_num(j, "plan", "qe_in");
    plan.qe_out = get_num(j, "plan", "qe_out");
    if (const auto it = j.find("qu"); it == j.end() || it->is_null())
        plan.qu = kInfiniteQ;
    else
        plan.qu = as_number(*it, "plan.qu");
    if (const auto it = j.find("detune_hz"); it != j.end()) {
        if (!it->is_array()) fail("plan.detune_hz", "expected an array");
        for (const auto& v : *it) plan.detune_hz.push_back(as_number(v, "plan.detune_hz"));
    }
    with_context("plan", [&] { plan.validate(); });
    return plan;
}

json geometry_to_json(const SirGeometry& g, const Footprint& fp) {
    return {{"z_low_ohm", g.z_low_ohm},
            {"len_low_m", g.len_low_m},
            {"w_low_m", g.w_low_m},
            {"z_high_ohm", g.z_high_ohm},
            {"len_high_m", g.len_high_m},
            {"w_high_m", g.w_high_m},
            {"eps_eff_low", g.eps_eff_low},
            {"eps_eff_high", g.eps_eff_high},
            {"k_ratio", g.k_ratio},
            {"fold",
             {{"n_bends", g.fold.n_bends},
              {"min_gap_m", g.fold.min_gap_m},
              {"bend_allowance_m", g.fold.bend_allowance_m}}},
            {"footprint", {{"length_m", fp.length_m}, {"width_m", fp.width_m}}}};
}

json metrics_to_json(const PassbandMetrics& m, const BandSpec& band,
                     double rejection_threshold_db) {
    json out = metrics_fields(m);
    out["band"] = band_fields(band);
    out["rejection_threshold_db"] = rejection_threshold_db;
    return out;
}

json comparison_to_json(const ComparisonReport& r) {
    return {{"band_used", band_fields(r.band_used)},
            {"max_abs_delta_db", r.max_abs_delta_db},
            {"model_metrics", metrics_fields(r.model_metrics)},
            {"measured_metrics", metrics_fields(r.measured_metrics)},
            {"model_edge_rolloff", edge_rolloff_fields(r.model_edge_rolloff)},
            {"measured_edge_rolloff", edge_rolloff_fields(r.measured_edge_rolloff)},
            {"notes", r.notes}};
}

json tune_result_to_json(const TuneResult& r) {
    return {{"variables", r.variables},
            {"residual", r.residual},
            {"iterations", r.iterations},
            {"converged", r.converged}};
}

std::string comparison_to_text(const ComparisonReport& r) {
    std::ostringstream out;
    out << "comparison over " << r.band_used.f_lo_hz / 1e9 << " GHz .. "
        << r.band_used.f_hi_hz / 1e9 << " GHz (stopband edges " << r.band_used.stop_lo_hz / 1e9
        << " / " << r.band_used.stop_hi_hz / 1e9 << " GHz)\n";
    out << "max |S21| delta: " << fmt_db(r.max_abs_delta_db) << " dB\n";
    const auto row = [&](const char* label, const PassbandMetrics& m, const EdgeRolloff& e) {
        out << label << ": IL best " << fmt_db(m.il_best_db) << " dB, IL worst "
            << fmt_db(m.il_worst_db) << " dB, RL worst " << fmt_db(m.rl_worst_db)
            << " dB, rejection floor " << fmt_db(m.rejection_floor_db) << " dB\n";
        out << label << " roll-off (-3 dB ref): lower " << fmt_mhz(m.rolloff_lower_hz)
            << ", upper " << fmt_mhz(m.rolloff_upper_hz) << "; (band-edge ref): lower "
            << fmt_mhz(e.lower_hz) << ", upper " << fmt_mhz(e.upper_hz) << "\n";
    };
    row("model   ", r.model_metrics, r.model_edge_rolloff);
    row("measured", r.measured_metrics, r.measured_edge_rolloff);
    if (r.notes.empty()) {
        out << "notes: none\n";
    } else {
        out << "notes:\n";
        for (const auto& n : r.notes) out << "  - " << n << "\n";
    }
    return out.str();
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw validation_error("error while reading file: " + path.string());
    return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    const fs::path tmp = dir / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw validation_error("cannot write file: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw validation_error("error while writing file: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw validation_error("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

} // namespace rfsir

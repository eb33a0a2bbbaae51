#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rfsir/filter.hpp"
#include "rfsir/microstrip.hpp"
#include "rfsir/noise.hpp"
#include "rfsir/sir.hpp"
#include "rfsir/touchstone.hpp"
#include "rfsir/tuning.hpp"

namespace rfsir {

// Environment variable consulted when a --config path does not resolve
// relative to the working directory.
inline constexpr const char* kConfigDirEnv = "SIRTOOL_CONFIG_DIR";

struct FilterConfig {
    int n = 0;
    double f_lo_hz = 0;
    double f_hi_hz = 0;
    std::optional<double> ripple_db;      // exactly one of ripple_db /
    std::optional<double> return_loss_db; // return_loss_db must be present
    enum class QuMode { Explicit, FromSubstrate, Infinite };
    QuMode qu_mode = QuMode::Infinite;
    double qu_value = 0;
    double stop_lo_hz = 0; // default f_lo - 300 MHz
    double stop_hi_hz = 0; // default f_hi + 300 MHz

    double resolved_ripple_db() const;
    BandSpec band() const;
};

struct SirConfig {
    double k_ratio = 0;
    double w_low_m = 0;
    double w_high_m = 0;
    double split = 0.5;
    FoldSpec fold;
    // Optional [length_m, width_m] a synthesized footprint is compared against
    // (informational only).
    std::vector<double> reference_footprint_m;
};

struct TuneConfig {
    double max_il_db = 0;
    double min_rl_db = 0;
    double min_rejection_db = 0;
    double weight_il = 1;
    double weight_rl = 1;
    double weight_rejection = 1;
    double objective_grid_step_hz = 1e6;
    int budget = 400;
    bool use_detunes = false;
};

struct RadarConfig {
    double pt_w = 0;
    double g_antenna = 0;
    double lambda_m = 0;
    double sigma_m2 = 0;
    double b_hz = 0;
    double t0_k = kT0;
    double snr_min = 0;
    double conventional_nf_db = 4.0;
    std::vector<double> reference_nf_span_db; // optional [lo, hi]
    std::optional<double> reference_predicted_nf_db;
};

struct ProjectConfig {
    std::string name;
    std::string description;
    std::map<std::string, SubstrateSpec> substrates;
    std::string substrate_profile;
    FilterConfig filter;
    SirConfig sir;
    std::optional<CouplingModel> coupling;
    std::optional<TuneConfig> tune;
    // Scalar budget chain. A stage written as {"type": "filter", "loss_db": ...}
    // marks the band-pass filter itself: it is stored here as a passive stage at
    // filter_stage_t_phys_k and its position recorded in cascade_filter_index so
    // the frequency-dependent budget can substitute the modeled response for it.
    std::vector<CascadeStage> cascade;
    std::optional<std::size_t> cascade_filter_index;
    double filter_stage_t_phys_k = 77.0;
    std::optional<RadarConfig> radar;

    const SubstrateSpec& active_substrate() const;
};

// Locate a config file: the path as given, else relative to $SIRTOOL_CONFIG_DIR.
std::filesystem::path resolve_config_path(const std::string& path);

// Load + validate. Validation failures name the offending field path
// (e.g. "filter.n").
ProjectConfig load_project_config(const std::filesystem::path& path);
ProjectConfig parse_project_config(const nlohmann::json& j);

// Derived objects. plan_from_config resolves ripple (directly or from the
// return-loss target), takes f0 as the geometric band center, and resolves qu
// per filter.qu_mode (an explicit value, infinity, or unloaded_q of the low-Z
// line at f0 on the active substrate).
FilterPlan plan_from_config(const ProjectConfig& cfg);
SirGeometry geometry_from_config(const ProjectConfig& cfg);

// Inter-resonator gaps realizing the plan's couplings through the model.
std::vector<double> gaps_for_plan(const FilterPlan& plan, const CouplingModel& model);

// JSON serialization for emitted artifacts. Non-finite dB values (lossless
// rejection floor) serialize as null.
nlohmann::json plan_to_json(const FilterPlan& plan);
FilterPlan plan_from_json(const nlohmann::json& j);
nlohmann::json geometry_to_json(const SirGeometry& g, const Footprint& fp);
nlohmann::json metrics_to_json(const PassbandMetrics& m, const BandSpec& band,
                               double rejection_threshold_db);
nlohmann::json comparison_to_json(const ComparisonReport& r);
nlohmann::json tune_result_to_json(const TuneResult& r);
std::string comparison_to_text(const ComparisonReport& r);

// Whole-file IO; writes go to a temp file in the target directory followed by
// an atomic rename.
std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace rfsir

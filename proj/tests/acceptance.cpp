// Acceptance gate for the S-band SIR filter toolkit.
//
// Each criterion prints exactly one [PASS]/[FAIL] line carrying the measured
// values next to the tolerances pinned in the constants below, and the process
// exits with the number of failed criteria. Failing lines are left failing on
// purpose when the model family genuinely cannot reach the stated bracket; the
// README "Acceptance status" section discusses each one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "rfsir/config.hpp"
#include "rfsir/errors.hpp"
#include "rfsir/filter.hpp"
#include "rfsir/microstrip.hpp"
#include "rfsir/network.hpp"
#include "rfsir/noise.hpp"
#include "rfsir/sir.hpp"
#include "rfsir/touchstone.hpp"
#include "rfsir/tuning.hpp"

#include "support/oracles.hpp"

using namespace rfsir;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---- pinned tolerances and targets ----------------------------------------
constexpr double kA1WorstLoDb = -0.15, kA1WorstHiDb = -0.03; // worst in-band IL bracket
constexpr double kA1MaxSeconds = 5.0;                        // 1001-point sweep budget
constexpr double kA2WorstLoDb = -4.0, kA2WorstHiDb = -2.0;   // qu 250 bracket
constexpr double kA2EstRelTol = 0.15;           // estimate vs engine center IL
constexpr double kA3SideLoHz = 80e6, kA3SideHiHz = 160e6; // per-side roll-off span
constexpr double kA3RefMeasuredHz = 100e6;      // reference measured roll-off
constexpr double kA4GuardHz = 300e6;            // stopband guard beyond the band edges
constexpr double kA4FloorDb = -80.0;            // required rejection beyond the guard
constexpr double kA5aNfDb = 0.0693, kA5aTolDb = 0.0005;
constexpr double kA5aRefDb = 0.057, kA5aRefTolDb = 0.02;
constexpr double kA5bNfDb = 0.1200, kA5bTolDb = 0.0005;
constexpr double kA5cNfDb = 0.369, kA5cTolDb = 0.001;
constexpr double kA5dMaxDb = 0.1;               // swept in-band NF ceiling
constexpr double kA6ImpLow = 1.2322, kA6ImpHigh = 1.2162, kA6ImpTol = 0.0005;
constexpr double kA6LawRelTol = 1e-12;          // fourth-root-law consistency
constexpr double kA7UnitarityTol = 1e-10;
constexpr double kA7OracleTol = 1e-9;
constexpr double kA7TableTol = 5e-5;            // published 4-decimal table
constexpr double kA7SirRefineRelTol = 1e-6;
constexpr double kA7SpuriousRelTol = 1e-3;      // harmonic ratio 2 within 0.1%
constexpr double kA7MicrostripRelTol = 5e-3;
constexpr double kA7TouchstoneTol = 1e-9;
constexpr double kA7FriisIdentityTol = 1e-12;
constexpr double kA7TuneRecoveryRelTol = 0.02;
constexpr double kA8NoiseAmpDb = 0.03;          // injected measurement ripple
constexpr double kA8ThresholdDb = 0.1;          // comparison gate

int g_failed = 0;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void report(bool ok, const std::string& line) {
    std::printf("%s %s\n", ok ? "[PASS]" : "[FAIL]", line.c_str());
    if (!ok) ++g_failed;
}

BandSpec sband() { return BandSpec{3.1e9, 3.5e9, 2.8e9, 3.8e9}; }

FilterPlan stated_plan(double qu) {
    // The plan exactly as its headline parameters read: 11 poles, 3.1-3.5 GHz,
    // 0.0436 dB ripple (the rounded figure itself), uniform unloaded Q.
    const double f0 = std::sqrt(3.1e9 * 3.5e9);
    const double fbw = 0.4e9 / f0;
    return coupling_plan(chebyshev_prototype(11, 0.0436), f0, fbw, qu);
}

FilterPlan config_plan(double qu) {
    // The shipped configuration resolves the ripple from the 20 dB return-loss
    // target instead of the rounded figure.
    const double f0 = std::sqrt(3.1e9 * 3.5e9);
    const double fbw = 0.4e9 / f0;
    return coupling_plan(chebyshev_prototype(11, ripple_from_return_loss(20.0)), f0, fbw, qu);
}

FrequencyGrid standard_grid() { return FrequencyGrid::linspace(2.8e9, 3.8e9, 1e6); }

std::vector<CascadeStage> receiver(double filter_t_k) {
    return {CascadeStage::passive(0.07, filter_t_k), CascadeStage::active(30.0, 0.05)};
}

double s21_db_at(const FilterPlan& plan, double f_hz) {
    FrequencyGrid g;
    g.points_hz = {f_hz};
    return magnitude_db(frequency_response(plan, g).s21[0]);
}

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const fs::path& capture, const std::string& cmd) {
    const int status = std::system((cmd + " > '" + capture.string() + "' 2>&1").c_str());
    RunResult r;
    if (status != -1 && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    r.output = read_file(capture);
    return r;
}

// ---- criteria --------------------------------------------------------------

void criterion_a1() {
    const FilterPlan plan = stated_plan(7000.0);
    const FrequencyGrid grid = standard_grid();
    const auto t0 = std::chrono::steady_clock::now();
    const TwoPortSweep sweep = frequency_response(plan, grid);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const PassbandMetrics m = passband_metrics(sweep, sband(), -80.0);

    const bool bracket = m.il_worst_db >= kA1WorstLoDb && m.il_worst_db <= kA1WorstHiDb;
    const bool fast = seconds < kA1MaxSeconds;
    report(bracket && fast,
           "A1 11-pole 3.1-3.5 GHz plan (0.0436 dB ripple, qu 7000): worst in-band IL " +
               fmt("%.4f", m.il_worst_db) + " dB, required within [" + fmt("%.2f", kA1WorstLoDb) +
               ", " + fmt("%.2f", kA1WorstHiDb) + "] dB; " + std::to_string(grid.size()) +
               "-point sweep took " + fmt("%.3f", seconds) + " s (limit " +
               fmt("%.0f", kA1MaxSeconds) + " s)");
}

void criterion_a2() {
    const FilterPlan plan = stated_plan(250.0);
    const PassbandMetrics m = passband_metrics(frequency_response(plan, standard_grid()),
                                               sband(), -80.0);
    const double est_db = midband_il_estimate(plan.proto, plan.fbw, 250.0);
    const double center_db = -s21_db_at(plan, plan.f0_hz);
    const double rel = std::abs(est_db - center_db) / center_db;

    const bool bracket = m.il_worst_db >= kA2WorstLoDb && m.il_worst_db <= kA2WorstHiDb;
    const bool est_ok = rel <= kA2EstRelTol;
    report(bracket && est_ok,
           "A2 same plan at qu 250: worst in-band IL " + fmt("%.4f", m.il_worst_db) +
               " dB, required within [" + fmt("%.0f", kA2WorstLoDb) + ", " +
               fmt("%.0f", kA2WorstHiDb) + "] dB; midband estimate " + fmt("%.4f", est_db) +
               " dB vs engine center " + fmt("%.4f", center_db) + " dB (" +
               fmt("%.2f", rel * 100) + "% apart, tolerance " + fmt("%.0f", kA2EstRelTol * 100) +
               "%)");
}

void criterion_a3() {
    const PassbandMetrics m = passband_metrics(
        frequency_response(config_plan(7000.0), standard_grid()), sband(), -80.0);
    const bool have = m.rolloff_lower_hz.has_value() && m.rolloff_upper_hz.has_value();
    const double lo = have ? *m.rolloff_lower_hz : 0.0;
    const double hi = have ? *m.rolloff_upper_hz : 0.0;
    const bool ok = have && lo >= kA3SideLoHz && lo <= kA3SideHiHz && hi >= kA3SideLoHz &&
                    hi <= kA3SideHiHz;
    report(ok, "A3 roll-off (-3 dB point to -80 dB crossing, 1 MHz grid): model lower " +
                   fmt("%.3f", lo / 1e6) + " MHz, model upper " + fmt("%.3f", hi / 1e6) +
                   " MHz, required within [" + fmt("%.0f", kA3SideLoHz / 1e6) + ", " +
                   fmt("%.0f", kA3SideHiHz / 1e6) +
                   "] MHz per side; reference measured value: " +
                   fmt("%.0f", kA3RefMeasuredHz / 1e6) + " MHz per side");
}

void criterion_a4() {
    const FrequencyGrid grid = FrequencyGrid::linspace(2.6e9, 4.0e9, 1e6);
    const TwoPortSweep sweep = frequency_response(config_plan(7000.0), grid);
    const BandSpec band = sband();
    double floor_db = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = grid.points_hz[i];
        if (f <= band.f_lo_hz - kA4GuardHz || f >= band.f_hi_hz + kA4GuardHz)
            floor_db = std::max(floor_db, magnitude_db(sweep.s21[i]));
    }
    report(floor_db < kA4FloorDb,
           "A4 rejection floor beyond +/-" + fmt("%.0f", kA4GuardHz / 1e6) +
               " MHz of the passband: " + fmt("%.2f", floor_db) + " dB, required < " +
               fmt("%.0f", kA4FloorDb) + " dB");
}

void criterion_a5a() {
    const double nf = cascade_nf(receiver(77.0)).nf_db;
    const double ref_delta = std::abs(nf - kA5aRefDb);
    const bool ok = std::abs(nf - kA5aNfDb) <= kA5aTolDb && ref_delta <= kA5aRefTolDb;
    report(ok, "A5a cascade NF with the filter at 77 K: " + fmt("%.6f", nf) + " dB, required " +
                   fmt("%.4f", kA5aNfDb) + " +/- " + fmt("%.4f", kA5aTolDb) +
                   " dB; flagged discrepancy vs the " + fmt("%.3f", kA5aRefDb) +
                   " dB reference prediction: " + fmt("%.4f", ref_delta) + " dB (tolerance " +
                   fmt("%.2f", kA5aRefTolDb) + " dB)");
}

void criterion_a5b() {
    const double nf = cascade_nf(receiver(290.0)).nf_db;
    report(std::abs(nf - kA5bNfDb) <= kA5bTolDb,
           "A5b cascade NF with the filter at 290 K: " + fmt("%.6f", nf) + " dB, required " +
               fmt("%.4f", kA5bNfDb) + " +/- " + fmt("%.4f", kA5bTolDb) + " dB");
}

void criterion_a5c() {
    auto chain = receiver(77.0);
    chain.insert(chain.begin(), CascadeStage::passive(0.3, 290.0));
    const double nf = cascade_nf(chain).nf_db;
    report(std::abs(nf - kA5cNfDb) <= kA5cTolDb,
           "A5c cascade NF with an extra 0.3 dB room-temperature front pad: " +
               fmt("%.6f", nf) + " dB, required " + fmt("%.3f", kA5cNfDb) + " +/- " +
               fmt("%.3f", kA5cTolDb) + " dB");
}

void criterion_a5d() {
    const TwoPortSweep sweep = frequency_response(config_plan(7000.0), standard_grid());
    const auto nf = cascade_nf_sweep(sweep, 77.0, {CascadeStage::active(30.0, 0.05)});
    double worst = 0.0;
    for (const auto& [f, v] : nf)
        if (f >= 3.1e9 && f <= 3.5e9) worst = std::max(worst, v);
    report(worst < kA5dMaxDb,
           "A5d frequency-swept cascade NF across 3.1-3.5 GHz: maximum " + fmt("%.6f", worst) +
               " dB, required < " + fmt("%.1f", kA5dMaxDb) + " dB");
}

void criterion_a6() {
    const double i_low = range_improvement(4.0, 0.37);
    const double i_high = range_improvement(4.0, 0.6);

    RadarParams p;
    p.pt_w = 1e3;
    p.g_antenna = 1e3;
    p.lambda_m = 0.0909;
    p.sigma_m2 = 1.0;
    p.b_hz = 1e6;
    p.snr_min = 10.0;
    p.f = nf_to_factor(4.0);
    const double r_old = radar_max_range(p);
    p.f = nf_to_factor(0.37);
    const double r_new = radar_max_range(p);
    const double law_rel = std::abs(r_new / r_old - i_low) / i_low;
    const double chain_rel =
        std::abs(range_improvement(4.0, 1.0) * range_improvement(1.0, 0.37) - i_low) / i_low;

    const bool ok = std::abs(i_low - kA6ImpLow) <= kA6ImpTol &&
                    std::abs(i_high - kA6ImpHigh) <= kA6ImpTol && law_rel <= kA6LawRelTol &&
                    chain_rel <= kA6LawRelTol;
    report(ok, "A6 radar range improvement from 4 dB NF: to 0.37 dB -> x" +
                   fmt("%.5f", i_low) + " (required " + fmt("%.4f", kA6ImpLow) + " +/- " +
                   fmt("%.4f", kA6ImpTol) + "), to 0.6 dB -> x" + fmt("%.5f", i_high) +
                   " (required " + fmt("%.4f", kA6ImpHigh) + " +/- " + fmt("%.4f", kA6ImpTol) +
                   "); fourth-root law consistent to " + fmt("%.0e", law_rel) +
                   " (tolerance 1e-12)");
}

void criterion_a7() {
    std::vector<std::string> failed;
    const auto prop = [&](const char* name, bool ok) {
        if (!ok) failed.push_back(name);
    };

    // Lossless engine unitarity across the full sweep.
    {
        const TwoPortSweep sweep = frequency_response(config_plan(kInfiniteQ), standard_grid());
        double dev = 0.0;
        for (std::size_t i = 0; i < sweep.grid.size(); ++i)
            dev = std::max(dev, std::abs(std::norm(sweep.s11[i]) + std::norm(sweep.s21[i]) - 1.0));
        prop("lossless-unitarity", dev <= kA7UnitarityTol);
    }

    // Tridiagonal engine vs dense-inverse oracle on a 2-pole plan.
    {
        const FilterPlan plan = coupling_plan(chebyshev_prototype(2, 0.2), 1e9, 0.05, 500.0);
        const FrequencyGrid grid = FrequencyGrid::linspace(0.95e9, 1.05e9, 5e6);
        const TwoPortSweep sweep = frequency_response(plan, grid);
        double dev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto o = oracle::dense_inverse_response(plan.proto.g, 1e9, 0.05, 500.0,
                                                          grid.points_hz[i]);
            dev = std::max(dev, std::abs(sweep.s21[i] - o.s21));
            dev = std::max(dev, std::abs(sweep.s11[i] - o.s11));
        }
        prop("dense-oracle-agreement", dev <= kA7OracleTol);
    }

    // Prototype recursion vs the published 4-decimal 3-pole / 0.1 dB row.
    {
        const auto g = chebyshev_prototype(3, 0.1).g;
        prop("prototype-table",
             std::abs(g[1] - 1.0316) <= kA7TableTol && std::abs(g[2] - 1.1474) <= kA7TableTol &&
                 std::abs(g[3] - 1.0316) <= kA7TableTol && std::abs(g[4] - 1.0) <= kA7TableTol);
    }

    // Resonance solver: scan-refinement stability and the uniform-limit ladder.
    {
        SirGeometry u;
        u.z_low_ohm = u.z_high_ohm = 50.0;
        u.len_low_m = u.len_high_m = 5e-3;
        u.w_low_m = u.w_high_m = 5e-4;
        u.eps_eff_low = u.eps_eff_high = 4.0;
        u.k_ratio = 1.0;
        const auto coarse = resonance_spectrum(u, 1.6e10, 100000);
        const auto fine = resonance_spectrum(u, 1.6e10, 200000);
        bool stable = coarse.size() == fine.size() && !coarse.empty();
        if (stable)
            for (std::size_t i = 0; i < coarse.size(); ++i)
                stable = stable &&
                         std::abs(coarse[i] - fine[i]) / fine[i] <= kA7SirRefineRelTol;
        prop("sir-scan-stability", stable);
        const bool harmonic =
            coarse.size() >= 2 &&
            std::abs(coarse[1] / coarse[0] - 2.0) <= 2.0 * kA7SpuriousRelTol;
        prop("uniform-spurious-ratio", harmonic);
    }

    // Microstrip synthesis round trip.
    {
        SubstrateSpec sub;
        sub.eps_r = 9.4;
        sub.h_m = 4.3e-4;
        bool ok = true;
        for (double z0 : {30.0, 50.0, 80.0}) {
            const double w = synthesize_width(z0, sub);
            ok = ok && std::abs(analyze_line(w, sub).z0_ohm - z0) / z0 <= kA7MicrostripRelTol;
        }
        prop("microstrip-round-trip", ok);
    }

    // Touchstone writer/parser round trip in every format.
    {
        TwoPortSweep sw;
        sw.grid.points_hz = {1.0e9, 1.5e9, 2.0e9};
        sw.s11 = {cplx(0.6, -0.1), cplx(-0.2, 0.4), cplx(0.05, 0.02)};
        sw.s21 = {std::polar(0.01, 1.0), std::polar(0.97, -2.0), std::polar(0.4, 2.8)};
        sw.s12 = sw.s21;
        sw.s22 = {cplx(-0.5, 0.3), cplx(0.1, -0.1), cplx(0.7, 0.2)};
        double dev = 0.0;
        for (TsFormat fmt_kind : {TsFormat::RI, TsFormat::MA, TsFormat::DB}) {
            TouchstoneOptions opts;
            opts.format = fmt_kind;
            const auto back = parse_touchstone(write_touchstone(sw, opts)).first;
            for (std::size_t i = 0; i < sw.grid.size(); ++i) {
                const auto rel = [&](cplx a, cplx b) {
                    return std::abs(a - b) / std::max(1.0, std::abs(b));
                };
                dev = std::max({dev, rel(back.s11[i], sw.s11[i]), rel(back.s21[i], sw.s21[i]),
                                rel(back.s22[i], sw.s22[i])});
            }
        }
        prop("touchstone-round-trip", dev <= kA7TouchstoneTol);
    }

    // Cascade identities and monotonicity.
    {
        const double single_active = cascade_nf({CascadeStage::active(20.0, 3.0)}).nf_db;
        const double single_passive = cascade_nf({CascadeStage::passive(2.0, 290.0)}).nf_db;
        const double base = cascade_nf(receiver(77.0)).nf_db;
        auto noisier = receiver(77.0);
        noisier[1].nf_db = 0.5;
        auto rear_loaded = receiver(77.0);
        rear_loaded.push_back(CascadeStage::active(10.0, 6.0));
        prop("friis-identities",
             std::abs(single_active - 3.0) <= kA7FriisIdentityTol &&
                 std::abs(single_passive - 2.0) <= kA7FriisIdentityTol &&
                 cascade_nf(noisier).nf_db > base && cascade_nf(rear_loaded).nf_db > base);
    }

    // Tuner recovers a perturbed 3-pole design.
    {
        const CouplingModel model{0.35, 0.5e-3};
        const FilterPlan plan = coupling_plan(chebyshev_prototype(3, 0.1), 3.3e9, 0.1,
                                              kInfiniteQ);
        const auto edges = band_edges(plan.f0_hz, plan.fbw);
        TuneSpec spec;
        spec.band = BandSpec{edges.f_lo_hz, edges.f_hi_hz, 2.6e9,
                             plan.f0_hz * plan.f0_hz / 2.6e9};
        spec.max_il_db = -0.102;
        spec.min_rl_db = -16.3;
        spec.min_rejection_db = -30.0;
        std::vector<double> start;
        for (double k : plan.k_adj) start.push_back(coupling_to_gap(k, model) * 1.10);
        const TuneResult res = tune(start, spec, model, plan, 400);
        bool ok = res.converged;
        for (std::size_t i = 0; ok && i < res.variables.size(); ++i) {
            const double k = gap_to_coupling(res.variables[i], model);
            ok = std::abs(k - plan.k_adj[i]) / plan.k_adj[i] <= kA7TuneRecoveryRelTol;
        }
        prop("tune-recovery", ok);
    }

    std::string line = "A7 property suite: " + std::to_string(9 - failed.size()) +
                       "/9 properties hold";
    if (!failed.empty()) {
        line += " (failing:";
        for (const auto& f : failed) line += " " + f;
        line += ")";
    }
    report(failed.empty(), line);
}

void criterion_a8() {
    const std::string tool = SIRTOOL_PATH;
    const std::string config = SIRTOOL_SOURCE_CONFIG;
    const fs::path root =
        fs::temp_directory_path() / ("sirtool_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path capture = root / "output.txt";

    const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };

    const int rc_syn = run(capture, tool + " synthesize --config '" + config + "' --out " +
                                        q(root / "synth"))
                           .exit_code;
    const int rc_sim = run(capture, tool + " simulate --config '" + config + "' --out " +
                                        q(root / "sim"))
                           .exit_code;

    bool artifacts_ok = false;
    double max_delta = 0.0;
    int rc_cmp = -1;
    std::size_t notes = 999;
    try {
        // Re-parse what the tool wrote, then derive a synthetic "measured" file
        // by rippling |S21| with +/-0.03 dB across the sweep.
        const FilterPlan plan =
            plan_from_json(json::parse(read_file(root / "synth" / "plan.json")));
        artifacts_ok = plan.proto.n == 11;
        auto measured = parse_touchstone(read_file(root / "sim" / "response.s2p")).first;
        artifacts_ok = artifacts_ok && measured.grid.size() == 1001u;
        for (std::size_t i = 0; i < measured.s21.size(); ++i) {
            const double delta_db =
                kA8NoiseAmpDb * std::sin(2.0 * M_PI * static_cast<double>(i) / 37.0);
            const double scale = std::pow(10.0, delta_db / 20.0);
            measured.s21[i] *= scale;
            max_delta = std::max(max_delta, std::abs(delta_db));
        }
        measured.s12 = measured.s21;
        write_file_atomic(root / "measured.s2p", write_touchstone(measured, TouchstoneOptions{}));

        rc_cmp = run(capture, tool + " compare " + q(root / "sim" / "response.s2p") + " " +
                                  q(root / "measured.s2p") + " --config '" + config +
                                  "' --threshold-db " + fmt("%.2f", kA8ThresholdDb) + " --out " +
                                  q(root / "cmp"))
                     .exit_code;
        const json rep = json::parse(read_file(root / "cmp" / "comparison.json"));
        notes = rep["notes"].size();
        artifacts_ok = artifacts_ok && rep["max_abs_delta_db"].get<double>() < kA8ThresholdDb;
    } catch (const std::exception&) {
        artifacts_ok = false;
    }

    const bool ok = rc_syn == 0 && rc_sim == 0 && rc_cmp == 0 && notes == 0 && artifacts_ok;
    report(ok, "A8 CLI closed loop (synthesize -> simulate -> inject +/-" +
                   fmt("%.2f", kA8NoiseAmpDb) + " dB ripple -> compare at " +
                   fmt("%.1f", kA8ThresholdDb) + " dB): exit codes " + std::to_string(rc_syn) +
                   "/" + std::to_string(rc_sim) + "/" + std::to_string(rc_cmp) +
                   ", max injected delta " + fmt("%.4f", max_delta) +
                   " dB, artifacts re-parse and the comparison carries no notes");
    fs::remove_all(root);
}

} // namespace

int main() {
    std::printf("sirtool acceptance gate\n");
    criterion_a1();
    criterion_a2();
    criterion_a3();
    criterion_a4();
    criterion_a5a();
    criterion_a5b();
    criterion_a5c();
    criterion_a5d();
    criterion_a6();
    criterion_a7();
    criterion_a8();
    std::printf("summary: %d criteria failed\n", g_failed);
    return g_failed;
}

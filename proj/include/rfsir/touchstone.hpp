#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rfsir/network.hpp"

namespace rfsir {

enum class FreqUnit { Hz, kHz, MHz, GHz };
enum class TsFormat { RI, MA, DB };

// Touchstone v1 option-line settings. Only S-parameters are supported; angle
// unit is degrees per the v1 format.
struct TouchstoneOptions {
    FreqUnit freq_unit = FreqUnit::GHz;
    TsFormat format = TsFormat::MA;
    double z_ref_ohm = 50.0;
};

// Parse a 1- or 2-port Touchstone v1 file. '!' comments anywhere; at most one
// '#' option line with defaults (GHz, S, MA, R 50) for omitted fields; 2-port
// rows carry 9 numbers ordered f S11 S21 S12 S22, 1-port rows 3 numbers (the
// missing parameters fill with 0). Frequencies convert to Hz and must be
// strictly increasing. v2 keyword syntax ('[...]') is rejected. All errors are
// parse errors with 1-based line numbers.
std::pair<TwoPortSweep, TouchstoneOptions> parse_touchstone(std::string_view text);

// Emit a 2-port Touchstone v1 byte stream at 12 significant digits; a parse of
// the output reproduces the sweep within 1e-9 relative. In DB format a zero
// magnitude is clamped to -600 dB.
std::string write_touchstone(const TwoPortSweep& sweep, const TouchstoneOptions& opts);

// Noise-figure-vs-frequency trace.
struct NfTrace {
    FrequencyGrid grid;
    std::vector<double> nf_db;

    void validate() const;
};

// CSV with exact header "frequency_hz,nf_db", numeric rows, strictly
// increasing frequency. Errors carry 1-based line numbers.
NfTrace parse_nf_csv(std::string_view text);

std::string write_nf_csv(const NfTrace& trace);

// Roll-off measured from the band edge itself to the threshold crossing — the
// alternative to the -3 dB-referenced definition inside PassbandMetrics. Both
// are emitted because the two conventions differ and either may be the one a
// given datasheet means.
struct EdgeRolloff {
    std::optional<double> lower_hz;
    std::optional<double> upper_hz;
};

// Model-vs-measured verdict over a band. max_abs_delta_db is the largest
// |S21| dB difference over the overlapping span, evaluated symmetrically
// (each sweep resampled onto the other's grid points by linear interpolation
// in dB, so compare(a,b) == compare(b,a)). notes lists flagged discrepancies
// only: it is empty when every delta is within the threshold.
struct ComparisonReport {
    PassbandMetrics model_metrics;
    PassbandMetrics measured_metrics;
    double max_abs_delta_db = 0;
    BandSpec band_used;
    EdgeRolloff model_edge_rolloff;
    EdgeRolloff measured_edge_rolloff;
    std::vector<std::string> notes;
};

ComparisonReport compare(const TwoPortSweep& model, const TwoPortSweep& measured,
                         const BandSpec& band, double threshold_db,
                         double rejection_threshold_db = -60.0);

} // namespace rfsir

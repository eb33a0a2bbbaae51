#include "rfsir/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "rfsir/errors.hpp"

namespace rfsir {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Floor used when differencing dB traces and when writing DB-format files; a
// true transmission zero would otherwise poison every delta with an infinity.
constexpr double kDbFloor = -600.0;

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, int line) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw parse_error(line, "malformed number '" + tok + "'");
    return v;
}

double unit_factor(FreqUnit u) {
    switch (u) {
        case FreqUnit::Hz: return 1.0;
        case FreqUnit::kHz: return 1e3;
        case FreqUnit::MHz: return 1e6;
        case FreqUnit::GHz: return 1e9;
    }
    return 1.0;
}

const char* unit_name(FreqUnit u) {
    switch (u) {
        case FreqUnit::Hz: return "Hz";
        case FreqUnit::kHz: return "kHz";
        case FreqUnit::MHz: return "MHz";
        case FreqUnit::GHz: return "GHz";
    }
    return "Hz";
}

const char* format_name(TsFormat f) {
    switch (f) {
        case TsFormat::RI: return "RI";
        case TsFormat::MA: return "MA";
        case TsFormat::DB: return "DB";
    }
    return "MA";
}

cplx pair_to_complex(double a, double b, TsFormat fmt) {
    switch (fmt) {
        case TsFormat::RI: return {a, b};
        case TsFormat::MA: return std::polar(a, b * kPi / 180.0);
        case TsFormat::DB: return std::polar(std::pow(10.0, a / 20.0), b * kPi / 180.0);
    }
    return {};
}

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void emit_pair(std::string& out, cplx s, TsFormat fmt) {
    switch (fmt) {
        case TsFormat::RI:
            out += ' ' + fmt_g(s.real()) + ' ' + fmt_g(s.imag());
            break;
        case TsFormat::MA:
            out += ' ' + fmt_g(std::abs(s)) + ' ' + fmt_g(std::abs(s) == 0 ? 0.0 : std::arg(s) * 180.0 / kPi);
            break;
        case TsFormat::DB: {
            const double mag = std::abs(s);
            const double db = mag == 0 ? kDbFloor : 20.0 * std::log10(mag);
            out += ' ' + fmt_g(db) + ' ' + fmt_g(mag == 0 ? 0.0 : std::arg(s) * 180.0 / kPi);
            break;
        }
    }
}

} // namespace

std::pair<TwoPortSweep, TouchstoneOptions> parse_touchstone(std::string_view text) {
    TouchstoneOptions opts;
    bool saw_options = false;
    bool saw_data = false;
    std::size_t n_cols = 0;

    TwoPortSweep sw;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (const auto bang = raw.find('!'); bang != std::string::npos) raw.erase(bang);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[')
            throw parse_error(line_no, "keyword syntax '" + line + "' is Touchstone v2; only v1 files are supported");

        if (line.front() == '#') {
            if (saw_options) throw parse_error(line_no, "more than one option line");
            if (saw_data) throw parse_error(line_no, "option line must precede the data rows");
            saw_options = true;
            const auto toks = split_ws(line.substr(1));
            for (std::size_t i = 0; i < toks.size(); ++i) {
                const std::string t = lower(toks[i]);
                if (t == "hz") opts.freq_unit = FreqUnit::Hz;
                else if (t == "khz") opts.freq_unit = FreqUnit::kHz;
                else if (t == "mhz") opts.freq_unit = FreqUnit::MHz;
                else if (t == "ghz") opts.freq_unit = FreqUnit::GHz;
                else if (t == "s") { /* scattering parameters: the only supported kind */ }
                else if (t == "y" || t == "z" || t == "g" || t == "h")
                    throw parse_error(line_no, "parameter type '" + toks[i] + "' not supported; only S-parameters are");
                else if (t == "ri") opts.format = TsFormat::RI;
                else if (t == "ma") opts.format = TsFormat::MA;
                else if (t == "db") opts.format = TsFormat::DB;
                else if (t == "r") {
                    if (i + 1 >= toks.size())
                        throw parse_error(line_no, "option 'R' is missing its impedance value");
                    opts.z_ref_ohm = parse_number(toks[++i], line_no);
                    if (!(opts.z_ref_ohm > 0))
                        throw parse_error(line_no, "reference impedance must be > 0");
                } else {
                    throw parse_error(line_no, "unrecognized option token '" + toks[i] + "'");
                }
            }
            continue;
        }

        const auto toks = split_ws(line);
        std::vector<double> nums;
        nums.reserve(toks.size());
        for (const auto& t : toks) nums.push_back(parse_number(t, line_no));
        if (!saw_data) {
            if (nums.size() != 3 && nums.size() != 9)
                throw parse_error(line_no, "expected 3 (1-port) or 9 (2-port) numeric columns, found " +
                                               std::to_string(nums.size()));
            n_cols = nums.size();
            saw_data = true;
        } else if (nums.size() != n_cols) {
            throw parse_error(line_no, "expected " + std::to_string(n_cols) + " numeric columns, found " +
                                           std::to_string(nums.size()));
        }

        const double f_hz = nums[0] * unit_factor(opts.freq_unit);
        if (!(f_hz > 0)) throw parse_error(line_no, "frequency must be > 0");
        if (!sw.grid.points_hz.empty() && f_hz <= sw.grid.points_hz.back())
            throw parse_error(line_no, "frequency not strictly increasing");
        sw.grid.points_hz.push_back(f_hz);
        if (n_cols == 3) {
            sw.s11.push_back(pair_to_complex(nums[1], nums[2], opts.format));
            sw.s21.push_back({0, 0});
            sw.s12.push_back({0, 0});
            sw.s22.push_back({0, 0});
        } else {
            sw.s11.push_back(pair_to_complex(nums[1], nums[2], opts.format));
            sw.s21.push_back(pair_to_complex(nums[3], nums[4], opts.format));
            sw.s12.push_back(pair_to_complex(nums[5], nums[6], opts.format));
            sw.s22.push_back(pair_to_complex(nums[7], nums[8], opts.format));
        }
    }

    if (!saw_data) throw parse_error(std::max(line_no, 1), "no data rows found");
    sw.z_ref_ohm = opts.z_ref_ohm;
    sw.validate();
    return {std::move(sw), opts};
}

std::string write_touchstone(const TwoPortSweep& sweep, const TouchstoneOptions& opts) {
    sweep.validate();
    if (!(opts.z_ref_ohm > 0)) throw validation_error("reference impedance must be > 0");

    std::string out;
    out += "! 2-port S-parameters: f S11 S21 S12 S22\n";
    out += std::string("# ") + unit_name(opts.freq_unit) + " S " + format_name(opts.format) + " R " +
           fmt_g(opts.z_ref_ohm) + "\n";
    const double factor = unit_factor(opts.freq_unit);
    for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
        out += fmt_g(sweep.grid.points_hz[i] / factor);
        emit_pair(out, sweep.s11[i], opts.format);
        emit_pair(out, sweep.s21[i], opts.format);
        emit_pair(out, sweep.s12[i], opts.format);
        emit_pair(out, sweep.s22[i], opts.format);
        out += '\n';
    }
    return out;
}

void NfTrace::validate() const {
    grid.validate();
    if (nf_db.size() != grid.size())
        throw validation_error("NF trace length does not match its frequency grid");
    for (double v : nf_db)
        if (!std::isfinite(v)) throw validation_error("NF values must be finite");
}

NfTrace parse_nf_csv(std::string_view text) {
    NfTrace trace;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != "frequency_hz,nf_db")
                throw parse_error(line_no, "expected header \"frequency_hz,nf_db\"");
            saw_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw parse_error(line_no, "expected exactly two comma-separated cells");
        const double f = parse_number(trim(line.substr(0, comma)), line_no);
        const double nf = parse_number(trim(line.substr(comma + 1)), line_no);
        if (!(f > 0)) throw parse_error(line_no, "frequency must be > 0");
        if (!std::isfinite(nf)) throw parse_error(line_no, "NF value must be finite");
        if (!trace.grid.points_hz.empty() && f <= trace.grid.points_hz.back())
            throw parse_error(line_no, "frequency not strictly increasing");
        trace.grid.points_hz.push_back(f);
        trace.nf_db.push_back(nf);
    }
    if (!saw_header) throw parse_error(std::max(line_no, 1), "expected header \"frequency_hz,nf_db\"");
    if (trace.grid.points_hz.empty()) throw parse_error(std::max(line_no, 1), "no data rows found");
    trace.validate();
    return trace;
}

std::string write_nf_csv(const NfTrace& trace) {
    trace.validate();
    std::string out = "frequency_hz,nf_db\n";
    for (std::size_t i = 0; i < trace.grid.size(); ++i)
        out += fmt_g(trace.grid.points_hz[i]) + "," + fmt_g(trace.nf_db[i]) + "\n";
    return out;
}

namespace {

double floored_db(cplx s) {
    const double mag = std::abs(s);
    return mag == 0 ? kDbFloor : std::max(kDbFloor, 20.0 * std::log10(mag));
}

// |S21| in dB at frequency f by linear interpolation between grid samples.
double s21_db_at(const TwoPortSweep& sw, double f) {
    const auto& pts = sw.grid.points_hz;
    auto it = std::upper_bound(pts.begin(), pts.end(), f);
    if (it == pts.begin()) return floored_db(sw.s21.front());
    if (it == pts.end()) return floored_db(sw.s21.back());
    const std::size_t hi = static_cast<std::size_t>(it - pts.begin());
    const std::size_t lo = hi - 1;
    const double t = (f - pts[lo]) / (pts[hi] - pts[lo]);
    return (1.0 - t) * floored_db(sw.s21[lo]) + t * floored_db(sw.s21[hi]);
}

std::string fmt_note(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

EdgeRolloff edge_rolloff(const TwoPortSweep& sw, const BandSpec& band, double threshold_db) {
    return {rolloff_from_band_edge(sw, band, threshold_db, Side::Lower),
            rolloff_from_band_edge(sw, band, threshold_db, Side::Upper)};
}

} // namespace

ComparisonReport compare(const TwoPortSweep& model, const TwoPortSweep& measured,
                         const BandSpec& band, double threshold_db,
                         double rejection_threshold_db) {
    model.validate();
    measured.validate();
    band.validate();
    if (!(threshold_db > 0)) throw validation_error("comparison threshold must be > 0 dB");

    const double lo = std::max(model.grid.front(), measured.grid.front());
    const double hi = std::min(model.grid.back(), measured.grid.back());
    if (!(lo < hi)) throw range_error("model and measured frequency ranges do not overlap");
    if (band.f_lo_hz < lo || band.f_hi_hz > hi)
        throw range_error("passband edges lie outside the overlapping frequency span");

    ComparisonReport rep;
    rep.band_used = band;
    rep.band_used.stop_lo_hz = std::max(band.stop_lo_hz, lo);
    rep.band_used.stop_hi_hz = std::min(band.stop_hi_hz, hi);
    rep.band_used.validate();

    rep.model_metrics = passband_metrics(model, rep.band_used, rejection_threshold_db);
    rep.measured_metrics = passband_metrics(measured, rep.band_used, rejection_threshold_db);
    rep.model_edge_rolloff = edge_rolloff(model, rep.band_used, rejection_threshold_db);
    rep.measured_edge_rolloff = edge_rolloff(measured, rep.band_used, rejection_threshold_db);

    // Symmetric resampling: every sample of each sweep inside the overlap is
    // compared against the other's interpolated trace, so the result does not
    // depend on the argument order.
    double max_delta = 0;
    for (std::size_t i = 0; i < model.grid.size(); ++i) {
        const double f = model.grid.points_hz[i];
        if (f < lo || f > hi) continue;
        max_delta = std::max(max_delta, std::abs(floored_db(model.s21[i]) - s21_db_at(measured, f)));
    }
    for (std::size_t i = 0; i < measured.grid.size(); ++i) {
        const double f = measured.grid.points_hz[i];
        if (f < lo || f > hi) continue;
        max_delta = std::max(max_delta, std::abs(floored_db(measured.s21[i]) - s21_db_at(model, f)));
    }
    rep.max_abs_delta_db = max_delta;

    if (max_delta > threshold_db)
        rep.notes.push_back("max |S21| deviation " + fmt_note(max_delta) + " dB exceeds threshold " +
                            fmt_note(threshold_db) + " dB");

    const auto flag_metric = [&](const char* name, double a, double b) {
        const double d = std::abs(std::max(a, kDbFloor) - std::max(b, kDbFloor));
        if (d > threshold_db)
            rep.notes.push_back(std::string(name) + " differs by " + fmt_note(d) + " dB (model " +
                                fmt_note(a) + ", measured " + fmt_note(b) + ")");
    };
    flag_metric("best in-band IL", rep.model_metrics.il_best_db, rep.measured_metrics.il_best_db);
    flag_metric("worst in-band IL", rep.model_metrics.il_worst_db, rep.measured_metrics.il_worst_db);
    flag_metric("worst in-band RL", rep.model_metrics.rl_worst_db, rep.measured_metrics.rl_worst_db);
    flag_metric("rejection floor", rep.model_metrics.rejection_floor_db,
                rep.measured_metrics.rejection_floor_db);
    return rep;
}

} // namespace rfsir

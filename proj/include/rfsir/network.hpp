#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

namespace rfsir {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kFreeSpaceImpedance = 376.73031346177066; // ohm
inline constexpr double kNegInfDb = -std::numeric_limits<double>::infinity();
inline constexpr double kInfiniteQ = std::numeric_limits<double>::infinity();

// Strictly increasing list of positive frequencies in Hz.
struct FrequencyGrid {
    std::vector<double> points_hz;

    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<double> pts);

    // Inclusive endpoints; step must divide the span to within half a step.
    static FrequencyGrid linspace(double start_hz, double stop_hz, double step_hz);

    void validate() const;
    std::size_t size() const { return points_hz.size(); }
    double front() const { return points_hz.front(); }
    double back() const { return points_hz.back(); }
};

// Two-port scattering data over a grid. Linear complex ratios, one reference
// impedance for all ports.
struct TwoPortSweep {
    FrequencyGrid grid;
    std::vector<cplx> s11, s21, s12, s22;
    double z_ref_ohm = 50.0;

    void validate() const;
};

// Passband plus the stopband evaluation edges: the stopband windows are
// everything at or below stop_lo_hz and at or above stop_hi_hz.
struct BandSpec {
    double f_lo_hz = 0;
    double f_hi_hz = 0;
    double stop_lo_hz = 0;
    double stop_hi_hz = 0;

    void validate() const;
};

// |S21| and |S11| figures over a band. dB values follow the plotting
// convention: in-band |S21| of 0.99 is reported as -0.087 dB, so il_best_db is
// the *largest* (closest to zero) value and il_worst_db the smallest.
// Roll-off per side is measured from the -3 dB point (relative to il_best_db)
// to the rejection-threshold crossing; absent when the curve never reaches the
// threshold inside the grid.
struct PassbandMetrics {
    double il_best_db = 0;
    double il_worst_db = 0;
    double rl_worst_db = 0;
    double rejection_floor_db = 0;
    std::optional<double> rolloff_lower_hz;
    std::optional<double> rolloff_upper_hz;
};

// 20*log10(|s|); exact zero maps to -infinity.
double magnitude_db(cplx s);

// Extract passband/stopband figures from a sweep. Band edges and stopband
// edges must lie inside the grid span; values exactly at the edges are
// obtained by linear interpolation in dB so results are stable under grid
// refinement. rejection_threshold_db must be below -3 dB.
PassbandMetrics passband_metrics(const TwoPortSweep& sweep, const BandSpec& band,
                                 double rejection_threshold_db);

enum class Side { Lower, Upper };

// Distance from the band edge (f_lo or f_hi) to the threshold crossing on the
// given side; the alternative roll-off definition reported alongside the
// -3 dB-based one in comparison output. Absent when there is no crossing.
std::optional<double> rolloff_from_band_edge(const TwoPortSweep& sweep, const BandSpec& band,
                                             double threshold_db, Side side);

} // namespace rfsir

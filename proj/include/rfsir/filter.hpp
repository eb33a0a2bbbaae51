#pragma once

#include <vector>

#include "rfsir/network.hpp"

namespace rfsir {

// Chebyshev low-pass prototype element values g0..g_{n+1}.
struct PrototypeTable {
    int n = 0;
    double ripple_db = 0;
    std::vector<double> g; // n+2 entries

    void validate() const;
};

// Narrowband band-pass realization plan: center frequency, fractional
// bandwidth, adjacent couplings, external Qs, and a uniform unloaded Q
// (kInfiniteQ = lossless). detune_hz optionally offsets each resonator's own
// center frequency (empty = all zero); the response engine uses
// f0_i = f0 + detune_i on the corresponding diagonal entry.
struct FilterPlan {
    double f0_hz = 0;
    double fbw = 0;
    PrototypeTable proto;
    std::vector<double> k_adj;   // n-1 inter-resonator couplings
    double qe_in = 0;
    double qe_out = 0;
    double qu = kInfiniteQ;
    std::vector<double> detune_hz; // empty or n entries

    void validate() const;
};

// Classical recursion: beta = ln coth(ripple/17.37), gamma = sinh(beta/2n),
// a_k = sin((2k-1)pi/2n), b_k = gamma^2 + sin^2(k pi/n), g1 = 2 a1/gamma,
// g_k = 4 a_{k-1} a_k / (b_{k-1} g_{k-1}), g_{n+1} = 1 (odd n) or
// coth^2(beta/4) (even n).
PrototypeTable chebyshev_prototype(int n, double ripple_db);

// Equiripple level equivalent to a reflection ceiling: a return-loss magnitude
// of 20 dB corresponds to 0.0436 dB passband ripple.
double ripple_from_return_loss(double return_loss_db);

// k_{i,i+1} = fbw/sqrt(g_i g_{i+1}); qe_in = g0 g1/fbw; qe_out = g_n g_{n+1}/fbw.
FilterPlan coupling_plan(const PrototypeTable& proto, double f0_hz, double fbw, double qu);

// Passband edges of a plan: geometric center f0 = sqrt(f_lo*f_hi) and
// absolute width fbw*f0.
struct BandEdges {
    double f_lo_hz;
    double f_hi_hz;
};
BandEdges band_edges(double f0_hz, double fbw);

// Coupling-matrix response. Per frequency the n x n complex tridiagonal
// system A x = e is solved with
//   A_ii     = 1/(fbw*qu) + j*lambda_i,  lambda_i = (f/f0_i - f0_i/f)/fbw
//   A_(1,1) += 1/qe1s,  A_(n,n) += 1/qens,   qe_s = qe*fbw
//   A_(i,i+1) = A_(i+1,i) = -j*k_{i,i+1}/fbw
//   S21 = 2/sqrt(qe1s*qens) * (A^-1)_(n,1)
//   S11 = 1 - (2/qe1s) * (A^-1)_(1,1),   S22 analogous from the last column
// (one fixed normalization; the n = 2 dense-inverse oracle in the test suite
// pins it). Transmission phase is defined up to this formulation's overall
// rotation; all downstream metrics are magnitude-based. The tridiagonal solve
// is the Thomas algorithm; elimination pivots keep a positive real part for
// finite qu, and a vanishing pivot (degenerate lossless plan at exact
// resonance) raises a numeric error naming the frequency.
// Emits s12 = s21; z_ref 50 ohm.
TwoPortSweep frequency_response(const FilterPlan& plan, const FrequencyGrid& grid);

// Midband dissipation loss estimate (10/ln 10)*sum(g_1..g_n)/(fbw*qu) in dB,
// returned as a positive loss magnitude; 0 for infinite qu. Tracks the
// engine's center-frequency insertion loss within 15% for narrow bands; the
// band-edge loss of a lossy Chebyshev runs ~3x higher (group-delay peaking),
// so this is a center estimate, not a bound on the worst in-band value.
double midband_il_estimate(const PrototypeTable& proto, double fbw, double qu);

} // namespace rfsir

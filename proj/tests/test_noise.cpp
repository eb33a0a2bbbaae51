#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "rfsir/errors.hpp"
#include "rfsir/filter.hpp"
#include "rfsir/noise.hpp"

using namespace rfsir;

namespace {

std::vector<CascadeStage> front_end(double filter_t_k) {
    return {CascadeStage::passive(0.07, filter_t_k), CascadeStage::active(30.0, 0.05)};
}

RadarParams demo_radar() {
    RadarParams p;
    p.pt_w = 1e3;
    p.g_antenna = 1e3;
    p.lambda_m = 0.0909;
    p.sigma_m2 = 1.0;
    p.b_hz = 1e6;
    p.t0_k = 290.0;
    p.snr_min = 10.0;
    p.f = 2.512;
    return p;
}

} // namespace

TEST_CASE("factor conversion") {
    CHECK(nf_to_factor(0.0) == 1.0);
    CHECK(nf_to_factor(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(nf_to_factor(3.0) == doctest::Approx(1.9952623149688795).epsilon(1e-15));
}

TEST_CASE("passive stage factor") {
    // At the 290 K reference the noise factor equals the loss.
    const auto at_ref = passive_stage_factor(3.0, 290.0);
    CHECK(at_ref.factor == doctest::Approx(std::pow(10.0, 0.3)).epsilon(1e-15));
    CHECK(at_ref.gain == doctest::Approx(std::pow(10.0, -0.3)).epsilon(1e-15));

    // A cold attenuator adds almost no noise; the gain is unchanged.
    const auto cold = passive_stage_factor(3.0, 1e-9);
    CHECK(cold.factor == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cold.gain == at_ref.gain);

    const auto lossless = passive_stage_factor(0.0, 77.0);
    CHECK(lossless.factor == 1.0);
    CHECK(lossless.gain == 1.0);

    CHECK_THROWS_AS(passive_stage_factor(-0.1, 290.0), validation_error);
    CHECK_THROWS_AS(passive_stage_factor(1.0, 0.0), validation_error);
}

TEST_CASE("single-stage cascades reduce to the stage itself") {
    const auto amp = cascade_nf({CascadeStage::active(20.0, 3.0)});
    CHECK(amp.nf_db == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(amp.factor == doctest::Approx(nf_to_factor(3.0)).epsilon(1e-15));
    CHECK(amp.te_k == doctest::Approx((nf_to_factor(3.0) - 1.0) * 290.0).epsilon(1e-12));

    const auto att = cascade_nf({CascadeStage::passive(2.0, 290.0)});
    CHECK(att.nf_db == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("receiver front-end noise figure, cold vs room-temperature filter") {
    const auto cold = cascade_nf(front_end(77.0));
    CHECK(cold.nf_db == doctest::Approx(0.06928720829275209).epsilon(1e-12));

    const auto room = cascade_nf(front_end(290.0));
    CHECK(room.nf_db == doctest::Approx(0.12000000000000016).epsilon(1e-12));

    // An extra 0.3 dB room-temperature front loss adds exactly 0.3 dB:
    // F = L1 * F_rest when the first stage sits at the reference temperature.
    auto padded = front_end(77.0);
    padded.insert(padded.begin(), CascadeStage::passive(0.3, 290.0));
    const auto worst = cascade_nf(padded);
    CHECK(worst.nf_db == doctest::Approx(0.36928720829275147).epsilon(1e-12));
    CHECK(worst.nf_db == doctest::Approx(0.3 + cold.nf_db).epsilon(1e-12));
    CHECK(worst.factor == doctest::Approx(1.08875).epsilon(1e-4));
}

TEST_CASE("neutral stages do not change the cascade") {
    const auto base = cascade_nf(front_end(77.0));

    auto with_pad = front_end(77.0);
    with_pad.insert(with_pad.begin(), CascadeStage::passive(0.0, 123.0));
    CHECK(cascade_nf(with_pad).nf_db == doctest::Approx(base.nf_db).epsilon(1e-15));

    auto with_wire = front_end(77.0);
    with_wire.insert(with_wire.begin(), CascadeStage::active(0.0, 0.0));
    CHECK(cascade_nf(with_wire).nf_db == doctest::Approx(base.nf_db).epsilon(1e-15));
}

TEST_CASE("cascade NF is monotone in every noise contribution") {
    const double base = cascade_nf(front_end(77.0)).nf_db;

    auto hotter = front_end(120.0);
    CHECK(cascade_nf(hotter).nf_db > base);

    auto lossier = front_end(77.0);
    lossier[0].loss_db = 0.2;
    CHECK(cascade_nf(lossier).nf_db > base);

    auto noisier = front_end(77.0);
    noisier[1].nf_db = 0.5;
    CHECK(cascade_nf(noisier).nf_db > base);

    // More front gain suppresses a noisy third stage.
    auto chain_lo = front_end(77.0);
    chain_lo.push_back(CascadeStage::active(10.0, 6.0));
    auto chain_hi = chain_lo;
    chain_hi[1].gain_db = 40.0;
    CHECK(cascade_nf(chain_hi).nf_db < cascade_nf(chain_lo).nf_db);
}

TEST_CASE("empty cascade is rejected") {
    CHECK_THROWS_AS(cascade_nf({}), validation_error);
}

TEST_CASE("NF sweep over a synthetic filter response") {
    TwoPortSweep sw;
    sw.grid.points_hz = {1e9, 2e9, 3e9, 4e9};
    sw.s11 = {cplx(0, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)};
    sw.s21 = {cplx(1.0, 0.0),                      // ideal passband point
              std::polar(std::pow(10.0, -0.07 / 20.0), 1.0),
              std::polar(std::pow(10.0, -80.0 / 20.0), -2.0),
              cplx(0.0, 0.0)};                     // transmission zero
    sw.s12 = sw.s21;
    sw.s22 = sw.s11;

    const std::vector<CascadeStage> lna = {CascadeStage::active(30.0, 0.05)};
    const auto nf = cascade_nf_sweep(sw, 77.0, lna);
    REQUIRE(nf.size() == 4u);
    CHECK(nf[0].first == 1e9);

    // Lossless filter point: the cascade NF is the downstream NF.
    CHECK(nf[0].second == doctest::Approx(0.05).epsilon(1e-12));

    // In-band point reproduces the scalar cascade.
    CHECK(nf[1].second == doctest::Approx(cascade_nf(front_end(77.0)).nf_db).epsilon(1e-12));

    // Deep-rejection point follows the cascade formula by hand.
    {
        const double loss = 1e8; // 80 dB
        const double f_filter = 1.0 + (loss - 1.0) * (77.0 / 290.0);
        const double f_expected = f_filter + (nf_to_factor(0.05) - 1.0) * loss;
        CHECK(nf[2].second == doctest::Approx(10.0 * std::log10(f_expected)).epsilon(1e-12));
    }

    // A literal zero gets a large finite stand-in, not an infinity.
    CHECK(std::isfinite(nf[3].second));
    CHECK(nf[3].second > 500.0);

    // Gain through the filter is not allowed.
    TwoPortSweep active = sw;
    active.s21[0] = cplx(1.0 + 1e-6, 0.0);
    active.s12 = active.s21;
    CHECK_THROWS_AS(cascade_nf_sweep(active, 77.0, lna), validation_error);
    CHECK_THROWS_AS(cascade_nf_sweep(sw, 0.0, lna), validation_error);
}

TEST_CASE("NF sweep across the cold 11-pole filter band") {
    const auto plan =
        coupling_plan(chebyshev_prototype(11, ripple_from_return_loss(20.0)),
                      3293933818.4001207, 0.12143534814378326, 7000.0);
    const auto grid = FrequencyGrid::linspace(2.8e9, 3.8e9, 1e6);
    const auto sweep = frequency_response(plan, grid);
    const auto nf = cascade_nf_sweep(sweep, 77.0, {CascadeStage::active(30.0, 0.05)});

    double worst = 0.0;
    for (const auto& [f_hz, nf_db] : nf)
        if (f_hz >= 3.1e9 && f_hz <= 3.5e9) worst = std::max(worst, nf_db);
    CHECK(worst == doctest::Approx(0.14467346707615159).epsilon(1e-9));
}

TEST_CASE("radar maximum range") {
    const auto p = demo_radar();
    CHECK(radar_max_range(p) == doctest::Approx(14264.262246460477).epsilon(1e-9));

    // Fourth-root scaling: 16x the transmit power doubles the range.
    auto boosted = p;
    boosted.pt_w *= 16.0;
    CHECK(radar_max_range(boosted) == doctest::Approx(2.0 * radar_max_range(p)).epsilon(1e-12));

    auto doubled = p;
    doubled.pt_w *= 2.0;
    CHECK(radar_max_range(doubled) ==
          doctest::Approx(std::pow(2.0, 0.25) * radar_max_range(p)).epsilon(1e-12));

    // Noise factor and bandwidth enter inversely, also under the fourth root.
    auto noisier = p;
    noisier.f *= 16.0;
    CHECK(radar_max_range(noisier) == doctest::Approx(0.5 * radar_max_range(p)).epsilon(1e-12));

    auto bad = p;
    bad.pt_w = 0.0;
    CHECK_THROWS_AS(radar_max_range(bad), validation_error);
    bad = p;
    bad.snr_min = -1.0;
    CHECK_THROWS_AS(radar_max_range(bad), validation_error);
}

TEST_CASE("range improvement from a lower receiver NF") {
    CHECK(range_improvement(4.0, 0.37) == doctest::Approx(1.2323952052940699).epsilon(1e-12));
    CHECK(range_improvement(4.0, 0.6) == doctest::Approx(1.216186000646368).epsilon(1e-12));
    CHECK(range_improvement(1.7, 1.7) == 1.0);

    // Improvements compose multiplicatively.
    CHECK(range_improvement(4.0, 1.0) * range_improvement(1.0, 0.37) ==
          doctest::Approx(range_improvement(4.0, 0.37)).epsilon(1e-12));

    // Consistent with re-running the range equation at the lower NF.
    auto old_p = demo_radar();
    old_p.f = nf_to_factor(4.0);
    auto new_p = demo_radar();
    new_p.f = nf_to_factor(0.37);
    CHECK(radar_max_range(new_p) / radar_max_range(old_p) ==
          doctest::Approx(range_improvement(4.0, 0.37)).epsilon(1e-12));
}

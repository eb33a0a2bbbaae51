#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rfsir/errors.hpp"
#include "rfsir/microstrip.hpp"

using namespace rfsir;

namespace {

SubstrateSpec bare_sapphire() {
    SubstrateSpec s;
    s.eps_r = 9.4;
    s.h_m = 4.3e-4;
    return s;
}

SubstrateSpec hts_preset() {
    SubstrateSpec s = bare_sapphire();
    s.tan_delta = 1e-6;
    s.t_cond_m = 3e-7;
    s.rs_cond_ohm = 4.25e-3;
    s.f_rs_hz = 1e10;
    s.superconducting = true;
    return s;
}

SubstrateSpec copper_preset() {
    SubstrateSpec s = bare_sapphire();
    s.tan_delta = 2e-4;
    s.t_cond_m = 3e-6;
    s.rs_cond_ohm = 0.015;
    s.f_rs_hz = 3.3e9;
    s.superconducting = false;
    return s;
}

constexpr double kF0 = 3293933818.4001207; // sqrt(3.1e9 * 3.5e9)

} // namespace

TEST_CASE("closed-form golden at w/h = 1 on eps_r 9.4") {
    // Values computed from an independent transcription of the closed forms.
    const auto lp = analyze_line(4.3e-4, bare_sapphire());
    CHECK(lp.z0_ohm == doctest::Approx(50.26266285048038).epsilon(1e-12));
    CHECK(lp.eps_eff == doctest::Approx(6.326552861910985).epsilon(1e-12));
}

TEST_CASE("section goldens for the bundled widths") {
    const auto low = analyze_line(1.4654e-3, bare_sapphire());
    CHECK(low.z0_ohm == doctest::Approx(24.00031245844211).epsilon(1e-12));
    CHECK(low.eps_eff == doctest::Approx(7.1692156644500376).epsilon(1e-12));

    const auto high = analyze_line(1.347e-4, bare_sapphire());
    CHECK(high.z0_ohm == doctest::Approx(80.00597603917042).epsilon(1e-12));
    CHECK(high.eps_eff == doctest::Approx(5.907576547044022).epsilon(1e-12));

    CHECK(low.z0_ohm / high.z0_ohm == doctest::Approx(0.299981496965823).epsilon(1e-12));
}

TEST_CASE("effective permittivity stays between 1 and eps_r; Z0 decreases with width") {
    const auto sub = bare_sapphire();
    double prev_z0 = 1e9;
    for (double w = 5e-5; w < 5e-3; w *= 1.7) {
        const auto lp = analyze_line(w, sub);
        CHECK(lp.eps_eff > 1.0);
        CHECK(lp.eps_eff < sub.eps_r);
        CHECK(lp.z0_ohm < prev_z0);
        prev_z0 = lp.z0_ohm;
    }
}

TEST_CASE("width synthesis round trip") {
    const auto sub = bare_sapphire();
    for (double z0 : {24.0, 35.0, 50.0, 65.0, 80.0}) {
        const double w = synthesize_width(z0, sub);
        const auto lp = analyze_line(w, sub);
        CHECK(lp.z0_ohm == doctest::Approx(z0).epsilon(1e-6));
    }
    // Narrower strip for higher impedance.
    CHECK(synthesize_width(80.0, sub) < synthesize_width(50.0, sub));
    CHECK(synthesize_width(50.0, sub) < synthesize_width(24.0, sub));
}

TEST_CASE("width synthesis rejects unreachable targets naming the achievable range") {
    const auto sub = bare_sapphire();
    bool threw = false;
    try {
        synthesize_width(1e6, sub);
    } catch (const validation_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("range") != std::string::npos);
    }
    CHECK(threw);
    CHECK_THROWS_AS(synthesize_width(1e-3, sub), validation_error);
    CHECK_THROWS_AS(synthesize_width(0.0, sub), validation_error);
}

TEST_CASE("thickness correction nudges a thick strip wider electrically") {
    SubstrateSpec sub = copper_preset();
    const auto plain = analyze_line(1.4654e-3, sub);
    sub.thickness_correction = true;
    const auto corrected = analyze_line(1.4654e-3, sub);
    CHECK(corrected.z0_ohm < plain.z0_ohm); // wider effective strip, lower Z0
    CHECK(corrected.eps_eff > 1.0);
}

TEST_CASE("unloaded Q of the bundled presets") {
    // Superconducting preset: calibrated so the low-impedance section lands at
    // the design unloaded Q near 7000.
    const auto hts = hts_preset();
    const double q_hts = unloaded_q(analyze_line(1.4654e-3, hts), hts, kF0);
    CHECK(q_hts == doctest::Approx(6999.76768133592).epsilon(1e-9));
    CHECK(q_hts > 5e3);
    CHECK(q_hts < 5e4);

    const auto cu = copper_preset();
    const double q_cu = unloaded_q(analyze_line(1.4654e-3, cu), cu, kF0);
    CHECK(q_cu == doctest::Approx(207.88284110498066).epsilon(1e-9));
    CHECK(q_cu > 150.0);
    CHECK(q_cu < 400.0);
    // The published bracket holds at the nearby round evaluation point too.
    const double q_cu_33 = unloaded_q(analyze_line(1.4654e-3, cu), cu, 3.3e9);
    CHECK(q_cu_33 > 150.0);
    CHECK(q_cu_33 < 400.0);
}

TEST_CASE("conductor-Q frequency scaling laws") {
    SubstrateSpec sub = hts_preset();
    sub.tan_delta = 0; // isolate the conductor term
    const auto lp = analyze_line(1.4654e-3, sub);
    const double q1 = unloaded_q(lp, sub, 2e9);
    const double q2 = unloaded_q(lp, sub, 4e9);
    // Superconductor: Rs ~ f^2 so Qc ~ beta/Rs ~ 1/f.
    CHECK(q1 / q2 == doctest::Approx(2.0).epsilon(1e-9));

    SubstrateSpec cu = copper_preset();
    cu.tan_delta = 0;
    const double c1 = unloaded_q(lp, cu, 2e9);
    const double c2 = unloaded_q(lp, cu, 8e9);
    // Normal metal: Rs ~ sqrt(f) so Qc ~ sqrt(f); 4x frequency -> 2x Q.
    CHECK(c2 / c1 == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("loss-free substrate reports an infinite Q") {
    const auto sub = bare_sapphire(); // tan_delta = 0, rs = 0
    const auto lp = analyze_line(4.3e-4, sub);
    CHECK(std::isinf(unloaded_q(lp, sub, 3.3e9)));
}

TEST_CASE("dielectric-only Q equals 1/tan_delta") {
    SubstrateSpec sub = bare_sapphire();
    sub.tan_delta = 2e-4;
    const auto lp = analyze_line(4.3e-4, sub);
    CHECK(unloaded_q(lp, sub, 3.3e9) == doctest::Approx(5000.0).epsilon(1e-12));
}

TEST_CASE("input validation") {
    SubstrateSpec bad = bare_sapphire();
    bad.eps_r = 0.5;
    CHECK_THROWS_AS(bad.validate(), validation_error);
    bad = bare_sapphire();
    bad.h_m = 0;
    CHECK_THROWS_AS(bad.validate(), validation_error);
    bad = bare_sapphire();
    bad.tan_delta = -1e-4;
    CHECK_THROWS_AS(bad.validate(), validation_error);
    bad = bare_sapphire();
    bad.f_rs_hz = 0;
    CHECK_THROWS_AS(bad.validate(), validation_error);

    CHECK_THROWS_AS(analyze_line(0.0, bare_sapphire()), validation_error);
    CHECK_THROWS_AS(analyze_line(-1e-4, bare_sapphire()), validation_error);
    const auto lp = analyze_line(4.3e-4, bare_sapphire());
    CHECK_THROWS_AS(unloaded_q(lp, bare_sapphire(), 0.0), validation_error);
}

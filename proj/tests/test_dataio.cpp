#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"

#include "oracles.hpp"
#include "tpadlab/dataio.hpp"
#include "tpadlab/error.hpp"

using namespace tpadlab;
using namespace tpadlab::dataio;

namespace {

constexpr double kFs = 300e3;
constexpr std::size_t kN = 30000;  // 0.1 s
constexpr double kPi = std::numbers::pi;

TimeTraces trial(double f, double v_amp, double i_amp, double phase_deg, std::size_t n = kN, double r0 = 100.0) {
    TimeTraces t;
    t.sample_rate = kFs;
    t.v_piezo = oracle::tone(n, kFs, f, v_amp);
    t.v_shunt = oracle::tone(n, kFs, f, i_amp * r0, -phase_deg * kPi / 180.0);
    return t;
}

}  // namespace

TEST_CASE("trace CSV parsing") {
    SUBCASE("0.1 s at 300 kHz with LDV") {
        std::ostringstream csv;
        csv << "v_piezo,v_shunt,ldv\n";
        for (std::size_t i = 0; i < kN; ++i) csv << std::sin(0.1 * i) << ",0.5," << 1e-6 * std::cos(0.1 * i) << '\n';
        const auto t = parse_traces_csv(csv.str(), kFs, LdvKind::Velocity);
        CHECK(t.size() == kN);
        REQUIRE(t.ldv.has_value());
        CHECK(t.ldv->kind == LdvKind::Velocity);
        CHECK(t.ldv->samples.size() == kN);
        CHECK(t.v_shunt[17] == 0.5);
    }
    SUBCASE("three rows are too short") {
        CHECK_THROWS_AS(parse_traces_csv("v_piezo,v_shunt\n1,2\n3,4\n5,6\n", kFs), InsufficientSamples);
    }
    SUBCASE("missing LDV column") {
        std::ostringstream csv;
        csv << "v_piezo,v_shunt\n";
        for (int i = 0; i < 100; ++i) csv << i << ',' << -i << '\n';
        const auto t = parse_traces_csv(csv.str(), kFs);
        CHECK_FALSE(t.ldv.has_value());
        CHECK(t.size() == 100);
    }
    SUBCASE("ragged rows and bad headers") {
        CHECK_THROWS_AS(parse_traces_csv("v_piezo,v_shunt\n1,2\n3\n", kFs), MalformedTraceFile);
        CHECK_THROWS_AS(parse_traces_csv("v_piezo,v_shunt,ldv\n1,2,3\n3,4\n", kFs), MalformedTraceFile);
        CHECK_THROWS_AS(parse_traces_csv("a,b\n1,2\n", kFs), MalformedTraceFile);
        CHECK_THROWS_AS(parse_traces_csv("v_piezo,v_shunt\n1,x\n", kFs), MalformedTraceFile);
        CHECK_THROWS_AS(parse_traces_csv("", kFs), MalformedTraceFile);
    }
    SUBCASE("sample rate must clear the drive band") {
        std::ostringstream csv;
        csv << "v_piezo,v_shunt\n";
        for (int i = 0; i < 100; ++i) csv << "0,0\n";
        CHECK_THROWS_AS(parse_traces_csv(csv.str(), 100e3), InvalidProperty);
    }
    SUBCASE("writer output reads back") {
        auto t = trial(30e3, 40.0, 0.1, 60.0, 200);
        t.ldv = LdvChannel{LdvKind::Displacement, oracle::tone(200, kFs, 30e3, 3e-6)};
        std::ostringstream out;
        write_traces_csv(out, t);
        const auto back = parse_traces_csv(out.str(), kFs);
        REQUIRE(back.size() == t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(back.v_piezo[i] == doctest::Approx(t.v_piezo[i]).epsilon(1e-11));
            CHECK(back.ldv->samples[i] == doctest::Approx(t.ldv->samples[i]).epsilon(1e-11));
        }
    }
    SUBCASE("loading from disk") {
        std::filesystem::create_directories(TPADLAB_TEST_TMPDIR);
        const auto path = std::filesystem::path(TPADLAB_TEST_TMPDIR) / "trial.csv";
        {
            std::ofstream f(path);
            write_traces_csv(f, trial(30e3, 40.0, 0.1, 0.0, 300));
        }
        CHECK(load_traces_csv(path, kFs).size() == 300);
        CHECK_THROWS_AS(load_traces_csv(path.string() + ".missing", kFs), MalformedTraceFile);
    }
}

TEST_CASE("drive frequency detection") {
    SUBCASE("single tone") {
        TimeTraces t = trial(33.1e3, 1.0, 0.0, 0.0);
        CHECK(std::abs(detect_drive_frequency(t) - 33.1e3) < 5.0);
    }
    SUBCASE("tone between bins") {
        TimeTraces t = trial(27.3456e3, 1.0, 0.0, 0.0);
        CHECK(std::abs(detect_drive_frequency(t) - 27.3456e3) < 5.0);
    }
    SUBCASE("DC only") {
        TimeTraces t = trial(30e3, 0.0, 0.0, 0.0);
        std::fill(t.v_piezo.begin(), t.v_piezo.end(), 2.5);
        CHECK_THROWS_AS(detect_drive_frequency(t), DriveFrequencyNotFound);
    }
    SUBCASE("dominant of two tones") {
        TimeTraces t = trial(30e3, 1.0, 0.0, 0.0);
        const auto second = oracle::tone(kN, kFs, 60e3, 0.1);
        for (std::size_t i = 0; i < kN; ++i) t.v_piezo[i] += second[i];
        CHECK(std::abs(detect_drive_frequency(t) - 30e3) < 5.0);
    }
    SUBCASE("tone outside the drive band") {
        TimeTraces t = trial(5e3, 1.0, 0.0, 0.0);
        CHECK_THROWS_AS(detect_drive_frequency(t), DriveFrequencyNotFound);
    }
}

TEST_CASE("real power from traces") {
    // 40 V and 0.1 A peak, 60 degrees apart: P = 0.5 * 40 * 0.1 * cos 60 = 1 W.
    CHECK(real_power_from_traces(trial(30e3, 40.0, 0.1, 60.0), 100.0) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(real_power_from_traces(trial(30e3, 40.0, 0.1, 90.0), 100.0)) < 1e-4);

    TimeTraces silent = trial(30e3, 40.0, 0.0, 0.0);
    CHECK(real_power_from_traces(silent, 100.0) == 0.0);

    SUBCASE("off-bin tone") {
        CHECK(real_power_from_traces(trial(27.3456e3, 40.0, 0.1, 60.0), 100.0) == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("insensitive to a trailing partial period") {
        const double base = real_power_from_traces(trial(31.7e3, 40.0, 0.1, 45.0), 100.0);
        for (std::size_t extra : {1u, 3u, 5u, 9u}) {
            const double p = real_power_from_traces(trial(31.7e3, 40.0, 0.1, 45.0, kN + extra), 100.0);
            CHECK(std::abs(p - base) / base < 1e-3);
        }
    }
    SUBCASE("source-node logging subtracts the shunt drop") {
        TimeTraces t = trial(30e3, 40.0, 0.1, 60.0);
        TimeTraces at_source = t;
        for (std::size_t i = 0; i < t.size(); ++i) at_source.v_piezo[i] += t.v_shunt[i];
        CHECK(real_power_from_traces(at_source, 100.0, PiezoNode::Source) ==
              doctest::Approx(real_power_from_traces(t, 100.0)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(real_power_from_traces(trial(30e3, 40.0, 0.1, 60.0), 0.0), InvalidProperty);
}

TEST_CASE("LDV amplitude") {
    TimeTraces t = trial(30e3, 40.0, 0.1, 60.0);
    CHECK_THROWS_AS(amplitude_from_ldv(t), NoLdvChannel);

    SUBCASE("displacement") {
        t.ldv = LdvChannel{LdvKind::Displacement, oracle::tone(kN, kFs, 30e3, 3e-6, 0.4)};
        const auto a = amplitude_from_ldv(t);
        CHECK(a.vibration.frequency == doctest::Approx(30e3).epsilon(1e-4));
        CHECK(a.vibration.amplitude == doctest::Approx(3e-6).epsilon(5e-3));
        CHECK_FALSE(a.low_confidence);
    }
    SUBCASE("velocity") {
        const double w = 2.0 * kPi * 30e3;
        t.ldv = LdvChannel{LdvKind::Velocity, oracle::tone(kN, kFs, 30e3, w * 3e-6)};
        CHECK(amplitude_from_ldv(t, 30e3).vibration.amplitude == doctest::Approx(3e-6).epsilon(5e-3));
    }
    SUBCASE("off-bin drive") {
        TimeTraces u = trial(27.3456e3, 40.0, 0.1, 60.0);
        u.ldv = LdvChannel{LdvKind::Displacement, oracle::tone(kN, kFs, 27.3456e3, 3e-6, 1.0)};
        CHECK(amplitude_from_ldv(u).vibration.amplitude == doctest::Approx(3e-6).epsilon(5e-3));
    }
    SUBCASE("linear in tone amplitude") {
        double prev = 0.0;
        for (double amp : {1e-6, 2e-6, 4e-6}) {
            t.ldv = LdvChannel{LdvKind::Displacement, oracle::tone(kN, kFs, 30e3, amp)};
            const double a = amplitude_from_ldv(t).vibration.amplitude;
            CHECK(a == doctest::Approx(amp).epsilon(5e-3));
            if (prev > 0.0) CHECK(a / prev == doctest::Approx(2.0).epsilon(1e-9));
            prev = a;
        }
    }
    SUBCASE("white noise is flagged") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> noise(0.0, 1e-6);
        std::vector<double> x(kN);
        for (auto& v : x) v = noise(rng);
        t.ldv = LdvChannel{LdvKind::Displacement, x};
        const auto a = amplitude_from_ldv(t, 30e3);
        CHECK(a.noise_floor > 0.0);
        CHECK(a.vibration.amplitude < 10.0 * a.noise_floor);
        CHECK(a.low_confidence);
    }
}

TEST_CASE("trial summaries") {
    TimeTraces t = trial(32e3, 40.0, 0.1, 60.0);
    t.ldv = LdvChannel{LdvKind::Displacement, oracle::tone(kN, kFs, 32e3, 2.5e-6)};

    const auto s = summarize_trial(t, 100.0);
    CHECK(s.drive_frequency == doctest::Approx(32e3).epsilon(1e-4));
    CHECK(s.real_power == doctest::Approx(1.0).epsilon(1e-3));
    REQUIRE(s.amplitude.has_value());
    CHECK(*s.amplitude == doctest::Approx(2.5e-6).epsilon(5e-3));
    CHECK(s.rms_current == doctest::Approx(0.1 / std::numbers::sqrt2).epsilon(1e-3));
    CHECK_FALSE(s.low_confidence);

    SUBCASE("averaging five identical trials") {
        const std::vector<TrialSummary> five(5, s);
        const auto avg = average_trials(five);
        CHECK(avg.drive_frequency == doctest::Approx(s.drive_frequency).epsilon(1e-15));
        CHECK(avg.real_power == doctest::Approx(s.real_power).epsilon(1e-15));
        CHECK(*avg.amplitude == doctest::Approx(*s.amplitude).epsilon(1e-15));
        CHECK(avg.rms_current == doctest::Approx(s.rms_current).epsilon(1e-15));
        CHECK_THROWS_AS(average_trials({}), InvalidProperty);
    }
    SUBCASE("zero signal") {
        TimeTraces z = trial(30e3, 0.0, 0.0, 0.0);
        z.ldv = LdvChannel{LdvKind::Displacement, std::vector<double>(kN, 0.0)};
        const auto zs = summarize_trial(z, 100.0);
        CHECK(zs.real_power == 0.0);
        CHECK(zs.amplitude.value() == 0.0);
        CHECK(zs.rms_current == 0.0);
    }
    SUBCASE("summary CSV") {
        std::ostringstream out;
        write_summary_header(out);
        write_summary_row(out, TrialSummary{30e3, 0.5, 3e-6, 0.07, false});
        write_summary_row(out, TrialSummary{30e3, 0.5, std::nullopt, 0.07, true});
        CHECK(out.str() ==
              "drive_frequency_hz,real_power_w,amplitude_m,rms_current_a,low_confidence\n"
              "30000,0.5,3e-06,0.07,0\n"
              "30000,0.5,,0.07,1\n");
    }
}

TEST_CASE("whole-period windowing") {
    CHECK(whole_period_samples(30000, 300e3, 30e3) == 30000);
    CHECK(whole_period_samples(30005, 300e3, 30e3) == 30000);
    CHECK(whole_period_samples(100, 300e3, 31.7e3) == 95);
    CHECK_THROWS_AS(whole_period_samples(5, 300e3, 30e3), InsufficientSamples);
}

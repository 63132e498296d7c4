#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tpadlab/friction.hpp"

namespace tpadlab::dataio {

/// Drive frequencies the trace tools expect, Hz.
inline constexpr double kMinDriveFrequency = 15e3;
inline constexpr double kMaxDriveFrequency = 60e3;

enum class LdvKind { Displacement, Velocity };

struct LdvChannel {
    LdvKind kind = LdvKind::Displacement;
    std::vector<double> samples;  // m or m/s
};

/// Which node the v_piezo column was logged at.
enum class PiezoNode {
    Device,  // across the actuator
    Source,  // amplifier output, i.e. actuator plus shunt
};

struct TimeTraces {
    double sample_rate = 0.0;  // Hz
    std::vector<double> v_piezo;  // V
    std::vector<double> v_shunt;  // V
    std::optional<LdvChannel> ldv;

    [[nodiscard]] std::size_t size() const { return v_piezo.size(); }
};

/// Minimum record length: two periods of the lowest expected drive frequency.
std::size_t min_samples(double sample_rate);

/// Throws InvalidProperty for a sample rate at or below twice kMaxDriveFrequency or
/// unequal channel lengths, and InsufficientSamples for records shorter than min_samples.
void validate(const TimeTraces& traces);

/// CSV with header `v_piezo,v_shunt` or `v_piezo,v_shunt,ldv`, uniformly sampled.
TimeTraces parse_traces_csv(std::string_view text, double sample_rate, LdvKind ldv_kind = LdvKind::Displacement);
TimeTraces load_traces_csv(const std::filesystem::path& path, double sample_rate,
                           LdvKind ldv_kind = LdvKind::Displacement);
void write_traces_csv(std::ostream& out, const TimeTraces& traces);

/// Dominant spectral peak of v_piezo (Hann window, log-parabolic refinement).
/// Throws DriveFrequencyNotFound when there is no tone or it falls outside [15, 60] kHz.
double detect_drive_frequency(const TimeTraces& traces);

/// Number of leading samples spanning a whole number of drive periods.
std::size_t whole_period_samples(std::size_t available, double sample_rate, double frequency);

/// Mean of v_device(t) * v_shunt(t) / R0 over whole drive periods, W.
double real_power_from_traces(const TimeTraces& traces, double shunt_resistance, PiezoNode node = PiezoNode::Device);

struct AmplitudeEstimate {
    friction::VibrationState vibration;  // displacement amplitude in m
    /// Median single-bin amplitude away from the drive tone and its harmonics, m.
    double noise_floor = 0.0;
    /// Set when the amplitude is below ten times the noise floor.
    bool low_confidence = false;
};

/// Single-bin Fourier projection of the LDV channel at the drive frequency
/// (2 |X| / N over whole periods); velocity records are divided by w.
/// The drive frequency is detected from v_piezo when not given.
AmplitudeEstimate amplitude_from_ldv(const TimeTraces& traces, std::optional<double> drive_frequency = std::nullopt);

struct TrialSummary {
    double drive_frequency = 0.0;  // Hz
    double real_power = 0.0;       // W
    std::optional<double> amplitude;  // m, absent without an LDV channel
    double rms_current = 0.0;      // A
    bool low_confidence = false;
};

/// All-zero traces summarize to zero power and amplitude without a drive frequency.
TrialSummary summarize_trial(const TimeTraces& traces, double shunt_resistance, PiezoNode node = PiezoNode::Device);

/// Field-wise mean of repeated trials.
TrialSummary average_trials(std::span<const TrialSummary> trials);

/// CSV header `drive_frequency_hz,real_power_w,amplitude_m,rms_current_a,low_confidence`.
void write_summary_header(std::ostream& out, bool with_label = false);
void write_summary_row(std::ostream& out, const TrialSummary& summary, std::string_view label = {});

}  // namespace tpadlab::dataio

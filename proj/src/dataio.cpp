#include "tpadlab/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <fftw3.h>

#include "tpadlab/csv.hpp"
#include "tpadlab/error.hpp"

namespace tpadlab::dataio {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

struct PlanDeleter {
    void operator()(fftw_plan p) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};

using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

// Magnitude spectrum (bins 0..N/2) of a Hann-windowed, mean-removed signal.
std::vector<double> hann_magnitude_spectrum(std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t bins = n / 2 + 1;
    std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
    std::unique_ptr<fftw_complex, FftwFree> out(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
    Plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
        in.get()[i] = (x[i] - mean) * w;
    }
    fftw_execute(plan.get());
    std::vector<double> mag(bins);
    for (std::size_t k = 0; k < bins; ++k) mag[k] = std::hypot(out.get()[k][0], out.get()[k][1]);
    return mag;
}

std::complex<double> project(std::span<const double> x, double mean, double frequency, double sample_rate) {
    const double dphi = 2.0 * std::numbers::pi * frequency / sample_rate;
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += (x[i] - mean) * std::polar(1.0, -dphi * static_cast<double>(i));
    }
    return acc;
}

bool all_zero(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

std::vector<double> device_voltage(const TimeTraces& t, PiezoNode node) {
    std::vector<double> v = t.v_piezo;
    if (node == PiezoNode::Source) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= t.v_shunt[i];
    }
    return v;
}

}  // namespace

std::size_t min_samples(double sample_rate) {
    return static_cast<std::size_t>(std::ceil(2.0 * sample_rate / kMinDriveFrequency));
}

void validate(const TimeTraces& t) {
    if (!std::isfinite(t.sample_rate) || t.sample_rate <= 2.0 * kMaxDriveFrequency) {
        throw InvalidProperty("sample rate must exceed twice the highest drive frequency (120 kHz)");
    }
    if (t.v_shunt.size() != t.v_piezo.size() || (t.ldv && t.ldv->samples.size() != t.v_piezo.size())) {
        throw InvalidProperty("trace channels must have equal length");
    }
    if (t.v_piezo.size() < min_samples(t.sample_rate)) {
        throw InsufficientSamples("trace has " + std::to_string(t.v_piezo.size()) + " samples; at least " +
                                  std::to_string(min_samples(t.sample_rate)) + " are needed");
    }
}

TimeTraces parse_traces_csv(std::string_view text, double sample_rate, LdvKind ldv_kind) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw MalformedTraceFile("trace CSV is empty");
    const auto header = csv::split_line(line);
    bool has_ldv = false;
    if (header == std::vector<std::string>{"v_piezo", "v_shunt", "ldv"}) {
        has_ldv = true;
    } else if (header != std::vector<std::string>{"v_piezo", "v_shunt"}) {
        throw MalformedTraceFile("trace CSV header must be v_piezo,v_shunt[,ldv]");
    }

    TimeTraces t;
    t.sample_rate = sample_rate;
    if (has_ldv) t.ldv = LdvChannel{ldv_kind, {}};
    const std::size_t columns = has_ldv ? 3 : 2;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = csv::split_line(line);
        if (cells.size() != columns) {
            throw MalformedTraceFile("trace CSV line " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " + std::to_string(columns));
        }
        double values[3] = {0.0, 0.0, 0.0};
        for (std::size_t c = 0; c < columns; ++c) {
            if (!csv::parse_number(cells[c], values[c])) {
                throw MalformedTraceFile("trace CSV line " + std::to_string(line_no) + " has a non-numeric cell");
            }
        }
        t.v_piezo.push_back(values[0]);
        t.v_shunt.push_back(values[1]);
        if (has_ldv) t.ldv->samples.push_back(values[2]);
    }
    validate(t);
    return t;
}

TimeTraces load_traces_csv(const std::filesystem::path& path, double sample_rate, LdvKind ldv_kind) {
    std::ifstream in(path);
    if (!in) throw MalformedTraceFile("cannot open trace CSV " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_traces_csv(buf.str(), sample_rate, ldv_kind);
}

void write_traces_csv(std::ostream& out, const TimeTraces& t) {
    out << (t.ldv ? "v_piezo,v_shunt,ldv\n" : "v_piezo,v_shunt\n");
    for (std::size_t i = 0; i < t.size(); ++i) {
        out << csv::format_number(t.v_piezo[i]) << ',' << csv::format_number(t.v_shunt[i]);
        if (t.ldv) out << ',' << csv::format_number(t.ldv->samples[i]);
        out << '\n';
    }
}

double detect_drive_frequency(const TimeTraces& t) {
    validate(t);
    const auto mag = hann_magnitude_spectrum(t.v_piezo);
    const double scale = std::accumulate(t.v_piezo.begin(), t.v_piezo.end(), 0.0,
                                         [](double acc, double v) { return std::max(acc, std::abs(v)); });

    std::size_t k = 1;
    for (std::size_t i = 2; i < mag.size(); ++i) {
        if (mag[i] > mag[k]) k = i;
    }
    if (!(mag[k] > 1e-9 * scale * static_cast<double>(t.size()))) {
        throw DriveFrequencyNotFound("v_piezo carries no tone");
    }

    double offset = 0.0;
    if (k + 1 < mag.size() && mag[k - 1] > 0.0 && mag[k + 1] > 0.0) {
        const double l = std::log(mag[k - 1]);
        const double c = std::log(mag[k]);
        const double r = std::log(mag[k + 1]);
        const double den = l - 2.0 * c + r;
        if (den < 0.0) offset = std::clamp(0.5 * (l - r) / den, -0.5, 0.5);
    }
    const double f = (static_cast<double>(k) + offset) * t.sample_rate / static_cast<double>(t.size());
    if (f < kMinDriveFrequency || f > kMaxDriveFrequency) {
        std::ostringstream msg;
        msg << "dominant tone at " << f << " Hz is outside the drive band [15, 60] kHz";
        throw DriveFrequencyNotFound(msg.str());
    }
    return f;
}

std::size_t whole_period_samples(std::size_t available, double sample_rate, double frequency) {
    const double per_period = sample_rate / frequency;
    const double periods = std::floor(static_cast<double>(available) / per_period);
    if (periods < 1.0) throw InsufficientSamples("trace is shorter than one drive period");
    const auto n = static_cast<std::size_t>(std::llround(periods * per_period));
    return std::min(n, available);
}

double real_power_from_traces(const TimeTraces& t, double shunt_resistance, PiezoNode node) {
    if (!std::isfinite(shunt_resistance) || shunt_resistance <= 0.0) {
        throw InvalidProperty("shunt resistance must be positive");
    }
    const double f = detect_drive_frequency(t);
    const std::size_t n = whole_period_samples(t.size(), t.sample_rate, f);
    const auto v = device_voltage(t, node);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += v[i] * t.v_shunt[i];
    return acc / (static_cast<double>(n) * shunt_resistance);
}

AmplitudeEstimate amplitude_from_ldv(const TimeTraces& t, std::optional<double> drive_frequency) {
    validate(t);
    if (!t.ldv) throw NoLdvChannel("trace has no LDV channel");
    const double f = drive_frequency ? *drive_frequency : detect_drive_frequency(t);
    if (!std::isfinite(f) || f <= 0.0 || f >= 0.5 * t.sample_rate) {
        throw InvalidProperty("drive frequency must lie between 0 and the Nyquist frequency");
    }

    const std::size_t n = whole_period_samples(t.size(), t.sample_rate, f);
    const std::span<const double> x(t.ldv->samples.data(), n);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double w = 2.0 * std::numbers::pi * f;
    const double to_displacement = t.ldv->kind == LdvKind::Velocity ? 1.0 / w : 1.0;

    const double amplitude = 2.0 * std::abs(project(x, mean, f, t.sample_rate)) / static_cast<double>(n) *
                             to_displacement;

    // Noise floor from bins of the same window, away from the tone and its harmonics.
    const double bin = t.sample_rate / static_cast<double>(n);
    constexpr int kProbes = 64;
    std::vector<double> floor_samples;
    floor_samples.reserve(kProbes);
    const double lo = 0.02 * t.sample_rate;
    const double hi = 0.48 * t.sample_rate;
    for (int i = 0; i < kProbes; ++i) {
        double probe = std::round((lo + (hi - lo) * i / (kProbes - 1)) / bin) * bin;
        const double harmonic = std::round(probe / f) * f;
        if (std::abs(probe - harmonic) < 3.0 * bin) continue;
        floor_samples.push_back(2.0 * std::abs(project(x, mean, probe, t.sample_rate)) / static_cast<double>(n) *
                                to_displacement);
    }
    double noise_floor = 0.0;
    if (!floor_samples.empty()) {
        auto mid = floor_samples.begin() + static_cast<std::ptrdiff_t>(floor_samples.size() / 2);
        std::nth_element(floor_samples.begin(), mid, floor_samples.end());
        noise_floor = *mid;
    }

    AmplitudeEstimate out;
    out.vibration = friction::VibrationState{f, amplitude};
    out.noise_floor = noise_floor;
    out.low_confidence = amplitude < 10.0 * noise_floor;
    return out;
}

TrialSummary summarize_trial(const TimeTraces& t, double shunt_resistance, PiezoNode node) {
    validate(t);
    if (!std::isfinite(shunt_resistance) || shunt_resistance <= 0.0) {
        throw InvalidProperty("shunt resistance must be positive");
    }
    TrialSummary s;
    if (all_zero(t.v_piezo) && all_zero(t.v_shunt)) {
        if (t.ldv) s.amplitude = 0.0;
        return s;
    }
    s.drive_frequency = detect_drive_frequency(t);
    s.real_power = real_power_from_traces(t, shunt_resistance, node);
    double sq = 0.0;
    for (double v : t.v_shunt) sq += v * v;
    s.rms_current = std::sqrt(sq / static_cast<double>(t.size())) / shunt_resistance;
    if (t.ldv) {
        const auto a = amplitude_from_ldv(t, s.drive_frequency);
        s.amplitude = a.vibration.amplitude;
        s.low_confidence = a.low_confidence;
    }
    return s;
}

TrialSummary average_trials(std::span<const TrialSummary> trials) {
    if (trials.empty()) throw InvalidProperty("no trials to average");
    TrialSummary avg;
    bool all_amplitudes = true;
    double amp = 0.0;
    for (const auto& t : trials) {
        avg.drive_frequency += t.drive_frequency;
        avg.real_power += t.real_power;
        avg.rms_current += t.rms_current;
        avg.low_confidence = avg.low_confidence || t.low_confidence;
        if (t.amplitude) {
            amp += *t.amplitude;
        } else {
            all_amplitudes = false;
        }
    }
    const double n = static_cast<double>(trials.size());
    avg.drive_frequency /= n;
    avg.real_power /= n;
    avg.rms_current /= n;
    if (all_amplitudes) avg.amplitude = amp / n;
    return avg;
}

void write_summary_header(std::ostream& out, bool with_label) {
    if (with_label) out << "file,";
    out << "drive_frequency_hz,real_power_w,amplitude_m,rms_current_a,low_confidence\n";
}

void write_summary_row(std::ostream& out, const TrialSummary& s, std::string_view label) {
    if (!label.empty()) out << label << ',';
    out << csv::format_number(s.drive_frequency) << ',' << csv::format_number(s.real_power) << ','
        << (s.amplitude ? csv::format_number(*s.amplitude) : std::string()) << ','
        << csv::format_number(s.rms_current) << ',' << (s.low_confidence ? 1 : 0) << '\n';
}

}  // namespace tpadlab::dataio

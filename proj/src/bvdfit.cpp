#include "tpadlab/bvdfit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "tpadlab/csv.hpp"

namespace tpadlab::bvdfit {

namespace {

constexpr Complex kJ{0.0, 1.0};

// Vertex abscissa of the parabola through three equally weighted samples,
// as an offset in [-1, 1] from the middle one.
double parabolic_offset(double left, double mid, double right) {
    const double den = left - 2.0 * mid + right;
    if (den == 0.0) return 0.0;
    return std::clamp(0.5 * (left - right) / den, -1.0, 1.0);
}

struct Extremum {
    double frequency;
    double magnitude;
};

Extremum refine_extremum(std::span<const ImpedancePoint> pts, std::span<const double> mags, std::size_t i) {
    if (i == 0 || i + 1 >= pts.size()) return {pts[i].frequency, mags[i]};
    const double off = parabolic_offset(mags[i - 1], mags[i], mags[i + 1]);
    const double f = off >= 0.0 ? pts[i].frequency + off * (pts[i + 1].frequency - pts[i].frequency)
                                : pts[i].frequency + off * (pts[i].frequency - pts[i - 1].frequency);
    const double m = mags[i] - 0.25 * (mags[i - 1] - mags[i + 1]) * off;
    return {f, m};
}

// Network parameters in log space: ln L, ln C, ln R and, when fitted, ln C0.
struct LogModel {
    double c0 = 0.0;
    double series_resistance = 0.0;
    bool fit_c0 = false;

    [[nodiscard]] int dimension() const { return fit_c0 ? 4 : 3; }

    [[nodiscard]] Eigen::VectorXd encode(const BvdParams& p) const {
        Eigen::VectorXd theta(dimension());
        theta(0) = std::log(p.inductance);
        theta(1) = std::log(p.capacitance);
        theta(2) = std::log(p.resistance);
        if (fit_c0) theta(3) = std::log(p.static_capacitance);
        return theta;
    }

    [[nodiscard]] BvdParams decode(const Eigen::VectorXd& theta) const {
        return BvdParams{std::exp(theta(0)), std::exp(theta(1)), std::exp(theta(2)),
                         fit_c0 ? std::exp(theta(3)) : c0};
    }

    // Stacked [Re; Im] of log(Z_model / Z_measured); fills the Jacobian when requested.
    void evaluate(const Eigen::VectorXd& theta, std::span<const ImpedancePoint> pts, Eigen::VectorXd& r,
                  Eigen::MatrixXd* jac) const {
        const BvdParams p = decode(theta);
        const std::size_t n = pts.size();
        r.resize(static_cast<Eigen::Index>(2 * n));
        if (jac) jac->resize(static_cast<Eigen::Index>(2 * n), dimension());
        for (std::size_t i = 0; i < n; ++i) {
            const double w = circuit::angular_frequency(pts[i].frequency);
            const Complex zm = p.resistance + kJ * (w * p.inductance) + 1.0 / (kJ * (w * p.capacitance));
            const Complex zc = 1.0 / (kJ * (w * p.static_capacitance));
            const Complex sum = zm + zc;
            const Complex zd = zm * zc / sum;
            const Complex z = zd + series_resistance;
            const Complex lr = std::log(z / pts[i].impedance);
            const auto row = static_cast<Eigen::Index>(i);
            const auto nn = static_cast<Eigen::Index>(n);
            r(row) = lr.real();
            r(nn + row) = lr.imag();
            if (!jac) continue;
            const Complex dzd_dzm = (zc * zc) / (sum * sum);
            const Complex dzd_dzc = (zm * zm) / (sum * sum);
            const Complex dzm[3] = {kJ * (w * p.inductance), kJ / (w * p.capacitance), Complex(p.resistance, 0.0)};
            for (int k = 0; k < 3; ++k) {
                const Complex d = dzd_dzm * dzm[k] / z;
                (*jac)(row, k) = d.real();
                (*jac)(nn + row, k) = d.imag();
            }
            if (fit_c0) {
                const Complex d = dzd_dzc * (-zc) / z;
                (*jac)(row, 3) = d.real();
                (*jac)(nn + row, 3) = d.imag();
            }
        }
    }
};

FitResult levenberg_marquardt(const LogModel& model, std::span<const ImpedancePoint> pts, const BvdParams& start,
                              const FitOptions& opt) {
    Eigen::VectorXd theta = model.encode(start);
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    model.evaluate(theta, pts, r, &jac);
    double cost = r.squaredNorm();

    FitResult result{model.decode(theta), std::sqrt(cost), 0, false};
    if (!std::isfinite(cost)) throw FitNotConverged("objective is not finite at the starting point", result);

    double lambda = 1e-3;
    Eigen::VectorXd r_trial;
    int iterations = 0;
    bool refresh = false;
    while (iterations < opt.max_iterations) {
        if (refresh) model.evaluate(theta, pts, r, &jac);
        refresh = false;
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;
        Eigen::VectorXd scale = jtj.diagonal().cwiseMax(1e-12 * jtj.diagonal().maxCoeff());

        bool stop = false;
        while (iterations < opt.max_iterations) {
            ++iterations;
            Eigen::MatrixXd damped = jtj;
            damped.diagonal() += lambda * scale;
            const Eigen::VectorXd step = damped.ldlt().solve(-grad);
            const double step_size = step.cwiseAbs().maxCoeff();
            const Eigen::VectorXd trial = theta + step;
            model.evaluate(trial, pts, r_trial, nullptr);
            const double trial_cost = r_trial.squaredNorm();

            if (std::isfinite(trial_cost) && trial_cost < cost) {
                const double improvement = (cost - trial_cost) / cost;
                theta = trial;
                cost = trial_cost;
                lambda = std::max(lambda / 3.0, 1e-15);
                refresh = true;
                // Log-space steps are relative parameter changes.
                if (step_size < opt.step_tolerance || improvement < opt.improvement_tolerance || cost == 0.0) {
                    stop = true;
                }
                break;
            }
            if (!std::isfinite(step_size) || step_size < opt.step_tolerance) {
                stop = true;
                break;
            }
            lambda *= 4.0;
        }
        if (stop) {
            result.converged = true;
            break;
        }
    }

    result.params = model.decode(theta);
    result.residual_norm = std::sqrt(cost);
    result.iterations = iterations;
    return result;
}

}  // namespace

ImpedanceSpectrum::ImpedanceSpectrum(std::vector<ImpedancePoint> points) : points_(std::move(points)) {
    if (points_.size() < kMinPoints) {
        throw InvalidProperty("impedance spectrum needs at least " + std::to_string(kMinPoints) + " points");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& pt = points_[i];
        if (!std::isfinite(pt.frequency) || pt.frequency <= 0.0) {
            throw InvalidProperty("impedance spectrum frequencies must be positive");
        }
        if (i > 0 && !(pt.frequency > points_[i - 1].frequency)) {
            throw InvalidProperty("impedance spectrum frequencies must be strictly increasing");
        }
        const double mag = std::abs(pt.impedance);
        if (!std::isfinite(mag) || mag <= 0.0) {
            throw InvalidProperty("impedance spectrum magnitudes must be positive and finite");
        }
    }
}

BvdParams estimate_from_resonances(double series_frequency, double parallel_frequency, double magnitude_at_series,
                                   double c0) {
    if (!(series_frequency > 0.0) || !(parallel_frequency > series_frequency)) {
        throw NoResonanceFound("parallel resonance must lie above the series resonance");
    }
    const double ratio = parallel_frequency / series_frequency;
    const double c = c0 * (ratio * ratio - 1.0);
    const double ws = 2.0 * std::numbers::pi * series_frequency;
    return BvdParams{1.0 / (ws * ws * c), c, magnitude_at_series, c0};
}

BvdParams initial_guess(const ImpedanceSpectrum& spectrum, double c0) {
    if (!(c0 > 0.0)) throw InvalidProperty("static capacitance must be positive");
    const auto pts = spectrum.points();
    std::vector<double> mags(pts.size());
    std::transform(pts.begin(), pts.end(), mags.begin(), [](const ImpedancePoint& p) { return std::abs(p.impedance); });

    const auto min_it = std::min_element(mags.begin(), mags.end());
    const auto i_min = static_cast<std::size_t>(min_it - mags.begin());
    if (i_min == 0 || i_min + 1 == mags.size()) throw NoResonanceFound("|Z| has no interior minimum");
    const auto max_it = std::max_element(mags.begin() + static_cast<std::ptrdiff_t>(i_min) + 1, mags.end());
    const auto i_max = static_cast<std::size_t>(max_it - mags.begin());

    const Extremum series = refine_extremum(pts, mags, i_min);
    const Extremum parallel = refine_extremum(pts, mags, i_max);
    return estimate_from_resonances(series.frequency, parallel.frequency, series.magnitude, c0);
}

BvdParams motional_admittance_guess(const ImpedanceSpectrum& spectrum, double c0) {
    if (!(c0 > 0.0)) throw InvalidProperty("static capacitance must be positive");
    const auto pts = spectrum.points();

    std::vector<Complex> zm(pts.size());
    std::vector<double> weight(pts.size());
    double peak_admittance = 0.0;
    double static_admittance = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double w = circuit::angular_frequency(pts[i].frequency);
        const Complex ym = 1.0 / pts[i].impedance - kJ * (w * c0);
        const double mag = std::abs(ym);
        peak_admittance = std::max(peak_admittance, mag);
        static_admittance = std::max(static_admittance, w * c0);
        zm[i] = 1.0 / ym;
        weight[i] = mag;
    }
    if (!(peak_admittance > 1e-6 * static_admittance)) {
        throw NoResonanceFound("no motional branch visible beside the static capacitance");
    }

    // Weighted regression of w Im(Z_m) against w^2.
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, sr = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double w = circuit::angular_frequency(pts[i].frequency);
        const double rel = weight[i] / peak_admittance;
        const double wt = rel * rel * rel * rel;
        const double x = w * w;
        const double y = w * zm[i].imag();
        sw += wt;
        sx += wt * x;
        sy += wt * y;
        sxx += wt * x * x;
        sxy += wt * x * y;
        sr += wt * zm[i].real();
    }
    const double den = sw * sxx - sx * sx;
    if (!(den > 0.0)) throw NoResonanceFound("motional reactance regression is degenerate");
    const double slope = (sw * sxy - sx * sy) / den;
    const double intercept = (sy - slope * sx) / sw;
    const double resistance = sr / sw;
    if (!(slope > 0.0) || !(intercept < 0.0) || !(resistance > 0.0)) {
        throw NoResonanceFound("motional branch estimate is not a physical resonator");
    }

    BvdParams guess{slope, -1.0 / intercept, resistance, c0};
    const double fr = circuit::resonant_frequency(guess);
    if (fr < pts.front().frequency || fr > pts.back().frequency) {
        throw NoResonanceFound("motional resonance lies outside the measured window");
    }
    return guess;
}

Complex model_impedance(const BvdParams& params, double frequency, double series_resistance) {
    return circuit::impedance(params, frequency) + series_resistance;
}

double residual(const BvdParams& params, std::span<const ImpedancePoint> points, double series_resistance) {
    circuit::validate(params);
    double sum = 0.0;
    for (const auto& pt : points) {
        sum += std::norm(std::log(model_impedance(params, pt.frequency, series_resistance) / pt.impedance));
    }
    return sum;
}

double residual(const BvdParams& params, const ImpedanceSpectrum& spectrum, double series_resistance) {
    return residual(params, spectrum.points(), series_resistance);
}

FitResult fit_bvd(const ImpedanceSpectrum& spectrum, double c0, const FitOptions& options) {
    if (!(c0 > 0.0)) throw InvalidProperty("static capacitance must be positive");
    if (options.max_iterations <= 0) throw InvalidProperty("max_iterations must be positive");
    if (!(options.series_resistance >= 0.0)) throw InvalidProperty("series resistance must be non-negative");

    LogModel model{c0, options.series_resistance, options.fit_static_capacitance};

    std::vector<BvdParams> starts;
    std::string guess_errors;
    if (options.start) {
        circuit::validate(*options.start);
        BvdParams s = *options.start;
        if (!options.fit_static_capacitance) s.static_capacitance = c0;
        starts.push_back(s);
    } else {
        // With a series resistance in the path, strip it before estimating.
        std::optional<ImpedanceSpectrum> stripped;
        if (options.series_resistance > 0.0) {
            std::vector<ImpedancePoint> pts(spectrum.points().begin(), spectrum.points().end());
            for (auto& p : pts) p.impedance -= options.series_resistance;
            try {
                stripped.emplace(std::move(pts));
            } catch (const InvalidProperty& e) {
                guess_errors += e.what();
            }
        }
        const ImpedanceSpectrum& device = stripped ? *stripped : spectrum;
        for (auto estimator : {&motional_admittance_guess, &initial_guess}) {
            try {
                starts.push_back(estimator(device, c0));
            } catch (const NoResonanceFound& e) {
                if (!guess_errors.empty()) guess_errors += "; ";
                guess_errors += e.what();
            }
        }
    }
    if (starts.empty()) throw NoResonanceFound("no starting point: " + guess_errors);

    std::optional<FitResult> best;
    std::optional<FitResult> best_unconverged;
    for (const auto& start : starts) {
        FitResult r;
        try {
            r = levenberg_marquardt(model, spectrum.points(), start, options);
        } catch (const FitNotConverged& e) {
            r = e.best();
        }
        auto& slot = r.converged ? best : best_unconverged;
        if (!slot || r.residual_norm < slot->residual_norm) slot = r;
    }
    if (best) return *best;
    throw FitNotConverged("fit did not converge within " + std::to_string(options.max_iterations) + " iterations",
                          *best_unconverged);
}

ImpedanceSpectrum synthetic_spectrum(const BvdParams& truth, const SyntheticSpectrumConfig& config) {
    circuit::validate(truth);
    if (!(config.f_min > 0.0) || !(config.f_max > config.f_min)) {
        throw InvalidProperty("synthetic spectrum needs 0 < f_min < f_max");
    }
    if (config.count < 2) throw InvalidProperty("synthetic spectrum needs at least two points");
    if (!(config.noise >= 0.0)) throw InvalidProperty("noise level must be non-negative");

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = config.noise / std::numbers::sqrt2;

    std::vector<ImpedancePoint> pts(config.count);
    const double span = config.f_max - config.f_min;
    for (std::size_t i = 0; i < config.count; ++i) {
        const double f = config.f_min + span * static_cast<double>(i) / static_cast<double>(config.count - 1);
        Complex z = model_impedance(truth, f, config.series_resistance);
        if (config.noise > 0.0) {
            const double re = normal(rng);
            const double im = normal(rng);
            z *= Complex(1.0 + sigma * re, sigma * im);
        }
        pts[i] = ImpedancePoint{f, z};
    }
    return ImpedanceSpectrum(std::move(pts));
}

ImpedanceSpectrum parse_impedance_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw MalformedSpectrumFile("impedance CSV is empty");
    const auto header = csv::split_line(line);
    if (header != std::vector<std::string>{"frequency_hz", "magnitude_ohm", "phase_deg"}) {
        throw MalformedSpectrumFile("impedance CSV header must be frequency_hz,magnitude_ohm,phase_deg");
    }
    std::vector<ImpedancePoint> pts;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = csv::split_line(line);
        double f = 0.0, mag = 0.0, phase = 0.0;
        if (cells.size() != 3 || !csv::parse_number(cells[0], f) || !csv::parse_number(cells[1], mag) ||
            !csv::parse_number(cells[2], phase)) {
            throw MalformedSpectrumFile("impedance CSV line " + std::to_string(line_no) + " is malformed");
        }
        if (!(mag > 0.0)) {
            throw MalformedSpectrumFile("impedance CSV line " + std::to_string(line_no) + ": magnitude must be positive");
        }
        pts.push_back(ImpedancePoint{f, std::polar(mag, phase * std::numbers::pi / 180.0)});
    }
    return ImpedanceSpectrum(std::move(pts));
}

ImpedanceSpectrum load_impedance_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedSpectrumFile("cannot open impedance CSV " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_impedance_csv(buf.str());
}

void write_impedance_csv(std::ostream& out, const ImpedanceSpectrum& spectrum) {
    out << "frequency_hz,magnitude_ohm,phase_deg\n";
    for (const auto& p : spectrum.points()) {
        out << csv::format_number(p.frequency) << ',' << csv::format_number(std::abs(p.impedance)) << ','
            << csv::format_number(std::arg(p.impedance) * 180.0 / std::numbers::pi) << '\n';
    }
}

}  // namespace tpadlab::bvdfit

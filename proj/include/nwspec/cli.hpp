#pragma once

// The nwspec command line: analyze, simulate, calibrate, report.
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nwspec/classify.hpp"
#include "nwspec/error.hpp"
#include "nwspec/format.hpp"
#include "nwspec/ingest.hpp"
#include "nwspec/nwn.hpp"
#include "nwspec/report.hpp"
#include "nwspec/spectral.hpp"
#include "nwspec/synth.hpp"

namespace nwspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;

struct AnalyzeOptions {
    std::string input;
    std::string column;
    bool no_header = false;
    std::string delimiter = ",";
    std::string period_column;
    std::string transform = "none";
    std::optional<double> scale;
    std::size_t grid = kDefaultGridSubdivisions;
    double alpha = 0.05;
    std::string band = "auto";
    std::string coverage = "simultaneous";
    std::string calibration;
    std::string window = "raw";
    std::size_t bartlett_width = 0;
    ClassifierConfig classifier;
    std::string out = "json";
    std::string outfile;
};

struct SimulateOptions {
    std::string model = "wn";
    std::vector<double> ar;
    std::vector<double> ma;
    double sd = 1.0;
    std::size_t n = 200;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::optional<std::size_t> burn_in;
    std::string spec;
    std::string out;
};

struct CalibrateOptions {
    std::size_t n = 512;
    std::size_t reps = 10000;
    double alpha = 0.05;
    std::size_t grid = kDefaultGridSubdivisions;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    std::string out;
};

struct ReportOptions {
    std::string input;
    std::string prefix;
};

namespace detail {

inline std::string read_file(const std::string& path, bool data) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        const std::string msg = "cannot open '" + path + "'";
        if (data) throw DataError(msg);
        throw ConfigError(msg);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

inline bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

inline char parse_delimiter(const std::string& s) {
    if (s == "tab" || s == "\\t") return '\t';
    if (s.size() != 1 || s == "\"" || s == "\n" || s == "\r") {
        throw ConfigError("--delimiter must be a single character or 'tab', got '" + s + "'");
    }
    return s.front();
}

// Header name first; an all-digit selector that names no header column is an index.
inline ColumnRef resolve_column(const std::string& text, const std::string& content, const CsvOptions& csv) {
    if (!csv.header) {
        if (!all_digits(text)) throw ConfigError("--column must be a zero-based index when the input has no header");
        return static_cast<std::size_t>(std::stoull(text));
    }
    if (all_digits(text)) {
        std::istringstream in(content);
        std::vector<std::string> header;
        std::size_t line = 0;
        while (nwspec::detail::read_csv_record(in, csv.delimiter, header, line) && nwspec::detail::blank_record(header)) {
        }
        const bool named = std::any_of(header.begin(), header.end(), [&](const std::string& h) { return trim(h) == text; });
        if (!named) return static_cast<std::size_t>(std::stoull(text));
    }
    return text;
}

inline std::string verdict_line(const AnalysisReport& r) {
    std::ostringstream line;
    line << "verdict: " << to_string(r.verdict.label);
    if (r.verdict.strength != Strength::none) line << " (" << to_string(r.verdict.strength) << ")";
    line << " sup=" << format_double(r.sup) << " N=" << r.n << " band=" << to_string(r.band.mode) << '/'
         << to_string(r.band.coverage) << " alpha=" << format_double(r.band.alpha);
    return line.str();
}

inline std::string analysis_csv(const AnalysisReport& r) {
    std::ostringstream out;
    out << "omega,xi,upper,lower,spectrum,integral\n";
    for (std::size_t j = 0; j < r.omega.size(); ++j) {
        out << format_double(r.omega[j]) << ',' << format_double(r.xi[j]) << ',' << format_double(r.band.upper[j])
            << ',' << format_double(r.band.lower[j]) << ',' << format_double(r.spectrum.values[j]) << ','
            << format_double(r.integral_spectrum[j]) << '\n';
    }
    return out.str();
}

}  // namespace detail

/// Full pipeline on an already loaded series. `note` receives advisory
/// messages such as the band-mode fallback.
inline AnalysisReport analyze(const TimeSeries& raw, const AnalyzeOptions& opt, std::ostream& note) {
    check_alpha(opt.alpha);
    opt.classifier.validate();
    if (opt.grid < 2) throw ConfigError("--grid must be at least 2 subdivisions");
    const auto grid = FrequencyGrid::uniform(opt.grid);
    const auto spec = TransformSpec::make(parse_transform_kind(opt.transform), opt.scale);
    const auto coverage = parse_band_coverage(opt.coverage);
    Window window = Window::raw();
    if (opt.window == "bartlett") {
        window = Window::bartlett(opt.bartlett_width);
    } else if (opt.window != "raw") {
        throw ConfigError("unknown window '" + opt.window + "' (expected raw or bartlett)");
    }

    std::optional<CalibrationReport> calibration;
    if (!opt.calibration.empty()) {
        try {
            calibration = calibration_from_json(Json::parse(detail::read_file(opt.calibration, false)));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("invalid calibration file '" + opt.calibration + "': " + e.what());
        }
    }

    BandMode mode = kCalibratedDefaultMode;
    std::string source = "flag";
    if (opt.band == "auto") {
        if (calibration && calibration->matched_mode != MatchedMode::neither) {
            mode = calibration->matched_mode == MatchedMode::paper3 ? BandMode::paper3 : BandMode::studentized2;
            source = "calibration";
            note << "note: band mode " << to_string(mode) << " taken from calibration '" << opt.calibration << "'\n";
        } else {
            source = "default";
            note << "note: no calibration with a matched mode supplied; using band mode " << to_string(mode)
                 << " (the variance constant that matches simulation for standardized input)\n";
        }
    } else {
        mode = parse_band_mode(opt.band);
    }

    const auto series = transform(raw, spec);
    const auto summary = summary_stats(series);
    if (series.size() < 16) {
        throw TooShortError("spectral analysis needs at least 16 observations after the transform, got " +
                            std::to_string(series.size()));
    }
    if (calibration) check_calibration_matches(*calibration, series.size(), grid);

    const auto z = standardize(series);
    const auto acov = autocovariances(z);
    const auto F = integral_spectrum(acov, grid);
    auto xi = xi_statistic(F);
    const bool use_calibration = calibration && (mode == BandMode::montecarlo || coverage == BandCoverage::simultaneous);
    auto band = mode == BandMode::montecarlo ? confidence_band(grid, opt.alpha, mode, coverage, &*calibration)
                                             : confidence_band(grid, opt.alpha, mode, coverage);
    if (mode != BandMode::montecarlo && coverage == BandCoverage::simultaneous && calibration) {
        // A finite-N sup quantile beats the asymptotic one when available.
        if (std::abs(calibration->alpha - opt.alpha) > 1e-12) {
            throw ConfigError("calibration was computed for alpha=" + format_double(calibration->alpha) +
                              ", requested alpha=" + format_double(opt.alpha));
        }
        band.critical = calibration->sup_critical;
        std::fill(band.upper.begin(), band.upper.end(), band.critical);
        std::fill(band.lower.begin(), band.lower.end(), -band.critical);
    }
    auto verdict = classify(xi, band, opt.classifier);

    AnalysisReport report{
        .input = {opt.input, opt.column, spec},
        .n = series.size(),
        .summary = summary,
        .periods = series.periods,
        .series = series.values,
        .omega = std::vector<double>(grid.points().begin(), grid.points().end()),
        .xi = xi.xi,
        .sup = sup_statistic(xi),
        .band = std::move(band),
        .band_mode_source = source,
        .spectrum = spectrum(acov, grid, window),
        .integral_spectrum = F.values,
        .verdict = verdict,
        .calibration = std::nullopt,
    };
    if (calibration && (use_calibration || source == "calibration")) {
        report.calibration = CalibrationProvenance{opt.calibration, calibration->n, calibration->reps,
                                                   calibration->seed, calibration->rng_algorithm,
                                                   calibration->matched_mode};
    }
    return report;
}

inline int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.out != "json" && opt.out != "csv") throw ConfigError("--out must be json or csv");
    CsvOptions csv;
    csv.delimiter = detail::parse_delimiter(opt.delimiter);
    csv.header = !opt.no_header;
    if (!opt.period_column.empty()) {
        csv.period_column = detail::all_digits(opt.period_column) && !csv.header
                                ? ColumnRef{static_cast<std::size_t>(std::stoull(opt.period_column))}
                                : ColumnRef{opt.period_column};
    }
    // Validate flags before touching data so configuration errors win.
    check_alpha(opt.alpha);
    opt.classifier.validate();

    const auto content = detail::read_file(opt.input, false);
    std::istringstream in(content);
    const auto raw = load_series(in, detail::resolve_column(opt.column, content, csv), csv);
    const auto report = analyze(raw, opt, err);

    const std::string body = opt.out == "json" ? to_json(report).dump(2) + "\n" : detail::analysis_csv(report);
    if (opt.outfile.empty()) {
        out << body;
        err << detail::verdict_line(report) << '\n';
    } else {
        detail::write_file(opt.outfile, body);
        out << detail::verdict_line(report) << '\n';
    }
    return kExitOk;
}

inline TimeSeries simulate(const SimulateOptions& opt) {
    SimulateOptions o = opt;
    if (!o.spec.empty()) {
        // JSON keys override their flag counterparts.
        Json j;
        try {
            j = Json::parse(detail::read_file(o.spec, false));
            o.model = j.value("model", o.model);
            o.ar = j.value("ar", o.ar);
            o.ma = j.value("ma", o.ma);
            o.sd = j.value("sd", o.sd);
            o.n = j.value("n", o.n);
            o.seed = j.value("seed", o.seed);
            o.stream = j.value("stream", o.stream);
            if (j.contains("burn_in")) o.burn_in = j.at("burn_in").get<std::size_t>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("invalid model spec '" + o.spec + "': " + e.what());
        }
    }
    const RngSpec rng{o.seed, o.stream};
    if (o.model == "wn") return gen_white_noise(o.n, rng);
    if (o.model == "rw") return gen_random_walk(o.n, rng);
    if (o.model == "arma") {
        ArmaSpec spec = [&] {
            try {
                return ArmaSpec::make(o.ar, o.ma, o.sd);
            } catch (const DomainError& e) {
                throw ConfigError(e.what());
            }
        }();
        return gen_arma(o.n, spec, rng, o.burn_in);
    }
    throw ConfigError("unknown model '" + o.model + "' (expected wn, rw or arma)");
}

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out) {
    std::ostringstream csv;
    write_series_csv(csv, simulate(opt));
    if (opt.out.empty() || opt.out == "-") {
        out << csv.str();
    } else {
        detail::write_file(opt.out, csv.str());
    }
    return kExitOk;
}

inline int cmd_calibrate(const CalibrateOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.grid < 2) throw ConfigError("--grid must be at least 2 subdivisions");
    const auto report = mc_calibrate(opt.n, FrequencyGrid::uniform(opt.grid), opt.alpha, opt.reps, opt.seed, opt.threads);
    const std::string body = to_json(report).dump(2) + "\n";
    std::ostringstream line;
    line << "matched_mode=" << to_string(report.matched_mode) << " sup_critical=" << format_double(report.sup_critical)
         << '\n';
    if (opt.out.empty() || opt.out == "-") {
        out << body;
        err << line.str();
    } else {
        detail::write_file(opt.out, body);
        out << line.str();
    }
    return kExitOk;
}

/// Writes <prefix>_series.csv, <prefix>_xi.csv and <prefix>_spectrum.csv.
inline int cmd_report(const ReportOptions& opt, std::ostream& out) {
    const auto text = detail::read_file(opt.input, true);
    const auto report = [&] {
        try {
            return analysis_from_json(Json::parse(text));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("invalid analysis report '" + opt.input + "': " + e.what());
        } catch (const ConfigError& e) {
            throw DataError("invalid analysis report '" + opt.input + "': " + e.what());
        }
    }();

    std::string prefix = opt.prefix;
    if (prefix.empty()) prefix = (std::filesystem::path(opt.input).parent_path() / std::filesystem::path(opt.input).stem()).string();

    std::ostringstream series;
    series << "t,period,value\n";
    for (std::size_t i = 0; i < report.series.size(); ++i) {
        series << i + 1 << ',' << (report.periods.empty() ? "" : report.periods[i]) << ','
               << format_double(report.series[i]) << '\n';
    }
    std::ostringstream xi;
    xi << "omega,xi,upper,lower\n";
    std::ostringstream spec;
    spec << "omega,spectrum,integral\n";
    for (std::size_t j = 0; j < report.omega.size(); ++j) {
        const auto w = format_double(report.omega[j]);
        xi << w << ',' << format_double(report.xi[j]) << ',' << format_double(report.band.upper[j]) << ','
           << format_double(report.band.lower[j]) << '\n';
        spec << w << ',' << format_double(report.spectrum.values[j]) << ',' << format_double(report.integral_spectrum[j])
             << '\n';
    }
    const std::string files[3] = {prefix + "_series.csv", prefix + "_xi.csv", prefix + "_spectrum.csv"};
    detail::write_file(files[0], series.str());
    detail::write_file(files[1], xi.str());
    detail::write_file(files[2], spec.str());
    for (const auto& f : files) out << f << '\n';
    return kExitOk;
}

inline std::string version_string() {
    return std::string("nwspec ") + kToolVersion + " (report schema " + std::to_string(kSchemaVersion) + ")";
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Near-white-noise spectral diagnostics for economic time series", "nwspec"};
    app.set_version_flag("--version", version_string());
    app.set_config("--config", "", "TOML or INI file of option defaults; command-line flags take precedence");
    app.require_subcommand(1);

    AnalyzeOptions a;
    auto* analyze_cmd = app.add_subcommand("analyze", "Compute xi(w), its band, the spectrum and a pattern verdict");
    analyze_cmd->add_option("input", a.input, "CSV file")->required();
    analyze_cmd->add_option("--column,-c", a.column, "Column name, or zero-based index")->required();
    analyze_cmd->add_flag("--no-header", a.no_header, "Input has no header row");
    analyze_cmd->add_option("--delimiter", a.delimiter, "Field delimiter (single character or 'tab')")->capture_default_str();
    analyze_cmd->add_option("--period-column", a.period_column, "Column holding period labels");
    analyze_cmd->add_option("--transform", a.transform, "none, diff or logdiff")
        ->check(CLI::IsMember({"none", "diff", "logdiff"}))
        ->capture_default_str();
    analyze_cmd->add_option("--scale", a.scale, "Transform scale (default 100 for logdiff, else 1)");
    analyze_cmd->add_option("--grid", a.grid, "Frequency grid subdivisions of [0, pi]")->capture_default_str();
    analyze_cmd->add_option("--alpha", a.alpha, "Significance level")->capture_default_str();
    analyze_cmd->add_option("--band", a.band, "auto, paper3, studentized2 or montecarlo")
        ->check(CLI::IsMember({"auto", "paper3", "studentized2", "montecarlo"}))
        ->capture_default_str();
    analyze_cmd->add_option("--coverage", a.coverage, "simultaneous or pointwise")
        ->check(CLI::IsMember({"simultaneous", "pointwise"}))
        ->capture_default_str();
    analyze_cmd->add_option("--calibration", a.calibration, "Calibration JSON from 'calibrate'");
    analyze_cmd->add_option("--window", a.window, "Display window for the spectrum: raw or bartlett")
        ->check(CLI::IsMember({"raw", "bartlett"}))
        ->capture_default_str();
    analyze_cmd->add_option("--bartlett-width", a.bartlett_width, "Bartlett lag window width");
    analyze_cmd->add_option("--sign-dominance", a.classifier.sign_dominance)->capture_default_str();
    analyze_cmd->add_option("--min-sig", a.classifier.min_sig)->capture_default_str();
    analyze_cmd->add_option("--strong-sig", a.classifier.strong_sig)->capture_default_str();
    analyze_cmd->add_option("--zero-tol", a.classifier.zero_tol)->capture_default_str();
    analyze_cmd->add_option("--out", a.out, "Report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    analyze_cmd->add_option("--outfile,-o", a.outfile, "Write the report here instead of standard output");

    SimulateOptions s;
    auto* simulate_cmd = app.add_subcommand("simulate", "Generate a seeded synthetic series as CSV");
    simulate_cmd->add_option("--model", s.model, "wn, rw or arma")
        ->check(CLI::IsMember({"wn", "rw", "arma"}))
        ->capture_default_str();
    simulate_cmd->add_option("--ar", s.ar, "AR coefficients, comma separated")->delimiter(',');
    simulate_cmd->add_option("--ma", s.ma, "MA coefficients, comma separated")->delimiter(',');
    simulate_cmd->add_option("--sd", s.sd, "Innovation standard deviation")->capture_default_str();
    simulate_cmd->add_option("--n", s.n, "Series length")->capture_default_str();
    simulate_cmd->add_option("--seed", s.seed)->capture_default_str();
    simulate_cmd->add_option("--stream", s.stream)->capture_default_str();
    simulate_cmd->add_option("--burn-in", s.burn_in, "ARMA burn-in (default max(50, 10(p+q+1)))");
    simulate_cmd->add_option("--spec", s.spec, "JSON model spec (keys: model, ar, ma, sd, n, seed, stream, burn_in)");
    simulate_cmd->add_option("--out,-o", s.out, "Output CSV path (default standard output)");

    CalibrateOptions c;
    auto* calibrate_cmd = app.add_subcommand("calibrate", "Monte Carlo critical values under Gaussian white noise");
    calibrate_cmd->add_option("--n", c.n, "Series length")->capture_default_str();
    calibrate_cmd->add_option("--reps", c.reps, "Replications (at least 1000)")->capture_default_str();
    calibrate_cmd->add_option("--alpha", c.alpha)->capture_default_str();
    calibrate_cmd->add_option("--grid", c.grid, "Frequency grid subdivisions")->capture_default_str();
    calibrate_cmd->add_option("--seed", c.seed)->capture_default_str();
    calibrate_cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores); output does not depend on it")
        ->capture_default_str();
    calibrate_cmd->add_option("--out,-o", c.out, "Output JSON path (default standard output)");

    ReportOptions r;
    auto* report_cmd = app.add_subcommand("report", "Split an analysis report into three plot-ready CSV panels");
    report_cmd->add_option("input", r.input, "Analysis report JSON")->required();
    report_cmd->add_option("--prefix", r.prefix, "Output path prefix (default: report path without extension)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (analyze_cmd->parsed()) return cmd_analyze(a, out, err);
        if (simulate_cmd->parsed()) return cmd_simulate(s, out);
        if (calibrate_cmd->parsed()) return cmd_calibrate(c, out, err);
        if (report_cmd->parsed()) return cmd_report(r, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitConfig;
}

}  // namespace nwspec::cli

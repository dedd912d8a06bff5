#pragma once

// JSON forms of the analysis and calibration reports.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nwspec/classify.hpp"
#include "nwspec/ingest.hpp"
#include "nwspec/nwn.hpp"
#include "nwspec/spectral.hpp"

namespace nwspec {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

struct InputDescriptor {
    std::string file;
    std::string column;
    TransformSpec transform;
};

struct CalibrationProvenance {
    std::string file;
    std::size_t n = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    std::string rng_algorithm;
    MatchedMode matched_mode = MatchedMode::neither;
};

/// One analysis: the series panel, xi with its band, and the spectrum,
/// all on one frequency grid, plus the verdict derived from them.
struct AnalysisReport {
    InputDescriptor input;
    std::size_t n = 0;
    SummaryStats summary;
    std::vector<std::string> periods;
    std::vector<double> series;
    std::vector<double> omega;
    std::vector<double> xi;
    double sup = 0.0;
    ConfidenceBand band;
    std::string band_mode_source;  // "flag", "calibration" or "default"
    SpectrumEstimate spectrum;
    std::vector<double> integral_spectrum;
    PatternVerdict verdict;
    std::optional<CalibrationProvenance> calibration;
};

inline Json to_json(const CalibrationReport& r) {
    return Json{{"schema_version", kSchemaVersion},
                {"kind", "calibration"},
                {"N", r.n},
                {"reps", r.reps},
                {"seed", r.seed},
                {"alpha", r.alpha},
                {"rng_algorithm", r.rng_algorithm},
                {"matched_mode", to_string(r.matched_mode)},
                {"paper3_error", r.paper3_error},
                {"studentized2_error", r.studentized2_error},
                {"sup_critical", r.sup_critical},
                {"omega", r.omega},
                {"variance", r.variance},
                {"q_low", r.q_low},
                {"q_high", r.q_high}};
}

namespace detail {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.contains(key)) throw nlohmann::json::out_of_range::create(403, std::string("missing key '") + key + "'", &j);
    return j.at(key).get<T>();
}

}  // namespace detail

/// Throws nlohmann::json::exception or ConfigError on malformed input.
inline CalibrationReport calibration_from_json(const Json& j) {
    CalibrationReport r;
    r.n = detail::field<std::size_t>(j, "N");
    r.reps = detail::field<std::size_t>(j, "reps");
    r.seed = detail::field<std::uint64_t>(j, "seed");
    r.alpha = detail::field<double>(j, "alpha");
    r.rng_algorithm = detail::field<std::string>(j, "rng_algorithm");
    r.matched_mode = parse_matched_mode(detail::field<std::string>(j, "matched_mode"));
    r.paper3_error = j.value("paper3_error", 0.0);
    r.studentized2_error = j.value("studentized2_error", 0.0);
    r.sup_critical = detail::field<double>(j, "sup_critical");
    r.omega = detail::field<std::vector<double>>(j, "omega");
    r.variance = detail::field<std::vector<double>>(j, "variance");
    r.q_low = detail::field<std::vector<double>>(j, "q_low");
    r.q_high = detail::field<std::vector<double>>(j, "q_high");
    const auto m = r.omega.size();
    if (m < 2 || r.variance.size() != m || r.q_low.size() != m || r.q_high.size() != m) {
        throw ConfigError("calibration arrays must share one grid length");
    }
    FrequencyGrid::from_points(r.omega);
    return r;
}

inline Json to_json(const PatternVerdict& v) {
    const auto& p = v.profile;
    return Json{{"label", to_string(v.label)},
                {"strength", to_string(v.strength)},
                {"fractions",
                 {{"positive", p.frac_positive},
                  {"negative", p.frac_negative},
                  {"zero", p.frac_zero},
                  {"sig_positive", p.frac_sig_positive},
                  {"sig_negative", p.frac_sig_negative}}},
                {"interior_points", p.interior_points},
                {"max_breach_ratio", p.max_breach_ratio},
                {"config",
                 {{"sign_dominance", v.config.sign_dominance},
                  {"min_sig", v.config.min_sig},
                  {"strong_sig", v.config.strong_sig},
                  {"zero_tol", v.config.zero_tol}}}};
}

inline PatternVerdict verdict_from_json(const Json& j) {
    PatternVerdict v;
    v.label = parse_pattern_label(detail::field<std::string>(j, "label"));
    v.strength = parse_strength(detail::field<std::string>(j, "strength"));
    const auto& f = j.at("fractions");
    v.profile.frac_positive = f.at("positive").get<double>();
    v.profile.frac_negative = f.at("negative").get<double>();
    v.profile.frac_zero = f.at("zero").get<double>();
    v.profile.frac_sig_positive = f.at("sig_positive").get<double>();
    v.profile.frac_sig_negative = f.at("sig_negative").get<double>();
    v.profile.interior_points = detail::field<std::size_t>(j, "interior_points");
    v.profile.max_breach_ratio = detail::field<double>(j, "max_breach_ratio");
    const auto& c = j.at("config");
    v.config = {c.at("sign_dominance").get<double>(), c.at("min_sig").get<double>(), c.at("strong_sig").get<double>(),
                c.at("zero_tol").get<double>()};
    return v;
}

inline Json to_json(const AnalysisReport& r) {
    Json j{{"schema_version", kSchemaVersion},
           {"kind", "analysis"},
           {"tool_version", kToolVersion},
           {"input",
            {{"file", r.input.file},
             {"column", r.input.column},
             {"transform", to_string(r.input.transform.kind)},
             {"scale", r.input.transform.scale}}},
           {"N", r.n},
           {"summary",
            {{"mean", r.summary.mean},
             {"std", r.summary.std},
             {"acc", r.summary.acc},
             {"std_divisor", "N-1"},
             {"standardization_divisor", "N"},
             {"acc_definition", "mean first difference of the analysed series (interpretation)"}}},
           {"series", {{"period", r.periods}, {"value", r.series}}},
           {"grid", {{"subdivisions", r.omega.size() - 1}, {"omega", r.omega}}},
           {"xi", {{"values", r.xi}, {"sup", r.sup}}},
           {"band",
            {{"mode", to_string(r.band.mode)},
             {"mode_source", r.band_mode_source},
             {"coverage", to_string(r.band.coverage)},
             {"alpha", r.band.alpha},
             {"critical", r.band.critical},
             {"upper", r.band.upper},
             {"lower", r.band.lower}}},
           {"spectrum",
            {{"window", r.spectrum.window.kind == WindowKind::raw ? "raw" : "bartlett"},
             {"width", r.spectrum.window.width},
             {"values", r.spectrum.values},
             {"integral", r.integral_spectrum}}},
           {"verdict", to_json(r.verdict)}};
    if (r.calibration) {
        const auto& c = *r.calibration;
        j["calibration"] = Json{{"file", c.file},
                                {"N", c.n},
                                {"reps", c.reps},
                                {"seed", c.seed},
                                {"rng_algorithm", c.rng_algorithm},
                                {"matched_mode", to_string(c.matched_mode)}};
    } else {
        j["calibration"] = nullptr;
    }
    return j;
}

/// Rebuilds a report; throws nlohmann::json::exception, ConfigError or
/// DataError when the document is malformed or its arrays disagree.
inline AnalysisReport analysis_from_json(const Json& j) {
    if (j.value("kind", std::string{}) != "analysis") throw DataError("document is not an analysis report");
    const auto& in = j.at("input");
    const auto& s = j.at("summary");
    const auto& b = j.at("band");
    const auto& sp = j.at("spectrum");
    auto omega = j.at("grid").at("omega").get<std::vector<double>>();
    const auto grid = FrequencyGrid::from_points(omega);
    const auto window = sp.at("window").get<std::string>() == "raw" ? Window::raw()
                                                                     : Window::bartlett(sp.at("width").get<std::size_t>());

    AnalysisReport r{
        .input = {in.at("file").get<std::string>(), in.at("column").get<std::string>(),
                  TransformSpec::make(parse_transform_kind(in.at("transform").get<std::string>()),
                                      in.at("scale").get<double>())},
        .n = detail::field<std::size_t>(j, "N"),
        .summary = {s.at("mean").get<double>(), s.at("std").get<double>(), s.at("acc").get<double>()},
        .periods = j.at("series").at("period").get<std::vector<std::string>>(),
        .series = j.at("series").at("value").get<std::vector<double>>(),
        .omega = std::move(omega),
        .xi = j.at("xi").at("values").get<std::vector<double>>(),
        .sup = j.at("xi").at("sup").get<double>(),
        .band = {grid, b.at("upper").get<std::vector<double>>(), b.at("lower").get<std::vector<double>>(),
                 b.at("alpha").get<double>(), parse_band_mode(b.at("mode").get<std::string>()),
                 parse_band_coverage(b.at("coverage").get<std::string>()), b.at("critical").get<double>()},
        .band_mode_source = b.at("mode_source").get<std::string>(),
        .spectrum = {grid, sp.at("values").get<std::vector<double>>(), window},
        .integral_spectrum = sp.at("integral").get<std::vector<double>>(),
        .verdict = verdict_from_json(j.at("verdict")),
        .calibration = std::nullopt,
    };
    if (j.contains("calibration") && !j.at("calibration").is_null()) {
        const auto& c = j.at("calibration");
        r.calibration = CalibrationProvenance{c.at("file").get<std::string>(), c.at("N").get<std::size_t>(),
                                              c.at("reps").get<std::size_t>(), c.at("seed").get<std::uint64_t>(),
                                              c.at("rng_algorithm").get<std::string>(),
                                              parse_matched_mode(c.at("matched_mode").get<std::string>())};
    }

    const auto m = r.omega.size();
    if (r.xi.size() != m || r.band.upper.size() != m || r.band.lower.size() != m || r.spectrum.values.size() != m ||
        r.integral_spectrum.size() != m) {
        throw DataError("report arrays do not share one grid length");
    }
    if (!r.periods.empty() && r.periods.size() != r.series.size()) {
        throw DataError("report period labels do not match the series length");
    }
    return r;
}

}  // namespace nwspec

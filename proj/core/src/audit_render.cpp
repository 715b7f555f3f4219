#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "tsaudit/audit.hpp"
#include "tsaudit/error.hpp"

namespace tsaudit {

namespace {

using json = nlohmann::ordered_json;

// JSON has no infinities or NaN; they travel as strings.
json number(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    return v;
}

double number_from(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
        if (s == "Infinity") return std::numeric_limits<double>::infinity();
        if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
        throw std::invalid_argument("bad number '" + s + "'");
    }
    return j.get<double>();
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return number_from(j);
}

json plot_json(const NamedPlot& np) {
    const PlotSpec& p = np.plot;
    json points = json::array();
    for (const auto& pt : p.points) points.push_back(json::array({number(pt.x), number(pt.y)}));
    return json{{"file", np.file},
                {"kind", p.kind == PlotKind::Scatter ? "scatter" : "correlogram"},
                {"title", p.title},
                {"x_label", p.x_label},
                {"y_label", p.y_label},
                {"line_slope", optional_number(p.line_slope)},
                {"line_intercept", number(p.line_intercept)},
                {"band", optional_number(p.band)},
                {"points", std::move(points)}};
}

NamedPlot plot_from(const json& j) {
    NamedPlot np;
    np.file = j.at("file").get<std::string>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "scatter") np.plot.kind = PlotKind::Scatter;
    else if (kind == "correlogram") np.plot.kind = PlotKind::Correlogram;
    else throw std::invalid_argument("unknown plot kind '" + kind + "'");
    np.plot.title = j.at("title").get<std::string>();
    np.plot.x_label = j.at("x_label").get<std::string>();
    np.plot.y_label = j.at("y_label").get<std::string>();
    np.plot.line_slope = optional_from(j.at("line_slope"));
    np.plot.line_intercept = number_from(j.at("line_intercept"));
    np.plot.band = optional_from(j.at("band"));
    for (const auto& pt : j.at("points")) np.plot.points.push_back({number_from(pt.at(0)), number_from(pt.at(1))});
    return np;
}

std::string fmt_stat(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
    out.close();
    if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace

nlohmann::ordered_json to_json(const AuditReport& r) {
    json steps = json::array();
    for (const auto& s : r.steps) {
        json stats = json::object();
        for (const auto& st : s.statistics) stats[st.name] = number(st.value);
        steps.push_back(json{{"name", s.name},
                             {"title", s.title},
                             {"inputs_digest", s.inputs_digest},
                             {"statistics", std::move(stats)},
                             {"interpretation", s.interpretation},
                             {"plots", s.plots}});
    }
    json plots = json::array();
    for (const auto& p : r.plots) plots.push_back(plot_json(p));
    json failure = nullptr;
    if (r.failure) failure = json{{"step", r.failure->step}, {"kind", r.failure->kind}, {"message", r.failure->message}};

    return json{{"schema_version", r.schema_version},
                {"source", r.source},
                {"config",
                 {{"y_column", r.y_column},
                  {"x_column", r.x_column},
                  {"interpolate", r.interpolate},
                  {"durbin_lags", r.durbin_lags},
                  {"adf_lags", r.adf_lags},
                  {"acf_lags", r.acf_lags},
                  {"arimax_order", r.arimax_order},
                  {"vce", r.vce},
                  {"durbin_presample", r.durbin_presample},
                  {"thresholds",
                   {{"durbin_alpha", r.thresholds.durbin_alpha},
                    {"adf_alpha", r.thresholds.adf_alpha},
                    {"beta_alpha", r.thresholds.beta_alpha}}}}},
                {"verdict", std::string(to_string(r.verdict))},
                {"truncated", r.truncated},
                {"failure", std::move(failure)},
                {"armax_converged", r.armax_converged},
                {"steps", std::move(steps)},
                {"plots", std::move(plots)}};
}

AuditReport report_from_json(const nlohmann::ordered_json& j) {
    AuditReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != AuditReport::kSchemaVersion) {
        throw std::invalid_argument("unsupported report schema version " + std::to_string(r.schema_version));
    }
    r.source = j.at("source").get<std::string>();
    const auto& c = j.at("config");
    r.y_column = c.at("y_column").get<std::string>();
    r.x_column = c.at("x_column").get<std::string>();
    r.interpolate = c.at("interpolate").get<bool>();
    r.durbin_lags = c.at("durbin_lags").get<int>();
    r.adf_lags = c.at("adf_lags").get<int>();
    r.acf_lags = c.at("acf_lags").get<int>();
    r.arimax_order = c.at("arimax_order").get<std::string>();
    r.vce = c.at("vce").get<std::string>();
    r.durbin_presample = c.at("durbin_presample").get<std::string>();
    const auto& th = c.at("thresholds");
    r.thresholds = {th.at("durbin_alpha").get<double>(), th.at("adf_alpha").get<double>(), th.at("beta_alpha").get<double>()};
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    r.truncated = j.at("truncated").get<bool>();
    if (const auto& f = j.at("failure"); !f.is_null()) {
        r.failure = AuditFailure{f.at("step").get<std::string>(), f.at("kind").get<std::string>(), f.at("message").get<std::string>()};
    }
    r.armax_converged = j.at("armax_converged").get<bool>();
    for (const auto& s : j.at("steps")) {
        AuditStep step;
        step.name = s.at("name").get<std::string>();
        step.title = s.at("title").get<std::string>();
        step.inputs_digest = s.at("inputs_digest").get<std::string>();
        for (const auto& [k, v] : s.at("statistics").items()) step.statistics.push_back({k, number_from(v)});
        step.interpretation = s.at("interpretation").get<std::string>();
        step.plots = s.at("plots").get<std::vector<std::string>>();
        r.steps.push_back(std::move(step));
    }
    for (const auto& p : j.at("plots")) r.plots.push_back(plot_from(p));
    return r;
}

std::string render_json(const AuditReport& report) { return to_json(report).dump(2) + "\n"; }

std::string render_markdown(const AuditReport& r) {
    std::string md;
    md += "# Time-series audit: " + r.y_column + " on " + r.x_column + "\n\n";
    md += "- Source: `" + r.source + "`\n";
    md += "- Verdict: **" + std::string(to_string(r.verdict)) + "**\n";
    md += "- Settings: interpolation " + std::string(r.interpolate ? "on" : "off") + ", Durbin lags " +
          std::to_string(r.durbin_lags) + " (" + r.durbin_presample + " pre-sample residuals), ADF lags " +
          std::to_string(r.adf_lags) + ", correlogram lags " + std::to_string(r.acf_lags) + ", ARIMA" + r.arimax_order +
          " errors with " + r.vce + " standard errors\n";
    md += "- Verdict thresholds: Durbin alpha " + fmt_stat(r.thresholds.durbin_alpha) + ", ADF alpha " +
          fmt_stat(r.thresholds.adf_alpha) + ", slope alpha " + fmt_stat(r.thresholds.beta_alpha) + "\n";
    if (!r.armax_converged) md += "- **Warning:** the ARMAX optimizer did not converge.\n";
    if (r.truncated && r.failure) {
        md += "\n> **Report truncated.** Step `" + r.failure->step + "` failed (" + r.failure->kind +
              " error): " + r.failure->message + "\n";
    }
    int number = 1;
    for (const auto& s : r.steps) {
        md += "\n## " + std::to_string(number++) + ". " + s.title + "\n\n";
        md += s.interpretation + "\n\n";
        md += "| statistic | value |\n|---|---|\n";
        for (const auto& st : s.statistics) md += "| " + st.name + " | " + fmt_stat(st.value) + " |\n";
        for (const auto& p : s.plots) md += "\n![" + p + "](" + p + ")\n";
        md += "\n<sub>inputs digest " + s.inputs_digest + "</sub>\n";
    }
    return md;
}

std::vector<std::filesystem::path> render(const AuditReport& report, const std::filesystem::path& out_dir,
                                          std::span<const OutputFormat> formats) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw InputError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
    std::vector<std::filesystem::path> written;
    const auto has = [&](OutputFormat f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
    if (has(OutputFormat::Json)) {
        written.push_back(out_dir / "report.json");
        write_file(written.back(), render_json(report));
    }
    if (has(OutputFormat::Markdown)) {
        written.push_back(out_dir / "report.md");
        write_file(written.back(), render_markdown(report));
    }
    if (has(OutputFormat::Svg)) {
        for (const auto& p : report.plots) {
            written.push_back(out_dir / p.file);
            write_file(written.back(), to_svg(p.plot));
        }
    }
    return written;
}

}  // namespace tsaudit

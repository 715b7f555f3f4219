#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsaudit/arimax.hpp"
#include "tsaudit/diagnostics.hpp"
#include "tsaudit/plot.hpp"
#include "tsaudit/series.hpp"

namespace tsaudit {

/// Cutoffs behind the verdict. These are tool policy and are printed in every
/// report.
struct VerdictThresholds {
    double durbin_alpha = 0.01;  ///< levels serial correlation counts when p <= this
    double adf_alpha = 0.10;     ///< a unit root is retained when p > this
    double beta_alpha = 0.05;    ///< a slope is significant when p <= this
    friend bool operator==(const VerdictThresholds&, const VerdictThresholds&) = default;
};

enum class OutputFormat { Json, Markdown, Svg };

struct AuditConfig {
    std::filesystem::path input;
    CsvSelection csv;  ///< value_columns is filled from y_column and x_column
    std::string y_column;
    std::string x_column;
    bool interpolate = true;
    int durbin_lags = 12;
    int adf_lags = 12;
    int acf_lags = 20;
    ArimaxSpec arimax{};
    PresampleResiduals presample = PresampleResiduals::ZeroFill;
    VerdictThresholds thresholds{};
    std::filesystem::path out_dir = ".";
    std::vector<OutputFormat> formats{OutputFormat::Json, OutputFormat::Markdown, OutputFormat::Svg};
};

/// Throws std::invalid_argument for lags < 1, identical columns or thresholds
/// outside (0, 1).
void validate(const AuditConfig& cfg);

enum class Verdict {
    LevelsRelationshipSupported,
    SpuriousLevelsRelationship,
    Inconclusive,
};

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;
[[nodiscard]] Verdict parse_verdict(std::string_view s);

struct Statistic {
    std::string name;
    double value = 0.0;
    friend bool operator==(const Statistic&, const Statistic&) = default;
};

struct NamedPlot {
    std::string file;  ///< SVG file name inside the output directory
    PlotSpec plot;
    friend bool operator==(const NamedPlot&, const NamedPlot&) = default;
};

struct AuditStep {
    std::string name;
    std::string title;
    std::string inputs_digest;  ///< FNV-1a 64 over the step's input series
    std::vector<Statistic> statistics;
    std::string interpretation;
    std::vector<std::string> plots;  ///< file names of NamedPlot entries

    /// Throws std::out_of_range when absent.
    [[nodiscard]] double stat(std::string_view name) const;
    [[nodiscard]] std::optional<double> find(std::string_view name) const;
    friend bool operator==(const AuditStep&, const AuditStep&) = default;
};

/// Step names in pipeline order.
inline constexpr std::array<std::string_view, 11> kPipelineSteps{
    "load_interpolate",       "levels_ols",        "levels_residual_scatter", "levels_durbin_alt",
    "levels_adf",             "differences_adf",   "differences_ols",         "differences_correlogram",
    "armax_fit",              "arma_joint_test",   "innovation_correlogram",
};

struct AuditFailure {
    std::string step;
    std::string kind;  ///< "input" or "numerical"
    std::string message;
    friend bool operator==(const AuditFailure&, const AuditFailure&) = default;
};

struct AuditReport {
    static constexpr int kSchemaVersion = 1;

    int schema_version = kSchemaVersion;
    std::string source;
    std::string y_column;
    std::string x_column;
    bool interpolate = true;
    int durbin_lags = 12;
    int adf_lags = 12;
    int acf_lags = 20;
    std::string arimax_order = "(1,1,1)";
    std::string vce = "robust";
    std::string durbin_presample = "zero-fill";
    VerdictThresholds thresholds{};

    std::vector<AuditStep> steps;
    std::vector<NamedPlot> plots;
    Verdict verdict = Verdict::Inconclusive;
    bool truncated = false;
    std::optional<AuditFailure> failure;
    /// Set when the ARMAX optimizer did not converge; the report is complete
    /// but the estimates are the last iterate.
    bool armax_converged = true;

    [[nodiscard]] const AuditStep* step(std::string_view name) const noexcept;
    friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

/// The verdict as a pure function of the step statistics:
///  - spurious-levels-relationship when the levels Durbin test rejects, both
///    levels ADF tests retain a unit root, and both the differenced OLS slope
///    and the ARMAX beta are insignificant;
///  - levels-relationship-supported when the levels Durbin test does not
///    reject and the levels slope is significant;
///  - inconclusive otherwise, including when the needed statistics are absent.
[[nodiscard]] Verdict derive_verdict(const AuditReport& report);

/// Runs every pipeline step on an in-memory dataset. A failing step stops the
/// pipeline; the returned report is then marked truncated with the failure.
[[nodiscard]] AuditReport run_audit(const Dataset& data, const AuditConfig& cfg);

/// Loads cfg.input and runs the pipeline. Load failures are reported as a
/// truncated report with an "input" failure on the first step.
[[nodiscard]] AuditReport run_audit(const AuditConfig& cfg);

[[nodiscard]] nlohmann::ordered_json to_json(const AuditReport& report);
/// Throws nlohmann::json::exception or std::invalid_argument on schema errors.
[[nodiscard]] AuditReport report_from_json(const nlohmann::ordered_json& j);
/// Canonical JSON text: two-space indent, trailing newline.
[[nodiscard]] std::string render_json(const AuditReport& report);
[[nodiscard]] std::string render_markdown(const AuditReport& report);

/// Writes the requested formats into out_dir (created if needed) and returns
/// the paths written. Output is byte-deterministic for a given report.
/// Throws InputError when the directory cannot be written.
std::vector<std::filesystem::path> render(const AuditReport& report, const std::filesystem::path& out_dir,
                                          std::span<const OutputFormat> formats);

/// FNV-1a 64 over names and value bit patterns (missing values hash as a tag).
[[nodiscard]] std::string digest(std::span<const Series> inputs);

}  // namespace tsaudit

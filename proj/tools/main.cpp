#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsaudit/audit.hpp"
#include "tsaudit/error.hpp"
#include "tsaudit/montecarlo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct AuditArgs {
    std::string input;
    std::string y;
    std::string x;
    std::string date_col = "date";
    std::string year_col;
    std::string month_col;
    bool no_interpolate = false;
    int durbin_lags = 12;
    int adf_lags = 12;
    int acf_lags = 20;
    std::string presample = "zero-fill";
    std::string vce = "robust";
    std::string out = ".";
    std::string formats = "json,md,svg";
    tsaudit::VerdictThresholds thresholds;
};

struct SimulateArgs {
    std::string process = "random-walk";
    std::size_t n = 229;
    std::size_t reps = 2000;
    std::uint64_t seed = 1;
    double rho = 0.0;
    double theta = 0.0;
    double sigma = 1.0;
    std::string out = ".";
    bool csv = false;
};

std::vector<tsaudit::OutputFormat> parse_formats(const std::string& list) {
    std::vector<tsaudit::OutputFormat> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item == "json") out.push_back(tsaudit::OutputFormat::Json);
        else if (item == "md" || item == "markdown") out.push_back(tsaudit::OutputFormat::Markdown);
        else if (item == "svg") out.push_back(tsaudit::OutputFormat::Svg);
        else throw std::invalid_argument("unknown format '" + item + "' (expected json, md, svg)");
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw tsaudit::InputError("cannot write '" + path.string() + "'");
    f << text;
    if (!f.flush()) throw tsaudit::InputError("failed writing '" + path.string() + "'");
}

int run_audit_command(const AuditArgs& a) {
    tsaudit::AuditConfig cfg;
    cfg.input = a.input;
    cfg.y_column = a.y;
    cfg.x_column = a.x;
    if (!a.year_col.empty() || !a.month_col.empty()) {
        if (a.year_col.empty() || a.month_col.empty()) throw std::invalid_argument("--year-col and --month-col go together");
        cfg.csv.date_columns = {a.year_col, a.month_col};
        cfg.csv.date_format = tsaudit::DateFormat::YearMonthColumns;
    } else {
        cfg.csv.date_columns = {a.date_col};
    }
    cfg.interpolate = !a.no_interpolate;
    cfg.durbin_lags = a.durbin_lags;
    cfg.adf_lags = a.adf_lags;
    cfg.acf_lags = a.acf_lags;
    cfg.presample = a.presample == "drop-rows" ? tsaudit::PresampleResiduals::DropRows : tsaudit::PresampleResiduals::ZeroFill;
    cfg.arimax.vce = a.vce == "classical" ? tsaudit::Vce::Classical : tsaudit::Vce::Robust;
    cfg.thresholds = a.thresholds;
    cfg.out_dir = a.out;
    cfg.formats = parse_formats(a.formats);
    tsaudit::validate(cfg);

    const tsaudit::AuditReport report = tsaudit::run_audit(cfg);
    tsaudit::render(report, cfg.out_dir, cfg.formats);

    std::cout << "verdict: " << tsaudit::to_string(report.verdict) << "\n";
    if (report.failure) {
        std::cerr << "tsaudit: step '" << report.failure->step << "' failed (" << report.failure->kind
                  << "): " << report.failure->message << "\n";
        return report.failure->kind == "numerical" ? kExitNumerical : kExitInput;
    }
    if (!report.armax_converged) {
        std::cerr << "tsaudit: ARMAX optimizer did not converge\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int run_simulate_command(const SimulateArgs& a) {
    namespace mc = tsaudit::mc;
    mc::SimConfig cfg;
    cfg.n = a.n;
    cfg.reps = a.reps;
    cfg.seed = a.seed;
    cfg.process = {mc::parse_process_kind(a.process), a.rho, a.theta, a.sigma};
    mc::validate(cfg);

    const auto levels = mc::spurious_experiment(cfg, false);
    const auto diffs = mc::spurious_experiment(cfg, true);

    std::error_code ec;
    std::filesystem::create_directories(a.out, ec);
    if (ec) throw tsaudit::InputError("cannot create output directory '" + a.out + "': " + ec.message());
    const std::filesystem::path dir(a.out);
    write_text(dir / "simulation.json", mc::render_json(cfg, levels.summary, diffs.summary));
    if (a.csv) write_text(dir / "replications.csv", mc::render_replications_csv(levels, diffs));

    std::printf("levels rejection rate %.4f, differences rejection rate %.4f\n", levels.summary.rejection_rate,
                diffs.summary.rejection_rate);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Audit a level-on-level time-series regression for spurious correlation."};
    app.require_subcommand(1);

    AuditArgs audit;
    auto* audit_cmd = app.add_subcommand("audit", "Run the full diagnostic pipeline on a monthly CSV file");
    audit_cmd->add_option("--input", audit.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    audit_cmd->add_option("--y", audit.y, "Dependent-variable column")->required();
    audit_cmd->add_option("--x", audit.x, "Regressor column (interpolated unless --no-interpolate)")->required();
    audit_cmd->add_option("--date-col", audit.date_col, "Column holding YYYY-MM dates")->capture_default_str();
    audit_cmd->add_option("--year-col", audit.year_col, "Year column (use with --month-col instead of --date-col)");
    audit_cmd->add_option("--month-col", audit.month_col, "Month column (1-12)");
    audit_cmd->add_flag("--no-interpolate", audit.no_interpolate, "Do not fill interior gaps of the regressor");
    audit_cmd->add_option("--durbin-lags", audit.durbin_lags, "Lags in Durbin's alternative test")->capture_default_str()->check(CLI::PositiveNumber);
    audit_cmd->add_option("--adf-lags", audit.adf_lags, "Augmentation lags in the ADF tests")->capture_default_str()->check(CLI::PositiveNumber);
    audit_cmd->add_option("--acf-lags", audit.acf_lags, "Lags in the ACF/PACF correlograms")->capture_default_str()->check(CLI::PositiveNumber);
    audit_cmd->add_option("--durbin-presample", audit.presample, "Pre-sample lagged residuals in Durbin's test")
        ->capture_default_str()
        ->check(CLI::IsMember({"zero-fill", "drop-rows"}));
    audit_cmd->add_option("--vce", audit.vce, "ARMAX covariance estimator")->capture_default_str()->check(CLI::IsMember({"robust", "classical"}));
    audit_cmd->add_option("--durbin-alpha", audit.thresholds.durbin_alpha, "Verdict cutoff for the levels Durbin test")->capture_default_str();
    audit_cmd->add_option("--adf-alpha", audit.thresholds.adf_alpha, "Verdict cutoff for the levels ADF tests")->capture_default_str();
    audit_cmd->add_option("--beta-alpha", audit.thresholds.beta_alpha, "Verdict cutoff for slope significance")->capture_default_str();
    audit_cmd->add_option("--out", audit.out, "Output directory")->capture_default_str();
    audit_cmd->add_option("--format", audit.formats, "Comma-separated subset of json,md,svg (empty for none)")->capture_default_str();

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Spurious-regression Monte Carlo on independent simulated series");
    sim_cmd->add_option("--process", sim.process, "white-noise, random-walk, ar1 or arma11")
        ->capture_default_str()
        ->check(CLI::IsMember({"white-noise", "random-walk", "ar1", "arma11"}));
    sim_cmd->add_option("--n", sim.n, "Series length")->capture_default_str();
    sim_cmd->add_option("--reps", sim.reps, "Replications")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "64-bit seed")->capture_default_str();
    sim_cmd->add_option("--rho", sim.rho, "AR parameter (ar1, arma11)")->capture_default_str();
    sim_cmd->add_option("--theta", sim.theta, "MA parameter (arma11)")->capture_default_str();
    sim_cmd->add_option("--sigma", sim.sigma, "Innovation standard deviation")->capture_default_str();
    sim_cmd->add_option("--out", sim.out, "Output directory")->capture_default_str();
    sim_cmd->add_flag("--csv", sim.csv, "Also write per-replication statistics");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*audit_cmd) return run_audit_command(audit);
        return run_simulate_command(sim);
    } catch (const tsaudit::NumericalError& e) {
        std::cerr << "tsaudit: numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "tsaudit: " << e.what() << "\n";
        return kExitInput;
    }
}

// Batch front-end: fit, hist, density-grid, sample.
//
// Exit codes: 0 success, 2 validation failure, 3 numerical failure.

#include "coda/errors.hpp"
#include "coda/io.hpp"
#include "coda/laws.hpp"
#include "coda/modality.hpp"
#include "coda/sampling.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using coda::Error;
using coda::ErrorKind;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CODA_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidArgument, "CODA_SEED is not an unsigned integer");
        }
    }
    return 20061;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, what + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw Error(ErrorKind::ParseError, what + " is empty");
    return out;
}

coda::NormalOnSimplex simplex_law(const std::string& mu_text, const std::string& sigma_text) {
    const auto mu = parse_list(mu_text, "--mu");
    const auto sigma = parse_list(sigma_text, "--sigma");
    const auto m = static_cast<Eigen::Index>(mu.size());
    if (static_cast<Eigen::Index>(sigma.size()) != m * m) {
        throw Error(ErrorKind::DimensionMismatch, "--sigma needs " + std::to_string(m * m) +
                                                      " row-major entries for a " + std::to_string(m) +
                                                      "-dimensional mean");
    }
    Eigen::MatrixXd s(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) s(i, j) = sigma[static_cast<std::size_t>(i * m + j)];
    }
    return {Eigen::Map<const Eigen::VectorXd>(mu.data(), m), s, coda::default_basis(mu.size() + 1)};
}

void emit(const nlohmann::json& j, const std::string& output) {
    if (output.empty() || output == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(output);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + output);
    out << j.dump(2) << '\n';
}

struct FitArgs {
    std::string input;
    std::string space = "rplus";
    double kappa = 1.0;
    double alpha = 0.05;
    std::optional<std::uint64_t> seed;
    bool auto_close = true;
    bool close_rows = false;
    std::string column;
    int quad_order = 40;
    std::string output;
};

int run_fit(const FitArgs& args) {
    coda::io::ReadOptions opts;
    opts.kind = args.space == "simplex" ? coda::io::SpaceKind::Simplex : coda::io::SpaceKind::RPlus;
    opts.kappa = args.kappa;
    opts.auto_close = args.auto_close;
    opts.close_rows = args.close_rows;
    opts.column = args.column;
    const auto data = coda::io::read_dataset(args.input, opts);
    nlohmann::json report;
    if (opts.kind == coda::io::SpaceKind::RPlus) {
        report = coda::io::rplus_fit_report(coda::io::to_rplus_sample(data), args.alpha);
    } else {
        const auto basis = coda::default_basis(data.columns.size());
        report = coda::io::simplex_fit_report(coda::io::to_simplex_sample(data, basis), data.columns,
                                              data.kappa, args.quad_order);
    }
    report["input"] = args.input;
    report["seed"] = args.seed.value_or(default_seed());
    emit(report, args.output);
    return 0;
}

struct HistArgs {
    std::string input;
    std::string metric = "logratio";
    int bins = 10;
    std::string column;
    std::string output;
};

int run_hist(const HistArgs& args) {
    coda::io::ReadOptions opts;
    opts.column = args.column;
    const auto sample = coda::io::to_rplus_sample(coda::io::read_dataset(args.input, opts));
    const auto metric =
        args.metric == "euclidean" ? coda::io::HistogramMetric::Euclidean : coda::io::HistogramMetric::LogRatio;
    const auto grid = coda::io::histogram(sample, metric, args.bins);
    if (args.output.empty()) {
        nlohmann::json j = grid.meta;
        j["kind"] = grid.kind;
        j["columns"] = grid.columns;
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < grid.payload.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < grid.payload.cols(); ++c) row.push_back(grid.payload(r, c));
            rows.push_back(std::move(row));
        }
        j["rows"] = rows;
        emit(j, "");
    } else {
        coda::io::write_grid(grid, args.output);
    }
    return 0;
}

struct GridArgs {
    std::string law = "aln";
    std::string mu = "0,0";
    std::string sigma = "1,0,0,1";
    int resolution = 400;
    double margin = 1e-4;
    bool coordinates = false;
    std::string output;
};

int run_density_grid(const GridArgs& args) {
    const auto normal = simplex_law(args.mu, args.sigma);
    coda::io::GridArtifact grid;
    if (args.coordinates) {
        grid = coda::io::coordinate_density_artifact(normal, args.resolution);
    } else {
        const coda::TernaryGrid tgrid(args.resolution, args.margin);
        const auto density = args.law == "aln" ? coda::aln_density_grid(coda::AlnLaw(normal), tgrid)
                                               : coda::nsd_density_grid(normal, tgrid);
        grid = coda::io::ternary_artifact(density, args.law);
    }
    nlohmann::json summary = grid.meta;
    summary["kind"] = grid.kind;
    summary["schema_version"] = coda::io::kSchemaVersion;
    if (!args.output.empty()) {
        coda::io::write_grid(grid, args.output);
        summary["output"] = args.output;
    }
    emit(summary, "");
    return 0;
}

struct SampleArgs {
    std::string law = "nrp";
    std::string mu = "0";
    std::string sigma = "1";
    std::size_t n = 100;
    std::optional<std::uint64_t> seed;
    std::uint64_t stream = 0;
    std::string output;
};

int run_sample(const SampleArgs& args) {
    const std::uint64_t seed = args.seed.value_or(default_seed());
    coda::SeededStream stream(seed, args.stream);
    std::ostringstream buffer;
    if (args.law == "nrp" || args.law == "lognormal") {
        const auto mu = parse_list(args.mu, "--mu");
        const auto sigma2 = parse_list(args.sigma, "--sigma");
        if (mu.size() != 1 || sigma2.size() != 1) {
            throw Error(ErrorKind::DimensionMismatch, "scalar laws take one --mu and one --sigma (variance)");
        }
        const coda::NormalOnRPlus law(mu[0], sigma2[0]);
        const auto params = args.law == "nrp" ? coda::io::to_json(law) : coda::io::to_json(coda::as_lognormal(law));
        coda::io::write_sample_csv(buffer, {args.law, params, seed, args.stream},
                                   coda::sample_nrp(law, args.n, stream));
    } else {
        const auto law = simplex_law(args.mu, args.sigma);
        const auto params = args.law == "nsd" ? coda::io::to_json(law) : coda::io::to_json(coda::AlnLaw(law));
        coda::io::write_sample_csv(buffer, {args.law, params, seed, args.stream},
                                   coda::sample_nsd(law, args.n, stream));
    }
    if (args.output.empty() || args.output == "-") {
        std::cout << buffer.str();
    } else {
        std::ofstream out(args.output);
        if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + args.output);
        out << buffer.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normal laws on R+ and the simplex: fitting, sampling and density grids"};
    app.require_subcommand(1);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a normal law to a CSV dataset and print a JSON report");
    fit_cmd->add_option("input", fit.input, "CSV file with a header row")->required();
    fit_cmd->add_option("--space", fit.space, "Sample space")->check(CLI::IsMember({"rplus", "simplex"}));
    fit_cmd->add_option("--kappa", fit.kappa, "Closure constant of the simplex rows");
    fit_cmd->add_option("--alpha", fit.alpha, "1 - confidence level of the mean interval (rplus)");
    fit_cmd->add_option("--seed", fit.seed, "Seed recorded in the report (default: CODA_SEED)");
    fit_cmd->add_option("--auto-close", fit.auto_close,
                        "Re-normalize rows whose sum is within 1e-6 of kappa (true/false)");
    fit_cmd->add_flag("--close-rows", fit.close_rows, "Close every row to kappa, whatever its sum");
    fit_cmd->add_option("--column", fit.column, "Column to read for rplus data");
    fit_cmd->add_option("--quad-order", fit.quad_order, "Gauss-Hermite order for the classical aln mean");
    fit_cmd->add_option("-o,--output", fit.output, "Write the report here instead of stdout");

    HistArgs hist;
    auto* hist_cmd = app.add_subcommand("hist", "Histogram of an R+ dataset with fitted densities");
    hist_cmd->add_option("input", hist.input, "CSV file with a header row")->required();
    hist_cmd->add_option("--metric", hist.metric, "Bin metric")->check(CLI::IsMember({"euclidean", "logratio"}));
    hist_cmd->add_option("--bins", hist.bins, "Number of bins")->check(CLI::Range(2, 100000));
    hist_cmd->add_option("--column", hist.column, "Column to read");
    hist_cmd->add_option("-o,--output", hist.output, "CSV path; a .json sidecar is written next to it");

    GridArgs grid;
    auto* grid_cmd = app.add_subcommand("density-grid", "Evaluate a law on a ternary (or coordinate) grid");
    grid_cmd->add_option("--law", grid.law, "Law")->check(CLI::IsMember({"nsd", "aln"}));
    grid_cmd->add_option("--mu", grid.mu, "Coordinate mean, comma separated");
    grid_cmd->add_option("--sigma", grid.sigma, "Coordinate covariance, row-major, comma separated");
    grid_cmd->add_option("--resolution", grid.resolution, "Grid subdivisions per side")->check(CLI::Range(2, 5000));
    grid_cmd->add_option("--margin", grid.margin, "Distance kept from the simplex boundary");
    grid_cmd->add_flag("--coordinates", grid.coordinates, "Regular grid in ilr coordinates instead");
    grid_cmd->add_option("-o,--output", grid.output, "CSV path; a .json sidecar is written next to it");

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "Draw from a law and write CSV");
    sample_cmd->add_option("--law", sample.law, "Law")->check(CLI::IsMember({"nrp", "lognormal", "nsd", "aln"}));
    sample_cmd->add_option("--mu", sample.mu, "Mean (log scale or coordinates)");
    sample_cmd->add_option("--sigma", sample.sigma, "Variance, or row-major covariance");
    sample_cmd->add_option("-n", sample.n, "Number of draws")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", sample.seed, "Seed (default: CODA_SEED or a fixed constant)");
    sample_cmd->add_option("--stream", sample.stream, "Stream id for independent replications");
    sample_cmd->add_option("-o,--output", sample.output, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*fit_cmd) return run_fit(fit);
        if (*hist_cmd) return run_hist(hist);
        if (*grid_cmd) return run_density_grid(grid);
        if (*sample_cmd) return run_sample(sample);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return coda::is_numerical(e.kind()) ? kExitNumerical : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}

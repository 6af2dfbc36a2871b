#ifndef CODA_IO_HPP
#define CODA_IO_HPP

/**
 * @file io.hpp
 * @brief Dataset ingestion, JSON reports and grid artifacts used by the CLI.
 *
 * Formats:
 *  - datasets: UTF-8 CSV, '.' decimal separator, one header row; lines starting
 *    with '#' and blank lines are ignored;
 *  - reports: JSON objects carrying `schema_version`;
 *  - grids: a numeric CSV table plus a JSON sidecar (`<csv>.json`) holding axis
 *    metadata, column names and any detected maxima.
 */

#include "coda/inference.hpp"
#include "coda/laws.hpp"
#include "coda/modality.hpp"
#include "coda/sampling.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace coda::io {

inline constexpr int kSchemaVersion = 1;

enum class SpaceKind { RPlus, Simplex };

struct ReadOptions {
    SpaceKind kind = SpaceKind::RPlus;
    double kappa = 1.0;
    /// Re-normalize rows whose sum is within 1e-6 relative of kappa; otherwise require 1e-12.
    bool auto_close = true;
    /// Close every row to kappa regardless of its sum (raw, unclosed parts).
    bool close_rows = false;
    /// R+ datasets: column to read; empty means the first column.
    std::string column;
};

struct Dataset {
    SpaceKind kind;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    /// Source line of each row, for diagnostics.
    std::vector<std::size_t> lines;
    double kappa = 1.0;
};

/// Throws Error with a "line N:" prefix on malformed or invalid rows.
Dataset read_dataset(std::istream& in, const ReadOptions& options);
Dataset read_dataset(const std::filesystem::path& path, const ReadOptions& options);

RPlusSample to_rplus_sample(const Dataset& data);
SimplexSample to_simplex_sample(const Dataset& data, const ContrastBasis& basis);

nlohmann::json to_json(const NormalOnRPlus& law);
nlohmann::json to_json(const LognormalLaw& law);
nlohmann::json to_json(const NormalOnSimplex& law);
nlohmann::json to_json(const AlnLaw& law);
nlohmann::json to_json(const GofReport& report);

NormalOnRPlus nrp_from_json(const nlohmann::json& j);
NormalOnSimplex nsd_from_json(const nlohmann::json& j);

/// Estimates, CI, metric moments and lognormal baselines.
nlohmann::json rplus_fit_report(const RPlusSample& sample, double alpha);

/// Estimates, center, metric variance, GOF battery and the classical aln mean.
nlohmann::json simplex_fit_report(const SimplexSample& sample, const std::vector<std::string>& columns,
                                  double kappa, int quad_order = 40);

struct GridArtifact {
    /// "histogram", "ternary_density" or "coordinate_density".
    std::string kind;
    std::vector<std::string> columns;
    Eigen::MatrixXd payload;
    /// Axis metadata and anything else describing the payload.
    nlohmann::json meta;
};

enum class HistogramMetric { Euclidean, LogRatio };

/**
 * Equal-width bins in the chosen metric across the data range.
 *
 * Columns: lower, upper, midpoint, count, nrp_density, lognormal_density. The
 * midpoint is arithmetic for the Euclidean metric and geometric for the
 * log-ratio metric; densities come from the fitted law, each against its own
 * reference measure.
 */
GridArtifact histogram(const RPlusSample& sample, HistogramMetric metric, int bins);

/// Columns: i, j, x1, x2, x3, density. Local maxima go into meta["local_maxima"].
GridArtifact ternary_artifact(const TernaryDensity& density, const std::string& law_name);

/// Density of the coordinate normal on a regular 2-D grid over mu ± 4 sd. Columns: y1, y2, density.
GridArtifact coordinate_density_artifact(const NormalOnSimplex& law, int resolution);

/// Writes `csv_path` and `csv_path` + ".json".
void write_grid(const GridArtifact& grid, const std::filesystem::path& csv_path);
GridArtifact read_grid(const std::filesystem::path& csv_path);

struct SampleHeader {
    std::string law;
    nlohmann::json parameters;
    std::uint64_t seed;
    std::uint64_t stream;
};

/// Draws as CSV: '#'-prefixed metadata lines, a header row, then one row per draw.
void write_sample_csv(std::ostream& out, const SampleHeader& header, const std::vector<PositiveValue>& draws);
void write_sample_csv(std::ostream& out, const SampleHeader& header, const std::vector<Composition>& draws);

std::string format_double(double v);

} // namespace coda::io

#endif

#include "coda/io.hpp"

#include "coda/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace coda::io {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string_view rest(line);
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

[[noreturn]] void fail_at(std::size_t line, ErrorKind kind, const std::string& what) {
    throw Error(kind, "line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& field, std::size_t line, std::size_t column) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc() || ptr != end) {
        fail_at(line, ErrorKind::ParseError,
                "column " + std::to_string(column + 1) + ": cannot parse '" + field + "' as a number");
    }
    return value;
}

json vector_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
    return rows;
}

Eigen::VectorXd vector_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != m.cols()) {
            throw Error(ErrorKind::ParseError, "ragged matrix in JSON");
        }
        for (std::size_t k = 0; k < rows[i].size(); ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
        }
    }
    return m;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

Dataset read_dataset(std::istream& in, const ReadOptions& options) {
    Dataset data{options.kind, {}, {}, {}, options.kappa};
    if (!(options.kappa > 0.0) || !std::isfinite(options.kappa)) {
        throw Error(ErrorKind::InvalidArgument, "kappa must be positive");
    }
    std::string line;
    std::size_t line_no = 0;
    std::size_t wanted_column = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string content = trim(line);
        if (content.empty() || content.front() == '#') continue;
        auto fields = split_row(content);
        if (!have_header) {
            if (line_no == 1 && content.rfind("\xEF\xBB\xBF", 0) == 0) fields.front().erase(0, 3);
            data.columns = fields;
            have_header = true;
            if (options.kind == SpaceKind::RPlus && !options.column.empty()) {
                const auto it = std::find(data.columns.begin(), data.columns.end(), options.column);
                if (it == data.columns.end()) {
                    fail_at(line_no, ErrorKind::ParseError, "no column named '" + options.column + "'");
                }
                wanted_column = static_cast<std::size_t>(it - data.columns.begin());
            }
            if (options.kind == SpaceKind::Simplex && data.columns.size() < 2) {
                fail_at(line_no, ErrorKind::ParseError, "a simplex dataset needs at least two columns");
            }
            continue;
        }
        if (fields.size() != data.columns.size()) {
            fail_at(line_no, ErrorKind::ParseError,
                    "expected " + std::to_string(data.columns.size()) + " fields, found " +
                        std::to_string(fields.size()));
        }
        std::vector<double> row;
        if (options.kind == SpaceKind::RPlus) {
            const double v = parse_number(fields[wanted_column], line_no, wanted_column);
            if (!std::isfinite(v) || v <= 0.0) {
                fail_at(line_no, ErrorKind::NonPositivePart,
                        "value " + fields[wanted_column] + " is not strictly positive");
            }
            row.push_back(v);
        } else {
            double sum = 0.0;
            for (std::size_t c = 0; c < fields.size(); ++c) {
                const double v = parse_number(fields[c], line_no, c);
                if (!std::isfinite(v) || v <= 0.0) {
                    fail_at(line_no, ErrorKind::NonPositivePart,
                            "part " + std::to_string(c + 1) + " (" + data.columns[c] + ") is " + fields[c]);
                }
                row.push_back(v);
                sum += v;
            }
            const double tolerance = options.auto_close ? 1e-6 : 1e-12;
            if (!options.close_rows && std::abs(sum - options.kappa) > tolerance * options.kappa) {
                fail_at(line_no, ErrorKind::ParseError,
                        "parts sum to " + format_double(sum) + ", expected " + format_double(options.kappa));
            }
            for (double& v : row) v *= options.kappa / sum;
        }
        data.rows.push_back(std::move(row));
        data.lines.push_back(line_no);
    }
    if (!have_header) throw Error(ErrorKind::ParseError, "missing header row");
    if (data.rows.empty()) throw Error(ErrorKind::EmptyData, "dataset has no rows");
    return data;
}

Dataset read_dataset(const std::filesystem::path& path, const ReadOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    return read_dataset(in, options);
}

RPlusSample to_rplus_sample(const Dataset& data) {
    if (data.kind != SpaceKind::RPlus) throw Error(ErrorKind::InvalidArgument, "not an R+ dataset");
    std::vector<PositiveValue> values;
    values.reserve(data.rows.size());
    for (const auto& row : data.rows) values.emplace_back(row.front());
    return RPlusSample(std::move(values));
}

SimplexSample to_simplex_sample(const Dataset& data, const ContrastBasis& basis) {
    if (data.kind != SpaceKind::Simplex) throw Error(ErrorKind::InvalidArgument, "not a simplex dataset");
    std::vector<Composition> comps;
    comps.reserve(data.rows.size());
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        const auto& row = data.rows[r];
        try {
            comps.push_back(closure(std::span<const double>(row), data.kappa));
        } catch (const Error& e) {
            fail_at(data.lines[r], e.kind(), e.what());
        }
    }
    return SimplexSample(std::move(comps), basis);
}

json to_json(const NormalOnRPlus& law) {
    return {{"law", "nrp"}, {"mu", law.mu()}, {"sigma2", law.sigma2()}};
}

json to_json(const LognormalLaw& law) {
    return {{"law", "lognormal"}, {"mu", law.mu()}, {"sigma2", law.sigma2()}};
}

json to_json(const NormalOnSimplex& law) {
    return {{"law", "nsd"},
            {"parts", law.parts()},
            {"mu", vector_json(law.mu())},
            {"sigma", matrix_json(law.sigma())},
            {"basis", matrix_json(law.basis().matrix())}};
}

json to_json(const AlnLaw& law) {
    json j = to_json(law.paired());
    j["law"] = "aln";
    return j;
}

json to_json(const GofReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"layer", e.layer},
                           {"component", e.component},
                           {"test", std::string(edf::name(e.test))},
                           {"statistic", e.statistic},
                           {"critical_1pct", e.critical_1pct},
                           {"passed_at_1pct", e.passed_at_1pct}});
    }
    return {{"n", report.n},
            {"significance", 0.01},
            {"entries", entries},
            {"rejections", report.rejections()},
            {"rejections_by_layer",
             {{"marginal", report.rejections("marginal")},
              {"angle", report.rejections("angle")},
              {"radius", report.rejections("radius")}}}};
}

NormalOnRPlus nrp_from_json(const json& j) {
    try {
        return {j.at("mu").get<double>(), j.at("sigma2").get<double>()};
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

NormalOnSimplex nsd_from_json(const json& j) {
    try {
        return {vector_from_json(j.at("mu")), matrix_from_json(j.at("sigma")),
                ContrastBasis(matrix_from_json(j.at("basis")))};
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

json rplus_fit_report(const RPlusSample& sample, double alpha) {
    const RPlusEstimate est = fit_nrp(sample);
    const NormalOnRPlus law = est.law();
    const auto moments = nrp_moments(law);
    const auto [lo, hi] = ci_mean_nrp(sample, alpha);
    const LognormalLaw classical = as_lognormal(law);
    const auto lm = lognormal_moments(classical);
    const auto naive = lognormal_naive_interval(classical, 1.0);
    return {
        {"schema_version", kSchemaVersion},
        {"space", "rplus"},
        {"n", sample.size()},
        {"estimate", to_json(law)},
        {"normal_on_rplus",
         {{"mean", moments.mean.value()},
          {"median", moments.median.value()},
          {"mode", moments.mode.value()},
          {"metric_variance", moments.metric_variance},
          {"geometric_mean", est.fitted_mean().value()},
          {"ci_mean", {{"alpha", alpha}, {"lower", lo.value()}, {"upper", hi.value()}}}}},
        {"lognormal_baseline",
         {{"naive_mean", naive_lognormal_mean(sample)},
          {"mean", lm.mean},
          {"median", lm.median},
          {"mode", lm.mode},
          {"variance", lm.variance},
          {"interval_k1",
           {{"lower", naive.lower}, {"upper", naive.upper}, {"within_support", naive.within_support}}}}},
    };
}

json simplex_fit_report(const SimplexSample& sample, const std::vector<std::string>& columns, double kappa,
                        int quad_order) {
    const NormalOnSimplex law = fit_nsd(sample);
    const auto moments = nsd_moments(law);
    const Composition center = center_of(sample.compositions());
    const GofReport gof = gof_battery(sample, law);
    const Eigen::VectorXd aln_mean = aln_classical_mean(AlnLaw(law), quad_order) * kappa;
    return {
        {"schema_version", kSchemaVersion},
        {"space", "simplex"},
        {"n", sample.size()},
        {"parts", sample.parts()},
        {"columns", columns},
        {"kappa", kappa},
        {"estimate", to_json(law)},
        {"normal_on_simplex",
         {{"center", vector_json(moments.center.parts() * kappa)},
          {"data_center", vector_json(center.parts())},
          {"metric_variance", moments.metric_variance}}},
        {"gof", to_json(gof)},
        {"aln_baseline", {{"classical_mean", vector_json(aln_mean)}, {"quad_order", quad_order}}},
    };
}

GridArtifact histogram(const RPlusSample& sample, HistogramMetric metric, int bins) {
    if (bins < 2) throw Error(ErrorKind::InvalidArgument, "histogram needs at least 2 bins");
    const RPlusEstimate est = fit_nrp(sample);
    const NormalOnRPlus law = est.law();
    const LognormalLaw classical = as_lognormal(law);

    const bool log_metric = metric == HistogramMetric::LogRatio;
    std::vector<double> coords;
    coords.reserve(sample.size());
    for (const auto& v : sample.values()) coords.push_back(log_metric ? v.log() : v.value());
    const auto [mn, mx] = std::minmax_element(coords.begin(), coords.end());
    const double lo = *mn;
    const double hi = *mx;
    if (!(hi > lo)) throw Error(ErrorKind::DegenerateVariance, "data range is empty");
    const double width = (hi - lo) / bins;

    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double c : coords) {
        auto k = static_cast<int>(std::floor((c - lo) / width));
        counts[static_cast<std::size_t>(std::clamp(k, 0, bins - 1))] += 1.0;
    }

    GridArtifact g;
    g.kind = "histogram";
    g.columns = {"lower", "upper", "midpoint", "count", "nrp_density", "lognormal_density"};
    g.payload.resize(bins, 6);
    for (int k = 0; k < bins; ++k) {
        const double a = lo + k * width;
        const double b = k + 1 == bins ? hi : lo + (k + 1) * width;
        const double mid = 0.5 * (a + b);
        const double lower = log_metric ? std::exp(a) : a;
        const double upper = log_metric ? std::exp(b) : b;
        const double midpoint = log_metric ? std::exp(mid) : mid;
        const double nrp = nrp_pdf(law, PositiveValue(midpoint));
        g.payload.row(k) << lower, upper, midpoint, counts[static_cast<std::size_t>(k)], nrp,
            lognormal_pdf(classical, midpoint);
    }
    g.meta = {{"metric", log_metric ? "logratio" : "euclidean"},
              {"bins", bins},
              {"n", sample.size()},
              {"bin_width", width},
              {"bin_width_units", log_metric ? "log" : "data"},
              {"fitted", to_json(law)},
              {"density_reference",
               {{"nrp_density", "lambda_plus"}, {"lognormal_density", "lebesgue"}}}};
    return g;
}

GridArtifact ternary_artifact(const TernaryDensity& density, const std::string& law_name) {
    const TernaryGrid& grid = density.grid;
    GridArtifact g;
    g.kind = "ternary_density";
    g.columns = {"i", "j", "x1", "x2", "x3", "density"};
    g.payload.resize(static_cast<Eigen::Index>(grid.node_count()), 6);
    Eigen::Index row = 0;
    for (int i = 0; i <= grid.resolution(); ++i) {
        for (int j = 0; j <= grid.resolution() - i; ++j) {
            const Composition x = grid.point(i, j);
            g.payload.row(row++) << i, j, x[0], x[1], x[2], density.at(i, j);
        }
    }
    json maxima = json::array();
    for (const auto& m : find_local_maxima(density)) {
        maxima.push_back({{"i", m.i},
                          {"j", m.j},
                          {"location", vector_json(m.location.parts())},
                          {"density", m.density}});
    }
    g.meta = {{"law", law_name},
              {"resolution", grid.resolution()},
              {"margin", grid.margin()},
              {"node", "x = margin + (1 - 3 margin) (i, j, r - i - j) / r"},
              {"local_maxima", maxima},
              {"local_maxima_count", maxima.size()}};
    return g;
}

GridArtifact coordinate_density_artifact(const NormalOnSimplex& law, int resolution) {
    if (law.dimension() != 2) throw Error(ErrorKind::DimensionMismatch, "coordinate grids need D = 3");
    if (resolution < 2) throw Error(ErrorKind::InvalidArgument, "grid resolution must be >= 2");
    GridArtifact g;
    g.kind = "coordinate_density";
    g.columns = {"y1", "y2", "density"};
    const auto n = static_cast<Eigen::Index>(resolution) + 1;
    g.payload.resize(n * n, 3);
    Eigen::Vector2d lo;
    Eigen::Vector2d step;
    for (int d = 0; d < 2; ++d) {
        const double sd = std::sqrt(law.sigma()(d, d));
        lo[d] = law.mu()[d] - 4.0 * sd;
        step[d] = 8.0 * sd / resolution;
    }
    Eigen::Index row = 0;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const Eigen::Vector2d y(lo[0] + a * step[0], lo[1] + b * step[1]);
            g.payload.row(row++) << y[0], y[1], std::exp(law.coordinate_log_pdf(y));
        }
    }
    g.meta = {{"law", to_json(law)},
              {"resolution", resolution},
              {"axes",
               {{{"name", "y1"}, {"lower", lo[0]}, {"step", step[0]}},
                {{"name", "y2"}, {"lower", lo[1]}, {"step", step[1]}}}}};
    return g;
}

void write_grid(const GridArtifact& grid, const std::filesystem::path& csv_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw Error(ErrorKind::ParseError, "cannot write " + csv_path.string());
    for (std::size_t c = 0; c < grid.columns.size(); ++c) csv << (c ? "," : "") << grid.columns[c];
    csv << '\n';
    for (Eigen::Index r = 0; r < grid.payload.rows(); ++r) {
        for (Eigen::Index c = 0; c < grid.payload.cols(); ++c) {
            csv << (c ? "," : "") << format_double(grid.payload(r, c));
        }
        csv << '\n';
    }
    json sidecar = grid.meta;
    sidecar["schema_version"] = kSchemaVersion;
    sidecar["kind"] = grid.kind;
    sidecar["columns"] = grid.columns;
    sidecar["rows"] = grid.payload.rows();
    std::ofstream meta(csv_path.string() + ".json");
    meta << sidecar.dump(2) << '\n';
}

GridArtifact read_grid(const std::filesystem::path& csv_path) {
    std::ifstream meta_in(csv_path.string() + ".json");
    if (!meta_in) throw Error(ErrorKind::ParseError, "missing sidecar for " + csv_path.string());
    GridArtifact g;
    try {
        g.meta = json::parse(meta_in);
        g.kind = g.meta.at("kind").get<std::string>();
        g.columns = g.meta.at("columns").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    std::ifstream in(csv_path);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (split_row(trim(line)) != g.columns) fail_at(1, ErrorKind::ParseError, "header disagrees with sidecar");
            continue;
        }
        if (trim(line).empty()) continue;
        const auto fields = split_row(trim(line));
        if (fields.size() != g.columns.size()) fail_at(line_no, ErrorKind::ParseError, "wrong field count");
        std::vector<double> row;
        for (std::size_t c = 0; c < fields.size(); ++c) row.push_back(parse_number(fields[c], line_no, c));
        rows.push_back(std::move(row));
    }
    g.payload.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(g.columns.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            g.payload(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    g.meta.erase("kind");
    g.meta.erase("columns");
    g.meta.erase("rows");
    g.meta.erase("schema_version");
    return g;
}

namespace {

void write_header(std::ostream& out, const SampleHeader& header) {
    out << "# law: " << header.law << '\n';
    out << "# parameters: " << header.parameters.dump() << '\n';
    out << "# seed: " << header.seed << '\n';
    out << "# stream: " << header.stream << '\n';
}

} // namespace

void write_sample_csv(std::ostream& out, const SampleHeader& header, const std::vector<PositiveValue>& draws) {
    write_header(out, header);
    out << "x\n";
    for (const auto& v : draws) out << format_double(v.value()) << '\n';
}

void write_sample_csv(std::ostream& out, const SampleHeader& header, const std::vector<Composition>& draws) {
    write_header(out, header);
    const std::size_t parts = draws.empty() ? 0 : draws.front().size();
    for (std::size_t c = 0; c < parts; ++c) out << (c ? "," : "") << 'x' << (c + 1);
    out << '\n';
    for (const auto& x : draws) {
        for (std::size_t c = 0; c < x.size(); ++c) out << (c ? "," : "") << format_double(x[c]);
        out << '\n';
    }
}

} // namespace coda::io

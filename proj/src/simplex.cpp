#include "coda/simplex.hpp"

#include "coda/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace coda {

namespace {

constexpr double kClosureTolerance = 1e-12;
constexpr double kEqualityTolerance = 1e-10;

void require_positive_parts(const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] <= 0.0) {
            throw Error(ErrorKind::NonPositivePart,
                        "part " + std::to_string(i + 1) + " is " + std::to_string(v[i]));
        }
    }
}

void require_kappa(double kappa) {
    if (!std::isfinite(kappa) || kappa <= 0.0) {
        throw Error(ErrorKind::InvalidArgument, "closure constant must be positive");
    }
}

void require_same_space(const Composition& x, const Composition& y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::to_string(x.size()) + " parts vs " + std::to_string(y.size()));
    }
    if (std::abs(x.kappa() - y.kappa()) > kClosureTolerance * std::max(x.kappa(), y.kappa())) {
        throw Error(ErrorKind::DimensionMismatch, "closure constants differ");
    }
}

void require_basis(const ContrastBasis& basis, std::size_t parts) {
    if (basis.parts() != parts) {
        throw Error(ErrorKind::DimensionMismatch,
                    "basis for " + std::to_string(basis.parts()) + " parts applied to " +
                        std::to_string(parts));
    }
}

// exp of a log-vector shifted by its maximum, then closed.
Composition close_logs(const Eigen::VectorXd& logs, double kappa) {
    const double shift = logs.maxCoeff();
    Eigen::VectorXd v = (logs.array() - shift).exp().matrix();
    return closure(v, kappa);
}

} // namespace

Composition::Composition(Eigen::VectorXd parts, double kappa) : parts_(std::move(parts)), kappa_(kappa) {
    require_kappa(kappa_);
    if (parts_.size() < 2) {
        throw Error(ErrorKind::DimensionMismatch, "a composition needs at least two parts");
    }
    require_positive_parts(parts_);
    const double sum = parts_.sum();
    if (std::abs(sum - kappa_) > kClosureTolerance * kappa_) {
        throw Error(ErrorKind::InvalidArgument,
                    "parts sum to " + std::to_string(sum) + ", expected " + std::to_string(kappa_));
    }
    parts_ *= kappa_ / sum;
}

Composition Composition::uniform(std::size_t parts, double kappa) {
    return Composition(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(parts),
                                                 kappa / static_cast<double>(parts)),
                       kappa);
}

bool operator==(const Composition& a, const Composition& b) {
    if (a.size() != b.size()) return false;
    if (std::abs(a.kappa() - b.kappa()) > kClosureTolerance * std::max(a.kappa(), b.kappa())) {
        return false;
    }
    return ait_distance(a, b) < kEqualityTolerance;
}

ContrastBasis::ContrastBasis(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() < 2 || matrix_.cols() != matrix_.rows() - 1) {
        throw Error(ErrorKind::DimensionMismatch, "contrast basis must be D x (D-1)");
    }
    const Eigen::RowVectorXd col_sums = matrix_.colwise().sum();
    if (col_sums.cwiseAbs().maxCoeff() > 1e-12) {
        throw Error(ErrorKind::InvalidArgument, "contrast basis columns must sum to zero");
    }
    const Eigen::MatrixXd gram = matrix_.transpose() * matrix_;
    const auto d = matrix_.cols();
    if ((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
        throw Error(ErrorKind::InvalidArgument, "contrast basis columns must be orthonormal");
    }
}

SelectionMatrix::SelectionMatrix(std::vector<std::size_t> rows, std::size_t parts)
    : rows_(std::move(rows)), parts_(parts) {
    if (rows_.size() < 2 || rows_.size() > parts_) {
        throw Error(ErrorKind::InvalidSelection,
                    "selection of " + std::to_string(rows_.size()) + " parts out of " +
                        std::to_string(parts_));
    }
    std::vector<std::size_t> sorted = rows_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorKind::InvalidSelection, "selected parts must be distinct");
    }
    if (sorted.back() >= parts_) {
        throw Error(ErrorKind::InvalidSelection, "selected part index out of range");
    }
}

Eigen::MatrixXd SelectionMatrix::matrix() const {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_.size()),
                                              static_cast<Eigen::Index>(parts_));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(rows_[r])) = 1.0;
    }
    return s;
}

PermutationMap::PermutationMap(std::vector<std::size_t> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (std::size_t target : image_) {
        if (target >= image_.size() || seen[target]) {
            throw Error(ErrorKind::InvalidSelection, "not a permutation");
        }
        seen[target] = true;
    }
}

PermutationMap PermutationMap::identity(std::size_t parts) {
    std::vector<std::size_t> image(parts);
    std::iota(image.begin(), image.end(), std::size_t{0});
    return PermutationMap(std::move(image));
}

PermutationMap PermutationMap::inverse() const {
    std::vector<std::size_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
    return PermutationMap(std::move(inv));
}

Eigen::MatrixXd PermutationMap::matrix() const {
    const auto n = static_cast<Eigen::Index>(image_.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) p(i, static_cast<Eigen::Index>(image_[i])) = 1.0;
    return p;
}

Composition closure(std::span<const double> values, double kappa) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    std::copy(values.begin(), values.end(), v.data());
    return closure(v, kappa);
}

Composition closure(const Eigen::VectorXd& values, double kappa) {
    require_kappa(kappa);
    require_positive_parts(values);
    const double sum = values.sum();
    if (!std::isfinite(sum)) {
        throw Error(ErrorKind::NonPositivePart, "parts overflow on closure");
    }
    return Composition(values * (kappa / sum), kappa);
}

Composition perturb(const Composition& x, const Composition& y) {
    require_same_space(x, y);
    return close_logs(x.log_parts() + y.log_parts(), x.kappa());
}

Composition power(double a, const Composition& x) {
    if (!std::isfinite(a)) {
        throw Error(ErrorKind::InvalidArgument, "powering scalar must be finite");
    }
    return close_logs(a * x.log_parts(), x.kappa());
}

Composition perturb_difference(const Composition& x, const Composition& y) {
    require_same_space(x, y);
    return close_logs(x.log_parts() - y.log_parts(), x.kappa());
}

double ait_inner(const Composition& x, const Composition& y) {
    require_same_space(x, y);
    return clr(x).dot(clr(y));
}

double ait_norm(const Composition& x) { return clr(x).norm(); }

double ait_distance(const Composition& x, const Composition& y) {
    require_same_space(x, y);
    return (clr(x) - clr(y)).norm();
}

Eigen::VectorXd clr(const Composition& x) {
    Eigen::VectorXd logs = x.log_parts();
    return (logs.array() - logs.mean()).matrix();
}

Composition clr_inv(const Eigen::VectorXd& z, double kappa) {
    if (z.size() < 2) throw Error(ErrorKind::DimensionMismatch, "clr vector needs D >= 2");
    return close_logs(z, kappa);
}

Eigen::VectorXd alr(const Composition& x) {
    const Eigen::VectorXd logs = x.log_parts();
    const auto d = logs.size();
    return (logs.head(d - 1).array() - logs[d - 1]).matrix();
}

Composition alr_inv(const Eigen::VectorXd& y, double kappa) {
    Eigen::VectorXd logs(y.size() + 1);
    logs << y, 0.0;
    return close_logs(logs, kappa);
}

ContrastBasis default_basis(std::size_t parts) {
    if (parts < 2) throw Error(ErrorKind::DimensionMismatch, "default basis needs D >= 2");
    const auto d = static_cast<Eigen::Index>(parts);
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d, d - 1);
    for (Eigen::Index col = 0; col < d - 1; ++col) {
        const double i = static_cast<double>(col + 1);
        const double scale = 1.0 / std::sqrt(i * (i + 1.0));
        u.col(col).head(col + 1).setConstant(scale);
        u(col + 1, col) = -i * scale;
    }
    return ContrastBasis(std::move(u));
}

Eigen::VectorXd ilr(const Composition& x, const ContrastBasis& basis) {
    require_basis(basis, x.size());
    return basis.matrix().transpose() * clr(x);
}

Composition ilr_inv(const Eigen::VectorXd& y, const ContrastBasis& basis, double kappa) {
    if (static_cast<std::size_t>(y.size()) != basis.dimension()) {
        throw Error(ErrorKind::DimensionMismatch, "coordinate vector does not match basis");
    }
    return close_logs(basis.matrix() * y, kappa);
}

Eigen::MatrixXd alr_to_clr_matrix(std::size_t parts) {
    const auto d = static_cast<Eigen::Index>(parts);
    Eigen::MatrixXd centering = Eigen::MatrixXd::Identity(d, d);
    centering.array() -= 1.0 / static_cast<double>(d);
    return centering.leftCols(d - 1);
}

Eigen::MatrixXd clr_to_alr_matrix(std::size_t parts) {
    const auto d = static_cast<Eigen::Index>(parts);
    Eigen::MatrixXd f(d - 1, d);
    f << Eigen::MatrixXd::Identity(d - 1, d - 1), Eigen::VectorXd::Constant(d - 1, -1.0);
    return f;
}

Eigen::MatrixXd basis_change(const ContrastBasis& from, const ContrastBasis& to) {
    if (from.parts() != to.parts()) {
        throw Error(ErrorKind::DimensionMismatch, "bases describe different simplices");
    }
    return to.matrix().transpose() * from.matrix();
}

Eigen::MatrixXd permutation_coordinate_map(const PermutationMap& p, const ContrastBasis& basis) {
    require_basis(basis, p.parts());
    return basis.matrix().transpose() * p.matrix() * basis.matrix();
}

Eigen::MatrixXd subcomposition_coordinate_map(const SelectionMatrix& s,
                                              const ContrastBasis& basis,
                                              const ContrastBasis& sub_basis) {
    require_basis(basis, s.parts());
    require_basis(sub_basis, s.selected());
    return sub_basis.matrix().transpose() * s.matrix() * basis.matrix();
}

Composition subcomposition(const Composition& x, const SelectionMatrix& s) {
    if (s.parts() != x.size()) {
        throw Error(ErrorKind::InvalidSelection, "selection built for a different number of parts");
    }
    Eigen::VectorXd picked(static_cast<Eigen::Index>(s.selected()));
    for (std::size_t r = 0; r < s.selected(); ++r) {
        picked[static_cast<Eigen::Index>(r)] = x[s.rows()[r]];
    }
    return closure(picked, x.kappa());
}

Composition permute(const Composition& x, const PermutationMap& p) {
    if (p.parts() != x.size()) {
        throw Error(ErrorKind::DimensionMismatch, "permutation built for a different number of parts");
    }
    Eigen::VectorXd out(x.parts().size());
    for (std::size_t i = 0; i < p.parts(); ++i) {
        out[static_cast<Eigen::Index>(i)] = x[p.image()[i]];
    }
    return Composition(std::move(out), x.kappa());
}

Composition center_of(std::span<const Composition> data) {
    if (data.empty()) throw Error(ErrorKind::EmptyData, "center of an empty data set");
    Eigen::VectorXd mean_logs = Eigen::VectorXd::Zero(data.front().parts().size());
    for (const auto& x : data) {
        require_same_space(data.front(), x);
        mean_logs += x.log_parts();
    }
    mean_logs /= static_cast<double>(data.size());
    return close_logs(mean_logs, data.front().kappa());
}

double sd_measure_ratio(const Composition& x) {
    const double d = static_cast<double>(x.size());
    const double log_ratio = std::log(x.kappa()) - 0.5 * std::log(d) - x.log_parts().sum();
    return std::exp(log_ratio);
}

} // namespace coda

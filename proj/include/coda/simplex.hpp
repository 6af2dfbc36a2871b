#ifndef CODA_SIMPLEX_HPP
#define CODA_SIMPLEX_HPP

/**
 * @file simplex.hpp
 * @brief Aitchison geometry of the D-part simplex.
 *
 * Compositions form a (D−1)-dimensional Euclidean space under perturbation,
 * powering and the Aitchison inner product. A `ContrastBasis` fixes an
 * orthonormal basis; `ilr` returns coordinates with respect to it and is an
 * isometry onto R^(D−1).
 *
 * Part indices are zero-based throughout the C++ interface.
 */

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace coda {

/**
 * D strictly positive parts summing to the closure constant kappa.
 *
 * Construction re-normalizes sums within 1e-12 relative of kappa and rejects
 * anything further away; use `closure()` to close an arbitrary positive vector.
 * Equality means Aitchison distance below 1e-10 with matching D and kappa.
 */
class Composition {
public:
    explicit Composition(Eigen::VectorXd parts, double kappa = 1.0);

    static Composition uniform(std::size_t parts, double kappa = 1.0);

    const Eigen::VectorXd& parts() const noexcept { return parts_; }
    double operator[](std::size_t i) const { return parts_[static_cast<Eigen::Index>(i)]; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(parts_.size()); }
    double kappa() const noexcept { return kappa_; }

    /// Component-wise natural logarithm of the parts.
    Eigen::VectorXd log_parts() const { return parts_.array().log().matrix(); }

    friend bool operator==(const Composition& a, const Composition& b);

private:
    Eigen::VectorXd parts_;
    double kappa_;
};

/// D×(D−1) matrix whose columns are the clr images of an orthonormal basis of S^D.
class ContrastBasis {
public:
    /// Validates zero column sums (1e-12) and orthonormality U'U = I (1e-10).
    explicit ContrastBasis(Eigen::MatrixXd matrix);

    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    std::size_t parts() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }

private:
    Eigen::MatrixXd matrix_;
};

/// Selection of C distinct parts out of D, 2 <= C < D (or C == D for the trivial selection).
class SelectionMatrix {
public:
    SelectionMatrix(std::vector<std::size_t> rows, std::size_t parts);

    const std::vector<std::size_t>& rows() const noexcept { return rows_; }
    std::size_t parts() const noexcept { return parts_; }
    std::size_t selected() const noexcept { return rows_.size(); }

    /// Dense C×D 0/1 matrix.
    Eigen::MatrixXd matrix() const;

private:
    std::vector<std::size_t> rows_;
    std::size_t parts_;
};

/// Reordering of parts: part i of the result is part `image[i]` of the input.
class PermutationMap {
public:
    explicit PermutationMap(std::vector<std::size_t> image);

    static PermutationMap identity(std::size_t parts);

    const std::vector<std::size_t>& image() const noexcept { return image_; }
    std::size_t parts() const noexcept { return image_.size(); }

    PermutationMap inverse() const;
    Eigen::MatrixXd matrix() const;

private:
    std::vector<std::size_t> image_;
};

// Vector-space operations

Composition closure(std::span<const double> values, double kappa = 1.0);
Composition closure(const Eigen::VectorXd& values, double kappa = 1.0);

/// Componentwise product followed by closure. Operands must share D and kappa.
Composition perturb(const Composition& x, const Composition& y);

/// Componentwise power followed by closure.
Composition power(double a, const Composition& x);

/// Perturbation by the inverse of y.
Composition perturb_difference(const Composition& x, const Composition& y);

double ait_inner(const Composition& x, const Composition& y);
double ait_norm(const Composition& x);
double ait_distance(const Composition& x, const Composition& y);

// Log-ratio transforms

Eigen::VectorXd clr(const Composition& x);
Composition clr_inv(const Eigen::VectorXd& z, double kappa = 1.0);

/// Log-ratios against the last part.
Eigen::VectorXd alr(const Composition& x);
Composition alr_inv(const Eigen::VectorXd& y, double kappa = 1.0);

/// Basis whose coordinates are y_i = ln(x_1⋯x_i / x_{i+1}^i) / sqrt(i(i+1)).
ContrastBasis default_basis(std::size_t parts);

Eigen::VectorXd ilr(const Composition& x, const ContrastBasis& basis);
Composition ilr_inv(const Eigen::VectorXd& y, const ContrastBasis& basis, double kappa = 1.0);

/// Matrix A with clr(x) = A·alr(x).
Eigen::MatrixXd alr_to_clr_matrix(std::size_t parts);
/// Matrix F with alr(x) = F·clr(x).
Eigen::MatrixXd clr_to_alr_matrix(std::size_t parts);

/// Coordinates in `to` of a vector whose coordinates in `from` are y: (U_to' U_from)·y.
Eigen::MatrixXd basis_change(const ContrastBasis& from, const ContrastBasis& to);

/// U' P U: action of a permutation on coordinates.
Eigen::MatrixXd permutation_coordinate_map(const PermutationMap& p, const ContrastBasis& basis);

/// U_sub' S U: maps D-part coordinates to coordinates of the closed subcomposition.
Eigen::MatrixXd subcomposition_coordinate_map(const SelectionMatrix& s,
                                              const ContrastBasis& basis,
                                              const ContrastBasis& sub_basis);

// Structural operations

Composition subcomposition(const Composition& x, const SelectionMatrix& s);
Composition permute(const Composition& x, const PermutationMap& p);

/// Closed componentwise geometric mean. Throws EmptyData / DimensionMismatch.
Composition center_of(std::span<const Composition> data);

/**
 * |dλ_a/dλ| at x: the Jacobian of the ilr map with respect to Lebesgue measure
 * on the first D−1 parts. For unit closure this is (sqrt(D)·x_1⋯x_D)^(-1); for
 * general kappa the parts are scaled by 1/kappa and the Jacobian picks up
 * kappa^-(D−1).
 */
double sd_measure_ratio(const Composition& x);

} // namespace coda

#endif

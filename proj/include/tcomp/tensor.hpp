#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace tcomp {

using Shape = std::vector<std::size_t>;
using MultiIndex = std::vector<std::size_t>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class FactorSet;

using Ranks = std::vector<std::size_t>;

std::size_t num_entries(std::span<const std::size_t> dims);

/// Dense k-th order tensor (k >= 2). Entries are stored in lexicographic
/// index order with the last index varying fastest.
class Tensor {
public:
    /// Throws std::invalid_argument on a length mismatch, a zero or missing
    /// dimension, k < 2, or a non-finite value.
    Tensor(Shape dims, std::vector<double> values);

    static Tensor zeros(Shape dims);
    /// The tensor e_omega: one at `omega`, zero elsewhere.
    static Tensor unit(Shape dims, std::span<const std::size_t> omega);

    const Shape& dims() const noexcept { return dims_; }
    std::size_t order() const noexcept { return dims_.size(); }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t dim(std::size_t mode) const { return dims_.at(mode); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    /// Storage offset of a multi-index; throws std::out_of_range.
    std::size_t offset(std::span<const std::size_t> index) const;
    /// Inverse of offset().
    MultiIndex index_of(std::size_t offset) const;

    double operator()(std::span<const std::size_t> index) const { return values_[offset(index)]; }
    double operator()(std::initializer_list<std::size_t> index) const;

    Tensor& operator*=(double c);
    friend Tensor operator*(double c, Tensor t) { return t *= c; }
    friend Tensor operator-(const Tensor& a, const Tensor& b);
    friend Tensor operator+(const Tensor& a, const Tensor& b);

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    struct Unchecked {};
    Tensor(Unchecked, Shape dims, std::vector<double> values);
    friend Tensor mode_multiply(const Tensor&, std::size_t, const Matrix&);
    friend Tensor dematricize(const Matrix&, std::size_t, const Shape&);

    Shape dims_;
    std::vector<double> values_;
};

Tensor make_tensor(Shape dims, std::vector<double> values);

/// (u_1 ⊗ ... ⊗ u_k)(i_1,...,i_k) = u_1(i_1)···u_k(i_k).
Tensor outer_product(std::span<const Vector> vectors);

double inner_product(const Tensor& a, const Tensor& b);

/// Vectorized l_p norm, p in [1, inf]; p = infinity gives the max-abs entry.
double lp_norm(const Tensor& a, double p);
double frobenius_norm(const Tensor& a);
double max_abs(const Tensor& a);

/// Mode-j flattening. Row index is i_j; the column index encodes the
/// remaining indices in ascending mode order, last one fastest. For k = 3,
/// j = 0 this is col = i_1 * d_2 + i_2.
Matrix matricize(const Tensor& a, std::size_t mode);
Tensor dematricize(const Matrix& m, std::size_t mode, const Shape& dims);

/// Marginal multiplication: (A x_j B)(.., i_j, ..) = sum_i' A(.., i', ..) B(i', i_j).
/// B must have dim(j) rows; mode j of the result has B.cols() entries.
/// OpenMP-parallel over output slices; results do not depend on the thread count.
Tensor mode_multiply(const Tensor& a, std::size_t mode, const Matrix& b);

/// A x_1 U_1 U_1^T x_2 ... x_k U_k U_k^T.
Tensor project_multilinear(const Tensor& a, const FactorSet& factors);

/// A x_1 U_1 ... x_k U_k, the r_1 x ... x r_k core.
Tensor contract_all(const Tensor& a, const FactorSet& factors);

} // namespace tcomp

#pragma once

#include "tcomp/tensor.hpp"

#include <cstddef>
#include <vector>

namespace tcomp {

/// A dim x r matrix with orthonormal columns, 1 <= r <= dim.
class Basis {
public:
    static constexpr double kOrthonormalTol = 1e-10;

    /// Throws std::invalid_argument unless columns^T columns == I to `tol`.
    explicit Basis(Matrix columns, double tol = kOrthonormalTol);

    /// First r columns of the dim x dim identity.
    static Basis canonical(std::size_t dim, std::size_t r);

    const Matrix& columns() const noexcept { return columns_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(columns_.rows()); }
    std::size_t rank() const noexcept { return static_cast<std::size_t>(columns_.cols()); }

    /// U U^T.
    Matrix projector() const { return columns_ * columns_.transpose(); }

private:
    Matrix columns_;
};

/// One orthonormal basis per tensor mode.
class FactorSet {
public:
    FactorSet() = default;
    explicit FactorSet(std::vector<Basis> factors) : factors_(std::move(factors)) {}

    std::size_t order() const noexcept { return factors_.size(); }
    const Basis& operator[](std::size_t mode) const { return factors_.at(mode); }
    Basis& operator[](std::size_t mode) { return factors_.at(mode); }

    std::vector<std::size_t> ranks() const;
    std::vector<std::size_t> dims() const;

    auto begin() const { return factors_.begin(); }
    auto end() const { return factors_.end(); }

private:
    std::vector<Basis> factors_;
};

} // namespace tcomp

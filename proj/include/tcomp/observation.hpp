#pragma once

#include "tcomp/rng.hpp"
#include "tcomp/tensor.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tcomp {

/// Observations {(omega_i, y_i)} of a tensor with known dimensions.
/// Indices are 0-based; repeated indices are allowed.
class Dataset {
public:
    explicit Dataset(Shape dims);

    /// Throws std::out_of_range for an index outside the dimensions and
    /// std::invalid_argument for a non-finite value.
    void add(std::span<const std::size_t> omega, double y);

    const Shape& dims() const noexcept { return dims_; }
    std::size_t order() const noexcept { return dims_.size(); }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const std::uint32_t> index(std::size_t i) const
    {
        return {coords_.data() + i * dims_.size(), dims_.size()};
    }
    double value(std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    /// Storage offset of observation i in a dense tensor of these dimensions.
    std::size_t offset(std::size_t i) const;

    void reserve(std::size_t n);

private:
    Shape dims_;
    std::vector<std::uint32_t> coords_; // n * k, row per observation
    std::vector<double> values_;
};

struct NoiseSpec {
    double sigma = 0.0;
};

/// n iid draws, omega uniform over all index tuples, y = T(omega) + N(0, sigma^2).
Dataset sample_dataset(const Tensor& t, std::size_t n, NoiseSpec noise, Rng& rng);

/// n distinct entries chosen uniformly without replacement, in storage
/// order, y = T(omega) + N(0, sigma^2). n = number of entries observes everything.
Dataset sample_distinct(const Tensor& t, std::size_t n, NoiseSpec noise, Rng& rng);

/// Every entry once, noiseless, in storage order.
Dataset full_dataset(const Tensor& t);

/// (d_1···d_k / n) sum_i y_i e_{omega_i}.
Tensor t_init(const Dataset& data);

/// U-statistic estimate of M_j(T) M_j(T)^T:
///   (prod d)^2 / (n (n-1)) sum_{i != i'} y_i y_i' M_j(e_{omega_i}) M_j(e_{omega_i'})^T.
/// Evaluated by grouping observations that share a mode-j flattening column,
/// so the cost is linear in n plus the squared group sizes. The result is
/// exactly symmetric and independent of the OpenMP thread count.
Matrix n_hat(const Dataset& data, std::size_t mode);

/// M_j(T) M_j(T)^T, exactly symmetric.
Matrix n_exact(const Tensor& t, std::size_t mode);

} // namespace tcomp

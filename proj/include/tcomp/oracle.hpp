#pragma once

// Brute-force reference implementations. They are slow on purpose and share
// no indexing or solver code with the production kernels they check.

#include "tcomp/observation.hpp"
#include "tcomp/tensor.hpp"

#include <vector>

namespace tcomp::oracle {

/// Exact average of t_init over all Π d single-observation noiseless datasets.
/// Throws std::length_error when Π d > 10^4.
Tensor expect_t_init_exhaustive(const Tensor& t);

/// Exact average of n_hat over all (Π d)^2 ordered noiseless two-observation
/// datasets. Throws std::length_error when Π d > 200.
Matrix expect_n_hat_exhaustive(const Tensor& t, std::size_t mode);

/// Literal double loop over i != i'. Throws std::length_error when n > 500.
Matrix n_hat_pairwise(const Dataset& data, std::size_t mode);

/// Direct sum over full multi-indices; serial reference for mode_multiply.
Tensor mode_multiply_naive(const Tensor& a, std::size_t mode, const Matrix& b);

/// Flattening by explicit index enumeration.
Matrix matricize_naive(const Tensor& a, std::size_t mode);

struct Svd {
    Matrix u;                    // rows x min(rows, cols)
    std::vector<double> sigma;   // descending
};

/// One-sided Jacobi SVD, run to full convergence.
Svd jacobi_svd(const Matrix& m);

} // namespace tcomp::oracle

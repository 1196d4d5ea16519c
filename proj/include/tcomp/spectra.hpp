#pragma once

#include "tcomp/basis.hpp"
#include "tcomp/tensor.hpp"

#include <optional>
#include <vector>

namespace tcomp {

/// Flips each column so that its largest-magnitude entry is positive
/// (earliest index wins a magnitude tie).
void normalize_signs(Matrix& columns);

/// Orthonormal basis of the top-r left singular subspace of m.
/// Throws std::invalid_argument unless 1 <= r <= min(rows, cols).
Basis top_left_singular_vectors(const Matrix& m, std::size_t r);

/// All singular values of m, descending.
Vector singular_values(const Matrix& m);

struct SymmetricEigen {
    Vector values;  // descending
    Matrix vectors; // column i pairs with values[i], sign-normalized
};

/// Eigendecomposition of (n + n^T) / 2.
SymmetricEigen symmetric_eigen(const Matrix& n);

/// Eigenvectors with eigenvalue strictly greater than tau, in descending
/// eigenvalue order; std::nullopt when none qualifies.
std::optional<Basis> eigvecs_above(const Matrix& n, double tau);

/// Spectral norm of U U^T - V V^T.
double subspace_distance(const Basis& u, const Basis& v);

struct ModeSpectrum {
    std::vector<double> sigma_min; // r_j-th singular value of M_j(A)
    std::vector<double> sigma_max; // largest singular value of M_j(A)
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double kappa = 0.0;
};

/// Extreme nonzero singular values of every flattening at the requested ranks.
/// Throws std::domain_error if some r_j-th singular value is numerically zero.
ModeSpectrum mode_spectrum(const Tensor& a, const Ranks& ranks);

/// Multilinear ranks: per mode, the number of singular values above rel_tol * sigma_max.
Ranks multilinear_ranks(const Tensor& a, double rel_tol = 1e-10);

} // namespace tcomp

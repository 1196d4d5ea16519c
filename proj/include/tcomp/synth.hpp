#pragma once

#include "tcomp/basis.hpp"
#include "tcomp/rng.hpp"
#include "tcomp/tensor.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace tcomp {

enum class ModelKind {
    Tucker,      // orthonormal factors, iid Gaussian core
    CpOrtho,     // sum_l scale * u_l ⊗ v_l ⊗ ..., orthonormal factor columns
    CpSymGauss,  // sum_l u_l ⊗ ... ⊗ u_l, u_l iid standard Gaussian
};

ModelKind parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);

struct ModelSpec {
    ModelKind kind = ModelKind::CpOrtho;
    Shape dims;
    Ranks ranks;                 // Tucker: per mode; CP kinds: a single r (or r repeated)
    std::optional<double> scale; // CpOrtho defaults to sqrt(d_1···d_k); others to 1
    std::uint64_t seed = 0;
};

struct SyntheticTensor {
    Tensor tensor;
    FactorSet truth; // exact mode subspaces
};

/// d x r orthonormal matrix: Q from the QR of a standard Gaussian matrix,
/// signs fixed so that R has a positive diagonal.
Basis random_orthonormal(std::size_t d, std::size_t r, Rng& rng);

SyntheticTensor generate(const ModelSpec& spec);
SyntheticTensor generate(const ModelSpec& spec, Rng& rng);

/// (d / r) max_i ||U_i.||^2.
double coherence(const Basis& u);

/// Coherence of a tensor: max over modes of the coherence of the thin-SVD
/// left factor of M_j(A), numerical rank cut at rel_tol * sigma_max.
double tensor_coherence(const Tensor& a, double rel_tol = 1e-10);

/// sqrt(d_1···d_k) ||A||_inf / ||A||_2. Throws std::domain_error for A = 0.
double spikiness(const Tensor& a);

/// ||t_hat - t_true||_2 / ||t_true||_2. Throws std::domain_error for a zero truth.
double relative_error(const Tensor& t_hat, const Tensor& t_true);

/// Per-mode subspace distance.
std::vector<double> subspace_error(const FactorSet& est, const FactorSet& truth);

} // namespace tcomp

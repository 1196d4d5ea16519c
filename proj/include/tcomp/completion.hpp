#pragma once

#include "tcomp/basis.hpp"
#include "tcomp/observation.hpp"
#include "tcomp/tensor.hpp"

#include <optional>
#include <vector>

namespace tcomp {

enum class InitMethod { Spectral, Hosvd };

struct CompletionConfig {
    Ranks ranks;
    /// Power-iteration sweeps. Zero returns the projection onto the
    /// initial factors. Unset means max(10, ceil(4 ln d_max)).
    std::optional<std::size_t> iter_max;
    /// Eigenvalue threshold is lambda^2. Unset means the data-driven default.
    std::optional<double> lambda;
    double stop_tol = 1e-8;
    InitMethod init = InitMethod::Spectral;
};

struct Estimate {
    Tensor t_hat;
    FactorSet factors;
    FactorSet init_factors;            // after padding to full rank
    std::vector<double> trace;         // max per-mode subspace change, one per sweep
    std::vector<double> objective;     // ||projection||, init first then one per sweep
    double lambda_used = 0.0;          // NaN for HOSVD init
    std::vector<std::size_t> init_ranks_selected;
    std::size_t sweeps = 0;
};

/// Threshold from the general risk bound:
///   gamma alpha^{3/2} s log^{k+2}(d_max) (kappa r^{(k-2)/2} sqrt(d_max D / n)
///                                         + D^{3/4} / sqrt(n) + r^{(k-2)/2} D / n)
/// with D = d_1···d_k and s = ||T||_inf v sigma. Natural log.
double default_lambda(double linf_or_sigma, double kappa, std::size_t r_max, const Shape& dims, std::size_t n,
                      double gamma = 1.0, double alpha = 1.0);

/// default_lambda with plug-ins: s = max(max|y|, 1.4826 MAD(y)), kappa = gamma = alpha = 1.
double auto_lambda(const Dataset& data, const Ranks& ranks);

std::size_t default_iter_max(const Shape& dims);

struct SpectralInit {
    FactorSet factors;                 // factor j has between 1 and r_j columns
    std::vector<std::size_t> selected; // columns kept per mode
};

/// Eigenvectors of n_hat(data, j) above lambda^2, clamped to [1, r_j] columns.
SpectralInit spectral_init(const Dataset& data, double lambda, const Ranks& ranks);

/// Factor j = top r_j left singular vectors of M_j(t0).
FactorSet hosvd_init(const Tensor& t0, const Ranks& ranks);

/// Extends `partial` to `rank` orthonormal columns, drawing first from `fill`
/// (projected off the current span), then from canonical basis vectors.
Basis pad_basis(const Basis& partial, const Basis& fill, std::size_t rank);

/// Pads every factor narrower than r_j with the mode-j HOSVD factor of t0.
/// Throws std::invalid_argument if a factor is wider than r_j.
FactorSet pad_factors(const Tensor& t0, const FactorSet& init, const Ranks& ranks);

struct PowerResult {
    FactorSet factors;
    Tensor t_hat;
    std::vector<double> trace;
    std::vector<double> objective;
    std::size_t sweeps = 0;
};

/// Higher-order orthogonal iteration. Sweep `it` updates modes in ascending
/// order; mode j uses the sweep-`it` factors for modes before j and the
/// previous factors for modes after j. Factors narrower than r_j are padded
/// from the HOSVD of t0 first. Stops early once the largest per-mode subspace
/// change drops below stop_tol. iter_max = 0 projects onto the (padded) init.
PowerResult power_iterations(const Tensor& t0, const FactorSet& init, const Ranks& ranks, std::size_t iter_max,
                             double stop_tol = 1e-8);

/// t_init -> spectral or HOSVD init -> power iterations.
Estimate complete(const Dataset& data, const CompletionConfig& config);

} // namespace tcomp

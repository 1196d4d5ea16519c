#include "tcomp/completion.hpp"

#include "tcomp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tcomp {

namespace {

void validate_ranks(const Shape& dims, const Ranks& ranks)
{
    if (ranks.size() != dims.size())
        throw std::invalid_argument("expected " + std::to_string(dims.size()) + " ranks, got "
                                    + std::to_string(ranks.size()));
    for (std::size_t j = 0; j < dims.size(); ++j)
        if (ranks[j] < 1 || ranks[j] > dims[j])
            throw std::invalid_argument("rank " + std::to_string(ranks[j]) + " for mode " + std::to_string(j)
                                        + " outside [1, " + std::to_string(dims[j]) + "]");
}

double median(std::vector<double> v)
{
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

} // namespace

double default_lambda(double linf_or_sigma, double kappa, std::size_t r_max, const Shape& dims, std::size_t n,
                      double gamma, double alpha)
{
    if (n == 0 || dims.empty() || r_max == 0)
        throw std::invalid_argument("default_lambda: n, dims and r_max must be positive");
    if (!(linf_or_sigma > 0.0) || !(kappa > 0.0) || !(gamma > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("default_lambda: scale, kappa, gamma and alpha must be positive");
    double total = 1.0;
    double d_max = 0.0;
    for (std::size_t d : dims) {
        if (d == 0)
            throw std::invalid_argument("default_lambda: dimensions must be positive");
        total *= static_cast<double>(d);
        d_max = std::max(d_max, static_cast<double>(d));
    }
    const double k = static_cast<double>(dims.size());
    const double nn = static_cast<double>(n);
    const double r_pow = std::pow(static_cast<double>(r_max), (k - 2.0) / 2.0);

    const double first = kappa * r_pow * std::sqrt(d_max * total / nn);
    const double second = std::pow(total, 0.75) / std::sqrt(nn);
    const double third = r_pow * total / nn;
    return gamma * std::pow(alpha, 1.5) * linf_or_sigma * std::pow(std::log(d_max), k + 2.0)
        * (first + second + third);
}

double auto_lambda(const Dataset& data, const Ranks& ranks)
{
    if (data.size() == 0)
        throw std::invalid_argument("auto_lambda: dataset is empty");
    std::vector<double> y(data.values().begin(), data.values().end());
    double linf = 0.0;
    for (double v : y)
        linf = std::max(linf, std::abs(v));
    const double center = median(y);
    for (double& v : y)
        v = std::abs(v - center);
    const double sigma = 1.4826 * median(std::move(y));
    double scale = std::max(linf, sigma);
    if (!(scale > 0.0))
        scale = std::numeric_limits<double>::min();
    const std::size_t r_max = *std::max_element(ranks.begin(), ranks.end());
    return default_lambda(scale, 1.0, r_max, data.dims(), data.size());
}

std::size_t default_iter_max(const Shape& dims)
{
    const std::size_t d_max = *std::max_element(dims.begin(), dims.end());
    const auto by_log = static_cast<std::size_t>(std::ceil(4.0 * std::log(static_cast<double>(d_max))));
    return std::max<std::size_t>(10, by_log);
}

SpectralInit spectral_init(const Dataset& data, double lambda, const Ranks& ranks)
{
    if (data.size() < 2)
        throw std::invalid_argument("spectral_init needs at least two observations");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("spectral_init: lambda must be nonnegative");
    validate_ranks(data.dims(), ranks);

    SpectralInit out;
    std::vector<Basis> factors;
    for (std::size_t j = 0; j < data.order(); ++j) {
        const Matrix n = n_hat(data, j);
        std::optional<Basis> above = eigvecs_above(n, lambda * lambda);
        Matrix cols;
        if (!above) {
            cols = symmetric_eigen(n).vectors.leftCols(1);
        } else if (above->rank() > ranks[j]) {
            cols = above->columns().leftCols(static_cast<Eigen::Index>(ranks[j]));
        } else {
            cols = above->columns();
        }
        out.selected.push_back(static_cast<std::size_t>(cols.cols()));
        factors.emplace_back(std::move(cols));
    }
    out.factors = FactorSet(std::move(factors));
    return out;
}

FactorSet hosvd_init(const Tensor& t0, const Ranks& ranks)
{
    validate_ranks(t0.dims(), ranks);
    std::vector<Basis> factors;
    for (std::size_t j = 0; j < t0.order(); ++j)
        factors.push_back(top_left_singular_vectors(matricize(t0, j), ranks[j]));
    return FactorSet(std::move(factors));
}

Basis pad_basis(const Basis& partial, const Basis& fill, std::size_t rank)
{
    if (partial.dim() != fill.dim())
        throw std::invalid_argument("pad_basis: ambient dimensions differ");
    if (rank > partial.dim())
        throw std::invalid_argument("pad_basis: rank exceeds dimension");
    if (partial.rank() >= rank)
        return partial;

    const auto dim = static_cast<Eigen::Index>(partial.dim());
    Matrix q(dim, static_cast<Eigen::Index>(rank));
    Eigen::Index have = static_cast<Eigen::Index>(partial.rank());
    q.leftCols(have) = partial.columns();

    const auto try_add = [&](Vector v) {
        // Two passes of classical Gram-Schmidt.
        for (int pass = 0; pass < 2; ++pass)
            v -= q.leftCols(have) * (q.leftCols(have).transpose() * v);
        const double norm = v.norm();
        if (norm > 1e-8) {
            Matrix col = v / norm;
            normalize_signs(col);
            q.col(have++) = col;
        }
    };
    for (Eigen::Index c = 0; c < fill.columns().cols() && have < q.cols(); ++c)
        try_add(fill.columns().col(c));
    for (Eigen::Index i = 0; i < dim && have < q.cols(); ++i)
        try_add(Vector::Unit(dim, i));
    return Basis(std::move(q));
}

FactorSet pad_factors(const Tensor& t0, const FactorSet& init, const Ranks& ranks)
{
    validate_ranks(t0.dims(), ranks);
    if (init.order() != t0.order())
        throw std::invalid_argument("init factor count does not match tensor order");
    std::vector<Basis> padded;
    for (std::size_t j = 0; j < t0.order(); ++j) {
        const Basis& f = init[j];
        if (f.dim() != t0.dim(j))
            throw std::invalid_argument("init factor " + std::to_string(j) + " has wrong ambient dimension");
        if (f.rank() > ranks[j])
            throw std::invalid_argument("init factor " + std::to_string(j) + " has more than r_j columns");
        if (f.rank() == ranks[j]) {
            padded.push_back(f);
        } else {
            const Basis hosvd = top_left_singular_vectors(matricize(t0, j), ranks[j]);
            padded.push_back(pad_basis(f, hosvd, ranks[j]));
        }
    }
    return FactorSet(std::move(padded));
}

PowerResult power_iterations(const Tensor& t0, const FactorSet& init, const Ranks& ranks, std::size_t iter_max,
                             double stop_tol)
{
    PowerResult out{pad_factors(t0, init, ranks), t0, {}, {}, 0};
    FactorSet& factors = out.factors;
    const std::size_t k = t0.order();

    out.objective.push_back(frobenius_norm(contract_all(t0, factors)));
    for (std::size_t it = 1; it <= iter_max; ++it) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            Tensor partial = t0;
            for (std::size_t other = 0; other < k; ++other)
                if (other != j)
                    partial = mode_multiply(partial, other, factors[other].columns());
            Basis next = top_left_singular_vectors(matricize(partial, j), ranks[j]);
            max_change = std::max(max_change, subspace_distance(factors[j], next));
            factors[j] = std::move(next);
            if (j + 1 == k)
                out.objective.push_back(frobenius_norm(mode_multiply(partial, j, factors[j].columns())));
        }
        out.trace.push_back(max_change);
        out.sweeps = it;
        if (max_change < stop_tol)
            break;
    }
    out.t_hat = project_multilinear(t0, factors);
    return out;
}

Estimate complete(const Dataset& data, const CompletionConfig& config)
{
    validate_ranks(data.dims(), config.ranks);
    const Tensor t0 = t_init(data);
    const std::size_t iter_max = config.iter_max.value_or(default_iter_max(data.dims()));

    FactorSet init;
    double lambda_used = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> selected;
    if (config.init == InitMethod::Spectral) {
        if (data.size() < 2)
            throw std::invalid_argument("spectral initialization needs at least two observations");
        lambda_used = config.lambda ? *config.lambda : auto_lambda(data, config.ranks);
        SpectralInit si = spectral_init(data, lambda_used, config.ranks);
        init = std::move(si.factors);
        selected = std::move(si.selected);
    } else {
        init = hosvd_init(t0, config.ranks);
        selected = config.ranks;
    }

    FactorSet padded = pad_factors(t0, init, config.ranks);
    PowerResult pr = power_iterations(t0, padded, config.ranks, iter_max, config.stop_tol);
    return Estimate{std::move(pr.t_hat), std::move(pr.factors), std::move(padded), std::move(pr.trace),
                    std::move(pr.objective), lambda_used, std::move(selected), pr.sweeps};
}

} // namespace tcomp

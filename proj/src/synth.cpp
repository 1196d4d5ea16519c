#include "tcomp/synth.hpp"

#include "tcomp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tcomp {

ModelKind parse_model_kind(std::string_view name)
{
    if (name == "tucker")
        return ModelKind::Tucker;
    if (name == "cp-ortho")
        return ModelKind::CpOrtho;
    if (name == "cp-sym-gauss")
        return ModelKind::CpSymGauss;
    throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

std::string_view to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::Tucker: return "tucker";
    case ModelKind::CpOrtho: return "cp-ortho";
    case ModelKind::CpSymGauss: return "cp-sym-gauss";
    }
    return "?";
}

Basis random_orthonormal(std::size_t d, std::size_t r, Rng& rng)
{
    if (r < 1 || r > d)
        throw std::invalid_argument("random_orthonormal: need 1 <= r <= d");
    const auto rows = static_cast<Eigen::Index>(d);
    const auto cols = static_cast<Eigen::Index>(r);
    Matrix g(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index i = 0; i < rows; ++i)
            g(i, c) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    const Matrix& rr = qr.matrixQR();
    for (Eigen::Index c = 0; c < cols; ++c)
        if (rr(c, c) < 0.0)
            q.col(c) *= -1.0;
    return Basis(std::move(q));
}

namespace {

std::size_t single_rank(const ModelSpec& spec)
{
    if (spec.ranks.empty())
        throw std::invalid_argument("model spec needs a rank");
    const std::size_t r = spec.ranks.front();
    if (!std::all_of(spec.ranks.begin(), spec.ranks.end(), [r](std::size_t x) { return x == r; }))
        throw std::invalid_argument("CP models take a single rank");
    return r;
}

SyntheticTensor make_tucker(const ModelSpec& spec, Rng& rng)
{
    if (spec.ranks.size() != spec.dims.size())
        throw std::invalid_argument("tucker model needs one rank per mode");
    std::vector<Basis> factors;
    for (std::size_t j = 0; j < spec.dims.size(); ++j)
        factors.push_back(random_orthonormal(spec.dims[j], spec.ranks[j], rng));
    Tensor t = Tensor::zeros(spec.ranks);
    for (double& v : t.values())
        v = rng.normal();
    for (std::size_t j = 0; j < spec.dims.size(); ++j)
        t = mode_multiply(t, j, factors[j].columns().transpose());
    t *= spec.scale.value_or(1.0);
    return {std::move(t), FactorSet(std::move(factors))};
}

SyntheticTensor make_cp_ortho(const ModelSpec& spec, Rng& rng)
{
    const std::size_t r = single_rank(spec);
    std::vector<Basis> factors;
    for (std::size_t d : spec.dims)
        factors.push_back(random_orthonormal(d, r, rng));
    const double scale = spec.scale.value_or(std::sqrt(static_cast<double>(num_entries(spec.dims))));

    // Superdiagonal core of value `scale`, expanded mode by mode.
    Tensor core = Tensor::zeros(Shape(spec.dims.size(), r));
    for (std::size_t l = 0; l < r; ++l)
        core.values()[core.offset(MultiIndex(spec.dims.size(), l))] = scale;
    for (std::size_t j = 0; j < spec.dims.size(); ++j)
        core = mode_multiply(core, j, factors[j].columns().transpose());
    return {std::move(core), FactorSet(std::move(factors))};
}

SyntheticTensor make_cp_sym_gauss(const ModelSpec& spec, Rng& rng)
{
    const std::size_t r = single_rank(spec);
    const std::size_t d = spec.dims.front();
    if (!std::all_of(spec.dims.begin(), spec.dims.end(), [d](std::size_t x) { return x == d; }))
        throw std::invalid_argument("symmetric model needs cubic dimensions");
    if (r > d)
        throw std::invalid_argument("symmetric model needs r <= d");
    const auto rows = static_cast<Eigen::Index>(d);
    Matrix u(rows, static_cast<Eigen::Index>(r));
    for (Eigen::Index c = 0; c < u.cols(); ++c)
        for (Eigen::Index i = 0; i < rows; ++i)
            u(i, c) = rng.normal();

    Tensor t = Tensor::zeros(spec.dims);
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        const std::vector<Vector> copies(spec.dims.size(), u.col(c));
        t = t + outer_product(copies);
    }
    t *= spec.scale.value_or(1.0);

    Eigen::HouseholderQR<Matrix> qr(u);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, u.cols());
    const Basis span(std::move(q));
    return {std::move(t), FactorSet(std::vector<Basis>(spec.dims.size(), span))};
}

} // namespace

SyntheticTensor generate(const ModelSpec& spec)
{
    Rng rng(spec.seed);
    return generate(spec, rng);
}

SyntheticTensor generate(const ModelSpec& spec, Rng& rng)
{
    if (spec.dims.size() < 2)
        throw std::invalid_argument("model needs at least two modes");
    if (spec.scale && !(*spec.scale > 0.0))
        throw std::invalid_argument("model scale must be positive");
    switch (spec.kind) {
    case ModelKind::Tucker: return make_tucker(spec, rng);
    case ModelKind::CpOrtho: return make_cp_ortho(spec, rng);
    case ModelKind::CpSymGauss: return make_cp_sym_gauss(spec, rng);
    }
    throw std::invalid_argument("unknown model kind");
}

double coherence(const Basis& u)
{
    const Matrix& c = u.columns();
    return static_cast<double>(u.dim()) / static_cast<double>(u.rank()) * c.rowwise().squaredNorm().maxCoeff();
}

double tensor_coherence(const Tensor& a, double rel_tol)
{
    double mu = 0.0;
    for (std::size_t j = 0; j < a.order(); ++j) {
        const Matrix m = matricize(a, j);
        Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
        const Vector& sv = svd.singularValues();
        Eigen::Index rank = 0;
        while (rank < sv.size() && sv[rank] > rel_tol * sv[0])
            ++rank;
        if (rank == 0)
            throw std::domain_error("coherence of a zero tensor is undefined");
        mu = std::max(mu, coherence(Basis(svd.matrixU().leftCols(rank), 1e-8)));
    }
    return mu;
}

double spikiness(const Tensor& a)
{
    const double l2 = frobenius_norm(a);
    if (!(l2 > 0.0))
        throw std::domain_error("spikiness of a zero tensor is undefined");
    return std::sqrt(static_cast<double>(a.size())) * max_abs(a) / l2;
}

double relative_error(const Tensor& t_hat, const Tensor& t_true)
{
    const double denom = frobenius_norm(t_true);
    if (!(denom > 0.0))
        throw std::domain_error("relative error against a zero tensor is undefined");
    return frobenius_norm(t_hat - t_true) / denom;
}

std::vector<double> subspace_error(const FactorSet& est, const FactorSet& truth)
{
    if (est.order() != truth.order())
        throw std::invalid_argument("subspace_error: factor counts differ");
    std::vector<double> out;
    for (std::size_t j = 0; j < est.order(); ++j)
        out.push_back(subspace_distance(est[j], truth[j]));
    return out;
}

} // namespace tcomp

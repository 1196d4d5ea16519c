#include "tcomp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tcomp::oracle {

namespace {

// Odometer increment over a full index space, last coordinate fastest.
bool next_index(MultiIndex& idx, const Shape& dims)
{
    for (std::size_t j = dims.size(); j-- > 0;) {
        if (++idx[j] < dims[j])
            return true;
        idx[j] = 0;
    }
    return false;
}

std::vector<MultiIndex> all_indices(const Shape& dims)
{
    std::vector<MultiIndex> out;
    MultiIndex idx(dims.size(), 0);
    do {
        out.push_back(idx);
    } while (next_index(idx, dims));
    return out;
}

} // namespace

Tensor expect_t_init_exhaustive(const Tensor& t)
{
    if (t.size() > 10000)
        throw std::length_error("expect_t_init_exhaustive: tensor larger than 10^4 entries");
    const auto indices = all_indices(t.dims());
    Tensor sum = Tensor::zeros(t.dims());
    for (const MultiIndex& omega : indices) {
        Dataset one(t.dims());
        one.add(omega, t(omega));
        sum = sum + t_init(one);
    }
    return (1.0 / static_cast<double>(indices.size())) * sum;
}

Matrix expect_n_hat_exhaustive(const Tensor& t, std::size_t mode)
{
    if (t.size() > 200)
        throw std::length_error("expect_n_hat_exhaustive: tensor larger than 200 entries");
    const auto indices = all_indices(t.dims());
    const auto d = static_cast<Eigen::Index>(t.dim(mode));
    Matrix sum = Matrix::Zero(d, d);
    for (const MultiIndex& first : indices) {
        for (const MultiIndex& second : indices) {
            Dataset pair(t.dims());
            pair.add(first, t(first));
            pair.add(second, t(second));
            sum += n_hat(pair, mode);
        }
    }
    return sum / static_cast<double>(indices.size() * indices.size());
}

Matrix n_hat_pairwise(const Dataset& data, std::size_t mode)
{
    const std::size_t n = data.size();
    if (n < 2)
        throw std::invalid_argument("n_hat_pairwise needs at least two observations");
    if (n > 500)
        throw std::length_error("n_hat_pairwise: more than 500 observations");
    const Shape& dims = data.dims();
    if (mode >= dims.size())
        throw std::invalid_argument("n_hat_pairwise: mode out of range");

    const auto d = static_cast<Eigen::Index>(dims[mode]);
    Matrix acc = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto wi = data.index(i);
        for (std::size_t ip = 0; ip < n; ++ip) {
            if (ip == i)
                continue;
            const auto wp = data.index(ip);
            // M_j(e_w) M_j(e_w')^T is e_a e_a'^T when all other coordinates agree.
            bool same_column = true;
            for (std::size_t j = 0; j < dims.size(); ++j)
                if (j != mode && wi[j] != wp[j])
                    same_column = false;
            if (same_column)
                acc(wi[mode], wp[mode]) += data.value(i) * data.value(ip);
        }
    }
    double total = 1.0;
    for (std::size_t x : dims)
        total *= static_cast<double>(x);
    return acc * (total * total / (static_cast<double>(n) * static_cast<double>(n - 1)));
}

Tensor mode_multiply_naive(const Tensor& a, std::size_t mode, const Matrix& b)
{
    if (mode >= a.order())
        throw std::invalid_argument("mode_multiply_naive: mode out of range");
    if (static_cast<std::size_t>(b.rows()) != a.dim(mode))
        throw std::invalid_argument("mode_multiply_naive: dimension mismatch");
    Shape out_dims = a.dims();
    out_dims[mode] = static_cast<std::size_t>(b.cols());
    Tensor out = Tensor::zeros(out_dims);
    for (const MultiIndex& idx : all_indices(out_dims)) {
        MultiIndex src = idx;
        double s = 0.0;
        for (std::size_t i = 0; i < a.dim(mode); ++i) {
            src[mode] = i;
            s += a(src) * b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(idx[mode]));
        }
        out.values()[out.offset(idx)] = s;
    }
    return out;
}

Matrix matricize_naive(const Tensor& a, std::size_t mode)
{
    if (mode >= a.order())
        throw std::invalid_argument("matricize_naive: mode out of range");
    std::size_t cols = 1;
    for (std::size_t j = 0; j < a.order(); ++j)
        if (j != mode)
            cols *= a.dim(j);
    Matrix m(static_cast<Eigen::Index>(a.dim(mode)), static_cast<Eigen::Index>(cols));
    for (const MultiIndex& idx : all_indices(a.dims())) {
        std::size_t col = 0;
        for (std::size_t j = 0; j < a.order(); ++j)
            if (j != mode)
                col = col * a.dim(j) + idx[j];
        m(static_cast<Eigen::Index>(idx[mode]), static_cast<Eigen::Index>(col)) = a(idx);
    }
    return m;
}

Svd jacobi_svd(const Matrix& m)
{
    // Orthogonalize the columns of W = M^T (or M if tall) by plane rotations;
    // V accumulates the rotations, so W = M^T V has orthogonal columns whose
    // norms are the singular values and V holds the left singular vectors of M.
    const bool fat = m.rows() <= m.cols();
    Matrix w = fat ? Matrix(m.transpose()) : m;
    const Eigen::Index n = w.cols();
    Matrix v = Matrix::Identity(n, n);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (Eigen::Index i = 0; i < w.rows(); ++i) {
                    alpha += w(i, p) * w(i, p);
                    beta += w(i, q) * w(i, q);
                    gamma += w(i, p) * w(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta))
                    continue;
                off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (Eigen::Index i = 0; i < w.rows(); ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (off <= 1e-15)
            break;
    }

    std::vector<double> norms(static_cast<std::size_t>(n));
    for (Eigen::Index c = 0; c < n; ++c)
        norms[static_cast<std::size_t>(c)] = w.col(c).norm();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return norms[static_cast<std::size_t>(a)] > norms[static_cast<std::size_t>(b)];
    });

    Svd out;
    out.u.resize(m.rows(), n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index src = order[static_cast<std::size_t>(c)];
        const double sigma = norms[static_cast<std::size_t>(src)];
        out.sigma.push_back(sigma);
        if (fat)
            out.u.col(c) = v.col(src);
        else
            out.u.col(c) = sigma > 0.0 ? Vector(w.col(src) / sigma) : Vector::Zero(m.rows());
    }
    return out;
}

} // namespace tcomp::oracle

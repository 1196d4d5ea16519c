#include "tcomp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tcomp {

Basis::Basis(Matrix columns, double tol) : columns_(std::move(columns))
{
    if (columns_.cols() < 1 || columns_.cols() > columns_.rows())
        throw std::invalid_argument("basis must have between 1 and dim columns");
    const Matrix gram = columns_.transpose() * columns_;
    const double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (!(err <= tol))
        throw std::invalid_argument("basis columns are not orthonormal (deviation " + std::to_string(err) + ")");
}

Basis Basis::canonical(std::size_t dim, std::size_t r)
{
    return Basis(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(r)));
}

std::vector<std::size_t> FactorSet::ranks() const
{
    std::vector<std::size_t> r;
    for (const Basis& b : factors_)
        r.push_back(b.rank());
    return r;
}

std::vector<std::size_t> FactorSet::dims() const
{
    std::vector<std::size_t> d;
    for (const Basis& b : factors_)
        d.push_back(b.dim());
    return d;
}

void normalize_signs(Matrix& columns)
{
    for (Eigen::Index c = 0; c < columns.cols(); ++c) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index i = 0; i < columns.rows(); ++i) {
            const double a = std::abs(columns(i, c));
            if (a > best_abs) {
                best_abs = a;
                best = i;
            }
        }
        if (columns(best, c) < 0.0)
            columns.col(c) *= -1.0;
    }
}

Basis top_left_singular_vectors(const Matrix& m, std::size_t r)
{
    const auto min_dim = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
    if (r < 1 || r > min_dim)
        throw std::invalid_argument("requested rank " + std::to_string(r) + " outside [1, "
                                    + std::to_string(min_dim) + "]");
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success)
        throw std::runtime_error("SVD failed to converge");
    Matrix u = svd.matrixU().leftCols(static_cast<Eigen::Index>(r));
    normalize_signs(u);
    return Basis(std::move(u));
}

Vector singular_values(const Matrix& m)
{
    Eigen::BDCSVD<Matrix> svd(m);
    if (svd.info() != Eigen::Success)
        throw std::runtime_error("SVD failed to converge");
    return svd.singularValues();
}

SymmetricEigen symmetric_eigen(const Matrix& n)
{
    if (n.rows() != n.cols())
        throw std::invalid_argument("symmetric_eigen: matrix is not square");
    const Matrix sym = 0.5 * (n + n.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("symmetric eigensolver failed to converge");
    // Eigen returns ascending order.
    SymmetricEigen out{es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
    normalize_signs(out.vectors);
    return out;
}

std::optional<Basis> eigvecs_above(const Matrix& n, double tau)
{
    SymmetricEigen es = symmetric_eigen(n);
    Eigen::Index count = 0;
    while (count < es.values.size() && es.values[count] > tau)
        ++count;
    if (count == 0)
        return std::nullopt;
    return Basis(es.vectors.leftCols(count));
}

double subspace_distance(const Basis& u, const Basis& v)
{
    if (u.dim() != v.dim())
        throw std::invalid_argument("subspace_distance: ambient dimensions differ");
    const Matrix diff = u.projector() - v.projector();
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("symmetric eigensolver failed to converge");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

ModeSpectrum mode_spectrum(const Tensor& a, const Ranks& ranks)
{
    if (ranks.size() != a.order())
        throw std::invalid_argument("mode_spectrum: rank count does not match tensor order");
    ModeSpectrum s;
    for (std::size_t j = 0; j < a.order(); ++j) {
        const Vector sv = singular_values(matricize(a, j));
        const std::size_t r = ranks[j];
        if (r < 1 || r > static_cast<std::size_t>(sv.size()))
            throw std::invalid_argument("mode_spectrum: rank " + std::to_string(r) + " out of range for mode "
                                        + std::to_string(j));
        const double smax = sv[0];
        const double smin = sv[static_cast<Eigen::Index>(r - 1)];
        if (!(smin > 1e-12 * smax))
            throw std::domain_error("mode " + std::to_string(j) + " is rank-deficient for requested rank "
                                    + std::to_string(r));
        s.sigma_min.push_back(smin);
        s.sigma_max.push_back(smax);
    }
    s.lambda_min = *std::min_element(s.sigma_min.begin(), s.sigma_min.end());
    s.lambda_max = *std::max_element(s.sigma_max.begin(), s.sigma_max.end());
    s.kappa = s.lambda_max / s.lambda_min;
    return s;
}

Ranks multilinear_ranks(const Tensor& a, double rel_tol)
{
    Ranks r;
    for (std::size_t j = 0; j < a.order(); ++j) {
        const Vector sv = singular_values(matricize(a, j));
        const double cut = rel_tol * sv[0];
        std::size_t count = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] > cut)
                ++count;
        r.push_back(count);
    }
    return r;
}

} // namespace tcomp

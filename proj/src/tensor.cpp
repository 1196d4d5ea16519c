#include "tcomp/tensor.hpp"

#include "tcomp/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tcomp {

namespace {

// Below this many multiply-adds a kernel runs serially.
constexpr std::size_t kParallelThreshold = 1u << 15;

struct ModeSplit {
    std::size_t left;   // product of dims before the mode
    std::size_t extent; // dim of the mode
    std::size_t right;  // product of dims after the mode
};

ModeSplit split_at(const Shape& dims, std::size_t mode)
{
    if (mode >= dims.size())
        throw std::invalid_argument("mode " + std::to_string(mode) + " out of range for order "
                                    + std::to_string(dims.size()));
    ModeSplit s{1, dims[mode], 1};
    for (std::size_t j = 0; j < mode; ++j)
        s.left *= dims[j];
    for (std::size_t j = mode + 1; j < dims.size(); ++j)
        s.right *= dims[j];
    return s;
}

void require_same_dims(const Tensor& a, const Tensor& b, const char* what)
{
    if (a.dims() != b.dims())
        throw std::invalid_argument(std::string(what) + ": tensor dimensions differ");
}

} // namespace

std::size_t num_entries(std::span<const std::size_t> dims)
{
    std::size_t n = 1;
    for (std::size_t d : dims) {
        if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d)
            throw std::overflow_error("tensor size overflows size_t");
        n *= d;
    }
    return n;
}

Tensor::Tensor(Unchecked, Shape dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values))
{
}

Tensor::Tensor(Shape dims, std::vector<double> values) : dims_(std::move(dims)), values_(std::move(values))
{
    if (dims_.size() < 2)
        throw std::invalid_argument("tensor order must be at least 2");
    if (std::find(dims_.begin(), dims_.end(), std::size_t{0}) != dims_.end())
        throw std::invalid_argument("tensor dimensions must be positive");
    if (values_.size() != num_entries(dims_))
        throw std::invalid_argument("tensor value count " + std::to_string(values_.size())
                                    + " does not match dimensions (" + std::to_string(num_entries(dims_))
                                    + ")");
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
        throw std::invalid_argument("tensor values must be finite");
}

Tensor Tensor::zeros(Shape dims)
{
    const std::size_t n = num_entries(dims);
    return Tensor(std::move(dims), std::vector<double>(n, 0.0));
}

Tensor Tensor::unit(Shape dims, std::span<const std::size_t> omega)
{
    Tensor t = zeros(std::move(dims));
    t.values_[t.offset(omega)] = 1.0;
    return t;
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const
{
    if (index.size() != dims_.size())
        throw std::out_of_range("multi-index has wrong length");
    std::size_t off = 0;
    for (std::size_t j = 0; j < dims_.size(); ++j) {
        if (index[j] >= dims_[j])
            throw std::out_of_range("multi-index coordinate " + std::to_string(j) + " out of range");
        off = off * dims_[j] + index[j];
    }
    return off;
}

MultiIndex Tensor::index_of(std::size_t off) const
{
    if (off >= values_.size())
        throw std::out_of_range("storage offset out of range");
    MultiIndex idx(dims_.size());
    for (std::size_t j = dims_.size(); j-- > 0;) {
        idx[j] = off % dims_[j];
        off /= dims_[j];
    }
    return idx;
}

double Tensor::operator()(std::initializer_list<std::size_t> index) const
{
    return values_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
}

Tensor& Tensor::operator*=(double c)
{
    for (double& v : values_)
        v *= c;
    return *this;
}

Tensor operator-(const Tensor& a, const Tensor& b)
{
    require_same_dims(a, b, "subtract");
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values_[i] -= b.values_[i];
    return out;
}

Tensor operator+(const Tensor& a, const Tensor& b)
{
    require_same_dims(a, b, "add");
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values_[i] += b.values_[i];
    return out;
}

Tensor make_tensor(Shape dims, std::vector<double> values)
{
    return Tensor(std::move(dims), std::move(values));
}

Tensor outer_product(std::span<const Vector> vectors)
{
    if (vectors.size() < 2)
        throw std::invalid_argument("outer_product needs at least two vectors");
    Shape dims;
    for (const Vector& v : vectors) {
        if (v.size() == 0)
            throw std::invalid_argument("outer_product: empty vector");
        dims.push_back(static_cast<std::size_t>(v.size()));
    }
    // Build up as a chain of Kronecker products, last mode fastest.
    std::vector<double> values{1.0};
    for (const Vector& v : vectors) {
        std::vector<double> next;
        next.reserve(values.size() * static_cast<std::size_t>(v.size()));
        for (double a : values)
            for (Eigen::Index i = 0; i < v.size(); ++i)
                next.push_back(a * v[i]);
        values = std::move(next);
    }
    return Tensor(std::move(dims), std::move(values));
}

double inner_product(const Tensor& a, const Tensor& b)
{
    require_same_dims(a, b, "inner_product");
    const auto av = a.values();
    const auto bv = b.values();
    double s = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i)
        s += av[i] * bv[i];
    return s;
}

double lp_norm(const Tensor& a, double p)
{
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm requires p >= 1");
    if (std::isinf(p))
        return max_abs(a);
    if (p == 2.0)
        return std::sqrt(inner_product(a, a));
    double s = 0.0;
    for (double v : a.values())
        s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

double frobenius_norm(const Tensor& a) { return lp_norm(a, 2.0); }

double max_abs(const Tensor& a)
{
    double m = 0.0;
    for (double v : a.values())
        m = std::max(m, std::abs(v));
    return m;
}

Matrix matricize(const Tensor& a, std::size_t mode)
{
    const ModeSplit s = split_at(a.dims(), mode);
    const auto v = a.values();
    Matrix m(s.extent, s.left * s.right);
    for (std::size_t l = 0; l < s.left; ++l)
        for (std::size_t i = 0; i < s.extent; ++i)
            for (std::size_t r = 0; r < s.right; ++r)
                m(i, l * s.right + r) = v[(l * s.extent + i) * s.right + r];
    return m;
}

Tensor dematricize(const Matrix& m, std::size_t mode, const Shape& dims)
{
    const ModeSplit s = split_at(dims, mode);
    if (static_cast<std::size_t>(m.rows()) != s.extent
        || static_cast<std::size_t>(m.cols()) != s.left * s.right)
        throw std::invalid_argument("dematricize: matrix shape does not match dimensions");
    Tensor t = Tensor::zeros(dims);
    for (std::size_t l = 0; l < s.left; ++l)
        for (std::size_t i = 0; i < s.extent; ++i)
            for (std::size_t r = 0; r < s.right; ++r)
                t.values_[(l * s.extent + i) * s.right + r] = m(i, l * s.right + r);
    return t;
}

Tensor mode_multiply(const Tensor& a, std::size_t mode, const Matrix& b)
{
    const ModeSplit s = split_at(a.dims(), mode);
    if (static_cast<std::size_t>(b.rows()) != s.extent)
        throw std::invalid_argument("mode_multiply: matrix has " + std::to_string(b.rows())
                                    + " rows, mode has dimension " + std::to_string(s.extent));
    if (b.cols() == 0)
        throw std::invalid_argument("mode_multiply: matrix has no columns");

    const std::size_t out_extent = static_cast<std::size_t>(b.cols());
    Shape out_dims = a.dims();
    out_dims[mode] = out_extent;
    std::vector<double> out(s.left * out_extent * s.right, 0.0);

    const double* src = a.values().data();
    double* dst = out.data();
    const auto left = static_cast<std::ptrdiff_t>(s.left);
    const auto cols = static_cast<std::ptrdiff_t>(out_extent);
    const bool parallel = s.left * out_extent * s.extent * s.right >= kParallelThreshold;

    // Each output fiber is owned by exactly one thread and summed in a fixed order.
#pragma omp parallel for collapse(2) schedule(static) if (parallel)
    for (std::ptrdiff_t l = 0; l < left; ++l) {
        for (std::ptrdiff_t c = 0; c < cols; ++c) {
            double* row = dst + (static_cast<std::size_t>(l) * out_extent + static_cast<std::size_t>(c)) * s.right;
            for (std::size_t i = 0; i < s.extent; ++i) {
                const double coeff = b(static_cast<Eigen::Index>(i), c);
                const double* in = src + (static_cast<std::size_t>(l) * s.extent + i) * s.right;
                for (std::size_t r = 0; r < s.right; ++r)
                    row[r] += coeff * in[r];
            }
        }
    }
    return Tensor(Tensor::Unchecked{}, std::move(out_dims), std::move(out));
}

Tensor contract_all(const Tensor& a, const FactorSet& factors)
{
    if (factors.order() != a.order())
        throw std::invalid_argument("factor count does not match tensor order");
    Tensor core = a;
    for (std::size_t j = 0; j < a.order(); ++j) {
        if (factors[j].dim() != a.dim(j))
            throw std::invalid_argument("factor " + std::to_string(j) + " has wrong ambient dimension");
        core = mode_multiply(core, j, factors[j].columns());
    }
    return core;
}

Tensor project_multilinear(const Tensor& a, const FactorSet& factors)
{
    Tensor t = contract_all(a, factors);
    for (std::size_t j = 0; j < a.order(); ++j)
        t = mode_multiply(t, j, factors[j].columns().transpose());
    return t;
}

} // namespace tcomp

#include "tcomp/observation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>

namespace tcomp {

Dataset::Dataset(Shape dims) : dims_(std::move(dims))
{
    if (dims_.size() < 2)
        throw std::invalid_argument("dataset order must be at least 2");
    for (std::size_t d : dims_)
        if (d == 0 || d > std::numeric_limits<std::uint32_t>::max())
            throw std::invalid_argument("dataset dimension out of range");
    num_entries(dims_); // overflow check
}

void Dataset::add(std::span<const std::size_t> omega, double y)
{
    if (omega.size() != dims_.size())
        throw std::invalid_argument("observation index has " + std::to_string(omega.size()) + " coordinates, expected "
                                + std::to_string(dims_.size()));
    for (std::size_t j = 0; j < dims_.size(); ++j)
        if (omega[j] >= dims_[j])
            throw std::out_of_range("observation coordinate " + std::to_string(j) + " = "
                                    + std::to_string(omega[j]) + " out of range [0, "
                                    + std::to_string(dims_[j]) + ")");
    if (!std::isfinite(y))
        throw std::invalid_argument("observation value must be finite");
    for (std::size_t c : omega)
        coords_.push_back(static_cast<std::uint32_t>(c));
    values_.push_back(y);
}

std::size_t Dataset::offset(std::size_t i) const
{
    const auto idx = index(i);
    std::size_t off = 0;
    for (std::size_t j = 0; j < dims_.size(); ++j)
        off = off * dims_[j] + idx[j];
    return off;
}

void Dataset::reserve(std::size_t n)
{
    coords_.reserve(n * dims_.size());
    values_.reserve(n);
}

Dataset sample_dataset(const Tensor& t, std::size_t n, NoiseSpec noise, Rng& rng)
{
    if (n == 0)
        throw std::invalid_argument("sample_dataset: n must be positive");
    if (!(noise.sigma >= 0.0))
        throw std::invalid_argument("sample_dataset: noise sigma must be nonnegative");
    Dataset data(t.dims());
    data.reserve(n);
    MultiIndex omega(t.order());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < t.order(); ++j)
            omega[j] = rng.uniform_index(t.dim(j));
        double y = t(omega);
        if (noise.sigma > 0.0)
            y += noise.sigma * rng.normal();
        data.add(omega, y);
    }
    return data;
}

Dataset sample_distinct(const Tensor& t, std::size_t n, NoiseSpec noise, Rng& rng)
{
    if (n == 0 || n > t.size())
        throw std::invalid_argument("sample_distinct: n must lie in [1, number of entries]");
    if (!(noise.sigma >= 0.0))
        throw std::invalid_argument("sample_distinct: noise sigma must be nonnegative");
    // Partial Fisher-Yates; the first n slots are a uniform n-subset.
    std::vector<std::size_t> offsets(t.size());
    std::iota(offsets.begin(), offsets.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i)
        std::swap(offsets[i], offsets[i + rng.uniform_index(t.size() - i)]);
    offsets.resize(n);
    std::sort(offsets.begin(), offsets.end());

    Dataset data(t.dims());
    data.reserve(n);
    const auto v = t.values();
    for (std::size_t off : offsets) {
        double y = v[off];
        if (noise.sigma > 0.0)
            y += noise.sigma * rng.normal();
        data.add(t.index_of(off), y);
    }
    return data;
}

Dataset full_dataset(const Tensor& t)
{
    Dataset data(t.dims());
    data.reserve(t.size());
    const auto v = t.values();
    for (std::size_t off = 0; off < t.size(); ++off)
        data.add(t.index_of(off), v[off]);
    return data;
}

Tensor t_init(const Dataset& data)
{
    if (data.size() == 0)
        throw std::invalid_argument("t_init: dataset is empty");
    Tensor out = Tensor::zeros(data.dims());
    auto v = out.values();
    const double scale = static_cast<double>(out.size()) / static_cast<double>(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        v[data.offset(i)] += scale * data.value(i);
    return out;
}

namespace {

// Upper bound on doubles held in per-chunk accumulators.
constexpr std::size_t kAccumulatorBudget = std::size_t{1} << 24;
constexpr std::size_t kMaxChunks = 64;

struct Entry {
    std::size_t column; // mode-j flattening column
    std::size_t row;    // mode-j coordinate
    std::size_t obs;    // observation number, keeps the sort total
};

} // namespace

Matrix n_hat(const Dataset& data, std::size_t mode)
{
    const std::size_t n = data.size();
    if (n < 2)
        throw std::invalid_argument("n_hat needs at least two observations");
    const Shape& dims = data.dims();
    if (mode >= dims.size())
        throw std::invalid_argument("n_hat: mode out of range");

    std::size_t right = 1;
    for (std::size_t j = mode + 1; j < dims.size(); ++j)
        right *= dims[j];
    const std::size_t extent = dims[mode];

    std::vector<Entry> entries(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t off = data.offset(i);
        const std::size_t l = off / (extent * right);
        entries[i] = {l * right + off % right, (off / right) % extent, i};
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.column, a.row, a.obs) < std::tie(b.column, b.row, b.obs);
    });

    // Group boundaries: runs sharing a column.
    std::vector<std::size_t> group_start;
    for (std::size_t i = 0; i < n; ++i)
        if (i == 0 || entries[i].column != entries[i - 1].column)
            group_start.push_back(i);
    group_start.push_back(n);
    const std::size_t groups = group_start.size() - 1;

    const std::size_t cells = extent * extent;
    const std::size_t chunks =
        std::max<std::size_t>(1, std::min({kMaxChunks, groups, kAccumulatorBudget / std::max<std::size_t>(cells, 1)}));
    std::vector<std::vector<double>> acc(chunks, std::vector<double>(cells, 0.0));

    // Chunks are fixed by the data alone, so the summation order never
    // depends on how many threads run them.
#pragma omp parallel for schedule(dynamic) if (n >= 4096)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        std::vector<double>& local = acc[static_cast<std::size_t>(c)];
        std::vector<std::size_t> rows;
        std::vector<double> sums;
        std::vector<double> squares;
        const std::size_t g_begin = static_cast<std::size_t>(c) * groups / chunks;
        const std::size_t g_end = (static_cast<std::size_t>(c) + 1) * groups / chunks;
        for (std::size_t g = g_begin; g < g_end; ++g) {
            rows.clear();
            sums.clear();
            squares.clear();
            for (std::size_t e = group_start[g]; e < group_start[g + 1]; ++e) {
                const double y = data.value(entries[e].obs);
                if (rows.empty() || rows.back() != entries[e].row) {
                    rows.push_back(entries[e].row);
                    sums.push_back(0.0);
                    squares.push_back(0.0);
                }
                sums.back() += y;
                squares.back() += y * y;
            }
            for (std::size_t p = 0; p < rows.size(); ++p) {
                local[rows[p] * extent + rows[p]] += sums[p] * sums[p] - squares[p];
                for (std::size_t q = p + 1; q < rows.size(); ++q) {
                    const double cross = sums[p] * sums[q];
                    local[rows[p] * extent + rows[q]] += cross;
                    local[rows[q] * extent + rows[p]] += cross;
                }
            }
        }
    }

    for (std::size_t c = 1; c < chunks; ++c)
        for (std::size_t x = 0; x < cells; ++x)
            acc[0][x] += acc[c][x];

    const double total = static_cast<double>(num_entries(dims));
    const double scale = (total / static_cast<double>(n)) * (total / static_cast<double>(n - 1));
    Matrix out(extent, extent);
    for (std::size_t a = 0; a < extent; ++a)
        for (std::size_t b = 0; b < extent; ++b)
            out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = scale * acc[0][a * extent + b];
    return out;
}

Matrix n_exact(const Tensor& t, std::size_t mode)
{
    const Matrix m = matricize(t, mode);
    Matrix gram = Matrix::Zero(m.rows(), m.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(m);
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return gram;
}

} // namespace tcomp

#include "tcomp/harness.hpp"

#include "tcomp/io.hpp"
#include "tcomp/observation.hpp"
#include "tcomp/rng.hpp"
#include "tcomp/spectra.hpp"
#include "tcomp/synth.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tcomp {

Method parse_method(std::string_view name)
{
    if (name == "hosvd")
        return Method::Hosvd;
    if (name == "spectral")
        return Method::Spectral;
    if (name == "spectral-power")
        return Method::SpectralPower;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::Hosvd: return "hosvd";
    case Method::Spectral: return "spectral";
    case Method::SpectralPower: return "spectral-power";
    }
    return "?";
}

namespace {

double parse_real(std::string_view s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("cannot parse number '" + std::string(s) + "'");
    return v;
}

} // namespace

std::vector<double> parse_grid(std::string_view spec)
{
    const std::size_t c1 = spec.find(':');
    if (c1 == std::string_view::npos)
        return {parse_real(spec)};
    const std::size_t c2 = spec.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
        throw std::invalid_argument("grid must be lo:hi:step");
    const double lo = parse_real(spec.substr(0, c1));
    const double hi = parse_real(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_real(spec.substr(c2 + 1));
    if (!(step > 0.0) || hi < lo)
        throw std::invalid_argument("grid needs step > 0 and hi >= lo");
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double v = lo + static_cast<double>(i) * step;
        if (v > hi + 1e-9 * step)
            break;
        grid.push_back(v);
    }
    return grid;
}

std::size_t sample_size(std::size_t d, std::size_t r, double alpha)
{
    const double n = std::round(static_cast<double>(r) * std::pow(static_cast<double>(d), alpha));
    if (!(n >= 2.0))
        throw std::invalid_argument("sample size round(r d^alpha) must be at least 2");
    return static_cast<std::size_t>(n);
}

namespace {

void validate(const SweepConfig& cfg)
{
    if (cfg.alpha_grid.empty())
        throw std::invalid_argument("sweep needs a nonempty alpha grid");
    if (cfg.reps < 1)
        throw std::invalid_argument("sweep needs reps >= 1");
    if (cfg.k < 2 || cfg.d < 1 || cfg.r < 1 || cfg.r > cfg.d)
        throw std::invalid_argument("sweep needs k >= 2 and 1 <= r <= d");
    if (!(cfg.sigma >= 0.0))
        throw std::invalid_argument("sweep sigma must be nonnegative");
    if (cfg.methods.empty())
        throw std::invalid_argument("sweep needs at least one method");
    if (cfg.jobs < 1)
        throw std::invalid_argument("sweep needs jobs >= 1");
    for (double a : cfg.alpha_grid)
        sample_size(cfg.d, cfg.r, a);
}

std::vector<ResultRow> run_replicate(const SweepConfig& cfg, std::size_t alpha_index, std::size_t rep)
{
    const double alpha = cfg.alpha_grid[alpha_index];
    const std::uint64_t seed = derive_seed(cfg.seed, {alpha_index, rep});
    Rng rng(seed);
    Rng model_rng = rng.split(0);
    Rng sample_rng = rng.split(1);

    ModelSpec spec;
    spec.kind = ModelKind::CpOrtho;
    spec.dims = Shape(cfg.k, cfg.d);
    spec.ranks = {cfg.r};
    const SyntheticTensor truth = generate(spec, model_rng);

    const std::size_t n = sample_size(cfg.d, cfg.r, alpha);
    const Dataset data = sample_dataset(truth.tensor, n, NoiseSpec{cfg.sigma}, sample_rng);

    std::vector<ResultRow> rows;
    for (Method m : cfg.methods) {
        CompletionConfig cc;
        cc.ranks = Ranks(cfg.k, cfg.r);
        cc.lambda = cfg.lambda;
        cc.init = m == Method::Hosvd ? InitMethod::Hosvd : InitMethod::Spectral;
        cc.iter_max = m == Method::SpectralPower ? cfg.iter_max : std::optional<std::size_t>(0);

        const auto start = std::chrono::steady_clock::now();
        const Estimate est = complete(data, cc);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

        double sub_max = 0.0;
        for (double e : subspace_error(est.factors, truth.truth))
            sub_max = std::max(sub_max, e);
        rows.push_back(ResultRow{m, cfg.d, cfg.r, alpha, n, cfg.sigma, seed,
                                 relative_error(est.t_hat, truth.tensor), sub_max, est.sweeps, est.lambda_used,
                                 cfg.record_time ? elapsed.count() : 0.0});
    }
    return rows;
}

} // namespace

std::vector<ResultRow> run_sweep(const SweepConfig& cfg)
{
    validate(cfg);
    const std::size_t reps = cfg.reps;
    const std::size_t tasks = cfg.alpha_grid.size() * reps;
    std::vector<std::vector<ResultRow>> slots(tasks);
    std::vector<std::exception_ptr> errors(tasks);

#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(cfg.jobs))
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(tasks); ++t) {
        const auto task = static_cast<std::size_t>(t);
        try {
            slots[task] = run_replicate(cfg, task / reps, task % reps);
        } catch (...) {
            errors[task] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<ResultRow> rows;
    for (auto& slot : slots)
        rows.insert(rows.end(), slot.begin(), slot.end());
    return rows;
}

void write_results(std::ostream& out, const std::vector<ResultRow>& rows)
{
    using io::format_double;
    out << kResultHeader << '\n';
    for (const ResultRow& r : rows) {
        std::string line;
        line += to_string(r.method);
        line += ',' + std::to_string(r.d);
        line += ',' + std::to_string(r.r);
        line += ',' + format_double(r.alpha);
        line += ',' + std::to_string(r.n);
        line += ',' + format_double(r.sigma);
        line += ',' + std::to_string(r.seed);
        line += ',' + format_double(r.rel_error);
        line += ',' + format_double(r.subspace_err_max);
        line += ',' + std::to_string(r.iters_run);
        line += ',' + format_double(r.lambda_used);
        line += ',' + format_double(r.wall_time_s);
        line += '\n';
        out << line;
    }
    if (!out)
        throw io::FormatError("failed writing results");
}

void write_results(const std::filesystem::path& path, const std::vector<ResultRow>& rows)
{
    std::ofstream f(path, std::ios::trunc);
    if (!f)
        throw io::FormatError("cannot open '" + path.string() + "' for writing");
    write_results(f, rows);
}

namespace {

bool has_multilinear_ranks_at_most(const Tensor& t, const Ranks& ranks)
{
    for (std::size_t j = 0; j < t.order(); ++j) {
        const Vector sv = singular_values(matricize(t, j));
        const auto r = static_cast<Eigen::Index>(ranks[j]);
        if (r < sv.size() && sv[r] > 1e-10 * sv[0])
            return false;
    }
    return true;
}

} // namespace

DenoiseReport denoise(const Tensor& input, const DenoiseOptions& opts)
{
    if (!(opts.sample_ratio > 0.0 && opts.sample_ratio <= 1.0))
        throw std::invalid_argument("sample ratio must lie in (0, 1]");
    if (!(opts.gamma >= 0.0))
        throw std::invalid_argument("noise level gamma must be nonnegative");
    if (opts.ranks.size() != input.order())
        throw std::invalid_argument("denoise: rank count does not match tensor order");

    DenoiseReport report{input, input};
    if (!has_multilinear_ranks_at_most(input, opts.ranks)) {
        const PowerResult pr = power_iterations(input, hosvd_init(input, opts.ranks), opts.ranks,
                                                default_iter_max(input.dims()));
        report.truth = pr.t_hat;
        report.projected = true;
    }
    const Tensor& truth = report.truth;
    const double total = static_cast<double>(truth.size());
    report.sigma = opts.gamma * frobenius_norm(truth) / std::sqrt(total);
    report.n = static_cast<std::size_t>(std::llround(opts.sample_ratio * total));
    if (report.n < 2)
        throw std::invalid_argument("denoise: sample ratio yields fewer than two observations");

    Rng rng(opts.seed);
    const Dataset data = sample_distinct(truth, report.n, NoiseSpec{report.sigma}, rng);

    CompletionConfig cc;
    cc.ranks = opts.ranks;
    cc.lambda = opts.lambda;
    cc.iter_max = opts.iter_max;
    cc.init = opts.init;
    Estimate est = complete(data, cc);
    report.lambda_used = est.lambda_used;
    report.rel_error = relative_error(est.t_hat, truth);
    report.estimate = std::move(est.t_hat);
    return report;
}

} // namespace tcomp

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "tcomp/completion.hpp"
#include "tcomp/harness.hpp"
#include "tcomp/observation.hpp"
#include "tcomp/oracle.hpp"
#include "tcomp/spectra.hpp"
#include "tcomp/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace tcomp;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit_s; // <= 0: none
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Tensor gaussian_tensor(const Shape& dims, Rng& rng)
{
    Tensor t = Tensor::zeros(dims);
    for (double& v : t.values())
        v = rng.normal();
    return t;
}

double max_abs_diff(const Tensor& a, const Tensor& b) { return max_abs(a - b); }

double rel_diff(const Matrix& got, const Matrix& want)
{
    const double scale = want.cwiseAbs().maxCoeff();
    const double diff = (got - want).cwiseAbs().maxCoeff();
    return scale == 0.0 ? diff : diff / scale;
}

Outcome c1_full_observation()
{
    Rng rng(1001);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Shape dims{1 + rng.uniform_index(8), 1 + rng.uniform_index(8), 1 + rng.uniform_index(8)};
        const Tensor t = gaussian_tensor(dims, rng);
        worst = std::max(worst, max_abs_diff(t_init(full_dataset(t)), t));
    }
    return {worst <= 1e-12, fmt("max |t_init - T| = %.3g", worst)};
}

Outcome c2_unbiasedness()
{
    Rng rng(1002);
    double worst_t = 0.0, worst_n = 0.0;
    for (const Shape& dims : {Shape{2, 2, 2}, Shape{2, 3, 2}}) {
        const Tensor t = gaussian_tensor(dims, rng);
        worst_t = std::max(worst_t, max_abs_diff(oracle::expect_t_init_exhaustive(t), t));
        for (std::size_t j = 0; j < dims.size(); ++j)
            worst_n = std::max(worst_n, rel_diff(oracle::expect_n_hat_exhaustive(t, j), n_exact(t, j)));
    }
    return {worst_t <= 1e-10 && worst_n <= 1e-10,
            fmt("E t_init err %.3g, E n_hat rel err %.3g", worst_t, worst_n)};
}

Outcome c3_u_statistic_equivalence()
{
    Rng rng(1003);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Shape dims{1 + rng.uniform_index(4), 1 + rng.uniform_index(4), 1 + rng.uniform_index(4)};
        const std::size_t n = 2 + rng.uniform_index(199);
        Dataset d(dims);
        MultiIndex omega(3);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < 3; ++j)
                omega[j] = rng.uniform_index(dims[j]);
            d.add(omega, rng.normal());
        }
        for (std::size_t j = 0; j < 3; ++j)
            worst = std::max(worst, rel_diff(n_hat(d, j), oracle::n_hat_pairwise(d, j)));
    }
    return {worst <= 1e-10, fmt("max relative difference %.3g", worst)};
}

Outcome c4_matricization()
{
    const Tensor a = make_tensor({2, 2, 2}, {1, 2, 3, 4, 5, 6, 7, 8});
    const Matrix m0 = matricize(a, 0);
    bool exact = true;
    for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t i2 = 0; i2 < 2; ++i2)
            for (std::size_t i3 = 0; i3 < 2; ++i3)
                exact = exact && m0(static_cast<Eigen::Index>(i1), static_cast<Eigen::Index>(i2 * 2 + i3))
                                     == a({i1, i2, i3});

    Rng rng(1004);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Tensor t = gaussian_tensor({2, 3, 4}, rng);
        for (std::size_t j = 0; j < 3; ++j) {
            worst = std::max(worst, max_abs_diff(dematricize(matricize(t, j), j, t.dims()), t));
            Matrix b(static_cast<Eigen::Index>(t.dim(j)), 3);
            for (Eigen::Index i = 0; i < b.size(); ++i)
                b.data()[i] = rng.normal();
            const Matrix lhs = matricize(mode_multiply(t, j, b), j);
            worst = std::max(worst, (lhs - b.transpose() * matricize(t, j)).cwiseAbs().maxCoeff());
            worst = std::max(worst, max_abs_diff(mode_multiply(t, j, b), oracle::mode_multiply_naive(t, j, b)));
        }
    }
    return {exact && worst <= 1e-12, std::string(exact ? "2x2x2 exact" : "2x2x2 MISMATCH") +
                                         fmt(", identity err %.3g", worst)};
}

Outcome c5_noiseless_recovery()
{
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ModelSpec spec;
        spec.kind = ModelKind::Tucker;
        spec.dims = {20, 20, 20};
        spec.ranks = {2, 2, 2};
        spec.seed = seed;
        const Tensor t = generate(spec).tensor;
        const Dataset data = full_dataset(t);
        for (InitMethod init : {InitMethod::Spectral, InitMethod::Hosvd}) {
            CompletionConfig cfg;
            cfg.ranks = spec.ranks;
            cfg.iter_max = 50;
            cfg.init = init;
            worst = std::max(worst, relative_error(complete(data, cfg).t_hat, t));
        }
    }
    return {worst <= 1e-8, fmt("max relative error %.3g (both inits, 10 seeds)", worst)};
}

Outcome c6_rate_scaling()
{
    const std::size_t d = 30, r = 2;
    const std::vector<double> ns{2e4, 4e4, 8e4, 16e4};
    std::vector<double> log_n, log_err;
    std::string detail = "mean l2 err:";
    for (std::size_t a = 0; a < ns.size(); ++a) {
        double sum = 0.0;
        for (std::uint64_t rep = 0; rep < 20; ++rep) {
            Rng rng(derive_seed(1006, {a, rep}));
            Rng mrng = rng.split(0), srng = rng.split(1);
            ModelSpec spec;
            spec.kind = ModelKind::CpOrtho;
            spec.dims = {d, d, d};
            spec.ranks = {r};
            const SyntheticTensor truth = generate(spec, mrng);
            // sigma = 0.2 * scale / sqrt(prod d) with the default scale sqrt(prod d).
            const Dataset data = sample_dataset(truth.tensor, static_cast<std::size_t>(ns[a]), NoiseSpec{0.2}, srng);
            CompletionConfig cfg;
            cfg.ranks = {r, r, r};
            cfg.lambda = 0.0;
            cfg.iter_max = 10;
            sum += frobenius_norm(complete(data, cfg).t_hat - truth.tensor);
        }
        log_n.push_back(std::log(ns[a]));
        log_err.push_back(std::log(sum / 20.0));
        detail += fmt(" %.4g", sum / 20.0);
    }
    const double mx = std::accumulate(log_n.begin(), log_n.end(), 0.0) / log_n.size();
    const double my = std::accumulate(log_err.begin(), log_err.end(), 0.0) / log_err.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        sxy += (log_n[i] - mx) * (log_err[i] - my);
        sxx += (log_n[i] - mx) * (log_n[i] - mx);
    }
    const double slope = sxy / sxx;
    return {std::abs(slope + 0.5) <= 0.15, detail + fmt("; slope %.4f", slope)};
}

Outcome c7_init_and_refinement()
{
    SweepConfig cfg;
    cfg.d = 50;
    cfg.r = 5;
    cfg.sigma = 0.2;
    cfg.alpha_grid = {2.2};
    cfg.reps = 10;
    cfg.iter_max = 10;
    cfg.lambda = 0.0;
    cfg.seed = 1007;
    double sub_spec = 0, sub_hosvd = 0, re_u = 0, re_power = 0;
    for (const ResultRow& row : run_sweep(cfg)) {
        if (row.method == Method::Hosvd)
            sub_hosvd += row.subspace_err_max / 10;
        else if (row.method == Method::Spectral) {
            sub_spec += row.subspace_err_max / 10;
            re_u += row.rel_error / 10;
        } else
            re_power += row.rel_error / 10;
    }
    return {sub_spec < sub_hosvd && re_power <= re_u,
            fmt("eps(U) spectral %.4f vs hosvd %.4f", sub_spec, sub_hosvd)
                + fmt("; eps(T) power %.4f vs U %.4f", re_power, re_u)};
}

Outcome c8_coherence_sandwich()
{
    Rng rng(1008);
    double slack = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
        ModelSpec spec;
        spec.kind = ModelKind::Tucker;
        spec.dims = {2 + rng.uniform_index(19), 2 + rng.uniform_index(19), 2 + rng.uniform_index(19)};
        for (std::size_t dj : spec.dims)
            spec.ranks.push_back(1 + rng.uniform_index(std::min<std::size_t>(4, dj)));
        spec.seed = rng();
        const Tensor t = generate(spec).tensor;
        const Ranks ranks = multilinear_ranks(t); // e.g. (3,1,1) collapses to (1,1,1)
        const double mu = tensor_coherence(t);
        const double beta = spikiness(t);
        const double kappa = mode_spectrum(t, ranks).kappa;
        double rprod = 1.0;
        for (std::size_t rj : ranks)
            rprod *= static_cast<double>(rj);
        slack = std::min(slack, std::sqrt(rprod) * std::pow(mu, 1.5) - beta);
        slack = std::min(slack, beta * beta * kappa * kappa - mu);
    }
    return {slack >= -1e-9, fmt("min slack %.4g", slack)};
}

Outcome c9_objective_monotone()
{
    Rng rng(1009);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        ModelSpec spec;
        spec.kind = ModelKind::Tucker;
        spec.dims = {10 + rng.uniform_index(11), 10 + rng.uniform_index(11), 10 + rng.uniform_index(11)};
        spec.ranks = {2 + rng.uniform_index(2), 2 + rng.uniform_index(2), 2 + rng.uniform_index(2)};
        spec.seed = rng();
        const Tensor t = generate(spec).tensor;
        const double rms = frobenius_norm(t) / std::sqrt(static_cast<double>(t.size()));
        Rng srng = rng.split(static_cast<std::uint64_t>(trial));
        const Dataset data = sample_dataset(t, t.size() / 2, NoiseSpec{0.5 * rms}, srng);
        CompletionConfig cfg;
        cfg.ranks = spec.ranks;
        cfg.iter_max = 20;
        cfg.stop_tol = 0.0;
        const Estimate est = complete(data, cfg);
        for (std::size_t i = 1; i < est.objective.size(); ++i)
            worst = std::max(worst, est.objective[i - 1] - est.objective[i]);
    }
    return {worst <= 1e-9, fmt("largest decrease %.3g", worst)};
}

Outcome c10_denoising()
{
    ModelSpec spec;
    spec.kind = ModelKind::Tucker;
    spec.dims = {64, 64, 64};
    spec.ranks = {5, 5, 5};
    spec.seed = 1010;
    const Tensor volume = generate(spec).tensor;
    auto mean_re = [&](double ratio, double gamma) {
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            DenoiseOptions opts;
            opts.ranks = spec.ranks;
            opts.sample_ratio = ratio;
            opts.gamma = gamma;
            opts.seed = seed;
            sum += denoise(volume, opts).rel_error;
        }
        return sum / 5.0;
    };
    std::vector<double> by_ratio, by_gamma;
    for (double ratio : {0.2, 0.5, 1.0})
        by_ratio.push_back(mean_re(ratio, 0.1));
    for (double gamma : {0.05, 0.5, 1.0})
        by_gamma.push_back(mean_re(0.5, gamma));
    const bool ratio_ok = by_ratio[1] <= by_ratio[0] && by_ratio[2] <= by_ratio[1];
    const bool gamma_ok = by_gamma[1] >= by_gamma[0] && by_gamma[2] >= by_gamma[1];
    std::ostringstream detail;
    detail << "RE by ratio 0.2/0.5/1.0: " << by_ratio[0] << ' ' << by_ratio[1] << ' ' << by_ratio[2]
           << "; by gamma 0.05/0.5/1.0: " << by_gamma[0] << ' ' << by_gamma[1] << ' ' << by_gamma[2];
    return {ratio_ok && gamma_ok, detail.str()};
}

Outcome c11_determinism()
{
    SweepConfig cfg;
    cfg.d = 20;
    cfg.r = 2;
    cfg.alpha_grid = {1.8, 2.0, 2.2};
    cfg.reps = 4;
    cfg.seed = 1011;
    cfg.record_time = false;
    auto csv = [&] {
        std::ostringstream out;
        write_results(out, run_sweep(cfg));
        return out.str();
    };
    const std::string first = csv();
    const std::string second = csv();
    cfg.jobs = 4;
    const std::string parallel = csv();
    return {first == second && first == parallel,
            std::string("run1==run2: ") + (first == second ? "yes" : "no") +
                ", jobs1==jobs4: " + (first == parallel ? "yes" : "no") + fmt(", %.0f bytes", double(first.size()))};
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "t_init exact under full observation", 1.0, c1_full_observation},
        {2, "exhaustive unbiasedness of t_init and n_hat", 5.0, c2_unbiasedness},
        {3, "grouped n_hat equals pairwise U-statistic", 0.0, c3_u_statistic_equivalence},
        {4, "matricization bit-exact and flattening identities", 0.0, c4_matricization},
        {5, "noiseless exact recovery d=20 rank (2,2,2)", 30.0, c5_noiseless_recovery},
        {6, "error rate slope -0.5 +- 0.15 in n", 600.0, c6_rate_scaling},
        {7, "spectral beats hosvd init; power <= projection", 600.0, c7_init_and_refinement},
        {8, "coherence/spikiness sandwich on 100 Tucker tensors", 0.0, c8_coherence_sandwich},
        {9, "power-iteration objective nondecreasing", 0.0, c9_objective_monotone},
        {10, "denoising error monotone in ratio and noise", 900.0, c10_denoising},
        {11, "byte-identical sweep CSV across runs and jobs", 0.0, c11_determinism},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
            out.pass = false;
            out.detail += fmt("; over time limit %.0f s", c.time_limit_s);
        }
        failures += out.pass ? 0 : 1;
        std::printf("criterion %2d: %s  %s  [%s] (%.2f s)\n", c.id, out.pass ? "PASS" : "FAIL", c.name,
                    out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

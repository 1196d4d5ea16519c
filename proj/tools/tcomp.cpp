// tcomp: low-rank tensor completion from sampled noisy entries.

#include "tcomp/completion.hpp"
#include "tcomp/harness.hpp"
#include "tcomp/io.hpp"
#include "tcomp/observation.hpp"
#include "tcomp/spectra.hpp"
#include "tcomp/synth.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace tcomp;

std::optional<double> parse_lambda(const std::string& s)
{
    if (s == "auto")
        return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !(v >= 0.0))
        throw std::invalid_argument("--lambda must be 'auto' or a nonnegative number");
    return v;
}

InitMethod parse_init(const std::string& s)
{
    if (s == "spectral")
        return InitMethod::Spectral;
    if (s == "hosvd")
        return InitMethod::Hosvd;
    throw std::invalid_argument("--init must be 'spectral' or 'hosvd'");
}

void print_kv(const std::string& key, double v) { std::cout << key << '=' << io::format_double(v) << '\n'; }

template <typename T>
void print_list(const std::string& key, const std::vector<T>& v)
{
    std::cout << key << '=';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if constexpr (std::is_floating_point_v<T>)
            std::cout << (i ? "," : "") << io::format_double(v[i]);
        else
            std::cout << (i ? "," : "") << v[i];
    }
    std::cout << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Low-rank tensor completion and benchmarking"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Emit a synthetic low-rank tensor (and optionally observations)");
    std::string gen_kind = "cp-ortho";
    Shape gen_dims;
    Ranks gen_ranks;
    std::optional<double> gen_scale;
    std::uint64_t gen_seed = 0;
    std::string gen_out, gen_obs;
    std::size_t gen_n = 0;
    double gen_sigma = 0.0;
    gen->add_option("--kind", gen_kind, "tucker | cp-ortho | cp-sym-gauss")->capture_default_str();
    gen->add_option("--dims", gen_dims, "d_1,...,d_k")->delimiter(',')->required();
    gen->add_option("--ranks", gen_ranks, "r_1,...,r_k (one value for CP kinds)")->delimiter(',')->required();
    gen->add_option("--scale", gen_scale, "Component scale (cp-ortho default sqrt(prod d))");
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--out", gen_out, "TNSR1 output path")->required();
    gen->add_option("--obs", gen_obs, "Also write sampled observations to this CSV");
    gen->add_option("--n", gen_n, "Number of observations for --obs");
    gen->add_option("--sigma", gen_sigma, "Observation noise level for --obs")->capture_default_str();

    // complete
    auto* comp = app.add_subcommand("complete", "Estimate a tensor from an observation CSV");
    std::string comp_obs, comp_out, comp_truth, comp_lambda = "auto", comp_init = "spectral";
    Shape comp_dims;
    Ranks comp_ranks;
    std::optional<std::size_t> comp_iters;
    comp->add_option("--obs", comp_obs, "Observation CSV")->required();
    comp->add_option("--dims", comp_dims, "d_1,...,d_k")->delimiter(',')->required();
    comp->add_option("--ranks", comp_ranks, "r_1,...,r_k")->delimiter(',')->required();
    comp->add_option("--lambda", comp_lambda, "auto | threshold value")->capture_default_str();
    comp->add_option("--iters", comp_iters, "Power-iteration sweeps");
    comp->add_option("--init", comp_init, "spectral | hosvd")->capture_default_str();
    comp->add_option("--out", comp_out, "TNSR1 output path")->required();
    comp->add_option("--truth", comp_truth, "TNSR1 ground truth; prints the relative error");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Sample-complexity sweep over n = r d^alpha");
    SweepConfig cfg;
    std::string sweep_grid, sweep_lambda = "auto", sweep_out;
    std::vector<std::string> sweep_methods{"hosvd", "spectral", "spectral-power"};
    std::size_t sweep_iters = 10;
    bool no_timing = false;
    sweep->add_option("--d", cfg.d, "Cubic dimension")->capture_default_str();
    sweep->add_option("--r", cfg.r, "CP rank")->capture_default_str();
    sweep->add_option("--k", cfg.k, "Tensor order")->capture_default_str();
    sweep->add_option("--alpha-grid", sweep_grid, "lo:hi:step")->required();
    sweep->add_option("--reps", cfg.reps)->capture_default_str();
    sweep->add_option("--sigma", cfg.sigma)->capture_default_str();
    sweep->add_option("--methods", sweep_methods, "hosvd,spectral,spectral-power")->delimiter(',');
    sweep->add_option("--iters", sweep_iters, "Power sweeps for spectral-power")->capture_default_str();
    sweep->add_option("--lambda", sweep_lambda, "auto | threshold value")->capture_default_str();
    sweep->add_option("--seed", cfg.seed)->capture_default_str();
    sweep->add_option("--jobs", cfg.jobs, "Concurrent replicates")->capture_default_str();
    sweep->add_flag("--no-timing", no_timing, "Write 0 for wall_time_s (byte-reproducible output)");
    sweep->add_option("--out", sweep_out, "Result CSV path")->required();

    // denoise
    auto* den = app.add_subcommand("denoise", "Subsample, add noise, and reconstruct a tensor file");
    std::string den_in, den_out, den_lambda = "auto", den_init = "spectral";
    DenoiseOptions dopts;
    std::optional<std::size_t> den_iters;
    den->add_option("--in", den_in, "TNSR1 input")->required();
    den->add_option("--ranks", dopts.ranks, "r_1,...,r_k")->delimiter(',')->required();
    den->add_option("--ratio", dopts.sample_ratio, "Sampled fraction of entries")->capture_default_str();
    den->add_option("--gamma", dopts.gamma, "Noise level relative to the rms entry")->capture_default_str();
    den->add_option("--seed", dopts.seed)->capture_default_str();
    den->add_option("--lambda", den_lambda, "auto | threshold value")->capture_default_str();
    den->add_option("--iters", den_iters, "Power-iteration sweeps");
    den->add_option("--init", den_init, "spectral | hosvd")->capture_default_str();
    den->add_option("--out", den_out, "TNSR1 output path")->required();

    // diag
    auto* diag = app.add_subcommand("diag", "Coherence, spikiness and mode spectrum of a tensor file");
    std::string diag_in;
    Ranks diag_ranks;
    diag->add_option("--in", diag_in, "TNSR1 input")->required();
    diag->add_option("--ranks", diag_ranks, "Ranks for the spectrum (default: numerical ranks)")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            ModelSpec spec{parse_model_kind(gen_kind), gen_dims, gen_ranks, gen_scale, gen_seed};
            Rng rng(gen_seed);
            Rng model_rng = rng.split(0);
            const SyntheticTensor s = generate(spec, model_rng);
            io::write_tensor(gen_out, s.tensor);
            if (!gen_obs.empty()) {
                if (gen_n < 1)
                    throw std::invalid_argument("--obs needs --n >= 1");
                Rng sample_rng = rng.split(1);
                io::write_dataset(gen_obs, sample_dataset(s.tensor, gen_n, NoiseSpec{gen_sigma}, sample_rng));
            }
        } else if (*comp) {
            const Dataset data = io::read_dataset(comp_obs, comp_dims);
            CompletionConfig cc;
            cc.ranks = comp_ranks;
            cc.lambda = parse_lambda(comp_lambda);
            cc.iter_max = comp_iters;
            cc.init = parse_init(comp_init);
            const Estimate est = complete(data, cc);
            io::write_tensor(comp_out, est.t_hat);
            print_kv("lambda_used", est.lambda_used);
            print_list("init_ranks_selected", est.init_ranks_selected);
            std::cout << "sweeps=" << est.sweeps << '\n';
            if (!comp_truth.empty())
                print_kv("rel_error", relative_error(est.t_hat, io::read_tensor(comp_truth)));
        } else if (*sweep) {
            cfg.alpha_grid = parse_grid(sweep_grid);
            cfg.methods.clear();
            for (const auto& m : sweep_methods)
                cfg.methods.push_back(parse_method(m));
            cfg.iter_max = sweep_iters;
            cfg.lambda = parse_lambda(sweep_lambda);
            cfg.record_time = !no_timing;
            write_results(sweep_out, run_sweep(cfg));
        } else if (*den) {
            dopts.lambda = parse_lambda(den_lambda);
            dopts.iter_max = den_iters;
            dopts.init = parse_init(den_init);
            const DenoiseReport rep = denoise(io::read_tensor(den_in), dopts);
            io::write_tensor(den_out, rep.estimate);
            std::cout << "projected=" << (rep.projected ? "true" : "false") << '\n';
            std::cout << "n=" << rep.n << '\n';
            print_kv("sigma", rep.sigma);
            print_kv("lambda_used", rep.lambda_used);
            print_kv("rel_error", rep.rel_error);
        } else if (*diag) {
            const Tensor t = io::read_tensor(diag_in);
            const Ranks ranks = diag_ranks.empty() ? multilinear_ranks(t) : diag_ranks;
            const ModeSpectrum ms = mode_spectrum(t, ranks);
            print_list("dims", t.dims());
            print_list("ranks", ranks);
            print_kv("coherence", tensor_coherence(t));
            print_kv("spikiness", spikiness(t));
            print_list("sigma_min", ms.sigma_min);
            print_list("sigma_max", ms.sigma_max);
            print_kv("lambda_min", ms.lambda_min);
            print_kv("lambda_max", ms.lambda_max);
            print_kv("kappa", ms.kappa);
        }
    } catch (const std::exception& e) {
        std::cerr << "tcomp: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#pragma once

#include "tcomp/completion.hpp"
#include "tcomp/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcomp {

/// Estimators compared in a sweep:
///   Hosvd          projection of t_init onto its HOSVD factors
///   Spectral       projection onto the U-statistic initialization
///   SpectralPower  the spectral initialization refined by power iterations
enum class Method { Hosvd, Spectral, SpectralPower };

Method parse_method(std::string_view name);
std::string_view to_string(Method m);

/// lo:hi:step, inclusive of hi up to rounding.
std::vector<double> parse_grid(std::string_view spec);

struct SweepConfig {
    std::size_t d = 50;
    std::size_t r = 5;
    std::size_t k = 3;
    std::vector<double> alpha_grid;
    std::size_t reps = 1;
    double sigma = 0.2;
    std::vector<Method> methods{Method::Hosvd, Method::Spectral, Method::SpectralPower};
    std::optional<std::size_t> iter_max = 10;
    std::optional<double> lambda;     // unset: data-driven default
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    bool record_time = true;          // false writes 0 to wall_time_s
};

struct ResultRow {
    Method method;
    std::size_t d = 0;
    std::size_t r = 0;
    double alpha = 0.0;
    std::size_t n = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    double rel_error = 0.0;
    double subspace_err_max = 0.0;
    std::size_t iters_run = 0;
    double lambda_used = 0.0;
    double wall_time_s = 0.0;
};

inline constexpr std::string_view kResultHeader =
    "method,d,r,alpha,n,sigma,seed,rel_error,subspace_err_max,iters_run,lambda_used,wall_time_s";

/// round(r d^alpha); throws std::invalid_argument below 2.
std::size_t sample_size(std::size_t d, std::size_t r, double alpha);

/// Rows ordered by (alpha, replicate, method). Replicates run on up to
/// cfg.jobs threads; each draws from its own stream derived from
/// (seed, alpha index, replicate), so output is independent of jobs.
std::vector<ResultRow> run_sweep(const SweepConfig& cfg);

void write_results(std::ostream& out, const std::vector<ResultRow>& rows);
void write_results(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

struct DenoiseOptions {
    Ranks ranks;
    double sample_ratio = 1.0;   // fraction of distinct entries observed, in (0, 1]
    double gamma = 0.1;          // noise level relative to the rms entry
    std::uint64_t seed = 0;
    std::optional<double> lambda;
    std::optional<std::size_t> iter_max;
    InitMethod init = InitMethod::Spectral;
};

struct DenoiseReport {
    Tensor truth;       // input, projected to the requested ranks if it was not already low rank
    Tensor estimate;
    bool projected = false;
    std::size_t n = 0;
    double sigma = 0.0;
    double lambda_used = 0.0;
    double rel_error = 0.0;
};

DenoiseReport denoise(const Tensor& input, const DenoiseOptions& opts);

} // namespace tcomp

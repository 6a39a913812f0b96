#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "miro/sampler.hpp"
#include "miro/selection.hpp"
#include "miro/simulate.hpp"

namespace miro {

inline constexpr const char* kVersion = "0.1.0";

struct DataOptions {
    std::string y_path;
    std::string x_path;  // empty when absent
    std::string w_path;
    bool event_dummies = false;
};

struct ChainOptions {
    int iterations = 10000;
    int burn_in = 5000;
    int thin = 1;
    std::uint64_t seed = 1;
    double sigma2_mu = 10.0;
    double sigma2_beta = 10.0;
    double sigma2_gamma = 10.0;
};

struct FitOptions {
    DataOptions data;
    ChainOptions chain;
    ModelFamily model = ModelFamily::miro;
    int num_clusters = 2;
    std::string output_dir;
};

struct SelectOptions {
    DataOptions data;
    ChainOptions chain;
    ModelFamily model = ModelFamily::miro;
    std::vector<int> cluster_counts{1, 2, 3};
    int threads = 1;
    std::string output_dir;
};

struct SimulateOptions {
    std::string preset;  // optional starting point; explicit fields below override it
    SimulationConfig config;
    std::string output_dir;
};

struct MetricsOptions {
    std::string truth_path;
    std::string estimate_path;
    std::vector<double> weights;  // random-allocation benchmark; empty = skip
    std::string output_dir;
};

// JSON forms used for manifests and --config files.
nlohmann::json to_json(const FitOptions& o);
nlohmann::json to_json(const SelectOptions& o);
nlohmann::json to_json(const SimulateOptions& o);
nlohmann::json to_json(const MetricsOptions& o);
// Overwrites fields present in `j`, leaving the rest untouched.
void merge_json(const nlohmann::json& j, FitOptions& o);
void merge_json(const nlohmann::json& j, SelectOptions& o);
void merge_json(const nlohmann::json& j, SimulateOptions& o);
void merge_json(const nlohmann::json& j, MetricsOptions& o);

// Reads a --config file; accepts a manifest written by a previous run.
nlohmann::json read_config_file(const std::filesystem::path& path);

// Output directory: explicit value, else $MIRO_OUTPUT_DIR, else "miro-output".
std::filesystem::path resolve_output_dir(const std::string& requested);

ChainConfig chain_config(const ChainOptions& options, ModelFamily family);

struct FitReport {
    ModelFamily model = ModelFamily::miro;
    int num_clusters = 0;
    long num_parameters = 0;
    double max_loglik = 0;
    double bic = 0;
    std::size_t pivot = 0;
    std::vector<int> allocation;         // heir index (probit families) or component (mixtbern)
    std::vector<std::string> bit_strings;  // configuration of each actor
    std::vector<double> loglik;
};

FitReport run_fit(const FitOptions& options);
SweepResult run_select(const SelectOptions& options);
SimulatedData run_simulate(const SimulateOptions& options);
nlohmann::json run_metrics(const MetricsOptions& options);

}  // namespace miro

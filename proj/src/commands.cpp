#include "miro/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "miro/bernoulli.hpp"
#include "miro/io.hpp"
#include "miro/postprocess.hpp"

namespace miro {

using nlohmann::json;

namespace {

// Round to the 12 significant digits used by every numeric output.
double num(double v) { return std::stod(format_number(v)); }

template <typename T>
void take(const json& j, const char* key, T& target) {
    if (j.contains(key) && !j.at(key).is_null()) target = j.at(key).get<T>();
}

json to_json(const DataOptions& o) {
    return {{"y", o.y_path}, {"x", o.x_path}, {"w", o.w_path}, {"event_dummies", o.event_dummies}};
}

json to_json(const ChainOptions& o) {
    return {{"iterations", o.iterations}, {"burn_in", o.burn_in}, {"thin", o.thin}, {"seed", o.seed},
            {"sigma2_mu", o.sigma2_mu},   {"sigma2_beta", o.sigma2_beta}, {"sigma2_gamma", o.sigma2_gamma}};
}

void merge_data(const json& j, DataOptions& o) {
    take(j, "y", o.y_path);
    take(j, "x", o.x_path);
    take(j, "w", o.w_path);
    take(j, "event_dummies", o.event_dummies);
}

void merge_chain(const json& j, ChainOptions& o) {
    take(j, "iterations", o.iterations);
    take(j, "burn_in", o.burn_in);
    take(j, "thin", o.thin);
    take(j, "seed", o.seed);
    take(j, "sigma2_mu", o.sigma2_mu);
    take(j, "sigma2_beta", o.sigma2_beta);
    take(j, "sigma2_gamma", o.sigma2_gamma);
}

std::string dgp_name(DataGeneratingProcess dgp) {
    return dgp == DataGeneratingProcess::miro_probit ? "miro_probit" : "mixture_logit";
}

DataGeneratingProcess parse_dgp(const std::string& s) {
    if (s == "miro_probit") return DataGeneratingProcess::miro_probit;
    if (s == "mixture_logit") return DataGeneratingProcess::mixture_logit;
    throw ConfigurationError("unknown data-generating process '" + s + "'");
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(num(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index cols_if_empty) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : cols_if_empty;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
}

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(num(v(k)));
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = j.at(k).get<double>();
    return v;
}

LoadedDataset load_for(const DataOptions& o) {
    if (o.y_path.empty()) throw ConfigurationError("an attendance file (--y) is required");
    auto opt = [](const std::string& p) -> std::optional<std::filesystem::path> {
        if (p.empty()) return std::nullopt;
        return std::filesystem::path(p);
    };
    LoadedDataset loaded = load_dataset(o.y_path, opt(o.x_path), opt(o.w_path));
    if (o.event_dummies) {
        loaded.data = with_event_dummies(std::move(loaded.data));
        loaded.event_categoricals.clear();
    }
    return loaded;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command, const json& config,
                    std::chrono::steady_clock::time_point started) {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json manifest = {{"command", command},
                     {"version", kVersion},
                     {"config", config},
                     {"wall_clock_seconds", num(seconds)}};
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

void write_json(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string singleton_bits(int component, int num_clusters) {
    std::string bits(static_cast<std::size_t>(num_clusters), '0');
    bits[static_cast<std::size_t>(component)] = '1';
    return bits;
}

std::string loglik_csv(const std::vector<int>& iterations, const std::vector<double>& loglik) {
    std::ostringstream out;
    out << "iteration,loglik\n";
    for (std::size_t t = 0; t < loglik.size(); ++t) out << iterations[t] << "," << format_number(loglik[t]) << "\n";
    return out.str();
}

std::string allocations_csv(const TwoModeDataset& data, const std::vector<std::string>& bits,
                            const std::vector<std::string>& columns, const Eigen::MatrixXd& probabilities) {
    std::ostringstream out;
    out << "actor,configuration";
    for (const auto& c : columns) out << ",p_" << c;
    out << "\n";
    for (int i = 0; i < data.n(); ++i) {
        out << csv_field(data.actor_names[static_cast<std::size_t>(i)]) << "," << bits[static_cast<std::size_t>(i)];
        for (Eigen::Index h = 0; h < probabilities.cols(); ++h) out << "," << format_number(probabilities(i, h));
        out << "\n";
    }
    return out.str();
}

// Y with a configuration column, rows grouped by allocation.
std::string clustered_csv(const TwoModeDataset& data, const std::vector<int>& allocation,
                          const std::vector<std::string>& bits) {
    std::vector<int> order(static_cast<std::size_t>(data.n()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return allocation[static_cast<std::size_t>(a)] < allocation[static_cast<std::size_t>(b)];
    });
    std::ostringstream out;
    out << "actor,configuration";
    for (const auto& e : data.event_names) out << "," << csv_field(e);
    out << "\n";
    for (int i : order) {
        out << csv_field(data.actor_names[static_cast<std::size_t>(i)]) << "," << bits[static_cast<std::size_t>(i)];
        for (int j = 0; j < data.d(); ++j) out << "," << data.y(i, j);
        out << "\n";
    }
    return out.str();
}

// One row per covariate level and cluster; reference levels carry a zero effect.
std::string coefficients_by_category_csv(const Eigen::MatrixXd& mean, const Eigen::MatrixXd& sd,
                                         const std::vector<std::string>& names,
                                         const std::vector<CategoricalColumn>& categoricals, const char* kind) {
    std::ostringstream out;
    std::map<std::string, std::size_t> column_of;
    for (std::size_t c = 0; c < names.size(); ++c) column_of[names[c]] = c;
    std::vector<bool> covered(names.size(), false);
    auto emit = [&](const std::string& covariate, const std::string& level, std::optional<std::size_t> column) {
        for (Eigen::Index k = 0; k < mean.rows(); ++k) {
            out << kind << "," << csv_field(covariate) << "," << csv_field(level) << "," << k + 1 << ",";
            if (column) {
                out << format_number(mean(k, static_cast<Eigen::Index>(*column))) << ","
                    << format_number(sd(k, static_cast<Eigen::Index>(*column)));
            } else {
                out << "0,0";
            }
            out << "\n";
        }
    };
    for (const auto& cat : categoricals) {
        for (std::size_t l = 0; l < cat.levels.size(); ++l) {
            if (l == 0) {
                emit(cat.name, cat.levels[l], std::nullopt);
                continue;
            }
            const auto it = column_of.find(cat.name + "=" + cat.levels[l]);
            if (it == column_of.end()) continue;
            covered[it->second] = true;
            emit(cat.name, cat.levels[l], it->second);
        }
    }
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (!covered[c]) emit(names[c], "", c);
    }
    return out.str();
}

}  // namespace

json to_json(const FitOptions& o) {
    return {{"data", to_json(o.data)},  {"chain", to_json(o.chain)}, {"model", to_string(o.model)},
            {"k", o.num_clusters},      {"out", o.output_dir}};
}

json to_json(const SelectOptions& o) {
    return {{"data", to_json(o.data)}, {"chain", to_json(o.chain)}, {"model", to_string(o.model)},
            {"k_list", o.cluster_counts}, {"threads", o.threads}, {"out", o.output_dir}};
}

json to_json(const SimulateOptions& o) {
    const SimulationConfig& c = o.config;
    json j = {{"preset", o.preset},
              {"n", c.n},
              {"d", c.d},
              {"k", c.num_clusters},
              {"actor_covariates", c.num_actor_covariates},
              {"event_levels", c.event_levels},
              {"dgp", dgp_name(c.dgp)},
              {"intercept_separation", c.intercept_separation},
              {"slope_separation", c.slope_separation},
              {"weights", vector_json(c.weights)},
              {"seed", c.seed},
              {"out", o.output_dir}};
    if (c.coefficients) {
        j["coefficients"] = {{"mu", vector_json(c.coefficients->mu)},
                             {"beta", matrix_json(c.coefficients->beta)},
                             {"gamma", matrix_json(c.coefficients->gamma)}};
    }
    return j;
}

json to_json(const MetricsOptions& o) {
    return {{"truth", o.truth_path}, {"estimate", o.estimate_path}, {"weights", o.weights}, {"out", o.output_dir}};
}

void merge_json(const json& j, FitOptions& o) {
    if (j.contains("data")) merge_data(j.at("data"), o.data);
    if (j.contains("chain")) merge_chain(j.at("chain"), o.chain);
    if (j.contains("model")) o.model = parse_model_family(j.at("model").get<std::string>());
    take(j, "k", o.num_clusters);
    take(j, "out", o.output_dir);
}

void merge_json(const json& j, SelectOptions& o) {
    if (j.contains("data")) merge_data(j.at("data"), o.data);
    if (j.contains("chain")) merge_chain(j.at("chain"), o.chain);
    if (j.contains("model")) o.model = parse_model_family(j.at("model").get<std::string>());
    take(j, "k_list", o.cluster_counts);
    take(j, "threads", o.threads);
    take(j, "out", o.output_dir);
}

void merge_json(const json& j, SimulateOptions& o) {
    if (j.contains("preset") && !j.at("preset").get<std::string>().empty()) {
        o.preset = j.at("preset").get<std::string>();
        const std::uint64_t seed = o.config.seed;
        o.config = simulation_preset(o.preset);
        o.config.seed = seed;
    }
    SimulationConfig& c = o.config;
    take(j, "n", c.n);
    take(j, "d", c.d);
    take(j, "k", c.num_clusters);
    take(j, "actor_covariates", c.num_actor_covariates);
    take(j, "event_levels", c.event_levels);
    if (j.contains("dgp")) c.dgp = parse_dgp(j.at("dgp").get<std::string>());
    take(j, "intercept_separation", c.intercept_separation);
    take(j, "slope_separation", c.slope_separation);
    if (j.contains("weights")) c.weights = vector_from_json(j.at("weights"));
    take(j, "seed", c.seed);
    take(j, "out", o.output_dir);
    if (j.contains("coefficients")) {
        const json& cj = j.at("coefficients");
        TrueCoefficients t;
        t.mu = vector_from_json(cj.at("mu"));
        t.beta = matrix_from_json(cj.at("beta"), 0);
        t.gamma = matrix_from_json(cj.at("gamma"), 0);
        c.coefficients = t;
    }
}

void merge_json(const json& j, MetricsOptions& o) {
    take(j, "truth", o.truth_path);
    take(j, "estimate", o.estimate_path);
    take(j, "weights", o.weights);
    take(j, "out", o.output_dir);
}

json read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigurationError("cannot parse config file " + path.string() + ": " + e.what());
    }
    if (j.contains("config") && j.contains("command")) return j.at("config");
    return j;
}

std::filesystem::path resolve_output_dir(const std::string& requested) {
    if (!requested.empty()) return requested;
    if (const char* env = std::getenv("MIRO_OUTPUT_DIR"); env && *env) return env;
    return "miro-output";
}

ChainConfig chain_config(const ChainOptions& options, ModelFamily family) {
    ChainConfig c;
    c.iterations = options.iterations;
    c.burn_in = options.burn_in;
    c.thin = options.thin;
    c.seed = options.seed;
    c.overlap_mode = family == ModelFamily::miro ? OverlapMode::full : OverlapMode::non_overlapping;
    PriorSpec prior;
    prior.sigma2_mu = options.sigma2_mu;
    prior.sigma2_beta = options.sigma2_beta;
    prior.sigma2_gamma = options.sigma2_gamma;
    c.prior = prior;
    return c;
}

FitReport run_fit(const FitOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    const LoadedDataset loaded = load_for(options.data);
    const TwoModeDataset data = with_default_names(loaded.data);
    const std::filesystem::path dir = resolve_output_dir(options.output_dir);
    std::filesystem::create_directories(dir);

    ChainConfig config = chain_config(options.chain, options.model);
    const ModelSpec spec = model_spec_for(options.model, options.num_clusters, data);

    FitReport report;
    report.model = options.model;
    report.num_clusters = options.num_clusters;
    report.num_parameters = count_parameters(spec);
    json summary = {{"model", to_string(options.model)},
                    {"k", options.num_clusters},
                    {"n", data.n()},
                    {"d", data.d()},
                    {"actor_covariates", data.num_actor_covariates()},
                    {"event_covariates", data.num_event_covariates()},
                    {"num_parameters", report.num_parameters}};

    if (options.model == ModelFamily::mixtbern) {
        const BernoulliTrace raw = fit_bernoulli_mixture(data.y, options.num_clusters, config);
        report.pivot = select_bernoulli_pivot(raw);
        const BernoulliTrace trace = relabel_bernoulli_trace(raw, report.pivot);
        report.loglik = trace.loglik;
        report.allocation = bernoulli_map_allocation(trace, data.y);
        for (int k : report.allocation) report.bit_strings.push_back(singleton_bits(k, options.num_clusters));

        Eigen::MatrixXd probabilities = Eigen::MatrixXd::Zero(data.n(), options.num_clusters);
        Eigen::VectorXd alpha_mean = Eigen::VectorXd::Zero(options.num_clusters);
        Eigen::MatrixXd probs_mean = Eigen::MatrixXd::Zero(options.num_clusters, data.d());
        for (const auto& s : trace.states) {
            probabilities += bernoulli_membership_probabilities(s, data.y);
            alpha_mean += s.alpha;
            probs_mean += s.probs;
        }
        const double count = static_cast<double>(trace.size());
        probabilities /= count;
        alpha_mean /= count;
        probs_mean /= count;
        std::vector<std::string> columns;
        for (int k = 0; k < options.num_clusters; ++k) columns.push_back(singleton_bits(k, options.num_clusters));
        write_text_file(dir / "allocations.csv", allocations_csv(data, report.bit_strings, columns, probabilities));
        std::ostringstream post;
        post << "parameter,mean\n";
        for (int k = 0; k < options.num_clusters; ++k) post << "alpha[" << k + 1 << "]," << format_number(alpha_mean(k)) << "\n";
        for (int k = 0; k < options.num_clusters; ++k) {
            for (int j = 0; j < data.d(); ++j) {
                post << csv_field("pi[" + std::to_string(k + 1) + "," + data.event_names[static_cast<std::size_t>(j)] + "]")
                     << "," << format_number(probs_mean(k, j)) << "\n";
            }
        }
        write_text_file(dir / "posterior_summary.csv", post.str());
        write_text_file(dir / "loglik.csv", loglik_csv(trace.iterations, trace.loglik));
    } else {
        const ConfigurationLattice lattice(options.num_clusters, config.overlap_mode);
        config.prior->dirichlet = default_dirichlet(lattice);
        const McmcTrace raw = run_chain(data, config, lattice);
        report.pivot = select_pivot(raw);
        const McmcTrace trace = relabel_trace(raw, report.pivot, lattice).trace;
        report.loglik = trace.loglik;
        const Eigen::MatrixXd probabilities = average_membership(trace, data, lattice);
        report.allocation = argmax_rows(probabilities);
        for (int h : report.allocation) report.bit_strings.push_back(lattice.bit_string(h));

        std::vector<std::string> columns;
        for (HeirIndex h = 0; h < lattice.num_configurations(); ++h) columns.push_back(lattice.bit_string(h));
        write_text_file(dir / "allocations.csv", allocations_csv(data, report.bit_strings, columns, probabilities));

        const PosteriorSummary ps = posterior_summary(trace);
        std::ostringstream post;
        post << "parameter,mean,sd\n";
        for (int k = 0; k < options.num_clusters; ++k) {
            post << "mu[" << k + 1 << "]," << format_number(ps.mu_mean(k)) << "," << format_number(ps.mu_sd(k)) << "\n";
            for (int l = 0; l < data.num_actor_covariates(); ++l) {
                post << csv_field("beta[" + std::to_string(k + 1) + "," + data.actor_covariate_names[static_cast<std::size_t>(l)] + "]")
                     << "," << format_number(ps.beta_mean(k, l)) << "," << format_number(ps.beta_sd(k, l)) << "\n";
            }
            for (int q = 0; q < data.num_event_covariates(); ++q) {
                post << csv_field("gamma[" + std::to_string(k + 1) + "," + data.event_covariate_names[static_cast<std::size_t>(q)] + "]")
                     << "," << format_number(ps.gamma_mean(k, q)) << "," << format_number(ps.gamma_sd(k, q)) << "\n";
            }
        }
        for (HeirIndex h = 0; h < lattice.num_configurations(); ++h) {
            if (!lattice.allowed(h)) continue;
            post << "alpha[" << lattice.bit_string(h) << "]," << format_number(ps.alpha_mean(h)) << ","
                 << format_number(ps.alpha_sd(h)) << "\n";
        }
        write_text_file(dir / "posterior_summary.csv", post.str());
        write_text_file(dir / "loglik.csv", loglik_csv(trace.iterations, trace.loglik));

        std::string coefficients = "kind,covariate,level,cluster,mean,sd\n";
        coefficients += coefficients_by_category_csv(ps.gamma_mean, ps.gamma_sd, data.event_covariate_names,
                                                     loaded.event_categoricals, "event");
        coefficients += coefficients_by_category_csv(ps.beta_mean, ps.beta_sd, data.actor_covariate_names,
                                                     loaded.actor_categoricals, "actor");
        write_text_file(dir / "coefficients_by_category.csv", coefficients);

        json ess_mu = json::array();
        for (int k = 0; k < options.num_clusters; ++k) {
            std::vector<double> series;
            for (const auto& s : trace.states) series.push_back(s.mu(k));
            ess_mu.push_back(num(effective_sample_size(series)));
        }
        summary["diagnostics"] = {{"ess_loglik", num(effective_sample_size(trace.loglik))}, {"ess_mu", ess_mu}};
    }
    write_text_file(dir / "clustered_data.csv", clustered_csv(data, report.allocation, report.bit_strings));

    report.max_loglik = *std::max_element(report.loglik.begin(), report.loglik.end());
    report.bic = bic_mcmc_value(report.max_loglik, data.n(), data.d(), report.num_parameters);
    summary["max_loglik"] = num(report.max_loglik);
    summary["bic_mcmc"] = num(report.bic);
    summary["pivot_draw"] = report.pivot;
    summary["retained_draws"] = report.loglik.size();
    json allocation = json::object();
    for (int i = 0; i < data.n(); ++i) {
        allocation[data.actor_names[static_cast<std::size_t>(i)]] = report.bit_strings[static_cast<std::size_t>(i)];
    }
    summary["allocation"] = allocation;
    write_json(dir / "report.json", summary);
    write_manifest(dir, "fit", to_json(options), started);
    return report;
}

SweepResult run_select(const SelectOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    const TwoModeDataset data = with_default_names(load_for(options.data).data);
    const std::filesystem::path dir = resolve_output_dir(options.output_dir);
    std::filesystem::create_directories(dir);

    const SweepResult result =
        sweep_k(data, options.model, options.cluster_counts, chain_config(options.chain, options.model), options.threads);
    std::ostringstream table;
    table << "k,num_parameters,max_loglik,bic_mcmc,seed,error\n";
    for (const auto& row : result.rows) {
        table << row.num_clusters << "," << row.num_parameters << ",";
        if (row.error) {
            table << ",," << row.seed << "," << csv_field(*row.error) << "\n";
        } else {
            table << format_number(row.max_loglik) << "," << format_number(row.bic) << "," << row.seed << ",\n";
        }
    }
    write_text_file(dir / "selection.csv", table.str());
    json report = {{"model", to_string(options.model)}, {"k_list", options.cluster_counts}};
    report["selected_k"] = result.selected ? json(*result.selected) : json(nullptr);
    write_json(dir / "report.json", report);
    write_manifest(dir, "select", to_json(options), started);
    return result;
}

SimulatedData run_simulate(const SimulateOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    const SimulatedData sim = simulate(options.config);
    const std::filesystem::path dir = resolve_output_dir(options.output_dir);
    std::filesystem::create_directories(dir);
    const TwoModeDataset& data = sim.data;

    write_dataset(data, dir / "y.csv", dir / "x.csv", std::nullopt);
    if (!sim.event_levels.empty()) {
        std::ostringstream w;
        w << "event,category\n#categorical: category\n";
        for (int j = 0; j < data.d(); ++j) {
            w << csv_field(data.event_names[static_cast<std::size_t>(j)]) << "," << sim.event_levels[static_cast<std::size_t>(j)] << "\n";
        }
        write_text_file(dir / "w.csv", w.str());
    }

    const int num_k = options.config.num_clusters;
    std::ostringstream truth;
    truth << "actor,configuration\n";
    std::unique_ptr<ConfigurationLattice> lattice;
    if (options.config.dgp == DataGeneratingProcess::miro_probit) {
        lattice = std::make_unique<ConfigurationLattice>(num_k, OverlapMode::full);
    }
    for (int i = 0; i < data.n(); ++i) {
        const int label = sim.labels[static_cast<std::size_t>(i)];
        truth << csv_field(data.actor_names[static_cast<std::size_t>(i)]) << ","
              << (lattice ? lattice->bit_string(label) : singleton_bits(label, num_k)) << "\n";
    }
    write_text_file(dir / "truth.csv", truth.str());
    write_json(dir / "true_parameters.json", {{"mu", vector_json(sim.coefficients.mu)},
                                              {"beta", matrix_json(sim.coefficients.beta)},
                                              {"gamma", matrix_json(sim.coefficients.gamma)},
                                              {"weights", vector_json(sim.weights)},
                                              {"dgp", dgp_name(options.config.dgp)}});
    write_manifest(dir, "simulate", to_json(options), started);
    return sim;
}

json run_metrics(const MetricsOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    auto read_labels = [](const std::string& path) {
        const CsvTable table = read_csv(path);
        const auto actor_col = std::find(table.header.begin(), table.header.end(), "actor");
        const auto config_col = std::find(table.header.begin(), table.header.end(), "configuration");
        if (actor_col == table.header.end() || config_col == table.header.end()) {
            throw ValidationError(path + ": needs 'actor' and 'configuration' columns");
        }
        const auto a = static_cast<std::size_t>(actor_col - table.header.begin());
        const auto c = static_cast<std::size_t>(config_col - table.header.begin());
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& row : table.rows) {
            if (row.size() <= std::max(a, c)) throw ValidationError(path + ": short row");
            out.emplace_back(row[a], row[c]);
        }
        return out;
    };
    const auto truth = read_labels(options.truth_path);
    const auto estimate = read_labels(options.estimate_path);
    std::map<std::string, std::string> estimate_of(estimate.begin(), estimate.end());
    if (estimate_of.size() != truth.size()) throw ValidationError("truth and estimate list different actors");

    std::map<std::string, int> codes;
    auto code = [&](const std::string& s) { return codes.emplace(s, static_cast<int>(codes.size())).first->second; };
    std::vector<int> t;
    std::vector<int> e;
    std::vector<std::string> t_bits;
    std::vector<std::string> e_bits;
    for (const auto& [actor, bits] : truth) {
        const auto it = estimate_of.find(actor);
        if (it == estimate_of.end()) throw ValidationError("estimate has no row for actor '" + actor + "'");
        t_bits.push_back(bits);
        e_bits.push_back(it->second);
        t.push_back(code("t" + bits));
        e.push_back(code("e" + it->second));
    }
    const std::size_t width = t_bits.front().size();
    const bool same_lattice = std::all_of(t_bits.begin(), t_bits.end(), [&](const auto& b) { return b.size() == width; }) &&
                              std::all_of(e_bits.begin(), e_bits.end(), [&](const auto& b) { return b.size() == width; }) &&
                              width >= 1 && width <= static_cast<std::size_t>(kMaxClusters);
    double error_rate = 0.0;
    if (same_lattice) {
        const ConfigurationLattice lattice(static_cast<int>(width), OverlapMode::full);
        std::vector<HeirIndex> th;
        std::vector<HeirIndex> eh;
        for (std::size_t i = 0; i < t_bits.size(); ++i) {
            th.push_back(lattice.parse_bit_string(t_bits[i]));
            eh.push_back(lattice.parse_bit_string(e_bits[i]));
        }
        error_rate = mer(th, eh, lattice);
    } else {
        error_rate = mer_matched(t, e);
    }
    json result = {{"n", truth.size()},
                   {"mer", num(error_rate)},
                   {"mer_matching", same_lattice ? "cluster-permutation" : "one-to-one"},
                   {"ari", num(adjusted_rand_index(t, e))}};
    if (!options.weights.empty()) {
        Eigen::VectorXd w(static_cast<Eigen::Index>(options.weights.size()));
        for (std::size_t k = 0; k < options.weights.size(); ++k) w(static_cast<Eigen::Index>(k)) = options.weights[k];
        result["random_benchmark_mer"] = num(random_benchmark_mer(w));
    }
    const std::filesystem::path dir = resolve_output_dir(options.output_dir);
    std::filesystem::create_directories(dir);
    write_json(dir / "metrics.json", result);
    write_manifest(dir, "metrics", to_json(options), started);
    return result;
}

}  // namespace miro

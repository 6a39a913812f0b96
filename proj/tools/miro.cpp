#include <iostream>

#include "CLI11.hpp"

#include "miro/commands.hpp"
#include "miro/errors.hpp"
#include "miro/io.hpp"

namespace {

void add_data_flags(CLI::App* cmd, miro::DataOptions& data) {
    cmd->add_option("--y", data.y_path, "attendance matrix CSV");
    cmd->add_option("--x", data.x_path, "actor covariates CSV");
    cmd->add_option("--w", data.w_path, "event covariates CSV");
    cmd->add_flag("--event-dummies", data.event_dummies, "use d-1 event indicators as event covariates");
}

void add_chain_flags(CLI::App* cmd, miro::ChainOptions& chain) {
    cmd->add_option("--iters", chain.iterations, "total iterations");
    cmd->add_option("--burnin", chain.burn_in, "discarded iterations");
    cmd->add_option("--thin", chain.thin, "keep every thin-th draw");
    cmd->add_option("--seed", chain.seed, "random seed");
    cmd->add_option("--sigma2-mu", chain.sigma2_mu, "prior variance of intercepts");
    cmd->add_option("--sigma2-beta", chain.sigma2_beta, "prior variance of actor slopes");
    cmd->add_option("--sigma2-gamma", chain.sigma2_gamma, "prior variance of event slopes");
}

// Values set on the command line differ from the defaults; copy those onto `merged`.
void overlay(const nlohmann::json& base, const nlohmann::json& given, nlohmann::json& merged) {
    for (auto it = given.begin(); it != given.end(); ++it) {
        const auto b = base.find(it.key());
        if (b != base.end() && *b == *it) continue;
        if (it->is_object() && b != base.end() && b->is_object() && merged.contains(it.key())) {
            overlay(*b, *it, merged[it.key()]);
        } else {
            merged[it.key()] = *it;
        }
    }
}

// Precedence: flags, then the config file, then defaults.
template <typename Options>
void apply(const std::string& config_path, Options& from_flags, const Options& defaults) {
    if (config_path.empty()) return;
    Options from_file = defaults;
    miro::merge_json(miro::read_config_file(config_path), from_file);
    nlohmann::json merged = miro::to_json(from_file);
    overlay(miro::to_json(defaults), miro::to_json(from_flags), merged);
    Options out = defaults;
    miro::merge_json(merged, out);
    from_flags = out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixtures of multivariate probit regressions with overlapping clusters"};
    app.set_version_flag("--version", miro::kVersion);
    app.require_subcommand(1);

    miro::FitOptions fit;
    std::string fit_model = "miro";
    std::string fit_config;
    auto* fit_cmd = app.add_subcommand("fit", "fit one model and write its report");
    add_data_flags(fit_cmd, fit.data);
    add_chain_flags(fit_cmd, fit.chain);
    fit_cmd->add_option("--model", fit_model, "miro, mixtprobit or mixtbern");
    fit_cmd->add_option("--k", fit.num_clusters, "number of primary clusters");
    fit_cmd->add_option("--out", fit.output_dir, "output directory");
    fit_cmd->add_option("--config", fit_config, "JSON config or manifest");

    miro::SelectOptions select;
    std::string select_model = "miro";
    std::string select_config;
    auto* select_cmd = app.add_subcommand("select", "fit a range of K and choose by BIC-MCMC");
    add_data_flags(select_cmd, select.data);
    add_chain_flags(select_cmd, select.chain);
    select_cmd->add_option("--model", select_model, "miro, mixtprobit or mixtbern");
    select_cmd->add_option("--k", select.cluster_counts, "cluster counts to compare")->delimiter(',');
    select_cmd->add_option("--threads", select.threads, "chains run at once");
    select_cmd->add_option("--out", select.output_dir, "output directory");
    select_cmd->add_option("--config", select_config, "JSON config or manifest");

    miro::SimulateOptions sim;
    std::string sim_config;
    std::string dgp;
    std::vector<double> sim_weights;
    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic dataset with known truth");
    sim_cmd->add_option("--preset", sim.preset, "named scenario")
        ->check(CLI::IsMember(miro::simulation_preset_names()));
    sim_cmd->add_option("--n", sim.config.n, "actors");
    sim_cmd->add_option("--d", sim.config.d, "events");
    sim_cmd->add_option("--k", sim.config.num_clusters, "primary clusters");
    sim_cmd->add_option("--actor-covariates", sim.config.num_actor_covariates, "standard-normal actor covariates");
    sim_cmd->add_option("--event-levels", sim.config.event_levels, "levels of the categorical event covariate");
    sim_cmd->add_option("--dgp", dgp, "miro_probit or mixture_logit");
    sim_cmd->add_option("--intercept-separation", sim.config.intercept_separation);
    sim_cmd->add_option("--slope-separation", sim.config.slope_separation);
    sim_cmd->add_option("--weights", sim_weights, "mixing weights")->delimiter(',');
    sim_cmd->add_option("--seed", sim.config.seed, "random seed");
    sim_cmd->add_option("--out", sim.output_dir, "output directory");
    sim_cmd->add_option("--config", sim_config, "JSON config or manifest");

    miro::MetricsOptions metrics;
    std::string metrics_config;
    auto* metrics_cmd = app.add_subcommand("metrics", "compare an allocation with the truth");
    metrics_cmd->add_option("--truth", metrics.truth_path, "CSV with actor,configuration");
    metrics_cmd->add_option("--estimate", metrics.estimate_path, "allocations.csv or any actor,configuration CSV");
    metrics_cmd->add_option("--weights", metrics.weights, "weights for the random-allocation benchmark")->delimiter(',');
    metrics_cmd->add_option("--out", metrics.output_dir, "output directory");
    metrics_cmd->add_option("--config", metrics_config, "JSON config or manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*fit_cmd) {
            fit.model = miro::parse_model_family(fit_model);
            apply(fit_config, fit, miro::FitOptions{});
            const auto report = miro::run_fit(fit);
            std::cout << "K=" << report.num_clusters << " p=" << report.num_parameters
                      << " max_loglik=" << miro::format_number(report.max_loglik)
                      << " bic_mcmc=" << miro::format_number(report.bic) << "\n";
        } else if (*select_cmd) {
            select.model = miro::parse_model_family(select_model);
            apply(select_config, select, miro::SelectOptions{});
            const auto result = miro::run_select(select);
            for (const auto& row : result.rows) {
                std::cout << "K=" << row.num_clusters << " p=" << row.num_parameters;
                if (row.error) std::cout << " error: " << *row.error << "\n";
                else std::cout << " bic_mcmc=" << miro::format_number(row.bic) << "\n";
            }
            if (result.selected) std::cout << "selected K=" << *result.selected << "\n";
        } else if (*sim_cmd) {
            if (!sim.preset.empty()) {
                miro::SimulationConfig preset = miro::simulation_preset(sim.preset);
                // Flags given explicitly still win over the preset.
                for (const auto* opt : sim_cmd->get_options()) {
                    if (opt->count() == 0) continue;
                    const std::string name = opt->get_name();
                    if (name == "--n") preset.n = sim.config.n;
                    else if (name == "--d") preset.d = sim.config.d;
                    else if (name == "--k") preset.num_clusters = sim.config.num_clusters;
                    else if (name == "--actor-covariates") preset.num_actor_covariates = sim.config.num_actor_covariates;
                    else if (name == "--event-levels") preset.event_levels = sim.config.event_levels;
                    else if (name == "--intercept-separation") preset.intercept_separation = sim.config.intercept_separation;
                    else if (name == "--slope-separation") preset.slope_separation = sim.config.slope_separation;
                    else if (name == "--seed") preset.seed = sim.config.seed;
                }
                sim.config = preset;
            }
            if (!dgp.empty()) {
                nlohmann::json j = {{"dgp", dgp}};
                miro::merge_json(j, sim);
            }
            if (!sim_weights.empty()) {
                sim.config.weights = Eigen::Map<const Eigen::VectorXd>(sim_weights.data(),
                                                                     static_cast<Eigen::Index>(sim_weights.size()));
            }
            apply(sim_config, sim, miro::SimulateOptions{});
            const auto data = miro::run_simulate(sim);
            std::cout << "n=" << data.data.n() << " d=" << data.data.d() << "\n";
        } else if (*metrics_cmd) {
            apply(metrics_config, metrics, miro::MetricsOptions{});
            std::cout << miro::run_metrics(metrics).dump(2) << "\n";
        }
    } catch (const miro::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const miro::ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const miro::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

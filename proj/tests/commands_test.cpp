#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <algorithm>

#include "miro/commands.hpp"
#include "miro/errors.hpp"
#include "miro/io.hpp"

using namespace miro;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("miro-cmd-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MIRO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("simulate, fit and score") {
    const fs::path dir = scratch("pipeline");
    SimulateOptions sim;
    sim.preset = "event-only-n50";
    sim.config = simulation_preset(sim.preset);
    sim.config.seed = 2;
    sim.output_dir = (dir / "sim").string();
    run_simulate(sim);
    for (const char* f : {"y.csv", "w.csv", "truth.csv", "true_parameters.json", "manifest.json"})
        CHECK(fs::exists(dir / "sim" / f));

    FitOptions fit;
    fit.data.y_path = (dir / "sim" / "y.csv").string();
    fit.data.w_path = (dir / "sim" / "w.csv").string();
    fit.chain.iterations = 400;
    fit.chain.burn_in = 200;
    fit.output_dir = (dir / "fit").string();
    const FitReport report = run_fit(fit);
    CHECK(report.num_parameters == 2 * 3 + 4);
    CHECK(report.bit_strings.size() == 50);
    for (const char* f : {"report.json", "allocations.csv", "posterior_summary.csv", "loglik.csv",
                          "coefficients_by_category.csv", "clustered_data.csv", "manifest.json"})
        CHECK(fs::exists(dir / "fit" / f));
    const auto coef = read_csv(dir / "fit" / "coefficients_by_category.csv");
    CHECK(coef.rows.size() == 3 * 2);
    CHECK(coef.rows[0][2] == "L1");
    CHECK(coef.rows[0][4] == "0");

    // re-running from the manifest reproduces every numeric output
    FitOptions again;
    merge_json(read_config_file(dir / "fit" / "manifest.json"), again);
    again.output_dir = (dir / "fit2").string();
    run_fit(again);
    for (const auto& entry : fs::directory_iterator(dir / "fit")) {
        if (entry.path().filename() == "manifest.json") continue;
        CHECK(slurp(entry.path()) == slurp(dir / "fit2" / entry.path().filename()));
    }

    MetricsOptions metrics;
    metrics.truth_path = (dir / "sim" / "truth.csv").string();
    metrics.estimate_path = (dir / "sim" / "truth.csv").string();
    metrics.weights = {0.10, 0.45, 0.25, 0.20};
    metrics.output_dir = (dir / "metrics").string();
    const auto m = run_metrics(metrics);
    CHECK(m["mer"].get<double>() == 0.0);
    CHECK(m["ari"].get<double>() == 1.0);
    CHECK(m["random_benchmark_mer"].get<double>() == 0.685);

    metrics.estimate_path = (dir / "fit" / "allocations.csv").string();
    const auto fitted = run_metrics(metrics);
    CHECK(fitted["mer"].get<double>() >= 0.0);
    CHECK(fitted["mer_matching"] == "cluster-permutation");
}

TEST_CASE("hand-built metrics case") {
    const fs::path dir = scratch("metrics");
    write(dir / "truth.csv", "actor,configuration\na,10\nb,10\nc,01\nd,11\n");
    write(dir / "est.csv", "actor,configuration\nd,11\nc,11\nb,01\na,01\n");
    MetricsOptions metrics{(dir / "truth.csv").string(), (dir / "est.csv").string(), {}, (dir / "out").string()};
    const auto m = run_metrics(metrics);
    // after swapping the two primary labels only c is misallocated
    CHECK(m["mer"].get<double>() == 0.25);
    CHECK(m["mer_matching"] == "cluster-permutation");
    CHECK(m["ari"].get<double>() == doctest::Approx(adjusted_rand_index({0, 0, 1, 2}, {0, 0, 2, 2})));

    // different label spaces fall back to one-to-one matching
    write(dir / "bern.csv", "actor,configuration\na,100\nb,100\nc,010\nd,001\n");
    metrics.estimate_path = (dir / "bern.csv").string();
    const auto matched = run_metrics(metrics);
    CHECK(matched["mer_matching"] == "one-to-one");
    CHECK(matched["mer"].get<double>() == 0.0);
    CHECK(matched["ari"].get<double>() == 1.0);

    write(dir / "short.csv", "actor,configuration\na,10\n");
    metrics.estimate_path = (dir / "short.csv").string();
    CHECK_THROWS_AS(run_metrics(metrics), ValidationError);
}

TEST_CASE("mixtbern routing and selection table") {
    const fs::path dir = scratch("bern");
    SimulateOptions sim;
    sim.config = simulation_preset("actor-only-n50-d15");
    sim.output_dir = (dir / "sim").string();
    run_simulate(sim);

    FitOptions fit;
    fit.model = ModelFamily::mixtbern;
    fit.num_clusters = 3;
    fit.data.y_path = (dir / "sim" / "y.csv").string();
    fit.chain.iterations = 200;
    fit.chain.burn_in = 100;
    fit.output_dir = (dir / "fit").string();
    const FitReport report = run_fit(fit);
    CHECK(report.num_parameters == 3 * 15 + 3);
    for (const auto& bits : report.bit_strings) CHECK(std::count(bits.begin(), bits.end(), '1') == 1);

    SelectOptions select;
    select.data.y_path = (dir / "sim" / "y.csv").string();
    select.data.x_path = (dir / "sim" / "x.csv").string();
    select.chain.iterations = 200;
    select.chain.burn_in = 100;
    select.cluster_counts = {1, 2};
    select.output_dir = (dir / "select").string();
    const SweepResult result = run_select(select);
    CHECK(result.selected.has_value());
    const auto table = read_csv(dir / "select" / "selection.csv");
    CHECK(table.rows.size() == 2);
}

TEST_CASE("config files and precedence") {
    FitOptions o;
    merge_json(nlohmann::json{{"k", 3}, {"chain", {{"iterations", 50}}}, {"model", "mixtprobit"}}, o);
    CHECK(o.num_clusters == 3);
    CHECK(o.chain.iterations == 50);
    CHECK(o.chain.burn_in == 5000);
    CHECK(o.model == ModelFamily::mixtprobit);
    CHECK(to_json(o)["chain"]["iterations"] == 50);

    SimulateOptions s;
    merge_json(nlohmann::json{{"preset", "misspec-logit"}, {"n", 40}}, s);
    CHECK(s.config.n == 40);
    CHECK(s.config.d == 20);

    const fs::path dir = scratch("config");
    write(dir / "y.csv", "actor,e1,e2\na,1,0\nb,0,1\nc,1,1\n");
    write(dir / "x.csv", "actor,v\na,0.5\nb,-1\nc,2\n");
    write(dir / "config.json", R"({"chain": {"iterations": 30, "burn_in": 10, "seed": 4}, "k": 1})");
    const std::string base = "fit --y " + (dir / "y.csv").string() + " --x " + (dir / "x.csv").string() +
                             " --config " + (dir / "config.json").string();
    CHECK(run_cli(base + " --iters 40 --out " + (dir / "a").string()) == 0);
    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest["config"]["chain"]["iterations"] == 40);
    CHECK(manifest["config"]["chain"]["burn_in"] == 10);
    CHECK(manifest["config"]["k"] == 1);
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch("exit");
    write(dir / "bad.csv", "actor,e1\na,3\n");
    write(dir / "y.csv", "actor,e1\na,1\n");
    CHECK(run_cli("fit --y " + (dir / "bad.csv").string() + " --out " + (dir / "o").string()) == 2);
    CHECK(run_cli("fit --y " + (dir / "nothere.csv").string() + " --out " + (dir / "o").string()) == 2);
    CHECK(run_cli("fit --y " + (dir / "y.csv").string() + " --k 12 --out " + (dir / "o").string()) == 2);
    CHECK(run_cli("fit --y " + (dir / "y.csv").string() + " --out " + (dir / "o").string()) == 2);
    CHECK(run_cli("fit --bogus") == 2);
    CHECK(run_cli("--version") == 0);
}

TEST_CASE("output directory from the environment") {
    CHECK(resolve_output_dir("given") == fs::path("given"));
    setenv("MIRO_OUTPUT_DIR", "from-env", 1);
    CHECK(resolve_output_dir("") == fs::path("from-env"));
    unsetenv("MIRO_OUTPUT_DIR");
    CHECK(resolve_output_dir("") == fs::path("miro-output"));
}

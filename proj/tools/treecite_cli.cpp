#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "treecite/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitProvider = 3;
constexpr int kExitData = 4;

treecite::Config load_config(const std::string& config_file) {
    if (!config_file.empty()) return treecite::Config::load(config_file);
    treecite::Config cfg;
    cfg.apply_env();
    return cfg;
}

std::string read_stream(std::istream& is) {
    return std::string(std::istreambuf_iterator<char>(is),
                       std::istreambuf_iterator<char>());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure-aware HTML retrieval with path-addressed citations"};
    app.require_subcommand(1);

    std::string config_file;
    app.add_option("--config", config_file, "Configuration file (key=value lines)");

    std::string corpus_dir;
    auto* ingest = app.add_subcommand("ingest", "Parse and segment a corpus directory");
    ingest->add_option("corpus_dir", corpus_dir, "Directory of HTML files")->required();

    auto* index = app.add_subcommand("index", "Build and persist the embedding index");
    index->add_option("--corpus", corpus_dir, "Corpus directory (overrides config)");

    std::string query;
    bool filter_on = false;
    int budget = 0;
    int k_init = 0;
    unsigned seed_opt = 0;
    auto* query_cmd = app.add_subcommand("query", "Retrieve budgeted excerpts for a query");
    query_cmd->add_option("query", query, "Query text")->required();
    query_cmd->add_flag("--filter", filter_on, "Run generative evidence filtering");
    query_cmd->add_option("--budget", budget, "Output budget in size units");
    query_cmd->add_option("--k-init", k_init, "Initial ranked-prefix size");
    query_cmd->add_option("--seed", seed_opt, "Mock-provider seed");
    query_cmd->add_option("--corpus", corpus_dir, "Corpus directory (overrides config)");

    std::string results_file;
    auto* eval_cmd = app.add_subcommand("eval", "Judge citations from a filtered query run");
    eval_cmd->add_option("results", results_file, "Filtered query JSON ('-' for stdin)")
        ->required();
    eval_cmd->add_option("--query", query, "Query override for judging");

    CLI11_PARSE(app, argc, argv);

    try {
        treecite::Config cfg = load_config(config_file);
        if (!corpus_dir.empty()) cfg.corpus_dir = corpus_dir;
        if (query_cmd->count("--budget")) {
            if (budget <= 0) throw treecite::ConfigError("--budget must be positive");
            cfg.budget_limit = budget;
        }
        if (k_init > 0) cfg.initial_k = k_init;
        if (query_cmd->count("--seed")) cfg.seed = seed_opt;

        if (*ingest) {
            std::cout << treecite::manifest_to_json(treecite::cmd_ingest(cfg.corpus_dir))
                      << "\n";
        } else if (*index) {
            size_t n = treecite::cmd_index(cfg);
            std::cerr << "indexed " << n << " entries to " << cfg.index_path << "\n";
        } else if (*query_cmd) {
            std::cout << treecite::cmd_query(cfg, query, filter_on) << "\n";
        } else if (*eval_cmd) {
            std::string results;
            if (results_file == "-") {
                results = read_stream(std::cin);
            } else {
                std::ifstream is(results_file);
                if (!is) throw treecite::DataError("cannot read " + results_file);
                results = read_stream(is);
            }
            std::cout << treecite::cmd_eval(cfg, results, query) << "\n";
        }
        return 0;
    } catch (const treecite::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const treecite::ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}

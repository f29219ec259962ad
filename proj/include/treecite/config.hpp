#pragma once

#include <stdexcept>
#include <string>

namespace treecite {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key=value configuration. Endpoint fields accept a URL or the literal
// "mock" (deterministic offline providers); generative/judge mocks also take
// "mock:all" and "mock:none" to select every label or none.
struct Config {
    std::string embedding_endpoint = "mock";
    std::string generative_endpoint = "mock:all";
    std::string judge_endpoint = "mock:all";
    int embedding_dim = 32;
    int budget_limit = 1000;
    int expand_limit = 1000;
    int initial_k = 8;
    int parallelism = 4;
    unsigned seed = 0;
    std::string policies = "title,headers,lists,tables";
    std::string corpus_dir;
    std::string index_path = "index.bin";

    static Config load(const std::string& path);  // unreadable file -> ConfigError
    void apply_line(const std::string& key, const std::string& value);
    void apply_env();  // TREECITE_<UPPER_KEY> overrides
};

}  // namespace treecite

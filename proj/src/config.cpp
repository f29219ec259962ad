#include "treecite/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>

namespace treecite {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " expects an integer, got \"" + value + "\"");
    }
}

}  // namespace

void Config::apply_line(const std::string& key, const std::string& value) {
    if (key == "embedding_endpoint") embedding_endpoint = value;
    else if (key == "generative_endpoint") generative_endpoint = value;
    else if (key == "judge_endpoint") judge_endpoint = value;
    else if (key == "embedding_dim") embedding_dim = parse_int(key, value);
    else if (key == "budget_limit") budget_limit = parse_int(key, value);
    else if (key == "expand_limit") expand_limit = parse_int(key, value);
    else if (key == "initial_k") initial_k = parse_int(key, value);
    else if (key == "parallelism") parallelism = parse_int(key, value);
    else if (key == "seed") seed = static_cast<unsigned>(parse_int(key, value));
    else if (key == "policies") policies = value;
    else if (key == "corpus_dir") corpus_dir = value;
    else if (key == "index_path") index_path = value;
    else throw ConfigError("unknown config key: " + key);
}

Config Config::load(const std::string& path) {
    Config cfg;
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              " is not key=value: " + t);
        cfg.apply_line(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    cfg.apply_env();
    return cfg;
}

void Config::apply_env() {
    static const char* kKeys[] = {
        "embedding_endpoint", "generative_endpoint", "judge_endpoint",
        "embedding_dim", "budget_limit", "expand_limit", "initial_k",
        "parallelism", "seed", "policies", "corpus_dir", "index_path"};
    for (const char* key : kKeys) {
        std::string env = "TREECITE_";
        for (const char* c = key; *c; ++c)
            env += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
        if (const char* value = std::getenv(env.c_str())) apply_line(key, value);
    }
}

}  // namespace treecite

#pragma once

#include <memory>

#include "treecite/config.hpp"
#include "treecite/eval.hpp"
#include "treecite/retrieve.hpp"

namespace treecite {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Offline generative stand-in. On evidence-selector prompts it returns all
// (or no) opening tags found in the prompt; on judge prompts, YES (or NO).
class MockGenerativeProvider : public GenerativeProvider {
public:
    explicit MockGenerativeProvider(bool select_all) : select_all_(select_all) {}
    std::string complete(const std::string& prompt) override;

private:
    bool select_all_;
};

// POSTs {"prompt": ...} and expects {"text": ...}.
class HttpGenerativeProvider : public GenerativeProvider {
public:
    HttpGenerativeProvider(std::string base_url, std::string path = "/complete")
        : base_url_(std::move(base_url)), path_(std::move(path)) {}
    std::string complete(const std::string& prompt) override;

private:
    std::string base_url_;
    std::string path_;
};

// Endpoint "mock" -> deterministic offline provider; otherwise HTTP.
std::unique_ptr<EmbeddingProvider> make_embedding_provider(const Config& config);
// Endpoint "mock"/"mock:all" -> select-all mock, "mock:none" -> select-none.
std::unique_ptr<GenerativeProvider> make_generative_provider(const std::string& endpoint);

struct ManifestEntry {
    std::string doc_id;
    std::string file;
    size_t sentences = 0;
    size_t blocks = 0;
};

struct Manifest {
    std::vector<ManifestEntry> entries;
    std::vector<std::string> diagnostics;  // unreadable files, one note each
};

// Parses and segments every *.html / *.htm under corpus_dir (sorted order);
// unreadable or undecodable files become diagnostics, ingestion continues.
Manifest cmd_ingest(const std::string& corpus_dir);
std::string manifest_to_json(const Manifest& manifest);

// Loads the corpus named by the manifest (doc_id -> parsed tree).
Corpus load_corpus(const Manifest& manifest);

// Builds and persists the index for the configured corpus; returns the
// number of entries written.
size_t cmd_index(const Config& config);

// Runs retrieval (and optionally filtering) against the persisted index;
// returns a JSON document.
std::string cmd_query(const Config& config, const std::string& query,
                      bool filter_on);

// Judges each citation in a cmd_query --filter output against the query;
// returns a JSON document with records and the "H/T (ratio)" line.
std::string cmd_eval(const Config& config, const std::string& results_json,
                     const std::string& query);

}  // namespace treecite

#include "treecite/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

namespace treecite {

namespace fs = std::filesystem;

std::string MockGenerativeProvider::complete(const std::string& prompt) {
    // Collect <lab_N> opening tags appearing in the prompt body.
    std::vector<std::string> tags;
    size_t pos = 0;
    while ((pos = prompt.find("<lab_", pos)) != std::string::npos) {
        size_t end = pos + 5;
        while (end < prompt.size() && std::isdigit(static_cast<unsigned char>(prompt[end])))
            ++end;
        if (end > pos + 5 && end < prompt.size() && prompt[end] == '>') {
            std::string tag = prompt.substr(pos, end - pos + 1);
            if (std::find(tags.begin(), tags.end(), tag) == tags.end())
                tags.push_back(tag);
        }
        pos = end;
    }
    if (!tags.empty()) {
        if (!select_all_) return "[]";
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : tags) arr.push_back(t);
        return arr.dump();
    }
    return select_all_ ? "YES" : "NO";
}

std::string HttpGenerativeProvider::complete(const std::string& prompt) {
    nlohmann::json req{{"prompt", prompt}};
    httplib::Client client(base_url_);
    client.set_read_timeout(120, 0);
    auto res = client.Post(path_, req.dump(), "application/json");
    if (!res || res->status != 200)
        throw ProviderError("generative endpoint " + base_url_ + path_ +
                            (res ? " returned status " + std::to_string(res->status)
                                 : " is unreachable"));
    nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.contains("text") || !body["text"].is_string())
        throw ProviderError("generative endpoint returned malformed JSON");
    return body["text"].get<std::string>();
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const Config& config) {
    if (config.embedding_endpoint.empty())
        throw ConfigError("embedding_endpoint is not configured");
    if (config.embedding_endpoint == "mock")
        return std::make_unique<MockEmbeddingProvider>(config.embedding_dim, config.seed);
    return std::make_unique<HttpEmbeddingProvider>(config.embedding_endpoint,
                                                   config.embedding_dim);
}

std::unique_ptr<GenerativeProvider> make_generative_provider(const std::string& endpoint) {
    if (endpoint.empty()) throw ConfigError("generative endpoint is not configured");
    if (endpoint == "mock" || endpoint == "mock:all")
        return std::make_unique<MockGenerativeProvider>(true);
    if (endpoint == "mock:none") return std::make_unique<MockGenerativeProvider>(false);
    return std::make_unique<HttpGenerativeProvider>(endpoint);
}

// ---------------------------------------------------------------------------

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot read " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

Manifest cmd_ingest(const std::string& corpus_dir) {
    if (!fs::is_directory(corpus_dir))
        throw DataError("corpus_dir is not a directory: " + corpus_dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        if (ext == ".html" || ext == ".htm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    Manifest manifest;
    for (const fs::path& file : files) {
        try {
            DocNode doc = parse_html(read_file(file));
            AnnotatedDoc annotated = segment_sentences(doc);
            manifest.entries.push_back({file.stem().string(), file.string(),
                                        annotated.sentences.size(),
                                        block_leaves(doc).size()});
        } catch (const std::exception& e) {
            manifest.diagnostics.push_back(file.string() + ": " + e.what());
        }
    }
    return manifest;
}

std::string manifest_to_json(const Manifest& manifest) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& e : manifest.entries)
        docs.push_back({{"doc_id", e.doc_id},
                        {"file", e.file},
                        {"sentences", e.sentences},
                        {"block_leaves", e.blocks}});
    nlohmann::json out{{"documents", docs}, {"diagnostics", manifest.diagnostics}};
    return out.dump(2);
}

Corpus load_corpus(const Manifest& manifest) {
    Corpus corpus;
    for (const auto& e : manifest.entries)
        corpus[e.doc_id] = parse_html(read_file(e.file));
    return corpus;
}

size_t cmd_index(const Config& config) {
    auto provider = make_embedding_provider(config);
    Manifest manifest = cmd_ingest(config.corpus_dir);
    std::vector<std::pair<std::string, DocNode>> corpus;
    for (const auto& e : manifest.entries)
        corpus.emplace_back(e.doc_id, parse_html(read_file(e.file)));
    VectorIndex index = build_index(corpus, *provider, default_split_sentences,
                                    parse_policies(config.policies));
    save_index(index, config.index_path);
    return index.entries.size();
}

std::string cmd_query(const Config& config, const std::string& query, bool filter_on) {
    if (query.empty()) throw DataError("query must not be empty");
    if (config.budget_limit <= 0) throw ConfigError("budget_limit must be positive");

    VectorIndex index = load_index(config.index_path);
    Manifest manifest = cmd_ingest(config.corpus_dir);
    Corpus corpus = load_corpus(manifest);
    auto embedder = make_embedding_provider(config);
    CtxPolicies policies = parse_policies(config.policies);

    Budget budget{config.budget_limit, {}};
    std::vector<AggregatedResult> results =
        retrieve(index, corpus, *embedder, query, budget,
                 static_cast<size_t>(std::max(1, config.initial_k)), policies);
    if (!filter_on) return results_to_json(results);

    AnnotatedCorpus annotated;
    for (const auto& [doc_id, doc] : corpus) annotated[doc_id] = segment_sentences(doc);
    std::vector<FilterCandidate> candidates;
    for (const AggregatedResult& r : results)
        candidates.push_back({r.doc_id, r.merged_seed});

    auto generative = make_generative_provider(config.generative_endpoint);
    std::vector<FilterDiagnostic> diagnostics;
    Budget expand_budget{config.expand_limit, {}};
    std::vector<Citation> citations = filter_citations(
        annotated, candidates, query, expand_budget, *generative, &diagnostics, policies);

    nlohmann::json cites = nlohmann::json::array();
    for (const Citation& c : citations) {
        nlohmann::json paths = nlohmann::json::array();
        for (const Path& p : c.paths) paths.push_back(p);
        const AnnotatedDoc& doc = annotated.at(c.doc_id);
        cites.push_back({{"doc_id", c.doc_id},
                         {"paths", paths},
                         {"text", render_markdown(doc.doc, c.paths)}});
    }
    nlohmann::json diags = nlohmann::json::array();
    for (const auto& d : diagnostics) diags.push_back(d.doc_id + ": " + d.message);
    nlohmann::json out{{"query", query}, {"citations", cites}, {"diagnostics", diags}};
    return out.dump(2);
}

std::string cmd_eval(const Config& config, const std::string& results_json,
                     const std::string& query) {
    nlohmann::json results = nlohmann::json::parse(results_json, nullptr, false);
    if (results.is_discarded() || !results.contains("citations"))
        throw DataError("eval input is not a filtered query result");

    std::vector<JudgedItem> items;
    for (const auto& c : results["citations"])
        items.push_back({query.empty() ? results.value("query", "") : query,
                         c.value("doc_id", ""), c.value("text", "")});

    auto judge = make_generative_provider(config.judge_endpoint);
    EvalSummary summary = evaluate(items, *judge);

    nlohmann::json records = nlohmann::json::array();
    for (const EvalRecord& r : summary.records) {
        const char* verdict = r.verdict == Verdict::kHelpful ? "helpful"
                              : r.verdict == Verdict::kNotHelpful ? "not-helpful"
                                                                  : "invalid";
        records.push_back({{"query", r.query},
                           {"doc_id", r.doc_id},
                           {"citation", r.citation_text},
                           {"verdict", verdict},
                           {"rationale", r.rationale}});
    }
    nlohmann::json out{{"records", records},
                       {"helpful", summary.helpful},
                       {"total", summary.total},
                       {"invalid", summary.invalid},
                       {"ratio", summary.ratio}};
    return out.dump(2);
}

}  // namespace treecite

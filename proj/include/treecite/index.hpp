#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "treecite/ctx.hpp"
#include "treecite/segment.hpp"

namespace treecite {

class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IndexFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IndexVersionError : public IndexFormatError {
public:
    using IndexFormatError::IndexFormatError;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual int dimension() const = 0;
    // One vector per input, each of dimension(). Throws ProviderError.
    virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& inputs) = 0;
};

// Deterministic offline provider: a seeded hash of the input text drives a
// small RNG that fills a unit vector. Equal inputs give equal vectors.
class MockEmbeddingProvider : public EmbeddingProvider {
public:
    explicit MockEmbeddingProvider(int dim = 32, uint64_t seed = 0)
        : dim_(dim), seed_(seed) {}
    int dimension() const override { return dim_; }
    std::vector<std::vector<float>> embed(const std::vector<std::string>& inputs) override;

private:
    int dim_;
    uint64_t seed_;
};

// POSTs {"inputs": [...]} to base_url+path and expects {"vectors": [[...]]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    HttpEmbeddingProvider(std::string base_url, int dim, std::string path = "/embed")
        : base_url_(std::move(base_url)), path_(std::move(path)), dim_(dim) {}
    int dimension() const override { return dim_; }
    std::vector<std::vector<float>> embed(const std::vector<std::string>& inputs) override;

private:
    std::string base_url_;
    std::string path_;
    int dim_;
};

struct IndexEntry {
    std::string doc_id;
    PathSet seed;  // bare sentence paths, not contextualized
    std::vector<float> vector;  // L2-normalized
    std::string rendered;  // the text that was embedded, kept for audit
    bool operator==(const IndexEntry&) const = default;
};

struct VectorIndex {
    std::vector<IndexEntry> entries;
    int dim = 0;
    std::string metric = "cosine";
    bool operator==(const VectorIndex&) const = default;
};

struct ScoredEntry {
    const IndexEntry* entry = nullptr;
    float score = 0.0f;
};

// Segments each document, contextualizes every sentence seed, renders it to
// Markdown, and embeds the rendering. Stored seeds stay uncontextualized.
// Renderings longer than max_input_tokens are truncated before embedding.
VectorIndex build_index(const std::vector<std::pair<std::string, DocNode>>& corpus,
                        EmbeddingProvider& provider,
                        const SentenceSplitter& splitter = default_split_sentences,
                        const CtxPolicies& policies = {},
                        int max_input_tokens = 500);

// Top-k by cosine over normalized vectors; ties broken by (doc_id, seed).
std::vector<ScoredEntry> search(const VectorIndex& index,
                                const std::vector<float>& query_vec, size_t k);

void normalize(std::vector<float>& v);

void save_index(const VectorIndex& index, const std::string& path);
VectorIndex load_index(const std::string& path);

}  // namespace treecite

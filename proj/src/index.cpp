#include "treecite/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "treecite/render.hpp"

namespace treecite {

void normalize(std::vector<float>& v) {
    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        if (!v.empty()) v[0] = 1.0f;
        return;
    }
    for (float& x : v) x = static_cast<float>(x / norm);
}

std::vector<std::vector<float>> MockEmbeddingProvider::embed(
    const std::vector<std::string>& inputs) {
    std::vector<std::vector<float>> out;
    out.reserve(inputs.size());
    for (const std::string& text : inputs) {
        uint64_t h = 1469598103934665603ull ^ seed_;  // FNV-1a folded with the seed
        for (unsigned char c : text) {
            h ^= c;
            h *= 1099511628211ull;
        }
        std::mt19937_64 rng(h);
        std::normal_distribution<float> dist(0.0f, 1.0f);
        std::vector<float> v(static_cast<size_t>(dim_));
        for (float& x : v) x = dist(rng);
        normalize(v);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<std::vector<float>> HttpEmbeddingProvider::embed(
    const std::vector<std::string>& inputs) {
    nlohmann::json req{{"inputs", inputs}};
    httplib::Client client(base_url_);
    client.set_read_timeout(60, 0);
    auto res = client.Post(path_, req.dump(), "application/json");
    if (!res || res->status != 200)
        throw ProviderError("embedding endpoint " + base_url_ + path_ +
                            (res ? " returned status " + std::to_string(res->status)
                                 : " is unreachable"));
    nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.contains("vectors") || !body["vectors"].is_array())
        throw ProviderError("embedding endpoint returned malformed JSON");
    std::vector<std::vector<float>> out;
    for (const auto& vec : body["vectors"]) {
        std::vector<float> v = vec.get<std::vector<float>>();
        if (static_cast<int>(v.size()) != dim_)
            throw ProviderError("embedding endpoint returned dimension " +
                                std::to_string(v.size()) + ", expected " +
                                std::to_string(dim_));
        normalize(v);
        out.push_back(std::move(v));
    }
    if (out.size() != inputs.size())
        throw ProviderError("embedding endpoint returned " + std::to_string(out.size()) +
                            " vectors for " + std::to_string(inputs.size()) + " inputs");
    return out;
}

namespace {

std::string truncate_tokens(const std::string& text, int max_tokens) {
    int count = 0;
    bool in_token = false;
    for (size_t i = 0; i < text.size(); ++i) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            if (++count > max_tokens) return text.substr(0, i);
        }
    }
    return text;
}

}  // namespace

VectorIndex build_index(const std::vector<std::pair<std::string, DocNode>>& corpus,
                        EmbeddingProvider& provider, const SentenceSplitter& splitter,
                        const CtxPolicies& policies, int max_input_tokens) {
    VectorIndex index;
    index.dim = provider.dimension();

    std::vector<IndexEntry> pending;
    std::vector<std::string> texts;
    for (const auto& [doc_id, doc] : corpus) {
        AnnotatedDoc annotated = segment_sentences(doc, splitter);
        for (const SentenceId& b : annotated.sentences) {
            // Heading and title sentences are context, not content; they are
            // reinstated by contextualization, so indexing them separately
            // would only duplicate scaffolding.
            Path block(b.begin_path.begin(), b.begin_path.end() - 1);
            const DocNode& holder = node_at(annotated.doc, block);
            if (holder.is_element() &&
                (holder.tag == "title" ||
                 (holder.tag.size() == 2 && holder.tag[0] == 'h' &&
                  holder.tag[1] >= '1' && holder.tag[1] <= '6')))
                continue;
            PathSet seed = sent_paths(annotated, b);
            if (seed.empty()) continue;
            PathSet ctx = ctx_html(annotated.doc, seed, policies);
            std::string rendered = render_markdown(annotated.doc, ctx);
            if (rendered.empty()) continue;
            if (whitespace_tokens(rendered) > max_input_tokens)
                rendered = truncate_tokens(rendered, max_input_tokens);
            pending.push_back({doc_id, std::move(seed), {}, rendered});
            texts.push_back(std::move(rendered));
        }
    }
    if (!pending.empty()) {
        std::vector<std::vector<float>> vectors = provider.embed(texts);
        if (vectors.size() != pending.size())
            throw ProviderError("provider returned wrong vector count");
        for (size_t i = 0; i < pending.size(); ++i) {
            pending[i].rendered = texts[i];
            pending[i].vector = std::move(vectors[i]);
        }
    }
    index.entries = std::move(pending);
    return index;
}

std::vector<ScoredEntry> search(const VectorIndex& index,
                                const std::vector<float>& query_vec, size_t k) {
    if (static_cast<int>(query_vec.size()) != index.dim)
        throw DimensionError("query dimension " + std::to_string(query_vec.size()) +
                             " does not match index dimension " +
                             std::to_string(index.dim));
    std::vector<ScoredEntry> scored;
    scored.reserve(index.entries.size());
    for (const IndexEntry& e : index.entries) {
        double dot = 0.0;
        for (size_t i = 0; i < e.vector.size(); ++i)
            dot += static_cast<double>(e.vector[i]) * query_vec[i];
        scored.push_back({&e, static_cast<float>(dot)});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const ScoredEntry& a, const ScoredEntry& b) {
                         if (a.score != b.score) return a.score > b.score;
                         if (a.entry->doc_id != b.entry->doc_id)
                             return a.entry->doc_id < b.entry->doc_id;
                         return a.entry->seed < b.entry->seed;
                     });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

// ---------------------------------------------------------------------------
// Persistence: one JSON header line, float32 little-endian vectors, then a
// JSON entries table (doc_id, seed, rendered) in entry order.

namespace {

constexpr int kFormatVersion = 1;

nlohmann::json pathset_json(const PathSet& P) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Path& p : P) arr.push_back(p);
    return arr;
}

PathSet pathset_from_json(const nlohmann::json& arr) {
    PathSet out;
    for (const auto& p : arr) out.insert(p.get<Path>());
    return out;
}

void write_f32le(std::ostream& os, float value) {
    uint32_t bits;
    std::memcpy(&bits, &value, sizeof bits);
    unsigned char b[4] = {static_cast<unsigned char>(bits & 0xff),
                          static_cast<unsigned char>((bits >> 8) & 0xff),
                          static_cast<unsigned char>((bits >> 16) & 0xff),
                          static_cast<unsigned char>((bits >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

float read_f32le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw IndexFormatError("index file truncated in vector block");
    uint32_t bits = static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
                    (static_cast<uint32_t>(b[2]) << 16) |
                    (static_cast<uint32_t>(b[3]) << 24);
    float value;
    std::memcpy(&value, &bits, sizeof value);
    return value;
}

}  // namespace

void save_index(const VectorIndex& index, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IndexFormatError("cannot write " + tmp);
        nlohmann::json header{{"format", "treecite-index"},
                              {"version", kFormatVersion},
                              {"dim", index.dim},
                              {"metric", index.metric},
                              {"count", index.entries.size()}};
        os << header.dump() << "\n";
        for (const IndexEntry& e : index.entries)
            for (float x : e.vector) write_f32le(os, x);
        nlohmann::json entries = nlohmann::json::array();
        for (const IndexEntry& e : index.entries)
            entries.push_back({{"doc_id", e.doc_id},
                               {"seed", pathset_json(e.seed)},
                               {"rendered", e.rendered}});
        os << entries.dump();
        if (!os) throw IndexFormatError("write failure on " + tmp);
    }
    std::remove(path.c_str());
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IndexFormatError("cannot move " + tmp + " into place");
}

VectorIndex load_index(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IndexFormatError("cannot read " + path);
    std::string header_line;
    if (!std::getline(is, header_line))
        throw IndexFormatError("index file has no header");
    nlohmann::json header = nlohmann::json::parse(header_line, nullptr, false);
    if (header.is_discarded() || header.value("format", "") != "treecite-index")
        throw IndexFormatError("not an index file: bad header");
    int version = header.value("version", -1);
    if (version != kFormatVersion)
        throw IndexVersionError("index version " + std::to_string(version) +
                                " is not supported (expected " +
                                std::to_string(kFormatVersion) + ")");
    VectorIndex index;
    index.dim = header.value("dim", 0);
    index.metric = header.value("metric", "cosine");
    size_t count = header.value("count", size_t{0});

    std::vector<std::vector<float>> vectors(count);
    for (auto& v : vectors) {
        v.resize(static_cast<size_t>(index.dim));
        for (float& x : v) x = read_f32le(is);
    }
    std::string rest((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
    nlohmann::json entries = nlohmann::json::parse(rest, nullptr, false);
    if (entries.is_discarded() || !entries.is_array() || entries.size() != count)
        throw IndexFormatError("index entries table is corrupt");
    for (size_t i = 0; i < count; ++i) {
        IndexEntry e;
        e.doc_id = entries[i].value("doc_id", "");
        e.seed = pathset_from_json(entries[i]["seed"]);
        e.rendered = entries[i].value("rendered", "");
        e.vector = std::move(vectors[i]);
        index.entries.push_back(std::move(e));
    }
    return index;
}

}  // namespace treecite

#include "treecite/retrieve.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "json.hpp"

namespace treecite {

namespace {

constexpr double kFillThreshold = 0.8;
constexpr const char* kTruncationMarker = "\n\n[truncated]";

}  // namespace

std::vector<CandidateGroup> merge_candidates(const std::vector<ScoredEntry>& hits) {
    std::vector<CandidateGroup> groups;
    std::map<std::string, size_t> by_doc;
    for (size_t i = 0; i < hits.size(); ++i) {
        const IndexEntry& e = *hits[i].entry;
        int rank = static_cast<int>(i) + 1;
        auto it = by_doc.find(e.doc_id);
        if (it == by_doc.end()) {
            by_doc[e.doc_id] = groups.size();
            groups.push_back({e.doc_id, e.seed, rank});
        } else {
            CandidateGroup& g = groups[it->second];
            g.merged_seed.insert(e.seed.begin(), e.seed.end());
            g.best_rank = std::min(g.best_rank, rank);
        }
    }
    return groups;
}

std::string truncate_to_budget(const std::string& text, const Budget& budget) {
    // Greedy whitespace-token prefix measured with the budget's own sizer.
    std::string kept;
    size_t i = 0;
    while (i < text.size()) {
        size_t start = i;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        size_t word_end = i;
        while (word_end < text.size() &&
               !std::isspace(static_cast<unsigned char>(text[word_end])))
            ++word_end;
        if (word_end == i) break;
        std::string next = kept + text.substr(start, word_end - start);
        // The marker itself counts against the budget.
        if (!kept.empty() && budget.size(next + kTruncationMarker) > budget.limit)
            break;
        kept = std::move(next);
        i = word_end;
    }
    return kept + kTruncationMarker;
}

std::vector<AggregatedResult> admit_results(std::vector<AggregatedResult> ranked,
                                            int limit) {
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const AggregatedResult& a, const AggregatedResult& b) {
                         return a.best_rank < b.best_rank;
                     });
    std::vector<AggregatedResult> admitted;
    int total = 0;
    for (auto& r : ranked) {
        if (admitted.empty() && r.cost > limit) {
            // Best result alone exceeds the whole budget: admit it alone,
            // truncated, rather than returning nothing.
            r.truncated = true;
            admitted.push_back(std::move(r));
            return admitted;
        }
        if (total + r.cost > limit) continue;  // skip and keep walking the ranking
        total += r.cost;
        admitted.push_back(std::move(r));
    }
    return admitted;
}

std::vector<AggregatedResult> retrieve(const VectorIndex& index, const Corpus& corpus,
                                       EmbeddingProvider& provider,
                                       const std::string& query, const Budget& budget,
                                       size_t initial_k, const CtxPolicies& policies) {
    if (budget.limit <= 0) throw std::invalid_argument("retrieve: budget must be positive");
    if (initial_k < 1) throw std::invalid_argument("retrieve: initial_k must be >= 1");
    if (index.entries.empty()) return {};

    std::vector<float> query_vec = provider.embed({query}).at(0);
    normalize(query_vec);

    // Index seeds address the sentence-annotated trees, so contextualize and
    // render against the same coordinates. Sentinels never render.
    std::map<std::string, DocNode> annotated;
    auto annotated_doc = [&](const std::string& doc_id) -> const DocNode* {
        auto it = annotated.find(doc_id);
        if (it != annotated.end()) return &it->second;
        auto src = corpus.find(doc_id);
        if (src == corpus.end()) return nullptr;
        return &annotated.emplace(doc_id, segment_sentences(src->second).doc)
                    .first->second;
    };

    size_t k = std::min(initial_k, index.entries.size());
    for (;;) {
        std::vector<ScoredEntry> hits = search(index, query_vec, k);
        std::vector<AggregatedResult> ranked;
        for (CandidateGroup& g : merge_candidates(hits)) {
            const DocNode* doc = annotated_doc(g.doc_id);
            if (!doc) continue;
            AggregatedResult r;
            r.doc_id = g.doc_id;
            r.merged_seed = std::move(g.merged_seed);
            r.best_rank = g.best_rank;
            r.ctx_paths = ctx_html(*doc, r.merged_seed, policies);
            r.rendered = render_markdown(*doc, r.ctx_paths);
            r.cost = budget.size(r.rendered);
            ranked.push_back(std::move(r));
        }
        std::vector<AggregatedResult> admitted = admit_results(std::move(ranked), budget.limit);
        int total = 0;
        for (const auto& r : admitted) total += r.cost;

        bool prefix_exhausted = k >= index.entries.size();
        if (!prefix_exhausted &&
            total < static_cast<int>(kFillThreshold * budget.limit)) {
            k = std::min(k * 2, index.entries.size());
            continue;
        }
        for (auto& r : admitted)
            if (r.truncated) {
                r.rendered = truncate_to_budget(r.rendered, budget);
                r.cost = budget.size(r.rendered);
            }
        return admitted;
    }
}

std::string results_to_json(const std::vector<AggregatedResult>& results) {
    nlohmann::json arr = nlohmann::json::array();
    for (const AggregatedResult& r : results) {
        nlohmann::json paths = nlohmann::json::array();
        for (const Path& p : r.merged_seed) paths.push_back(p);
        arr.push_back({{"doc_id", r.doc_id},
                       {"best_rank", r.best_rank},
                       {"cost", r.cost},
                       {"truncated", r.truncated},
                       {"source_paths", paths},
                       {"rendered_markdown", r.rendered}});
    }
    return arr.dump(2);
}

}  // namespace treecite

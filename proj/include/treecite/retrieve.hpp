#pragma once

#include <map>

#include "treecite/index.hpp"
#include "treecite/render.hpp"

namespace treecite {

// Source documents by id; retrieval needs them to contextualize and render.
using Corpus = std::map<std::string, DocNode>;

struct AggregatedResult {
    std::string doc_id;
    PathSet merged_seed;  // union of member seeds
    PathSet ctx_paths;    // ctx_html of merged_seed
    std::string rendered;
    int cost = 0;
    int best_rank = 0;  // 1-based rank of the best member hit
    bool truncated = false;
};

struct CandidateGroup {
    std::string doc_id;
    PathSet merged_seed;
    int best_rank = 0;
};

// Stable group-by doc_id over a ranked hit list; seeds union, best_rank is
// the smallest member rank (1-based).
std::vector<CandidateGroup> merge_candidates(const std::vector<ScoredEntry>& hits);

// Greedy admission in best_rank order while cumulative cost stays within
// limit. A best-ranked result that alone exceeds the limit is admitted alone,
// marked for truncation; later oversize results are skipped and admission
// continues down the ranking.
std::vector<AggregatedResult> admit_results(std::vector<AggregatedResult> ranked,
                                            int limit);

// Truncates text to at most limit size units under the budget's sizer and
// appends a truncation marker.
std::string truncate_to_budget(const std::string& text, const Budget& budget);

// Embeds the query, searches a growing ranked prefix (k doubling while the
// admitted cost stays under fill_threshold of the budget), aggregates hits
// per document, and admits under the budget.
std::vector<AggregatedResult> retrieve(const VectorIndex& index, const Corpus& corpus,
                                       EmbeddingProvider& provider,
                                       const std::string& query, const Budget& budget,
                                       size_t initial_k = 8,
                                       const CtxPolicies& policies = {});

// JSON list of {doc_id, best_rank, cost, source_paths, rendered_markdown}.
std::string results_to_json(const std::vector<AggregatedResult>& results);

}  // namespace treecite

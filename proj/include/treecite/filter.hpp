#pragma once

#include <map>
#include <set>

#include "treecite/expand.hpp"
#include "treecite/render.hpp"

namespace treecite {

class GenerativeProvider {
public:
    virtual ~GenerativeProvider() = default;
    // Untrusted completion text for a prompt. Throws ProviderError.
    virtual std::string complete(const std::string& prompt) = 0;
};

class PromptParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Citation {
    std::string doc_id;
    PathSet paths;  // source-tree paths of the selected citable unit
    auto operator<=>(const Citation&) const = default;
};

struct FilterCandidate {
    std::string doc_id;
    PathSet paths;
};

struct FilterDiagnostic {
    std::string doc_id;
    std::string message;
};

// Annotated source documents by id.
using AnnotatedCorpus = std::map<std::string, AnnotatedDoc>;

// The evidence-selector template with {excerpt_md} and {query} substituted
// literally. The view must carry at least one label and the query must be
// non-empty.
std::string build_filter_prompt(const RenderedView& view, const std::string& query);

// Extracts the first JSON array of strings from raw (markdown fences
// tolerated) and keeps entries exactly matching an opening tag in `known`.
// Throws PromptParseError when no JSON array is present.
std::set<std::string> parse_label_response(const std::string& raw,
                                           const std::set<std::string>& known);

// For each candidate: expand locally, enumerate citable units (sentences, or
// whole block leaves in unsegmented documents), show a labeled view to the
// provider, and collect the units behind the labels it selects. Unparseable
// responses get one retry; failing views are skipped with a diagnostic.
// Duplicate citations are merged.
std::vector<Citation> filter_citations(const AnnotatedCorpus& corpus,
                                       const std::vector<FilterCandidate>& candidates,
                                       const std::string& query,
                                       const Budget& expand_budget,
                                       GenerativeProvider& provider,
                                       std::vector<FilterDiagnostic>* diagnostics = nullptr,
                                       const CtxPolicies& policies = {});

}  // namespace treecite

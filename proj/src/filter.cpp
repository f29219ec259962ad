#include "treecite/filter.hpp"

#include <algorithm>

#include "json.hpp"
#include "treecite/index.hpp"
#include "treecite/prompts.hpp"

namespace treecite {

namespace {

void replace_all(std::string& text, const std::string& from, const std::string& to) {
    size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
}

// Is p at or below some member of cover?
bool covered(const PathSet& cover, const Path& p) {
    for (const Path& q : cover) {
        if (q.size() > p.size()) continue;
        if (std::equal(q.begin(), q.end(), p.begin())) return true;
    }
    return false;
}

}  // namespace

std::string build_filter_prompt(const RenderedView& view, const std::string& query) {
    if (query.empty())
        throw std::invalid_argument("build_filter_prompt: empty query");
    if (view.label_map.empty())
        throw std::invalid_argument("build_filter_prompt: view has no labels");
    std::string prompt = kEvidenceSelectorTemplate;
    replace_all(prompt, "{excerpt_md}", view.text);
    replace_all(prompt, "{query}", query);
    return prompt;
}

std::set<std::string> parse_label_response(const std::string& raw,
                                           const std::set<std::string>& known) {
    // Fence-tolerant: scan for the first '[' that parses as a JSON array.
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '[') continue;
        nlohmann::json arr = nlohmann::json::parse(raw.begin() + static_cast<long>(i),
                                                   raw.end(), nullptr, false, true);
        // Accept trailing junk: reparse just the balanced bracket span.
        if (arr.is_discarded()) {
            int depth = 0;
            bool in_str = false;
            size_t end = std::string::npos;
            for (size_t j = i; j < raw.size(); ++j) {
                char c = raw[j];
                if (in_str) {
                    if (c == '\\') ++j;
                    else if (c == '"') in_str = false;
                    continue;
                }
                if (c == '"') in_str = true;
                else if (c == '[') ++depth;
                else if (c == ']' && --depth == 0) {
                    end = j;
                    break;
                }
            }
            if (end == std::string::npos) continue;
            arr = nlohmann::json::parse(raw.substr(i, end - i + 1), nullptr, false);
        }
        if (arr.is_discarded() || !arr.is_array()) continue;
        std::set<std::string> out;
        for (const auto& item : arr)
            if (item.is_string() && known.count(item.get<std::string>()))
                out.insert(item.get<std::string>());
        return out;
    }
    throw PromptParseError("no JSON array in model response");
}

std::vector<Citation> filter_citations(const AnnotatedCorpus& corpus,
                                       const std::vector<FilterCandidate>& candidates,
                                       const std::string& query,
                                       const Budget& expand_budget,
                                       GenerativeProvider& provider,
                                       std::vector<FilterDiagnostic>* diagnostics,
                                       const CtxPolicies& policies) {
    auto note = [&](const std::string& doc_id, std::string msg) {
        if (diagnostics) diagnostics->push_back({doc_id, std::move(msg)});
    };

    std::set<Citation> merged;
    for (const FilterCandidate& cand : candidates) {
        auto doc_it = corpus.find(cand.doc_id);
        if (doc_it == corpus.end()) {
            note(cand.doc_id, "unknown document");
            continue;
        }
        const AnnotatedDoc& annotated = doc_it->second;
        if (cand.paths.empty()) {
            note(cand.doc_id, "empty candidate path set");
            continue;
        }
        PathSet expanded = expand_local(annotated, cand.paths, expand_budget, policies);

        // Citable units inside the expanded view.
        std::vector<PathSet> units;
        for (const SentenceId& b : annotated.sentences) {
            PathSet members = sent_paths(annotated, b);
            bool inside = !members.empty();
            for (const Path& m : members)
                if (!covered(expanded, m)) inside = false;
            if (inside) units.push_back(std::move(members));
        }
        if (units.empty()) {
            for (const Path& bp : block_leaves(annotated.doc))
                if (covered(expanded, bp)) units.push_back(PathSet{bp});
        }
        if (units.empty()) {
            note(cand.doc_id, "no citable units in expanded view");
            continue;
        }

        RenderedView view =
            render_labeled(annotated.doc, ctx_html(annotated.doc, expanded, policies),
                           units, cand.doc_id);
        if (view.label_map.empty()) {
            note(cand.doc_id, "no unit rendered visibly; view skipped");
            continue;
        }
        std::string prompt = build_filter_prompt(view, query);
        std::set<std::string> known;
        for (const auto& [lab, paths] : view.label_map) known.insert("<" + lab + ">");

        std::set<std::string> selected;
        bool ok = false;
        for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
            std::string raw;
            try {
                raw = provider.complete(prompt);
            } catch (const std::exception& e) {
                note(cand.doc_id, std::string("provider failure: ") + e.what());
                break;
            }
            try {
                selected = parse_label_response(raw, known);
                ok = true;
            } catch (const PromptParseError& e) {
                note(cand.doc_id, std::string("unparseable response: ") + e.what());
            }
        }
        if (!ok) continue;

        for (const std::string& tag : selected) {
            std::string lab = tag.substr(1, tag.size() - 2);  // strip < >
            merged.insert({cand.doc_id, view.label_map.at(lab)});
        }
    }
    return {merged.begin(), merged.end()};
}

}  // namespace treecite

#include "treecite/expand.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace treecite {

namespace {

bool is_prefix(const Path& prefix, const Path& p) {
    if (prefix.size() > p.size()) return false;
    return std::equal(prefix.begin(), prefix.end(), p.begin());
}

int header_level(const DocNode& n) {
    if (!n.is_element() || n.tag.size() != 2 || n.tag[0] != 'h') return 0;
    if (n.tag[1] < '1' || n.tag[1] > '6') return 0;
    return n.tag[1] - '0';
}

void collect_headers(const DocNode& n, Path& cur, std::vector<std::pair<Path, int>>& out) {
    if (int lvl = header_level(n); lvl > 0) out.emplace_back(cur, lvl);
    for (size_t i = 0; i < n.children.size(); ++i) {
        cur.push_back(static_cast<int>(i));
        collect_headers(n.children[i], cur, out);
        cur.pop_back();
    }
}

std::map<int, Path> active_headers(const std::vector<std::pair<Path, int>>& headers,
                                   const Path& p) {
    std::map<int, Path> active;
    for (const auto& [hp, lvl] : headers) {
        if (!(hp < p) || is_prefix(hp, p)) continue;
        active.erase(active.lower_bound(lvl), active.end());
        active[lvl] = hp;
    }
    return active;
}

struct Sentence {
    PathSet members;
    Path block;  // enclosing block leaf
    Path pos;    // begin sentinel path, for document order
};

}  // namespace

PathSet expand_local(const AnnotatedDoc& annotated, const PathSet& seed,
                     const Budget& budget, const CtxPolicies& policies) {
    if (seed.empty()) throw std::invalid_argument("expand_local: empty seed");
    const DocNode& doc = annotated.doc;

    auto rendered_cost = [&](const PathSet& P) {
        return budget.size(render_markdown(doc, ctx_html(doc, P, policies)));
    };

    std::vector<Sentence> sentences;
    for (const SentenceId& b : annotated.sentences) {
        Sentence s;
        s.members = sent_paths(annotated, b);
        s.pos = b.begin_path;
        s.block = Path(b.begin_path.begin(), b.begin_path.end() - 1);
        sentences.push_back(std::move(s));
    }
    auto sentence_of = [&](const Path& p) -> std::optional<size_t> {
        for (size_t i = 0; i < sentences.size(); ++i)
            for (const Path& m : sentences[i].members)
                if (is_prefix(m, p)) return i;
        return std::nullopt;
    };

    // Stage 1: complete partially selected sentences.
    std::set<size_t> touched;
    PathSet completed = seed;
    for (const Path& p : seed)
        if (auto i = sentence_of(p)) {
            touched.insert(*i);
            completed.insert(sentences[*i].members.begin(), sentences[*i].members.end());
        }

    // Stage 2: the enclosing block leaves.
    PathSet with_blocks = completed;
    std::vector<Path> blocks = block_leaves(doc);
    for (const Path& p : seed)
        for (const Path& bp : blocks)
            if (is_prefix(bp, p)) with_blocks.insert(bp);
    for (size_t i : touched) with_blocks.insert(sentences[i].block);

    // Stage 3+: whole neighbor sentences, alternating after/before, starting
    // after, confined to the section of the seed's active headers.
    std::vector<std::pair<Path, int>> headers;
    {
        Path cur;
        collect_headers(doc, cur, headers);
    }
    std::optional<std::map<int, Path>> seed_active;
    for (const Path& p : seed) {  // earliest non-header member anchors activity
        bool header_ish = false;
        Path walk;
        const DocNode* n = &doc;
        if (header_level(*n) > 0) header_ish = true;
        for (int idx : p) {
            n = &n->children[static_cast<size_t>(idx)];
            if (header_level(*n) > 0) header_ish = true;
        }
        if (!header_ish) {
            seed_active = active_headers(headers, p);
            break;
        }
    }
    auto in_section = [&](const Path& pos) {
        if (!seed_active) return true;
        auto cand = active_headers(headers, pos);
        if (seed_active->empty()) return cand.empty();
        int innermost = seed_active->rbegin()->first;
        for (const auto& [lvl, hp] : *seed_active)
            if (lvl <= innermost) {
                auto it = cand.find(lvl);
                if (it == cand.end() || it->second != hp) return false;
            }
        for (const auto& [lvl, hp] : cand)
            if (lvl <= innermost && !seed_active->count(lvl)) return false;
        return true;
    };

    std::vector<PathSet> stages{completed, with_blocks};
    if (!touched.empty()) {
        long lo = static_cast<long>(*touched.begin());
        long hi = static_cast<long>(*touched.rbegin());
        PathSet cum = with_blocks;
        bool after_done = false, before_done = false;
        bool take_after = true;
        while (!after_done || !before_done) {
            long idx = -1;
            if (take_after && !after_done) {
                if (hi + 1 < static_cast<long>(sentences.size()) &&
                    in_section(sentences[static_cast<size_t>(hi + 1)].pos))
                    idx = ++hi;
                else
                    after_done = true;
            } else if (!take_after && !before_done) {
                if (lo - 1 >= 0 && in_section(sentences[static_cast<size_t>(lo - 1)].pos))
                    idx = --lo;
                else
                    before_done = true;
            }
            take_after = !take_after;
            if (idx < 0) continue;
            const Sentence& s = sentences[static_cast<size_t>(idx)];
            cum.insert(s.members.begin(), s.members.end());
            stages.push_back(cum);
        }
    }

    // Greedy prefix of stages under the budget; the seed is returned as-is
    // even when it alone exceeds the limit.
    PathSet result = seed;
    if (rendered_cost(seed) > budget.limit) return seed;
    for (const PathSet& stage : stages) {
        if (stage == result) continue;
        if (rendered_cost(stage) > budget.limit) break;
        result = stage;
    }
    return result;
}

}  // namespace treecite

#include "treecite/ctx.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace treecite {

namespace {

int header_level(const DocNode& n) {
    if (!n.is_element() || n.tag.size() != 2 || n.tag[0] != 'h') return 0;
    if (n.tag[1] < '1' || n.tag[1] > '6') return 0;
    return n.tag[1] - '0';
}

bool is_list_tag(const DocNode& n) {
    return n.is_element() && (n.tag == "ul" || n.tag == "ol");
}

bool is_cell_tag(const DocNode& n) {
    return n.is_element() && (n.tag == "td" || n.tag == "th");
}

// Nodes along the prefix chain from the root to p, inclusive.
std::vector<const DocNode*> chain_nodes(const DocNode& doc, const Path& p) {
    std::vector<const DocNode*> out;
    const DocNode* n = &doc;
    out.push_back(n);
    for (int idx : p) {
        n = &n->children[static_cast<size_t>(idx)];
        out.push_back(n);
    }
    return out;
}

std::optional<Path> find_first_tag(const DocNode& n, const std::string& tag, Path& cur) {
    if (n.is_element() && n.tag == tag) return cur;
    for (size_t i = 0; i < n.children.size(); ++i) {
        cur.push_back(static_cast<int>(i));
        auto found = find_first_tag(n.children[i], tag, cur);
        cur.pop_back();
        if (found) return found;
    }
    return std::nullopt;
}

void collect_headers(const DocNode& n, Path& cur, std::vector<std::pair<Path, int>>& out) {
    if (int lvl = header_level(n); lvl > 0) out.emplace_back(cur, lvl);
    for (size_t i = 0; i < n.children.size(); ++i) {
        cur.push_back(static_cast<int>(i));
        collect_headers(n.children[i], cur, out);
        cur.pop_back();
    }
}

bool is_prefix(const Path& prefix, const Path& p) {
    if (prefix.size() > p.size()) return false;
    return std::equal(prefix.begin(), prefix.end(), p.begin());
}

// trs of a table in document order, not descending into nested tables.
void collect_rows(const DocNode& n, Path& cur, std::vector<Path>& out, bool at_root) {
    if (!at_root && n.is_element() && n.tag == "table") return;
    if (n.is_element() && n.tag == "tr") {
        out.push_back(cur);
        return;
    }
    for (size_t i = 0; i < n.children.size(); ++i) {
        cur.push_back(static_cast<int>(i));
        collect_rows(n.children[i], cur, out, false);
        cur.pop_back();
    }
}

}  // namespace

CtxPolicies parse_policies(const std::string& spec) {
    CtxPolicies p{false, false, false, false};
    std::stringstream ss(spec);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        if (name == "title") p.title = true;
        else if (name == "headers") p.headers = true;
        else if (name == "lists") p.lists = true;
        else if (name == "tables") p.tables = true;
        else throw std::invalid_argument("unknown contextualization policy: " + name);
    }
    return p;
}

PathSet ctx_title(const DocNode& doc) {
    Path cur;
    if (auto title = find_first_tag(doc, "title", cur)) return {*title};
    if (auto h1 = find_first_tag(doc, "h1", cur)) return {*h1};
    return {};
}

PathSet ctx_headers(const DocNode& doc, const PathSet& P) {
    PathSet out = P;
    if (P.empty()) return out;
    std::vector<std::pair<Path, int>> headers;
    Path cur;
    collect_headers(doc, cur, headers);
    if (headers.empty()) return out;

    for (const Path& p : P) {
        auto chain = chain_nodes(doc, p);
        bool header_ish = false;
        for (const DocNode* n : chain)
            if (header_level(*n) > 0) header_ish = true;
        if (header_ish) continue;

        // Document order is lexicographic path order; keep the most recent
        // header per level, superseded by later headers of equal or higher
        // rank.
        std::map<int, Path> active;
        for (const auto& [hp, lvl] : headers) {
            if (!(hp < p) || is_prefix(hp, p)) continue;
            active.erase(active.lower_bound(lvl), active.end());
            active[lvl] = hp;
        }
        for (const auto& [lvl, hp] : active) out.insert(hp);
    }
    return out;
}

PathSet ctx_lists(const DocNode& doc, const PathSet& P) {
    // Only label paths are added. Enclosing li/ul/ol elements are deliberately
    // left out: materialization restores them as bare ancestors, whereas
    // putting them in the path set would descend into unselected siblings.
    PathSet out = P;
    for (const Path& p : P) {
        auto chain = chain_nodes(doc, p);
        std::vector<size_t> li_depths;
        for (size_t d = 0; d < chain.size(); ++d)
            if (chain[d]->is_element() && chain[d]->tag == "li") li_depths.push_back(d);
        if (li_depths.empty()) continue;

        size_t innermost = li_depths.back();
        // Items enclosing the innermost one contribute only their label: the
        // leading children that precede any nested sublist.
        for (size_t d : li_depths) {
            if (d == innermost) break;
            Path item(p.begin(), p.begin() + d);
            const DocNode* li = chain[d];
            for (size_t i = 0; i < li->children.size(); ++i) {
                if (is_list_tag(li->children[i])) break;
                Path child = item;
                child.push_back(static_cast<int>(i));
                out.insert(std::move(child));
            }
        }
    }
    return out;
}

PathSet ctx_tables(const DocNode& doc, const PathSet& P) {
    PathSet out = P;
    for (const Path& p : P) {
        auto chain = chain_nodes(doc, p);
        // Deepest enclosing cell, its row, and its table.
        std::optional<size_t> cell_d, row_d, table_d;
        for (size_t d = 0; d < chain.size(); ++d) {
            if (is_cell_tag(*chain[d])) cell_d = d;
            if (chain[d]->is_element() && chain[d]->tag == "tr") row_d = d;
            if (chain[d]->is_element() && chain[d]->tag == "table") table_d = d;
        }
        if (!cell_d) continue;
        Path cell(p.begin(), p.begin() + *cell_d);

        // Only the label cells themselves are added; the tr/table skeleton is
        // restored as ancestors at materialization time.
        const DocNode& cell_node = *chain[*cell_d];
        if (cell_node.tag == "th") continue;  // labels of a label are not chased
        if (!row_d || !table_d || !(*table_d < *row_d && *row_d < *cell_d)) continue;

        Path table_path(p.begin(), p.begin() + *table_d);
        Path row_path(p.begin(), p.begin() + *row_d);
        const DocNode& row = *chain[*row_d];

        // Positional column index among the row's direct cells; our cell must
        // be a direct child of the row for the scan to make sense.
        std::optional<size_t> col;
        size_t pos = 0;
        for (size_t i = 0; i < row.children.size(); ++i) {
            if (!is_cell_tag(row.children[i])) continue;
            Path cp = row_path;
            cp.push_back(static_cast<int>(i));
            if (cp == cell) col = pos;
            ++pos;
        }
        if (!col) continue;

        // Row label: leftmost th in the row.
        for (size_t i = 0; i < row.children.size(); ++i) {
            if (row.children[i].is_element() && row.children[i].tag == "th") {
                Path lp = row_path;
                lp.push_back(static_cast<int>(i));
                out.insert(lp);
                break;
            }
        }
        // Column label: topmost th at the same position.
        std::vector<Path> rows;
        {
            Path cur = table_path;
            collect_rows(node_at(doc, table_path), cur, rows, true);
        }
        for (const Path& rp : rows) {
            const DocNode& r = node_at(doc, rp);
            size_t rpos = 0;
            const DocNode* found = nullptr;
            Path found_path;
            for (size_t i = 0; i < r.children.size(); ++i) {
                if (!is_cell_tag(r.children[i])) continue;
                if (rpos == *col) {
                    found = &r.children[i];
                    found_path = rp;
                    found_path.push_back(static_cast<int>(i));
                    break;
                }
                ++rpos;
            }
            if (found && found->tag == "th" && found_path != cell) {
                out.insert(found_path);
                break;
            }
        }
    }
    return out;
}

PathSet ctx_html(const DocNode& doc, const PathSet& P, const CtxPolicies& policies) {
    // Union of the specialized policies, iterated to a fixed point. On
    // ordinary HTML one round suffices; iteration keeps the combined
    // operator idempotent when policies feed each other.
    PathSet cur = P;
    for (;;) {
        PathSet next = cur;
        if (policies.title) {
            PathSet t = ctx_title(doc);
            next.insert(t.begin(), t.end());
        }
        if (policies.headers) {
            PathSet h = ctx_headers(doc, cur);
            next.insert(h.begin(), h.end());
        }
        if (policies.lists) {
            PathSet l = ctx_lists(doc, cur);
            next.insert(l.begin(), l.end());
        }
        if (policies.tables) {
            PathSet t = ctx_tables(doc, cur);
            next.insert(t.begin(), t.end());
        }
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

}  // namespace treecite

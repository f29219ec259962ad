#include "treecite/render.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "treecite/segment.hpp"

namespace treecite {

int whitespace_tokens(const std::string& text) {
    int count = 0;
    bool in_token = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++count;
        }
    }
    return count;
}

int cost(const std::string& text, const Sizer& sizer) {
    return sizer ? sizer(text) : whitespace_tokens(text);
}

namespace {

bool is_block_tag(const DocNode& n) {
    static const std::set<std::string> kTags = {
        "address", "article", "aside", "blockquote", "body", "caption", "dd",
        "div", "dl", "dt", "fieldset", "figure", "footer", "form", "h1", "h2",
        "h3", "h4", "h5", "h6", "head", "header", "hr", "html", "li", "main",
        "nav", "ol", "p", "pre", "section", "table", "tbody", "td", "tfoot",
        "th", "thead", "title", "tr", "ul"};
    return n.is_element() && kTags.count(n.tag) > 0;
}

bool is_container_tag(const std::string& tag) {
    static const std::set<std::string> kTags = {
        "html", "head", "body", "div", "section", "article", "main", "nav",
        "aside", "header", "footer", "figure", "form", "fieldset", "dl"};
    return kTags.count(tag) > 0;
}

std::string collapse_ws(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_ws = true;
        } else {
            if (in_ws && !out.empty()) out += ' ';
            out += c;
            in_ws = false;
        }
    }
    return out;
}

std::string indent_lines(const std::string& s, const std::string& prefix) {
    std::string out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t nl = s.find('\n', start);
        std::string line = s.substr(start, nl == std::string::npos ? std::string::npos
                                                                   : nl - start);
        out += prefix + line;
        if (nl == std::string::npos) break;
        out += '\n';
        start = nl + 1;
    }
    return out;
}

struct Renderer {
    const DocNode& doc;
    const PathSet keep;  // link-completed
    const std::vector<PathSet>* units = nullptr;  // label mode when set
    std::map<std::string, PathSet>* label_map = nullptr;
    std::map<size_t, int> label_numbers;  // unit index -> assigned label N
    int next_label = 1;

    bool kept(const Path& p) const { return keep.count(p) > 0; }

    int unit_at(const Path& p, int inherited) const {
        if (!units || inherited >= 0) return inherited;
        for (size_t i = 0; i < units->size(); ++i)
            if ((*units)[i].count(p)) return static_cast<int>(i);
        return -1;
    }

    // --- inline flow ------------------------------------------------------

    struct Seg {
        int unit = -1;
        std::string raw;
    };

    void inline_raw(const Path& p, const DocNode& n, std::string& out) {
        if (n.is_text()) {
            out += n.text;
            return;
        }
        if (is_sentinel(n)) return;
        std::string inner;
        for (size_t i = 0; i < n.children.size(); ++i) {
            Path cp = p;
            cp.push_back(static_cast<int>(i));
            if (!kept(cp)) continue;
            inline_raw(cp, n.children[i], inner);
        }
        bool lead_ws = !inner.empty() && std::isspace(static_cast<unsigned char>(inner.front()));
        bool trail_ws = !inner.empty() && std::isspace(static_cast<unsigned char>(inner.back()));
        std::string body = collapse_ws(inner);
        while (!body.empty() && body.back() == ' ') body.pop_back();
        if (n.tag == "a") {
            if (body.empty()) return;
            const std::string* href = n.attr("href");
            if (lead_ws) out += ' ';
            out += "[" + body + "](" + (href ? *href : "") + ")";
            if (trail_ws) out += ' ';
        } else if (n.tag == "b" || n.tag == "strong") {
            if (body.empty()) return;
            if (lead_ws) out += ' ';
            out += "**" + body + "**";
            if (trail_ws) out += ' ';
        } else {
            out += inner;  // unknown inline tags render as their text
        }
    }

    void gather_segments(const Path& parent, const std::vector<size_t>& child_idx,
                         int inherited, std::vector<Seg>& segs) {
        const DocNode& parent_node = node_at(doc, parent);
        size_t prev = 0;
        bool have_prev = false;
        for (size_t i : child_idx) {
            // A dropped whitespace-only leaf between two kept siblings still
            // separates them in the output.
            if (have_prev) {
                for (size_t j = prev + 1; j < i; ++j) {
                    const DocNode& skipped = parent_node.children[j];
                    if (skipped.is_text() && !skipped.text.empty() &&
                        skipped.text.find_first_not_of(" \t\r\n") == std::string::npos) {
                        if (!segs.empty()) segs.push_back({segs.back().unit, " "});
                        break;
                    }
                }
            }
            prev = i;
            have_prev = true;
            Path cp = parent;
            cp.push_back(static_cast<int>(i));
            int u = unit_at(cp, inherited);
            std::string raw;
            inline_raw(cp, node_at(doc, cp), raw);
            if (raw.empty()) continue;
            if (!segs.empty() && segs.back().unit == u)
                segs.back().raw += raw;
            else
                segs.push_back({u, std::move(raw)});
        }
    }

    std::string label_open(size_t unit_index) {
        auto it = label_numbers.find(unit_index);
        int num;
        if (it == label_numbers.end()) {
            num = next_label++;
            label_numbers[unit_index] = num;
            if (label_map)
                (*label_map)["lab_" + std::to_string(num)] = (*units)[unit_index];
        } else {
            num = it->second;
        }
        return "lab_" + std::to_string(num);
    }

    // Joins per-unit runs: each run is collapsed and trimmed, labeled runs
    // get tight markers, and a single space survives at a boundary iff the
    // source had whitespace there.
    std::string assemble_inline(const Path& parent, const std::vector<size_t>& child_idx,
                                int inherited) {
        std::vector<Seg> segs;
        gather_segments(parent, child_idx, inherited, segs);
        std::string out;
        bool pending_ws = false;
        for (const Seg& seg : segs) {
            bool lead_ws = !seg.raw.empty() &&
                           std::isspace(static_cast<unsigned char>(seg.raw.front()));
            bool trail_ws = !seg.raw.empty() &&
                            std::isspace(static_cast<unsigned char>(seg.raw.back()));
            std::string body = collapse_ws(seg.raw);
            while (!body.empty() && body.front() == ' ') body.erase(body.begin());
            while (!body.empty() && body.back() == ' ') body.pop_back();
            if (body.empty()) {
                pending_ws = pending_ws || lead_ws || trail_ws || !seg.raw.empty();
                continue;
            }
            if (!out.empty() && (pending_ws || lead_ws)) out += ' ';
            if (units && seg.unit >= 0) {
                std::string lab = label_open(static_cast<size_t>(seg.unit));
                out += "<" + lab + ">" + body + "</" + lab + ">";
            } else {
                out += body;
            }
            pending_ws = trail_ws;
        }
        return out;
    }

    // --- block flow -------------------------------------------------------

    std::vector<size_t> kept_children(const Path& p, const DocNode& n) const {
        std::vector<size_t> out;
        for (size_t i = 0; i < n.children.size(); ++i) {
            Path cp = p;
            cp.push_back(static_cast<int>(i));
            if (kept(cp)) out.push_back(i);
        }
        return out;
    }

    void flush_inline(const Path& p, std::vector<size_t>& run, int inherited,
                      std::vector<std::string>& blocks) {
        if (run.empty()) return;
        std::string text = assemble_inline(p, run, inherited);
        if (!text.empty()) blocks.push_back(std::move(text));
        run.clear();
    }

    void render_container(const Path& p, const DocNode& n, int inherited,
                          std::vector<std::string>& blocks) {
        std::vector<size_t> run;
        for (size_t i : kept_children(p, n)) {
            const DocNode& c = n.children[i];
            if (is_block_tag(c)) {
                flush_inline(p, run, inherited, blocks);
                Path cp = p;
                cp.push_back(static_cast<int>(i));
                render_block(cp, c, unit_at(cp, inherited), blocks);
            } else {
                run.push_back(i);
            }
        }
        flush_inline(p, run, inherited, blocks);
    }

    std::string render_list(const Path& p, const DocNode& n, int inherited) {
        bool ordered = n.tag == "ol";
        int counter = 1;
        std::vector<std::string> lines;
        for (size_t i : kept_children(p, n)) {
            const DocNode& c = n.children[i];
            Path cp = p;
            cp.push_back(static_cast<int>(i));
            int u = unit_at(cp, inherited);
            if (c.is_element() && c.tag == "li") {
                std::string marker = ordered ? std::to_string(counter++) + ". " : "- ";
                std::vector<std::string> item_blocks;
                render_container(cp, c, u, item_blocks);
                std::string item;
                for (size_t bi = 0; bi < item_blocks.size(); ++bi) {
                    if (bi == 0) {
                        item = marker + item_blocks[0];
                    } else {
                        item += "\n" + indent_lines(item_blocks[bi], "  ");
                    }
                }
                if (item.empty()) item = marker;
                lines.push_back(std::move(item));
            } else {
                std::vector<std::string> sub;
                if (c.is_text()) {
                    std::vector<size_t> run{i};
                    flush_inline(p, run, inherited, sub);
                } else {
                    render_block(cp, c, u, sub);
                }
                for (auto& s : sub) lines.push_back(std::move(s));
            }
        }
        std::string out;
        for (size_t i = 0; i < lines.size(); ++i) {
            if (i) out += '\n';
            out += lines[i];
        }
        return out;
    }

    void collect_table_rows(const Path& p, const DocNode& n,
                            std::vector<Path>& rows) {
        for (size_t i : kept_children(p, n)) {
            const DocNode& c = n.children[i];
            Path cp = p;
            cp.push_back(static_cast<int>(i));
            if (!c.is_element()) continue;
            if (c.tag == "tr") rows.push_back(cp);
            else if (c.tag == "thead" || c.tag == "tbody" || c.tag == "tfoot")
                collect_table_rows(cp, c, rows);
        }
    }

    std::string render_table(const Path& p, const DocNode& n, int inherited) {
        std::vector<Path> rows;
        collect_table_rows(p, n, rows);
        std::vector<std::string> lines;
        bool first_has_header = false;
        size_t first_cells = 0;
        for (size_t r = 0; r < rows.size(); ++r) {
            const DocNode& row = node_at(doc, rows[r]);
            int row_unit = unit_at(rows[r], inherited);
            std::vector<std::string> cells;
            bool any_th = false;
            for (size_t i : kept_children(rows[r], row)) {
                const DocNode& c = row.children[i];
                if (!c.is_element() || (c.tag != "td" && c.tag != "th")) continue;
                Path cp = rows[r];
                cp.push_back(static_cast<int>(i));
                std::vector<size_t> all = kept_children(cp, c);
                cells.push_back(assemble_inline(cp, all, unit_at(cp, row_unit)));
                if (c.tag == "th") any_th = true;
            }
            if (cells.empty()) continue;
            std::string line = "|";
            for (const auto& cell : cells) line += " " + cell + " |";
            if (lines.empty()) {
                first_has_header = any_th;
                first_cells = cells.size();
            }
            lines.push_back(std::move(line));
        }
        if (lines.empty()) return "";
        std::string out = lines[0];
        if (lines.size() > 1 && first_has_header) {
            std::string sep = "|";
            for (size_t i = 0; i < first_cells; ++i) sep += " --- |";
            out += "\n" + sep;
        }
        for (size_t i = 1; i < lines.size(); ++i) out += "\n" + lines[i];
        return out;
    }

    void render_block(const Path& p, const DocNode& n, int inherited,
                      std::vector<std::string>& blocks) {
        if (n.is_text() || is_sentinel(n)) return;  // handled by inline runs
        const std::string& tag = n.tag;
        int u = unit_at(p, inherited);

        if (tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6') {
            std::string text = assemble_inline(p, kept_children(p, n), u);
            if (!text.empty())
                blocks.push_back(std::string(static_cast<size_t>(tag[1] - '0'), '#') +
                                 " " + text);
            return;
        }
        if (tag == "title") {
            std::string text = assemble_inline(p, kept_children(p, n), u);
            if (!text.empty()) blocks.push_back("# " + text);
            return;
        }
        if (tag == "ul" || tag == "ol") {
            std::string list = render_list(p, n, u);
            if (!list.empty()) blocks.push_back(std::move(list));
            return;
        }
        if (tag == "table") {
            std::string table = render_table(p, n, u);
            if (!table.empty()) blocks.push_back(std::move(table));
            return;
        }
        if (tag == "hr" || tag == "br") return;
        if (is_container_tag(tag)) {
            render_container(p, n, u, blocks);
            return;
        }
        // p, blockquote, caption, td-out-of-table, li-out-of-list, unknown
        // blocks: paragraphs, recursing when block children are present.
        bool has_block_child = false;
        for (size_t i : kept_children(p, n))
            if (is_block_tag(n.children[i])) has_block_child = true;
        if (has_block_child) {
            render_container(p, n, u, blocks);
        } else {
            std::string text = assemble_inline(p, kept_children(p, n), u);
            if (!text.empty()) blocks.push_back(std::move(text));
        }
    }

    std::string run() {
        std::vector<std::string> blocks;
        if (doc.is_text()) {
            blocks.push_back(collapse_ws(doc.text));
            while (!blocks.back().empty() &&
                   (blocks.back().front() == ' ' || blocks.back().back() == ' ')) {
                if (blocks.back().front() == ' ') blocks.back().erase(blocks.back().begin());
                else blocks.back().pop_back();
            }
        } else {
            render_block(Path{}, doc, unit_at(Path{}, -1), blocks);
        }
        std::string out;
        for (size_t i = 0; i < blocks.size(); ++i) {
            if (blocks[i].empty()) continue;
            if (!out.empty()) out += "\n\n";
            out += blocks[i];
        }
        return out;
    }
};

void collect_text_leaves(const DocNode& doc, const Path& root, PathSet& out) {
    const DocNode& n = node_at(doc, root);
    if (n.is_text()) {
        out.insert(root);
        return;
    }
    for (size_t i = 0; i < n.children.size(); ++i) {
        Path cp = root;
        cp.push_back(static_cast<int>(i));
        collect_text_leaves(doc, cp, out);
    }
}

}  // namespace

std::string render_markdown(const DocNode& doc, const PathSet& P) {
    if (P.empty()) return "";
    Renderer r{doc, link(doc, P)};
    return r.run();
}

RenderedView render_labeled(const DocNode& doc, const PathSet& P,
                            const std::vector<PathSet>& units, std::string origin) {
    // Units must not share text leaves.
    std::vector<PathSet> unit_leaves(units.size());
    for (size_t i = 0; i < units.size(); ++i)
        for (const Path& p : units[i])
            if (is_valid_path(doc, p)) collect_text_leaves(doc, p, unit_leaves[i]);
    for (size_t i = 0; i < units.size(); ++i)
        for (size_t j = i + 1; j < units.size(); ++j)
            for (const Path& leaf : unit_leaves[i])
                if (unit_leaves[j].count(leaf))
                    throw OverlapError("units " + std::to_string(i) + " and " +
                                       std::to_string(j) + " share text leaf " +
                                       path_to_string(leaf));

    RenderedView view;
    view.origin = std::move(origin);
    if (P.empty()) return view;
    Renderer r{doc, link(doc, P), &units, &view.label_map};
    view.text = r.run();
    return view;
}

std::string strip_labels(const std::string& text) {
    std::string out;
    for (size_t i = 0; i < text.size();) {
        if (text[i] == '<') {
            size_t j = i + 1;
            if (j < text.size() && text[j] == '/') ++j;
            if (text.compare(j, 4, "lab_") == 0) {
                size_t k = j + 4;
                while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
                if (k > j + 4 && k < text.size() && text[k] == '>') {
                    i = k + 1;
                    continue;
                }
            }
        }
        out += text[i++];
    }
    return out;
}

}  // namespace treecite

#include "treecite/doctree.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "json.hpp"

namespace treecite {

std::string path_to_string(const Path& p) {
    std::string out = "[";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(p[i]);
    }
    out += "]";
    return out;
}

// ---------------------------------------------------------------------------
// HTML parsing

namespace {

bool is_void_element(const std::string& tag) {
    static const std::set<std::string> kVoid = {
        "area", "base", "br", "col", "embed", "hr", "img", "input",
        "link", "meta", "param", "source", "track", "wbr",
        "sentence-beg", "sentence-end"};
    return kVoid.count(tag) > 0;
}

bool is_dropped_element(const std::string& tag) {
    return tag == "script" || tag == "style" || tag == "noscript" || tag == "template";
}

bool is_head_content(const std::string& tag) {
    return tag == "title" || tag == "meta" || tag == "link" || tag == "base";
}

// Tags that implicitly close an open <p>.
bool closes_p(const std::string& tag) {
    static const std::set<std::string> kBlocks = {
        "address", "article", "aside", "blockquote", "div", "dl", "fieldset",
        "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
        "header", "hr", "main", "nav", "ol", "p", "pre", "section", "table", "ul"};
    return kBlocks.count(tag) > 0;
}

void append_utf8(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size();) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        size_t semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 10) {
            out += s[i++];
            continue;
        }
        std::string_view name = s.substr(i + 1, semi - i - 1);
        if (name == "amp") out += '&';
        else if (name == "lt") out += '<';
        else if (name == "gt") out += '>';
        else if (name == "quot") out += '"';
        else if (name == "apos") out += '\'';
        else if (name == "nbsp") out += ' ';
        else if (!name.empty() && name[0] == '#') {
            uint32_t cp = 0;
            bool ok = false;
            try {
                if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X'))
                    cp = static_cast<uint32_t>(std::stoul(std::string(name.substr(2)), nullptr, 16));
                else
                    cp = static_cast<uint32_t>(std::stoul(std::string(name.substr(1))));
                ok = true;
            } catch (...) {
            }
            if (ok && cp > 0 && cp <= 0x10FFFF)
                append_utf8(out, cp);
        } else {
            out += s[i];
            i += 1;
            continue;
        }
        i = semi + 1;
    }
    return out;
}

// Collapses whitespace runs to a single space; returns empty when the input
// is whitespace only.
std::string normalize_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = false;
    bool any = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_ws = true;
        } else {
            if (in_ws && !out.empty()) out += ' ';
            else if (in_ws && out.empty()) out += ' ';
            out += c;
            in_ws = false;
            any = true;
        }
    }
    if (!any) return "";
    if (in_ws) out += ' ';
    return out;
}

struct HtmlParser {
    std::string_view src;
    size_t pos = 0;

    struct Open {
        DocNode node;
    };
    std::vector<Open> stack;
    std::vector<DocNode> top_level;

    void emit(DocNode n) {
        if (stack.empty())
            top_level.push_back(std::move(n));
        else
            stack.back().node.children.push_back(std::move(n));
    }

    void emit_text(std::string_view raw) {
        std::string decoded = decode_entities(raw);
        std::string norm = normalize_ws(decoded);
        if (norm.empty()) return;
        emit(DocNode::make_text(std::move(norm)));
    }

    void close_top() {
        Open o = std::move(stack.back());
        stack.pop_back();
        emit(std::move(o.node));
    }

    bool open_tag_on_stack(const std::string& tag) {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
            if (it->node.tag == tag) return true;
        return false;
    }

    void close_until(const std::string& tag) {
        if (!open_tag_on_stack(tag)) return;  // stray close tag
        while (!stack.empty()) {
            bool match = stack.back().node.tag == tag;
            close_top();
            if (match) break;
        }
    }

    void auto_close_for(const std::string& tag) {
        auto top = [&]() -> const std::string* {
            return stack.empty() ? nullptr : &stack.back().node.tag;
        };
        if (closes_p(tag)) {
            if (top() && *top() == "p") close_top();
        }
        if (tag == "li") {
            if (top() && *top() == "li") close_top();
        }
        if (tag == "td" || tag == "th") {
            while (top() && (*top() == "td" || *top() == "th")) close_top();
        }
        if (tag == "tr") {
            while (top() && (*top() == "td" || *top() == "th" || *top() == "tr")) close_top();
        }
    }

    static bool is_name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
    }

    void skip_raw_content(const std::string& tag) {
        // script/style content is opaque; scan for the matching close tag.
        std::string needle = "</" + tag;
        while (pos < src.size()) {
            size_t at = src.find('<', pos);
            if (at == std::string_view::npos) {
                pos = src.size();
                return;
            }
            bool match = true;
            for (size_t i = 0; i < needle.size(); ++i) {
                if (at + i >= src.size() ||
                    std::tolower(static_cast<unsigned char>(src[at + i])) != needle[i]) {
                    match = false;
                    break;
                }
            }
            if (match) {
                size_t gt = src.find('>', at);
                pos = (gt == std::string_view::npos) ? src.size() : gt + 1;
                return;
            }
            pos = at + 1;
        }
    }

    void parse_tag() {
        // pos is at '<'
        if (src.compare(pos, 4, "<!--") == 0) {
            size_t end = src.find("-->", pos + 4);
            pos = (end == std::string_view::npos) ? src.size() : end + 3;
            return;
        }
        if (pos + 1 < src.size() && (src[pos + 1] == '!' || src[pos + 1] == '?')) {
            size_t end = src.find('>', pos);
            pos = (end == std::string_view::npos) ? src.size() : end + 1;
            return;
        }
        bool closing = pos + 1 < src.size() && src[pos + 1] == '/';
        size_t i = pos + (closing ? 2 : 1);
        std::string tag;
        while (i < src.size() && is_name_char(src[i]))
            tag += static_cast<char>(std::tolower(static_cast<unsigned char>(src[i++])));
        if (tag.empty()) {
            // literal '<' in text
            emit_text(src.substr(pos, 1));
            pos += 1;
            return;
        }

        std::vector<std::pair<std::string, std::string>> attrs;
        bool self_closing = false;
        while (i < src.size() && src[i] != '>') {
            if (std::isspace(static_cast<unsigned char>(src[i]))) {
                ++i;
                continue;
            }
            if (src[i] == '/') {
                self_closing = true;
                ++i;
                continue;
            }
            std::string name;
            while (i < src.size() && src[i] != '=' && src[i] != '>' && src[i] != '/' &&
                   !std::isspace(static_cast<unsigned char>(src[i])))
                name += static_cast<char>(std::tolower(static_cast<unsigned char>(src[i++])));
            std::string value;
            while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
            if (i < src.size() && src[i] == '=') {
                ++i;
                while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
                if (i < src.size() && (src[i] == '"' || src[i] == '\'')) {
                    char q = src[i++];
                    size_t start = i;
                    while (i < src.size() && src[i] != q) ++i;
                    value = decode_entities(src.substr(start, i - start));
                    if (i < src.size()) ++i;
                } else {
                    size_t start = i;
                    while (i < src.size() && src[i] != '>' &&
                           !std::isspace(static_cast<unsigned char>(src[i])))
                        ++i;
                    value = decode_entities(src.substr(start, i - start));
                }
            }
            if (!name.empty()) attrs.emplace_back(std::move(name), std::move(value));
        }
        pos = (i < src.size()) ? i + 1 : src.size();

        if (closing) {
            close_until(tag);
            return;
        }
        if (is_dropped_element(tag)) {
            if (!self_closing) skip_raw_content(tag);
            return;
        }
        auto_close_for(tag);
        if (is_void_element(tag) || self_closing) {
            emit(DocNode::element(tag, {}, std::move(attrs)));
            return;
        }
        Open o;
        o.node = DocNode::element(tag, {}, std::move(attrs));
        stack.push_back(std::move(o));
    }

    std::vector<DocNode> run() {
        while (pos < src.size()) {
            size_t lt = src.find('<', pos);
            if (lt == std::string_view::npos) {
                emit_text(src.substr(pos));
                pos = src.size();
                break;
            }
            if (lt > pos) emit_text(src.substr(pos, lt - pos));
            pos = lt;
            parse_tag();
        }
        while (!stack.empty()) close_top();
        return std::move(top_level);
    }
};

}  // namespace

DocNode parse_html(std::string_view source) {
    // Reject interior NUL bytes; everything else is best-effort UTF-8.
    if (source.find('\0') != std::string_view::npos)
        throw EncodingError("input contains NUL bytes; not valid UTF-8 text");

    HtmlParser parser;
    parser.src = source;
    std::vector<DocNode> nodes = parser.run();

    if (nodes.size() == 1 && nodes[0].is_element() && nodes[0].tag == "html")
        return std::move(nodes[0]);

    std::vector<DocNode> head_nodes, body_nodes, direct;
    for (auto& n : nodes) {
        if (n.is_element() && (n.tag == "head" || n.tag == "body"))
            direct.push_back(std::move(n));
        else if (n.is_element() && is_head_content(n.tag))
            head_nodes.push_back(std::move(n));
        else
            body_nodes.push_back(std::move(n));
    }
    std::vector<DocNode> html_children;
    if (!head_nodes.empty())
        html_children.push_back(DocNode::element("head", std::move(head_nodes)));
    for (auto& n : direct) html_children.push_back(std::move(n));
    bool has_body = false;
    for (const auto& n : html_children)
        if (n.tag == "body") has_body = true;
    if (!has_body || !body_nodes.empty()) {
        if (!has_body) {
            html_children.push_back(DocNode::element("body", std::move(body_nodes)));
        } else {
            for (auto& c : html_children)
                if (c.tag == "body")
                    for (auto& n : body_nodes) c.children.push_back(std::move(n));
        }
    }
    return DocNode::element("html", std::move(html_children));
}

// ---------------------------------------------------------------------------
// Paths

namespace {

void collect_paths(const DocNode& node, Path& cur, PathSet& out) {
    out.insert(cur);
    for (size_t i = 0; i < node.children.size(); ++i) {
        cur.push_back(static_cast<int>(i));
        collect_paths(node.children[i], cur, out);
        cur.pop_back();
    }
}

}  // namespace

PathSet valid_paths(const DocNode& doc) {
    PathSet out;
    Path cur;
    collect_paths(doc, cur, out);
    return out;
}

const DocNode& node_at(const DocNode& doc, const Path& p) {
    const DocNode* n = &doc;
    for (int idx : p) {
        if (idx < 0 || static_cast<size_t>(idx) >= n->children.size())
            throw InvalidPathError(p);
        n = &n->children[static_cast<size_t>(idx)];
    }
    return *n;
}

bool is_valid_path(const DocNode& doc, const Path& p) {
    const DocNode* n = &doc;
    for (int idx : p) {
        if (idx < 0 || static_cast<size_t>(idx) >= n->children.size()) return false;
        n = &n->children[static_cast<size_t>(idx)];
    }
    return true;
}

PathSet up(const DocNode& doc, const PathSet& P) {
    (void)doc;
    PathSet out = P;
    for (const Path& p : P) {
        Path prefix;
        out.insert(prefix);  // the root reaches everything
        for (size_t i = 0; i + 1 < p.size(); ++i) {
            prefix.push_back(p[i]);
            out.insert(prefix);
        }
    }
    return out;
}

PathSet down(const DocNode& doc, const PathSet& P) {
    PathSet out = P;
    for (const Path& p : P) {
        const DocNode& n = node_at(doc, p);
        Path cur = p;
        collect_paths(n, cur, out);
    }
    return out;
}

PathSet link(const DocNode& doc, const PathSet& P) {
    PathSet out = up(doc, P);
    PathSet d = down(doc, P);
    out.insert(d.begin(), d.end());
    return out;
}

// ---------------------------------------------------------------------------
// Pruning

namespace {

DocNode prune_aux(const DocNode& src, const Path& r, const PathSet& keep,
                  Path& dst, std::map<Path, Path>& origin) {
    origin[dst] = r;
    if (src.is_text()) return src;
    DocNode out = DocNode::element(src.tag, {}, src.attrs);
    int next = 0;
    for (size_t i = 0; i < src.children.size(); ++i) {
        Path child_src = r;
        child_src.push_back(static_cast<int>(i));
        if (!keep.count(child_src)) continue;
        dst.push_back(next);
        out.children.push_back(prune_aux(src.children[i], child_src, keep, dst, origin));
        dst.pop_back();
        ++next;
    }
    return out;
}

}  // namespace

std::optional<Pruned> prune(const DocNode& doc, const PathSet& keep) {
    if (!keep.count(Path{})) return std::nullopt;
    Pruned result;
    Path dst;
    result.root = prune_aux(doc, Path{}, keep, dst, result.origin);
    return result;
}

Pruned subdoc(const DocNode& doc, const PathSet& P) {
    if (P.empty()) throw std::invalid_argument("subdoc: empty path set");
    auto pruned = prune(doc, link(doc, P));
    // link() always contains the root for nonempty P.
    return std::move(*pruned);
}

// ---------------------------------------------------------------------------
// JSON debugging helpers

namespace {

nlohmann::json tree_json(const DocNode& n) {
    if (n.is_text()) return nlohmann::json{{"text", n.text}};
    nlohmann::json attrs = nlohmann::json::array();
    for (const auto& [k, v] : n.attrs) attrs.push_back({k, v});
    nlohmann::json children = nlohmann::json::array();
    for (const auto& c : n.children) children.push_back(tree_json(c));
    return nlohmann::json{{"tag", n.tag}, {"attrs", attrs}, {"children", children}};
}

}  // namespace

std::string tree_to_json(const DocNode& doc) { return tree_json(doc).dump(); }

std::string pathset_to_json(const PathSet& P) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Path& p : P) arr.push_back(p);
    return arr.dump();
}

}  // namespace treecite

#include "treecite/segment.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace treecite {

namespace {

const std::set<std::string>& block_tags() {
    static const std::set<std::string> kTags = {
        "address", "article", "aside", "blockquote", "body", "caption", "dd",
        "div", "dl", "dt", "fieldset", "figure", "footer", "form", "h1", "h2",
        "h3", "h4", "h5", "h6", "header", "hr", "html", "li", "main", "nav",
        "ol", "p", "pre", "section", "table", "tbody", "td", "tfoot", "th",
        "thead", "tr", "ul"};
    return kTags;
}

const std::set<std::string>& block_leaf_candidates() {
    static const std::set<std::string> kTags = {
        "p", "li", "td", "th", "h1", "h2", "h3", "h4", "h5", "h6",
        "blockquote", "caption"};
    return kTags;
}

bool has_block_descendant(const DocNode& n) {
    for (const DocNode& c : n.children) {
        if (c.is_element() && block_tags().count(c.tag)) return true;
        if (has_block_descendant(c)) return true;
    }
    return false;
}

void collect_block_leaves(const DocNode& n, Path& cur, std::vector<Path>& out) {
    if (n.is_element() && block_leaf_candidates().count(n.tag) &&
        !has_block_descendant(n)) {
        out.push_back(cur);
        return;
    }
    for (size_t i = 0; i < n.children.size(); ++i) {
        cur.push_back(static_cast<int>(i));
        collect_block_leaves(n.children[i], cur, out);
        cur.pop_back();
    }
}

void concat_text(const DocNode& n, std::string& out) {
    if (n.is_text()) {
        out += n.text;
        return;
    }
    for (const DocNode& c : n.children) concat_text(c, out);
}

bool has_text(const DocNode& n) {
    if (n.is_text()) return !n.text.empty();
    for (const DocNode& c : n.children)
        if (has_text(c)) return true;
    return false;
}

}  // namespace

bool is_sentinel(const DocNode& n) {
    return n.is_element() && (n.tag == kSentenceBegTag || n.tag == kSentenceEndTag);
}

std::vector<Path> block_leaves(const DocNode& doc) {
    std::vector<Path> out;
    Path cur;
    collect_block_leaves(doc, cur, out);
    return out;
}

// ---------------------------------------------------------------------------
// Default splitter

namespace {

bool is_abbreviation(const std::string& text, size_t dot) {
    static const std::set<std::string> kAbbrev = {
        "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc",
        "e.g", "i.e", "approx", "dept", "est", "fig", "vol", "cf", "al"};
    // Token immediately before the terminator, dots included (handles e.g.).
    size_t end = dot;
    size_t start = end;
    while (start > 0) {
        char c = text[start - 1];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.')
            --start;
        else
            break;
    }
    if (start == end) return false;
    std::string token;
    for (size_t i = start; i < end; ++i)
        token += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
    while (!token.empty() && token.front() == '.') token.erase(token.begin());
    return kAbbrev.count(token) > 0;
}

}  // namespace

std::vector<Span> default_split_sentences(const std::string& text) {
    std::vector<Span> spans;
    const size_t n = text.size();
    auto is_ws = [&](size_t i) {
        return std::isspace(static_cast<unsigned char>(text[i])) != 0;
    };

    size_t start = 0;
    while (start < n && is_ws(start)) ++start;
    size_t i = start;
    while (i < n) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            size_t term = i;
            size_t e = i;
            while (e < n && (text[e] == '.' || text[e] == '!' || text[e] == '?')) ++e;
            while (e < n && (text[e] == '"' || text[e] == '\'' || text[e] == ')' ||
                             text[e] == ']'))
                ++e;
            bool at_end = e >= n;
            bool followed_by_ws = !at_end && is_ws(e);
            bool abbrev = c == '.' && is_abbreviation(text, term);
            if ((at_end || followed_by_ws) && !abbrev && e > start) {
                spans.push_back({start, e});
                start = e;
                while (start < n && is_ws(start)) ++start;
                i = start;
                continue;
            }
            i = e;
            continue;
        }
        ++i;
    }
    // Trailing material without terminal punctuation forms a final sentence.
    size_t last = n;
    while (last > start && std::isspace(static_cast<unsigned char>(text[last - 1]))) --last;
    if (last > start) spans.push_back({start, last});
    return spans;
}

// ---------------------------------------------------------------------------
// Sentinel insertion

namespace {

struct Boundary {
    size_t pos;
    bool begin;  // begin sentinel vs end sentinel
};

void annotate_block(DocNode& block, const SentenceSplitter& splitter) {
    for (const DocNode& c : block.children)
        if (is_sentinel(c)) return;  // already annotated

    std::vector<size_t> lens;
    std::string full;
    for (const DocNode& c : block.children) {
        std::string t;
        concat_text(c, t);
        lens.push_back(t.size());
        full += t;
    }
    if (full.empty()) return;

    std::vector<Span> spans = splitter(full);
    if (spans.empty()) return;
    size_t prev_end = 0;
    for (const Span& s : spans) {
        if (s.begin > s.end || s.end > full.size() || s.begin < prev_end)
            throw SpanMappingError("splitter returned overlapping or out-of-range spans");
        prev_end = s.end;
    }

    // Child offset table.
    std::vector<size_t> cum(block.children.size() + 1, 0);
    for (size_t i = 0; i < lens.size(); ++i) cum[i + 1] = cum[i] + lens[i];

    // A boundary strictly inside an inline element snaps forward to the
    // element's end, so the whole element lands in the earlier sentence.
    auto snap = [&](size_t b) {
        for (size_t i = 0; i < block.children.size(); ++i) {
            if (b > cum[i] && b < cum[i + 1] && !block.children[i].is_text())
                return cum[i + 1];
        }
        return b;
    };
    std::vector<Boundary> events;
    size_t last = 0;
    for (Span s : spans) {
        size_t b = std::max(snap(s.begin), last);
        size_t e = std::max(snap(s.end), b);
        if (b >= e) continue;
        events.push_back({b, true});
        events.push_back({e, false});
        last = e;
    }
    if (events.empty()) return;

    std::vector<DocNode> rebuilt;
    size_t ei = 0;
    size_t at = 0;
    auto emit_sentinel = [&](bool begin) {
        rebuilt.push_back(DocNode::element(begin ? kSentenceBegTag : kSentenceEndTag));
    };
    for (size_t ci = 0; ci < block.children.size(); ++ci) {
        DocNode& child = block.children[ci];
        size_t len = lens[ci];
        while (ei < events.size() && events[ei].pos <= at) emit_sentinel(events[ei++].begin);
        if (child.is_text()) {
            size_t off = 0;
            while (ei < events.size() && events[ei].pos < at + len) {
                size_t rel = events[ei].pos - at;
                if (rel > off)
                    rebuilt.push_back(DocNode::make_text(child.text.substr(off, rel - off)));
                emit_sentinel(events[ei++].begin);
                off = rel;
            }
            if (off < len) rebuilt.push_back(DocNode::make_text(child.text.substr(off)));
            else if (len == 0) rebuilt.push_back(std::move(child));
        } else {
            rebuilt.push_back(std::move(child));
        }
        at += len;
    }
    while (ei < events.size()) emit_sentinel(events[ei++].begin);
    block.children = std::move(rebuilt);
}

void collect_sentence_ids(const DocNode& n, Path& cur, std::vector<SentenceId>& out) {
    if (n.is_element() && n.tag == kSentenceBegTag) {
        out.push_back({cur});
        return;
    }
    for (size_t i = 0; i < n.children.size(); ++i) {
        cur.push_back(static_cast<int>(i));
        collect_sentence_ids(n.children[i], cur, out);
        cur.pop_back();
    }
}

}  // namespace

AnnotatedDoc segment_sentences(const DocNode& doc, const SentenceSplitter& splitter) {
    AnnotatedDoc out;
    out.doc = doc;
    std::vector<Path> blocks = block_leaves(out.doc);
    if (blocks.empty() && has_text(out.doc)) blocks.push_back(Path{});
    for (const Path& bp : blocks) {
        DocNode* n = &out.doc;
        for (int idx : bp) n = &n->children[static_cast<size_t>(idx)];
        annotate_block(*n, splitter);
    }
    Path cur;
    collect_sentence_ids(out.doc, cur, out.sentences);
    return out;
}

PathSet sent_paths(const AnnotatedDoc& annotated, const SentenceId& b) {
    const Path& p = b.begin_path;
    if (p.empty() || !is_valid_path(annotated.doc, p))
        throw UnknownSentenceError("unknown sentence " + path_to_string(p));
    const DocNode& beg = node_at(annotated.doc, p);
    if (!beg.is_element() || beg.tag != kSentenceBegTag)
        throw UnknownSentenceError("no begin sentinel at " + path_to_string(p));
    Path parent(p.begin(), p.end() - 1);
    const DocNode& block = node_at(annotated.doc, parent);
    size_t i = static_cast<size_t>(p.back());
    PathSet out;
    for (size_t j = i + 1; j < block.children.size(); ++j) {
        const DocNode& c = block.children[j];
        if (c.is_element() && c.tag == kSentenceEndTag) return out;
        Path member = parent;
        member.push_back(static_cast<int>(j));
        out.insert(std::move(member));
    }
    throw UnknownSentenceError("unterminated sentence at " + path_to_string(p));
}

DocNode strip_sentinels(const DocNode& doc) {
    if (doc.is_text()) return doc;
    DocNode out = DocNode::element(doc.tag, {}, doc.attrs);
    for (const DocNode& c : doc.children) {
        if (is_sentinel(c)) continue;
        DocNode stripped = strip_sentinels(c);
        if (stripped.is_text() && !out.children.empty() && out.children.back().is_text())
            out.children.back().text += stripped.text;
        else
            out.children.push_back(std::move(stripped));
    }
    return out;
}

}  // namespace treecite

#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treecite {

// A path addresses one node: the list of 0-based child indices walked from
// the root. The empty path is the root itself.
using Path = std::vector<int>;
using PathSet = std::set<Path>;

std::string path_to_string(const Path& p);

class InvalidPathError : public std::runtime_error {
public:
    explicit InvalidPathError(const Path& p)
        : std::runtime_error("invalid path " + path_to_string(p)) {}
};

class EncodingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable document tree: a text leaf or an element with tag, ordered
// attributes and ordered children. Trees are plain values; every operation
// below returns a new value.
struct DocNode {
    enum class Kind { Text, Element };

    Kind kind = Kind::Element;
    std::string text;  // Kind::Text only
    std::string tag;   // Kind::Element only
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<DocNode> children;

    static DocNode make_text(std::string s) {
        DocNode n;
        n.kind = Kind::Text;
        n.text = std::move(s);
        return n;
    }

    static DocNode element(std::string tag, std::vector<DocNode> children = {},
                           std::vector<std::pair<std::string, std::string>> attrs = {}) {
        DocNode n;
        n.kind = Kind::Element;
        n.tag = std::move(tag);
        n.attrs = std::move(attrs);
        n.children = std::move(children);
        return n;
    }

    bool is_text() const { return kind == Kind::Text; }
    bool is_element() const { return kind == Kind::Element; }

    const std::string* attr(std::string_view name) const {
        for (const auto& [k, v] : attrs)
            if (k == name) return &v;
        return nullptr;
    }

    bool operator==(const DocNode&) const = default;
};

// Best-effort HTML parsing. Scripts, styles, comments and processing
// instructions are dropped; whitespace-only text leaves are removed and
// inner whitespace runs collapse to a single space. The result is always
// rooted at an "html" element.
DocNode parse_html(std::string_view source);

// Every valid path of the tree, root included.
PathSet valid_paths(const DocNode& doc);

// Subtree at p; throws InvalidPathError when p does not address a node.
const DocNode& node_at(const DocNode& doc, const Path& p);

bool is_valid_path(const DocNode& doc, const Path& p);

// Ancestor completion: P plus all proper prefixes of members of P.
PathSet up(const DocNode& doc, const PathSet& P);

// Descendant completion: P plus all valid descendants of members of P.
PathSet down(const DocNode& doc, const PathSet& P);

// up(P) ∪ down(P).
PathSet link(const DocNode& doc, const PathSet& P);

// A materialized extraction. Pruning re-indexes surviving children densely,
// so each node carries its origin path back into the source tree; citations
// are always reported in source-tree paths.
struct Pruned {
    DocNode root;
    std::map<Path, Path> origin;  // pruned-tree path -> source-tree path
};

// Keeps exactly the nodes whose paths are in `keep`; absent when the root
// itself is not kept.
std::optional<Pruned> prune(const DocNode& doc, const PathSet& keep);

// prune(doc, link(doc, P)): the smallest well-formed tree containing every
// node of P. Requires P nonempty.
Pruned subdoc(const DocNode& doc, const PathSet& P);

// Debug/golden-test serialization. Paths serialize as JSON integer arrays.
std::string tree_to_json(const DocNode& doc);
std::string pathset_to_json(const PathSet& P);

}  // namespace treecite

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "treecite/doctree.hpp"

namespace treecite {

// Deterministic text size function; the default counts whitespace-separated
// tokens.
using Sizer = std::function<int(const std::string&)>;

int whitespace_tokens(const std::string& text);
int cost(const std::string& text, const Sizer& sizer = {});

// Target rendered size for budgeted operations.
struct Budget {
    int limit = 1000;
    Sizer size_of;  // empty -> whitespace tokens

    int size(const std::string& text) const { return cost(text, size_of); }
};

// Materializes subdoc(doc, P) and serializes it as Markdown: h1-h6 become
// "#" headings, ul/ol become list items, a becomes [text](href), b/strong
// become **...**, tables become pipe rows restricted to the selected cells.
// Sentinels never appear in the output; unknown inline tags render as their
// text, unknown block tags as paragraphs.
std::string render_markdown(const DocNode& doc, const PathSet& P);

struct RenderedView {
    std::string text;
    std::map<std::string, PathSet> label_map;  // "lab_N" -> source-tree paths
    std::string origin;                        // document id
};

class OverlapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Like render_markdown, but wraps the text of each unit with <lab_N> ...
// </lab_N>, numbering units 1.. in document order. Markers are injected on
// the fly; the tree is not modified, and stripping the markers yields
// exactly render_markdown(doc, P). Units must be pairwise disjoint on text
// leaves.
RenderedView render_labeled(const DocNode& doc, const PathSet& P,
                            const std::vector<PathSet>& units,
                            std::string origin = "");

// Removes <lab_N>/</lab_N> markers.
std::string strip_labels(const std::string& text);

}  // namespace treecite

#pragma once

#include <compare>
#include <functional>
#include <string>
#include <vector>

#include "treecite/doctree.hpp"

namespace treecite {

inline constexpr const char* kSentenceBegTag = "sentence-beg";
inline constexpr const char* kSentenceEndTag = "sentence-end";

// Half-open character span [begin, end) into a rendered block text.
struct Span {
    size_t begin = 0;
    size_t end = 0;
    bool operator==(const Span&) const = default;
};

// Maps a block's inline text to ordered, non-overlapping sentence spans.
using SentenceSplitter = std::function<std::vector<Span>(const std::string&)>;

// Rule-based default: terminal punctuation plus a small abbreviation list.
std::vector<Span> default_split_sentences(const std::string& text);

class SpanMappingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownSentenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Identifies a sentence by the path of its begin sentinel in the annotated
// tree.
struct SentenceId {
    Path begin_path;
    auto operator<=>(const SentenceId&) const = default;
};

struct AnnotatedDoc {
    DocNode doc;  // with sentinel elements inserted
    std::vector<SentenceId> sentences;  // document order
};

// Paths of the block-leaf elements: block-level containers (p, li, td, th,
// h1-h6, blockquote, caption) without block-level descendants, in document
// order.
std::vector<Path> block_leaves(const DocNode& doc);

// Inserts <sentence-beg/> / <sentence-end/> pairs at sentence boundaries of
// every block leaf. Content is never reparented or duplicated; splitting a
// text leaf at a boundary preserves the concatenated text. Idempotent on
// already-annotated trees. A document without block leaves is segmented as
// one root-level block so every document stays indexable.
AnnotatedDoc segment_sentences(const DocNode& doc,
                               const SentenceSplitter& splitter = default_split_sentences);

// Seed path set of sentence b: the nodes between its begin and end sentinels
// (direct children of the block leaf).
PathSet sent_paths(const AnnotatedDoc& annotated, const SentenceId& b);

// Removes sentinel elements and merges text leaves that become adjacent.
DocNode strip_sentinels(const DocNode& doc);

bool is_sentinel(const DocNode& n);

}  // namespace treecite

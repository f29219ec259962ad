#pragma once

#include <optional>
#include <string>

#include "treecite/doctree.hpp"

namespace treecite {

// Which enrichment policies participate in ctx_html.
struct CtxPolicies {
    bool title = true;
    bool headers = true;
    bool lists = true;
    bool tables = true;
};

// Parses a "title,headers,lists,tables" style toggle list; unknown names
// throw std::invalid_argument.
CtxPolicies parse_policies(const std::string& spec);

// {path of <title>} if present, else {path of first h1 in document order},
// else {}.
PathSet ctx_title(const DocNode& doc);

// Adds the headers (h1-h6) active immediately before each member of P under
// document-order scoping: a later header supersedes earlier headers of equal
// or lower rank. Members that are themselves headers (or sit inside one) add
// nothing, which keeps the operator idempotent.
PathSet ctx_headers(const DocNode& doc, const PathSet& P);

// For each member enclosed in li items: adds the label of every item outside
// the innermost one, i.e. the children preceding any nested ul/ol. Only label
// paths are added — the li/ul/ol skeleton reappears as ancestors when the set
// is materialized, so unselected sibling items are never rendered.
PathSet ctx_lists(const DocNode& doc, const PathSet& P);

// For each member inside a td cell: adds the leftmost header cell of the row
// and the topmost header cell of the column (positional scan, colspan and
// rowspan ignored). Header-cell members gain nothing (labels of a label are
// not chased); other data cells are never added.
PathSet ctx_tables(const DocNode& doc, const PathSet& P);

// HTML-aware enrichment: the union of the four policies, iterated to a fixed
// point so the combined operator is idempotent even when policies interact
// (for instance a header sitting inside a list item).
PathSet ctx_html(const DocNode& doc, const PathSet& P, const CtxPolicies& policies = {});

}  // namespace treecite

#pragma once

#include <string>

#include "treecite/doctree.hpp"

namespace fixtures {

// The tiny HTML document: a section with a heading and two paragraphs.
inline const char* kTinyHtml = R"(<html>
  <body>
    <section>
      <h1>Title</h1>
      <p>First paragraph.</p>
      <p>Second paragraph.</p>
    </section>
  </body>
</html>)";

// The same tree built by hand for parser-independent checks.
inline treecite::DocNode tiny_tree() {
    using treecite::DocNode;
    return DocNode::element(
        "html",
        {DocNode::element(
            "body",
            {DocNode::element(
                "section",
                {DocNode::element("h1", {DocNode::make_text("Title")}),
                 DocNode::element("p", {DocNode::make_text("First paragraph.")}),
                 DocNode::element("p", {DocNode::make_text("Second paragraph.")})})})});
}

// Two-sentence paragraph under a section header, with a link inside the
// second sentence.
inline const char* kAdaHtml =
    "<section><h2>Background</h2>"
    "<p>Ada Lovelace wrote the first algorithm. "
    "<a href=\"https://example.org/notes\">Her notes</a> described the Analytical "
    "Engine.</p></section>";

// Nested list: an outer item labeled "Lunch" containing a sublist.
inline const char* kLunchHtml =
    "<ol><li>Lunch<ul><li>Sandwich</li><li>Salad</li></ul></li></ol>";

}  // namespace fixtures

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/fixtures.hpp"
#include "support/random_tree.hpp"
#include "treecite/doctree.hpp"

using namespace treecite;

namespace {

int count_nodes(const DocNode& n) {
    int c = 1;
    for (const auto& ch : n.children) c += count_nodes(ch);
    return c;
}

PathSet paths(std::initializer_list<Path> ps) { return PathSet(ps); }

}  // namespace

TEST_CASE("parse_html: tiny document matches the hand-built tree") {
    DocNode doc = parse_html(fixtures::kTinyHtml);
    CHECK(doc == fixtures::tiny_tree());
    CHECK(node_at(doc, {0, 0, 1, 0}) == DocNode::make_text("First paragraph."));
}

TEST_CASE("parse_html: empty input normalizes to a bare html element") {
    DocNode doc = parse_html("");
    CHECK(doc == DocNode::element("html", {DocNode::element("body", {})}));
}

TEST_CASE("parse_html: top-level paragraphs live under a synthesized body") {
    DocNode doc = parse_html("<p>a</p><p>b</p>");
    // body is child i of html; the two p's are its children 0 and 1.
    int body = -1;
    for (size_t i = 0; i < doc.children.size(); ++i)
        if (doc.children[i].tag == "body") body = static_cast<int>(i);
    REQUIRE(body >= 0);
    const DocNode& b = doc.children[static_cast<size_t>(body)];
    REQUIRE(b.children.size() == 2);
    CHECK(b.children[0].tag == "p");
    CHECK(b.children[1].tag == "p");
    CHECK(node_at(doc, {body, 0, 0}).text == "a");
    CHECK(node_at(doc, {body, 1, 0}).text == "b");
}

TEST_CASE("parse_html: scripts, styles and comments are dropped") {
    DocNode doc = parse_html(
        "<html><body><script>var x = '<p>nope</p>';</script>"
        "<!-- comment --><style>p { color: red }</style><p>kept</p></body></html>");
    REQUIRE(doc.children.size() == 1);
    REQUIRE(doc.children[0].children.size() == 1);
    CHECK(doc.children[0].children[0].tag == "p");
}

TEST_CASE("parse_html: entities and attributes") {
    DocNode doc = parse_html("<p><a href=\"x?a=1&amp;b=2\" id=z>A &lt;tag&gt; &amp; more</a></p>");
    const DocNode& a = node_at(doc, {0, 0, 0});
    REQUIRE(a.tag == "a");
    CHECK(*a.attr("href") == "x?a=1&b=2");
    CHECK(*a.attr("id") == "z");
    CHECK(a.children[0].text == "A <tag> & more");
}

TEST_CASE("parse_html: malformed input still yields a tree") {
    DocNode doc = parse_html("<div><p>unclosed<li>stray</div> tail");
    CHECK(count_nodes(doc) > 1);
    std::string nul = "bad";
    nul += '\0';
    CHECK_THROWS_AS(parse_html(nul), EncodingError);
}

TEST_CASE("valid_paths: tiny tree lists exactly the annotated paths") {
    DocNode doc = fixtures::tiny_tree();
    PathSet expected = paths({{},
                              {0},
                              {0, 0},
                              {0, 0, 0},
                              {0, 0, 0, 0},
                              {0, 0, 1},
                              {0, 0, 1, 0},
                              {0, 0, 2},
                              {0, 0, 2, 0}});
    CHECK(valid_paths(doc) == expected);
}

TEST_CASE("valid_paths: leaf-only tree and node-count oracle") {
    CHECK(valid_paths(DocNode::make_text("x")) == paths({{}}));
    testgen::TreeGen gen(7);
    for (int i = 0; i < 50; ++i) {
        DocNode t = gen.tree(40);
        CHECK(static_cast<int>(valid_paths(t).size()) == count_nodes(t));
    }
}

TEST_CASE("node_at: identity at the root, error off the tree") {
    DocNode doc = fixtures::tiny_tree();
    CHECK(node_at(doc, {}) == doc);
    CHECK_THROWS_AS(node_at(doc, {0, 0, 3}), InvalidPathError);
}

TEST_CASE("up/down/link: the worked example on the tiny tree") {
    DocNode doc = fixtures::tiny_tree();
    CHECK(up(doc, paths({{0, 0, 1}})) == paths({{}, {0}, {0, 0}, {0, 0, 1}}));
    CHECK(down(doc, paths({{0, 0, 1}})) == paths({{0, 0, 1}, {0, 0, 1, 0}}));
    CHECK(link(doc, paths({{0, 0, 1}})) ==
          paths({{}, {0}, {0, 0}, {0, 0, 1}, {0, 0, 1, 0}}));
    CHECK(up(doc, {}) == PathSet{});
    CHECK(down(doc, paths({{0, 0, 1, 0}})) == paths({{0, 0, 1, 0}}));
    CHECK(up(doc, paths({{}})) == paths({{}}));
    CHECK(down(doc, paths({{}})) == valid_paths(doc));
    CHECK(link(doc, {}) == PathSet{});
}

TEST_CASE("up/down: extensive, monotone, idempotent on random trees") {
    testgen::TreeGen gen(11);
    for (int i = 0; i < 200; ++i) {
        DocNode t = gen.tree(30);
        PathSet p = gen.random_subset(t);
        PathSet q = gen.random_subset(t);
        PathSet pq = p;
        pq.insert(q.begin(), q.end());
        for (auto f : {up, down, link}) {
            PathSet fp = f(t, p);
            CHECK(std::includes(fp.begin(), fp.end(), p.begin(), p.end()));
            PathSet fpq = f(t, pq);
            CHECK(std::includes(fpq.begin(), fpq.end(), fp.begin(), fp.end()));
        }
        CHECK(up(t, up(t, p)) == up(t, p));
        CHECK(down(t, down(t, p)) == down(t, p));
        // link itself is deliberately not closure-iterated: linking the added
        // ancestors again would sweep in their other descendants.
    }
}

TEST_CASE("prune: keep both paragraphs, drop the heading") {
    DocNode doc = fixtures::tiny_tree();
    PathSet keep = paths({{}, {0}, {0, 0}, {0, 0, 1}, {0, 0, 1, 0}, {0, 0, 2}, {0, 0, 2, 0}});
    auto result = prune(doc, keep);
    REQUIRE(result.has_value());
    DocNode expected = DocNode::element(
        "html",
        {DocNode::element(
            "body",
            {DocNode::element(
                "section",
                {DocNode::element("p", {DocNode::make_text("First paragraph.")}),
                 DocNode::element("p", {DocNode::make_text("Second paragraph.")})})})});
    CHECK(result->root == expected);
    // Surviving children are re-indexed; origin paths point back at the source.
    CHECK(result->origin.at({0, 0, 1}) == Path{0, 0, 2});
}

TEST_CASE("prune: missing ancestor collapses the subtree") {
    DocNode doc = fixtures::tiny_tree();
    auto result = prune(doc, paths({{}, {0}, {0, 0, 1}, {0, 0, 1, 0}}));
    REQUIRE(result.has_value());
    CHECK(result->root ==
          DocNode::element("html", {DocNode::element("body", {})}));
}

TEST_CASE("prune: empty keep set yields no tree") {
    CHECK(!prune(fixtures::tiny_tree(), {}).has_value());
}

TEST_CASE("prune with all paths is the identity") {
    testgen::TreeGen gen(13);
    for (int i = 0; i < 50; ++i) {
        DocNode t = gen.tree(30);
        auto result = prune(t, valid_paths(t));
        REQUIRE(result.has_value());
        CHECK(result->root == t);
    }
}

TEST_CASE("subdoc: title plus second paragraph") {
    DocNode doc = fixtures::tiny_tree();
    Pruned sd = subdoc(doc, paths({{0, 0, 0, 0}, {0, 0, 2, 0}}));
    DocNode expected = DocNode::element(
        "html",
        {DocNode::element(
            "body",
            {DocNode::element(
                "section",
                {DocNode::element("h1", {DocNode::make_text("Title")}),
                 DocNode::element("p", {DocNode::make_text("Second paragraph.")})})})});
    CHECK(sd.root == expected);
}

TEST_CASE("subdoc: root selection copies the document; single paragraph isolates it") {
    DocNode doc = fixtures::tiny_tree();
    CHECK(subdoc(doc, paths({{}})).root == doc);
    Pruned one = subdoc(doc, paths({{0, 0, 1}}));
    DocNode expected = DocNode::element(
        "html",
        {DocNode::element(
            "body",
            {DocNode::element(
                "section",
                {DocNode::element("p", {DocNode::make_text("First paragraph.")})})})});
    CHECK(one.root == expected);
    CHECK_THROWS_AS(subdoc(doc, {}), std::invalid_argument);
}

TEST_CASE("subdoc preserves selected nodes through the origin map") {
    testgen::TreeGen gen(17);
    for (int i = 0; i < 100; ++i) {
        DocNode t = gen.tree(40);
        PathSet p = gen.random_subset(t);
        if (p.empty()) continue;
        Pruned sd = subdoc(t, p);
        PathSet linked = link(t, p);
        // Invert the origin map and find every selected node.
        std::map<Path, Path> inverse;
        for (const auto& [dst, src] : sd.origin) inverse[src] = dst;
        for (const Path& sel : p) {
            REQUIRE(inverse.count(sel));
            const DocNode& a = node_at(t, sel);
            const DocNode& b = node_at(sd.root, inverse[sel]);
            CHECK(a.kind == b.kind);
            CHECK(a.tag == b.tag);
            CHECK(a.text == b.text);
        }
        CHECK(sd.origin.size() == linked.size());
        // Determinism.
        CHECK(subdoc(t, p).root == sd.root);
    }
}

TEST_CASE("node_at composes with child indexing") {
    testgen::TreeGen gen(19);
    DocNode t = gen.tree(40);
    for (const Path& p : valid_paths(t)) {
        const DocNode& n = node_at(t, p);
        for (size_t i = 0; i < n.children.size(); ++i) {
            Path c = p;
            c.push_back(static_cast<int>(i));
            CHECK(node_at(t, c) == n.children[i]);
        }
    }
}

TEST_CASE("json serialization of trees and path sets") {
    CHECK(pathset_to_json({{0, 0, 1}, {}}) == "[[],[0,0,1]]");
    CHECK(tree_to_json(DocNode::make_text("x")) == R"({"text":"x"})");
    CHECK(tree_to_json(DocNode::element("p", {DocNode::make_text("a")})) ==
          R"({"attrs":[],"children":[{"text":"a"}],"tag":"p"})");
}

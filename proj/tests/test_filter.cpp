#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "support/fixtures.hpp"
#include "treecite/filter.hpp"
#include "treecite/pipeline.hpp"

using namespace treecite;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

// Replays a fixed sequence of completions.
class ScriptedProvider : public GenerativeProvider {
public:
    explicit ScriptedProvider(std::vector<std::string> responses)
        : responses_(std::move(responses)) {}
    std::string complete(const std::string&) override {
        REQUIRE(next_ < responses_.size());
        return responses_[next_++];
    }
    size_t calls() const { return next_; }

private:
    std::vector<std::string> responses_;
    size_t next_ = 0;
};

class ThrowingProvider : public GenerativeProvider {
public:
    std::string complete(const std::string&) override {
        throw ProviderError("backend unreachable");
    }
};

RenderedView ada_view(const AnnotatedDoc& annotated) {
    std::vector<PathSet> units = {sent_paths(annotated, annotated.sentences[1]),
                                  sent_paths(annotated, annotated.sentences[2])};
    PathSet all;
    for (const PathSet& u : units) all.insert(u.begin(), u.end());
    return render_labeled(annotated.doc, ctx_html(annotated.doc, all), units, "doc-7");
}

}  // namespace

TEST_CASE("filter prompt matches the frozen template byte for byte") {
    AnnotatedDoc annotated = segment_sentences(parse_html(fixtures::kAdaHtml));
    REQUIRE(annotated.sentences.size() == 3);
    RenderedView view = ada_view(annotated);
    std::string prompt = build_filter_prompt(view, "Who wrote the first algorithm?");
    CHECK(prompt == read_file(std::string(TREECITE_GOLDEN_DIR) + "/evidence_prompt.txt"));
}

TEST_CASE("filter prompt substitutes placeholders literally") {
    RenderedView view;
    view.text = "<lab_1>only unit</lab_1>";
    view.label_map["lab_1"] = {{0}};
    std::string prompt = build_filter_prompt(view, "braces {and} $1 stay put");
    CHECK(prompt.find("<lab_1>only unit</lab_1>") != std::string::npos);
    CHECK(prompt.find("braces {and} $1 stay put") != std::string::npos);
    CHECK(prompt.find("{excerpt_md}") == std::string::npos);
    CHECK(prompt.find("{query}") == std::string::npos);

    CHECK_THROWS_AS(build_filter_prompt(view, ""), std::invalid_argument);
    RenderedView unlabeled;
    unlabeled.text = "plain";
    CHECK_THROWS_AS(build_filter_prompt(unlabeled, "q"), std::invalid_argument);
}

TEST_CASE("label responses parse tolerantly") {
    std::set<std::string> known = {"<lab_1>", "<lab_2>"};

    CHECK(parse_label_response(R"(["<lab_1>"])", known) ==
          std::set<std::string>{"<lab_1>"});
    CHECK(parse_label_response("[]", known).empty());
    CHECK(parse_label_response("```json\n[\"<lab_2>\"]\n```", known) ==
          std::set<std::string>{"<lab_2>"});
    CHECK(parse_label_response(
              "Sure, the relevant spans are [\"<lab_1>\", \"<lab_2>\"] as shown.",
              known) == known);
    // Unknown labels and non-string entries are dropped, not errors.
    CHECK(parse_label_response(R"(["<lab_9>", 3, "<lab_1>"])", known) ==
          std::set<std::string>{"<lab_1>"});
    CHECK(parse_label_response(R"(["lab_1"])", known).empty());

    CHECK_THROWS_AS(parse_label_response("no brackets at all", known), PromptParseError);
    CHECK_THROWS_AS(parse_label_response("[never closed", known), PromptParseError);
}

TEST_CASE("filter_citations with a select-all provider cites every unit") {
    AnnotatedCorpus corpus;
    corpus["ada"] = segment_sentences(parse_html(fixtures::kAdaHtml));
    const AnnotatedDoc& annotated = corpus["ada"];
    PathSet s1 = sent_paths(annotated, annotated.sentences[1]);
    PathSet s2 = sent_paths(annotated, annotated.sentences[2]);

    MockGenerativeProvider provider(true);
    std::vector<FilterDiagnostic> diags;
    Budget budget;  // generous: the whole section fits
    auto citations = filter_citations(corpus, {{"ada", s1}}, "who?", budget,
                                      provider, &diags);
    CHECK(diags.empty());
    auto has = [&](const PathSet& paths) {
        for (const Citation& c : citations)
            if (c.doc_id == "ada" && c.paths == paths) return true;
        return false;
    };
    CHECK(has(s1));
    CHECK(has(s2));  // local expansion pulled in the neighbor sentence
    for (const Citation& c : citations) CHECK(c.doc_id == "ada");
}

TEST_CASE("filter_citations with a select-none provider cites nothing") {
    AnnotatedCorpus corpus;
    corpus["ada"] = segment_sentences(parse_html(fixtures::kAdaHtml));
    PathSet s1 = sent_paths(corpus["ada"], corpus["ada"].sentences[1]);
    MockGenerativeProvider provider(false);
    std::vector<FilterDiagnostic> diags;
    auto citations = filter_citations(corpus, {{"ada", s1}}, "who?", Budget{},
                                      provider, &diags);
    CHECK(citations.empty());
    CHECK(diags.empty());
}

TEST_CASE("an unparseable response gets one retry") {
    AnnotatedCorpus corpus;
    corpus["ada"] = segment_sentences(parse_html(fixtures::kAdaHtml));
    PathSet s1 = sent_paths(corpus["ada"], corpus["ada"].sentences[1]);

    SUBCASE("retry succeeds") {
        ScriptedProvider provider({"I cannot find any spans.", R"(["<lab_1>"])"});
        std::vector<FilterDiagnostic> diags;
        auto citations = filter_citations(corpus, {{"ada", s1}}, "who?", Budget{},
                                          provider, &diags);
        CHECK(provider.calls() == 2);
        CHECK(citations.size() == 1);
        REQUIRE(diags.size() == 1);
        CHECK(diags[0].message.find("unparseable") != std::string::npos);
    }
    SUBCASE("retry also fails: view skipped with diagnostics") {
        ScriptedProvider provider({"nope", "still nope"});
        std::vector<FilterDiagnostic> diags;
        auto citations = filter_citations(corpus, {{"ada", s1}}, "who?", Budget{},
                                          provider, &diags);
        CHECK(provider.calls() == 2);
        CHECK(citations.empty());
        CHECK(diags.size() == 2);
    }
}

TEST_CASE("provider failures skip the view but keep going") {
    AnnotatedCorpus corpus;
    corpus["ada"] = segment_sentences(parse_html(fixtures::kAdaHtml));
    PathSet s1 = sent_paths(corpus["ada"], corpus["ada"].sentences[1]);
    ThrowingProvider provider;
    std::vector<FilterDiagnostic> diags;
    auto citations = filter_citations(corpus, {{"ada", s1}, {"missing", {{0}}}},
                                      "who?", Budget{}, provider, &diags);
    CHECK(citations.empty());
    REQUIRE(diags.size() == 2);
    CHECK(diags[0].message.find("provider failure") != std::string::npos);
    CHECK(diags[1].message == "unknown document");
}

TEST_CASE("duplicate selections across candidates merge") {
    AnnotatedCorpus corpus;
    corpus["ada"] = segment_sentences(parse_html(fixtures::kAdaHtml));
    const AnnotatedDoc& annotated = corpus["ada"];
    PathSet s1 = sent_paths(annotated, annotated.sentences[1]);
    PathSet s2 = sent_paths(annotated, annotated.sentences[2]);

    MockGenerativeProvider provider(true);
    auto once = filter_citations(corpus, {{"ada", s1}}, "q", Budget{}, provider);
    auto twice = filter_citations(corpus, {{"ada", s1}, {"ada", s2}}, "q", Budget{},
                                  provider);
    CHECK(once == twice);
    for (size_t i = 1; i < twice.size(); ++i) CHECK(twice[i - 1] < twice[i]);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "treecite/config.hpp"
#include "treecite/eval.hpp"
#include "treecite/pipeline.hpp"

using namespace treecite;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

class ScriptedJudge : public GenerativeProvider {
public:
    explicit ScriptedJudge(std::vector<std::string> responses)
        : responses_(std::move(responses)) {}
    std::string complete(const std::string&) override {
        REQUIRE(next_ < responses_.size());
        return responses_[next_++];
    }

private:
    std::vector<std::string> responses_;
    size_t next_ = 0;
};

}  // namespace

TEST_CASE("judge prompt matches the frozen template byte for byte") {
    std::string prompt = build_judge_prompt("Who wrote the first algorithm?",
                                            "Ada Lovelace wrote the first algorithm.");
    CHECK(prompt == read_file(std::string(TREECITE_GOLDEN_DIR) + "/judge_prompt.txt"));
}

TEST_CASE("verdict parsing finds the first standalone yes/no") {
    CHECK(parse_verdict("YES") == true);
    CHECK(parse_verdict("no") == false);
    CHECK(parse_verdict("Verdict: Yes, the citation helps.") == true);
    CHECK(parse_verdict("I think NO because it is off topic.") == false);
    CHECK(parse_verdict("The answer is unknowable.") == std::nullopt);
    CHECK(parse_verdict("") == std::nullopt);
    // Substrings of longer words do not count.
    CHECK(parse_verdict("NOTABLY unclear. EYES only.") == std::nullopt);
    // First standalone hit wins.
    CHECK(parse_verdict("no... well, yes") == false);
}

TEST_CASE("ratio formatting uses three decimals") {
    CHECK(format_ratio(2, 4) == "2/4 (0.500)");
    CHECK(format_ratio(0, 0) == "0/0 (n/a)");
    CHECK(format_ratio(1, 3) == "1/3 (0.333)");
    CHECK(format_ratio(336, 1514) == "336/1514 (0.222)");
    CHECK(format_ratio(538, 822) == "538/822 (0.655)");
    CHECK(format_ratio(1673, 2058) == "1673/2058 (0.813)");
}

TEST_CASE("evaluate recovers a planted ratio from a scripted judge") {
    std::vector<JudgedItem> items(5, {"q", "d", "c"});
    ScriptedJudge judge({"YES", "Clearly no.", "yes!", "cannot say", "YES."});
    EvalSummary summary = evaluate(items, judge);
    CHECK(summary.helpful == 3);
    CHECK(summary.total == 4);
    CHECK(summary.invalid == 1);
    CHECK(summary.ratio == "3/4 (0.750)");
    REQUIRE(summary.records.size() == 5);
    CHECK(summary.records[0].verdict == Verdict::kHelpful);
    CHECK(summary.records[1].verdict == Verdict::kNotHelpful);
    CHECK(summary.records[3].verdict == Verdict::kInvalid);
    CHECK(summary.records[4].rationale == "YES.");

    EvalSummary empty = evaluate({}, judge);
    CHECK(empty.ratio == "0/0 (n/a)");
}

TEST_CASE("a crashing judge yields invalid records, not failures") {
    class Crashy : public GenerativeProvider {
        std::string complete(const std::string&) override {
            throw ProviderError("down");
        }
    } judge;
    EvalSummary summary = evaluate({{"q", "d", "c"}}, judge);
    CHECK(summary.total == 0);
    CHECK(summary.invalid == 1);
    CHECK(summary.ratio == "0/0 (n/a)");
}

TEST_CASE("config files parse as key=value with comments") {
    std::string path = "/tmp/treecite_test_config.cfg";
    {
        std::ofstream out(path, std::ios::trunc);
        out << "# retrieval settings\n"
            << "budget_limit = 250\n"
            << "\n"
            << "embedding_endpoint=http://localhost:9000\n"
            << "policies = title,headers\n";
    }
    Config cfg = Config::load(path);
    CHECK(cfg.budget_limit == 250);
    CHECK(cfg.embedding_endpoint == "http://localhost:9000");
    CHECK(cfg.policies == "title,headers");
    CHECK(cfg.expand_limit == 1000);  // untouched default
    std::remove(path.c_str());
}

TEST_CASE("config rejects unknown keys, bad values and missing files") {
    Config cfg;
    CHECK_THROWS_AS(cfg.apply_line("budgett", "10"), ConfigError);
    CHECK_THROWS_AS(cfg.apply_line("budget_limit", "ten"), ConfigError);
    CHECK_THROWS_AS(cfg.apply_line("budget_limit", "10x"), ConfigError);
    CHECK_THROWS_AS(Config::load("/tmp/treecite_no_such_config.cfg"), ConfigError);

    std::string path = "/tmp/treecite_test_badline.cfg";
    {
        std::ofstream out(path, std::ios::trunc);
        out << "just some words\n";
    }
    CHECK_THROWS_AS(Config::load(path), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("environment variables override file values") {
    std::string path = "/tmp/treecite_test_env.cfg";
    {
        std::ofstream out(path, std::ios::trunc);
        out << "budget_limit = 100\n";
    }
    setenv("TREECITE_BUDGET_LIMIT", "77", 1);
    setenv("TREECITE_INDEX_PATH", "/tmp/other.bin", 1);
    Config cfg = Config::load(path);
    unsetenv("TREECITE_BUDGET_LIMIT");
    unsetenv("TREECITE_INDEX_PATH");
    CHECK(cfg.budget_limit == 77);
    CHECK(cfg.index_path == "/tmp/other.bin");
    std::remove(path.c_str());
}

TEST_CASE("mock generative provider answers both prompt shapes") {
    MockGenerativeProvider select_all(true);
    MockGenerativeProvider select_none(false);

    std::string selector = "pick from <lab_1>a</lab_1> and <lab_2>b</lab_2>";
    auto picked = parse_label_response(select_all.complete(selector),
                                       {"<lab_1>", "<lab_2>"});
    CHECK(picked == std::set<std::string>{"<lab_1>", "<lab_2>"});
    CHECK(parse_label_response(select_none.complete(selector), {"<lab_1>"}).empty());

    CHECK(parse_verdict(select_all.complete("judge this citation")) == true);
    CHECK(parse_verdict(select_none.complete("judge this citation")) == false);
}

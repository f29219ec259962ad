#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treecite/filter.hpp"

namespace treecite {

enum class Verdict { kHelpful, kNotHelpful, kInvalid };

struct EvalRecord {
    std::string query;
    std::string doc_id;
    std::string citation_text;
    Verdict verdict = Verdict::kInvalid;
    std::string rationale;  // raw judge output
};

struct EvalSummary {
    std::vector<EvalRecord> records;
    int helpful = 0;
    int total = 0;    // parseable verdicts only
    int invalid = 0;  // unparseable, excluded from the ratio
    std::string ratio;  // "H/T (0.xyz)" or "0/0 (n/a)"
};

// Judge template plus the question and citation under fixed headings.
std::string build_judge_prompt(const std::string& question, const std::string& citation);

// First standalone YES/NO (case-insensitive word) in the response.
std::optional<bool> parse_verdict(const std::string& raw);

// "H/T (0.xyz)" with three decimals; "0/0 (n/a)" when empty.
std::string format_ratio(int helpful, int total);

struct JudgedItem {
    std::string query;
    std::string doc_id;
    std::string citation_text;
};

EvalSummary evaluate(const std::vector<JudgedItem>& items, GenerativeProvider& judge);

}  // namespace treecite

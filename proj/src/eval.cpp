#include "treecite/eval.hpp"

#include <cctype>
#include <cstdio>

#include "treecite/prompts.hpp"

namespace treecite {

std::string build_judge_prompt(const std::string& question, const std::string& citation) {
    std::string prompt = kJudgePromptTemplate;
    prompt += "\n\nQUESTION:\n" + question + "\n\nCITATION:\n" + citation;
    return prompt;
}

std::optional<bool> parse_verdict(const std::string& raw) {
    size_t i = 0;
    while (i < raw.size()) {
        while (i < raw.size() && !std::isalpha(static_cast<unsigned char>(raw[i]))) ++i;
        size_t start = i;
        while (i < raw.size() && std::isalpha(static_cast<unsigned char>(raw[i]))) ++i;
        std::string word;
        for (size_t j = start; j < i; ++j)
            word += static_cast<char>(std::toupper(static_cast<unsigned char>(raw[j])));
        if (word == "YES") return true;
        if (word == "NO") return false;
    }
    return std::nullopt;
}

std::string format_ratio(int helpful, int total) {
    char buf[64];
    if (total == 0) {
        std::snprintf(buf, sizeof buf, "%d/%d (n/a)", helpful, total);
    } else {
        std::snprintf(buf, sizeof buf, "%d/%d (%.3f)", helpful, total,
                      static_cast<double>(helpful) / total);
    }
    return buf;
}

EvalSummary evaluate(const std::vector<JudgedItem>& items, GenerativeProvider& judge) {
    EvalSummary summary;
    for (const JudgedItem& item : items) {
        EvalRecord record;
        record.query = item.query;
        record.doc_id = item.doc_id;
        record.citation_text = item.citation_text;
        try {
            record.rationale = judge.complete(build_judge_prompt(item.query, item.citation_text));
            if (auto verdict = parse_verdict(record.rationale)) {
                record.verdict = *verdict ? Verdict::kHelpful : Verdict::kNotHelpful;
                ++summary.total;
                if (*verdict) ++summary.helpful;
            } else {
                ++summary.invalid;
            }
        } catch (const std::exception& e) {
            record.rationale = std::string("judge failure: ") + e.what();
            ++summary.invalid;
        }
        summary.records.push_back(std::move(record));
    }
    summary.ratio = format_ratio(summary.helpful, summary.total);
    return summary;
}

}  // namespace treecite

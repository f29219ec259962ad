#pragma once

// Prompt templates for the generative steps. build_filter_prompt substitutes
// {excerpt_md} and {query} literally; build_judge_prompt appends the question
// and citation under fixed headings.

namespace treecite {

inline constexpr const char* kJudgePromptTemplate = R"raw(You are an expert evaluator who determines whether citations contain useful 
information for answering specific questions.

Your task is straightforward:
1. Read the QUESTION carefully - understand exactly what is being asked
2. Read the CITATION - analyze what information it contains
3. Answer: Does this citation help answer the question? (YES or NO)
4. If YES: Extract the specific part of the citation that helps
5. If YES: Identify which part of the question this citation addresses

EVALUATION PRINCIPLES:

**When to answer YES (helps_answer_question = true):**
- Citation contains facts, names, dates, or details that directly answer 
  the question
- Citation provides information needed to verify or find the answer
- Citation discusses the specific entities, events, or concepts asked about
- Someone reading this citation would get closer to answering the question

**When to answer NO (helps_answer_question = false):**
- Citation only provides generic background without specific answers
- Citation discusses related but different topics
- Citation lacks the specific information the question asks for
- Citation is off-topic or tangentially related

**For helpful_citation_part (if YES):**
- Extract the EXACT text/quote from the citation that helps
- Be specific - quote the relevant sentences or phrases
- Include context if needed but focus on the helpful parts
- If multiple parts help, include all of them

**For answered_question_part (if YES):**
- Extract the EXACT words/phrase from the question text itself that gets answered
- DO NOT write a new sentence - copy the actual text from the question
- Example: If question is "What is the speed of light in a vacuum?", answer: 
  "the speed of light in a vacuum"
- Example: If question is "Who won the Nobel Prize in Physics in 2023?", 
  answer: "Who won the Nobel Prize in Physics in 2023" or just the specific 
  part answered
- If citation answers the full question, return the full question text
- If citation answers only part, return just that portion of the question

**Reasoning:**
- Always provide clear reasoning for your decision
- Explain why the citation does or does not help
- Be specific about what information is present or missing
- Focus on relevance to the actual question asked

**Key Guidelines:**
- Be STRICT: Generic information != helpful answer
- Be PRECISE: Extract exact quotes, not paraphrases
- Be HONEST: If citation doesn't help, say NO
- Be SPECIFIC: Identify exactly what helps and what gets answered)raw";

inline constexpr const char* kEvidenceSelectorTemplate = R"raw(You are an evidence selector. Your job is to choose which chunks in the EXCERPT contain evidence
that answers the QUERY. You will see chunks labeled with tags like <chunk3> ... </chunk3>.
Return ONLY a valid JSON array of these OPENING TAGS as strings, copied exactly:
["<chunk3>", "<chunk1>"]
CRITICAL EVIDENCE RULE (anti-hallucination):
- ONLY cite chunks whose *content itself* supports the answer.
- Do NOT cite a chunk just because it triggers knowledge you already have.
- If the excerpt does not contain the needed evidence, return [].
What makes a GOOD citation set:
- A set of chunks which, when read together, contains enough information to answer the query
  fully OR partially.
- A reader should be able to recover the supported part of the answer using ONLY the selected chunks.
What makes a POOR citation set:
- Irrelevant chunks (topic mismatch, background with no claim support).
- Chunks that only contain a title/name/keyword without stating the relevant fact.
- Chunks that merely *hint* at the answer but do not contain the claim, evidence, or reasoning.
- Chunks selected because “the model knows the answer anyway.”
Minimality rule:
- Select the MINIMAL set of chunks that provide evidence.
- Prefer chunks that contain the relevant claim explicitly (names, dates, definitions, numbers, etc.).
If evidence is incomplete:
- Return chunks that provide partial evidence (and omit irrelevant chunks).
- Do NOT fill gaps using prior knowledge; partial evidence is still evidence.
OUTPUT FORMAT RULES:
- Output EXACTLY ONE JSON array of strings.
- Strings must be opening tags exactly as they appear, e.g. "<chunk3>".
- No markdown fences. No extra keys. No commentary before or after the JSON.

Examples (illustrative; do NOT copy content, copy the behavior):
Example A: Complete evidence present
Excerpt contains:
  <chunk2>“The DeLorean was created by John DeLorean.”</chunk2>
Query: “Who created the DeLorean automobile?”
Correct output: ["<chunk2>"]
Example B: Partial evidence present
Excerpt contains:
  <chunk1>“The DeLorean automobile was produced by the DeLorean Motor Company.”</chunk1>
Query: “Who created the DeLorean automobile?”
Correct output: ["<chunk1>"]
(Explanation: This supports only a partial answer about the company; it does NOT name the creator.)
Example C: No evidence in excerpt
Excerpt contains:
  <chunk3># John DeLorean</chunk3>
Query: “Who created the DeLorean automobile?”
Correct output: []
(Reason: a title/name alone does not state the relevant fact; citing it would rely on model knowledge.)
Example D: Model knows the answer but excerpt doesn’t contain it
Query: “What is the capital of France?”
Excerpt contains:
  <chunk0>“France is a country in Europe.”</chunk0>
Correct output: []
(Reason: the excerpt does not contain “Paris”; do not cite based on prior knowledge.)

EXCERPT:
{excerpt_md}
QUERY:
{query})raw";

}  // namespace treecite

#include "parc/prompts.hpp"

#include <algorithm>

#include "parc/error.hpp"

namespace parc {

namespace {

// Source templates. Slot syntax is {name}; unknown braced spans (the JSON
// skeletons) pass through substitution untouched.

const PromptTemplate kPremiseAggregative{
    "",
    R"__(You are provided with a question, a partial solution, and the next step in the solution.
Your task is to identify the steps that serve as premises for the given next step.
A step qualifies as a premise if the next step directly relies on information from that step. Based on the identified premises, the correctness of the next step should be fully verifiable.
Question (Step 0):
{question}
Solution so far:
{solution}
Next step to analyze:
{step}
For the step above, identify which previous steps (including Step 0 - the question) are premises and explain why each one is necessary. Remember:
1. A step cannot be a premise to itself
2. The question (Step 0) can be a premise if used directly
Generate ONLY the premises and nothing else.
Format your response with one premise per line as:
Step X: [explanation of why this step is necessary for the current step])__"};

const PromptTemplate kPremiseDyadic{
    R"__(You are an expert in mathematical reasoning. Your task is to decide whether one specific earlier statement serves as a premise for a given solution step.
A statement serves as a premise if the step directly relies on information from that statement. Do not judge whether either statement is correct, only whether the step uses the candidate statement.)__",
    R"__(Question (Step 0):
{question}
Candidate premise (Step {candidate_index}):
{candidate}
Step to analyze (Step {step_index}):
{step}
Does the candidate premise serve as a valid premise for the step to analyze? Answer yes only if the correctness of the step relies directly on information from the candidate premise.
Format your response as:
Reasoning: [brief justification]
Verdict: [yes or no])__"};

const PromptTemplate kMathVerdict{
    R"__(Your task is to determine whether a given sentence contains any mathematical errors.
For mathematical error, check if the sentence contains mathematical calculations (arithmetic or algebraic), and whether they are incorrect. If there are such errors, mark the sentence as "mathematical_error"
-   Mathematical errors can only come from incorrect results of mathematical operations
If no such errors exist, mark it as "correct".

Note: mathematical error can only come from incorrect numerical or algebraic calculations (i.e. wrong multiplication, wrong addition etc.)
if there are no numerical or algebraic calculations done, you can mark it as correct)__",
    R"__(Statement to analyze:
{step}
Format your response as:
Reasoning: [detailed analysis of the statement's validity]
Verdict: [correct or  mathematical_error])__"};

const PromptTemplate kLogicalVerdict{
    R"__(You are provided with a math question, a statement which is a step in the solution to the question and the premises to this steps (the question is also a premise). Your task is to identify whether the step follow naturally from the premises or not.
If the current step contradicts the premises, mark is as a logical_inconsistency
If the step can be directly inferred from the premises, mark it as correct.
You should not check whether the premises are correct, assume they are correct. Only check the sentence given.)__",
    R"__(Given Premises:
Question:  {question}
Previous steps as premise: {premises}
Statement to analyze: {step}
Guidelines:
1. for logical_inconsistency check if the step was performed under misinterpretation of the premises, made invalid deductions or had unsupported assumptions
2. Don't check for correctness of the premises, your only task is to check correctness of the given sentence

Format your response as:
Reasoning: [detailed analysis of the statement's validity]
Verdict: [correct, logical_inconsistency])__"};

const PromptTemplate kBaselineVerdict{
    R"__(You are a helpful AI assistant that analyzes mathematical solution steps.
    Your task is to determine if each statement is COMPLETELY correct by carefully analyzing its validity.
    Focus ONLY on whether the current step is valid - do not consider whether it helps reach the final answer or whether better steps could have been taken.
    Mark a statement as CORRECT unless you find a specific error.)__",
    R"__(Question: {question}
Solution so far: {solution}

1. "Logical_Inconsistency"
- Definition: Steps that violate logical principles or make unjustified conclusions
- Examples:
  - False equivalences
  - Invalid deductions
  - Unsupported assumptions
  - Note that incorrect use of previous information (example the step uses a wrong value of a variable) is a Logical_Inconsistency
- Impact: Breaks the logical flow of the solution

2. "Mathematical_Error"
- Definition: Incorrect calculations, misuse of formulas, or mathematical operations
- Examples:
  - Arithmetic mistakes
  - Incorrect algebraic manipulations
  - Wrong formula application
  - Note that Mathematical_Error can only appear when there is an error in calculation
- Impact: Produces incorrect numerical or algebraic results

3. "Accumulation_Error"
- Definition: Errors that propagate from previous incorrect steps
- Examples:
  - Using wrong intermediate results
  - Building upon previously miscalculated values
- Impact: Compounds previous mistakes into larger errors

4. "Other"
- Definition: Any error that doesn't fit into the above categories
- Examples:
  - Notation mistakes
  - Unclear explanations
  - Formatting issues
- Impact: Varies depending on the specific error

Statement to analyze:
{step}

Format your response as:
Reasoning: [detailed analysis of the statement's validity]
Verdict: [CORRECT,  Mathematical_Error, Logical_Inconsistency, or Accumulation_Error])__"};

const PromptTemplate kAnnotationJson{
    R"__(You are an expert mathematical reasoning analyzer. Your task is to analyze mathematical solutions and generate detailed error annotations in a specific JSON format. For each solution provided, you must carefully examine the reasoning chain and individual steps to identify any errors or issues.

Response Format

Your response must be a valid JSON object following exactly this structure:

{
  "error_annotations": {
    "chain_level": {
      "has_errors": boolean,
      "errors": [
        {
          "error_type": string,
          "error_description": string
        }
      ]
    },
    "step_level": [
      {
        "step_number": ,
        "has_error": boolean,
        "errors": [
          {
            "error_type": ,
            "error_description":
          }
        ]
      }
    ]
  }
}

Chain-Level Error Types

1. "Missing_Steps"
Definition: Solution lacks crucial concluding steps or final answer derivation
Examples:
  - Not showing the final calculated value
  - Missing the ultimate conclusion
  - Failing to complete the proof
Impact: Makes the solution incomplete or inconclusive

2. "Planning_Error"
Definition: The reasoning takes an invalid or fundamentally incorrect approach
Examples:
  - Using inapplicable theorems or methods
  - Solving for incorrect variables
  - Taking an approach that cannot possibly lead to a solution
Impact: Makes the entire solution path invalid
- Note: Valid but longer approaches (e.g., integration by parts instead of a substitution trick) should NOT be marked as errors

Step-Level Error Types

1. "Logical_Inconsistency"
Definition: Steps that violate logical principles or make unjustified conclusions
Examples:
  - False equivalences
  - Invalid deductions
  - Unsupported assumptions
  - Note that incorrect use of previous information (example the step uses a wrong value of a variable) is a Logical_Inconsistency
Impact: Breaks the logical flow of the solution

2. "Mathematical_Error"
Definition: Incorrect calculations, misuse of formulas, or mathematical operations
Examples:
  - Arithmetic mistakes
  - Incorrect algebraic manipulations
  - Wrong formula application
  - Note that Mathematical_Error can only appear when there is an error in calculation
Impact: Produces incorrect numerical or algebraic results

3. "Accumulation_Error"
Definition: Errors that propagate from previous incorrect steps
Examples:
  - Using wrong intermediate results
  - Building upon previously miscalculated values
Impact: Compounds previous mistakes into larger errors

4. "Other"
Definition: Any error that doesn't fit into the above categories
Examples:
  - Notation mistakes
  - Unclear explanations
  - Formatting issues
Impact: Varies depending on the specific error

Analysis Requirements
1. Examine each step against mathematical principles and theorems
2. Verify all calculations and mathematical operations
3. Check for proper use of definitions and formulas
4. Ensure logical flow between steps
5. Compare against the provided ground truth answer
6. Consider the completeness of the solution

Important Notes
- Provide ONLY the JSON output, no additional text or explanations
- Every step in the solution must have a corresponding entry in step_level array
- Keep error descriptions clear, specific, and mathematically precise
- Use empty arrays for errors when no errors exist
- Ensure your response is always valid JSON that matches the exact format specified
- Each error must have both an error_type and a corresponding detailed error_description
- Error descriptions should be specific to the mathematical context of the problem
- Do NOT penalize valid but verbose approaches (e.g., breaking down algebra into multiple steps)
- Do NOT mark alternative solution methods as errors unless they are genuinely invalid
- Focus on correctness rather than elegance or brevity

Workflow
1. Read and understand the problem statement
2. Analyze the reasoning chain step-by-step
3. Check for chain-level errors
4. Analyze each step for specific errors
5. Verify all premises and justifications
6. Ensure completeness of the solution)__",
    R"__(Problem:
{question}

Solution steps:
{solution}

Ground truth answer:
{answer})__"};

const PromptTemplate kSyntheticPerturb{
    R"__(You are an expert at constructing flawed mathematical reasoning for evaluation purposes. Given a correct step-by-step solution, you introduce exactly one error into one step and rewrite the later steps so they follow consistently from the flawed step.
Output MUST be valid JSON with no additional text or explanation.)__",
    R"__(Question:
{question}
Correct solution steps:
{solution}
Ground truth answer:
{answer}
Rewrite the solution with exactly one injected error. Requirements:
1. Pick one step and introduce a single mathematical_error (an incorrect calculation) or logical_inconsistency (an invalid deduction) into it.
2. Rewrite every later step so it follows naturally from the flawed step; do not fix the error.
3. Keep the same number of steps.
4. The final answer must differ from the ground truth answer.
Return your output in this exact JSON format:
{"error_step": <1-based index of the perturbed step>, "error_type": "<mathematical_error or logical_inconsistency>", "steps": ["<step 1 text>", "..."], "final_answer": "<new final answer>"})__"};

void require_step_index(const ReasoningChain& chain, int k) {
  if (k < 1 || k > chain.step_count()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "step " + std::to_string(k) + " outside 1.." +
                    std::to_string(chain.step_count()) + " in chain " + chain.chain_id);
  }
}

std::string require_ground_truth(const ReasoningChain& chain) {
  if (!chain.ground_truth_answer || chain.ground_truth_answer->empty()) {
    throw Error(ErrorCode::MissingContext,
                "chain " + chain.chain_id + " has no ground truth answer");
  }
  return *chain.ground_truth_answer;
}

std::string render_premise_lines(const ReasoningChain& chain, const std::set<int>& premises) {
  std::string out;
  for (int p : premises) {
    if (p == 0) continue;
    if (!out.empty()) out += '\n';
    out += "Step " + std::to_string(p) + ": " + chain.step(p);
  }
  return out;
}

}  // namespace

const PromptTemplate& prompt_template(JudgeTask task) {
  switch (task) {
    case JudgeTask::PremiseAggregative: return kPremiseAggregative;
    case JudgeTask::PremiseDyadic: return kPremiseDyadic;
    case JudgeTask::MathVerdict: return kMathVerdict;
    case JudgeTask::LogicalVerdict: return kLogicalVerdict;
    case JudgeTask::BaselineVerdict: return kBaselineVerdict;
    case JudgeTask::AnnotationJSON: return kAnnotationJson;
    case JudgeTask::SyntheticPerturb: return kSyntheticPerturb;
  }
  throw Error(ErrorCode::ConfigError, "unrecognized judge task");
}

std::string fill_slots(const std::string& text,
                       const std::map<std::string, std::string>& slots) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      std::size_t close = text.find('}', i + 1);
      if (close != std::string::npos) {
        auto it = slots.find(text.substr(i + 1, close - i - 1));
        if (it != slots.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i];
    ++i;
  }
  return out;
}

std::string render_step_lines(const ReasoningChain& chain, int first, int last) {
  std::string out;
  first = std::max(first, 1);
  last = std::min(last, chain.step_count());
  for (int k = first; k <= last; ++k) {
    if (!out.empty()) out += '\n';
    out += "Step " + std::to_string(k) + ": " + chain.step(k);
  }
  return out;
}

JudgeRequest render_premise_aggregative(const ReasoningChain& chain, int k) {
  validate_chain(chain);
  require_step_index(chain, k);
  const PromptTemplate& tpl = prompt_template(JudgeTask::PremiseAggregative);
  JudgeRequest request;
  request.task = JudgeTask::PremiseAggregative;
  request.system = tpl.system;
  request.instruction = fill_slots(tpl.instruction,
                                   {{"question", chain.question},
                                    {"solution", render_step_lines(chain, 1, k - 1)},
                                    {"step", chain.step(k)}});
  request.chain_id = chain.chain_id;
  request.step_index = k;
  return request;
}

JudgeRequest render_premise_dyadic(const ReasoningChain& chain, int candidate, int k) {
  validate_chain(chain);
  require_step_index(chain, k);
  if (candidate < 0 || candidate >= k) {
    throw Error(ErrorCode::IndexOutOfRange,
                "candidate " + std::to_string(candidate) + " not prior to step " +
                    std::to_string(k));
  }
  const PromptTemplate& tpl = prompt_template(JudgeTask::PremiseDyadic);
  JudgeRequest request;
  request.task = JudgeTask::PremiseDyadic;
  request.system = tpl.system;
  request.instruction =
      fill_slots(tpl.instruction,
                 {{"question", chain.question},
                  {"candidate", candidate == 0 ? chain.question : chain.step(candidate)},
                  {"candidate_index", std::to_string(candidate)},
                  {"step", chain.step(k)},
                  {"step_index", std::to_string(k)}});
  request.chain_id = chain.chain_id;
  request.step_index = k;
  request.aux_index = candidate;
  return request;
}

JudgeRequest render_math_verdict(const ReasoningChain& chain, int k) {
  validate_chain(chain);
  require_step_index(chain, k);
  const PromptTemplate& tpl = prompt_template(JudgeTask::MathVerdict);
  JudgeRequest request;
  request.task = JudgeTask::MathVerdict;
  request.system = tpl.system;
  request.instruction = fill_slots(tpl.instruction, {{"step", chain.step(k)}});
  request.chain_id = chain.chain_id;
  request.step_index = k;
  return request;
}

JudgeRequest render_logical_verdict(const ReasoningChain& chain, int k,
                                    const std::set<int>& premises) {
  validate_chain(chain);
  require_step_index(chain, k);
  for (int p : premises) {
    if (p < 0 || p >= k) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "premise " + std::to_string(p) + " not prior to step " + std::to_string(k));
    }
  }
  const PromptTemplate& tpl = prompt_template(JudgeTask::LogicalVerdict);
  JudgeRequest request;
  request.task = JudgeTask::LogicalVerdict;
  request.system = tpl.system;
  request.instruction = fill_slots(tpl.instruction,
                                   {{"question", chain.question},
                                    {"premises", render_premise_lines(chain, premises)},
                                    {"step", chain.step(k)}});
  request.chain_id = chain.chain_id;
  request.step_index = k;
  return request;
}

JudgeRequest render_baseline_verdict(const ReasoningChain& chain, int k) {
  validate_chain(chain);
  require_step_index(chain, k);
  const PromptTemplate& tpl = prompt_template(JudgeTask::BaselineVerdict);
  JudgeRequest request;
  request.task = JudgeTask::BaselineVerdict;
  request.system = tpl.system;
  request.instruction = fill_slots(tpl.instruction,
                                   {{"question", chain.question},
                                    {"solution", render_step_lines(chain, 1, k - 1)},
                                    {"step", chain.step(k)}});
  request.chain_id = chain.chain_id;
  request.step_index = k;
  return request;
}

JudgeRequest render_annotation_json(const ReasoningChain& chain) {
  validate_chain(chain);
  std::string answer = require_ground_truth(chain);
  const PromptTemplate& tpl = prompt_template(JudgeTask::AnnotationJSON);
  JudgeRequest request;
  request.task = JudgeTask::AnnotationJSON;
  request.system = tpl.system;
  request.instruction =
      fill_slots(tpl.instruction,
                 {{"question", chain.question},
                  {"solution", render_step_lines(chain, 1, chain.step_count())},
                  {"answer", answer}});
  request.chain_id = chain.chain_id;
  request.step_index = 0;
  return request;
}

JudgeRequest render_synthetic_perturb(const ReasoningChain& chain) {
  validate_chain(chain);
  std::string answer = require_ground_truth(chain);
  const PromptTemplate& tpl = prompt_template(JudgeTask::SyntheticPerturb);
  JudgeRequest request;
  request.task = JudgeTask::SyntheticPerturb;
  request.system = tpl.system;
  request.instruction =
      fill_slots(tpl.instruction,
                 {{"question", chain.question},
                  {"solution", render_step_lines(chain, 1, chain.step_count())},
                  {"answer", answer}});
  request.chain_id = chain.chain_id;
  request.step_index = 0;
  return request;
}

}  // namespace parc

#include "parley/prompts.hpp"

namespace parley::prompts {

std::string default_role_prompt(const std::string& base_role) {
    if (base_role == "single")
        return "You are a careful problem solver. Work the problem out and put your answer on "
               "the last line as 'FINAL: <answer>'.";
    if (base_role == "planner")
        return "You are a planner. Read the problem and write a short numbered plan for solving "
               "it. Do not solve the problem yourself; output only the plan.";
    if (base_role == "executor")
        return "You are an executor. Follow the given plan step by step to solve the problem. "
               "Put your answer on the last line as 'FINAL: <answer>'.";
    if (base_role == "reasoner")
        return "You are a problem solver. Solve the problem and explain your reasoning briefly. "
               "Put your answer on the last line as 'FINAL: <answer>'.";
    if (base_role == "reviser")
        return "You are a reviser. When asked for feedback, critique the proposed solution and "
               "point out concrete mistakes. When asked to revise, produce a corrected solution "
               "ending with 'FINAL: <answer>' on the last line.";
    if (base_role == "debater")
        return "You are one of several debaters solving the same problem independently. Consider "
               "your peers' answers when given, but reason for yourself. Put your answer on the "
               "last line as 'FINAL: <answer>'.";
    if (base_role == "aggregator")
        return "You are an aggregator. Given candidate answers from several agents, select the "
               "most frequently supported answer. Output it on the last line as "
               "'FINAL: <answer>'.";
    if (base_role == "affirmative")
        return "You are the affirmative side of a debate. Propose and defend a solution to the "
               "problem. End with 'FINAL: <answer>' on the last line.";
    if (base_role == "negative")
        return "You are the negative side of a debate. Challenge the opponent's solution, expose "
               "flaws, and give your own answer. End with 'FINAL: <answer>' on the last line.";
    if (base_role == "judge")
        return "You are the judge of a debate. Read the full transcript and decide which side's "
               "answer is correct. End with 'FINAL: <answer>' on the last line.";
    return "";
}

JudgePrompts default_judge_prompts() {
    JudgePrompts p;
    p.equivalence_system =
        "You are a strict grader. Decide whether the model output expresses the same answer as "
        "the ground truth, allowing equivalent formulations (1/2 vs 0.5, case differences, extra "
        "prose around the answer). Reply with exactly one word on the last line: CORRECT or "
        "INCORRECT.";
    p.equivalence_user =
        "Model output:\n{output}\n\nGround truth:\n{truth}\n\nIs the model output correct?";
    p.strict_retry =
        "\n\nYour previous reply did not follow the required format. Respond with exactly one "
        "word, CORRECT or INCORRECT, and nothing else.";
    p.extractor_system =
        "You extract executable code from model output. Return only the complete code, inside "
        "one fenced code block. If there is no code to extract, return an empty reply.";
    p.extractor_user = "Extract the executable code from the following output:\n\n{output}";
    return p;
}

MimePrompts default_mime_prompts() {
    MimePrompts p;
    p.generate_system =
        "You write main-idea multiple-choice options for a passage. Produce exactly four "
        "options labeled A through D, one per line, in the form 'A. <text>'. Option A must be "
        "the correct main-idea option; B, C and D must be plausible but incorrect distractors. "
        "Output only the four options.";
    p.generate_format =
        "Write the four options now. Remember: 'A. <correct option>' then 'B. <distractor>', "
        "'C. <distractor>', 'D. <distractor>', each on its own line.";
    p.criteria_correct_system =
        "You design one evaluation criterion for judging a CORRECT main-idea option for the "
        "given passage. Study the passage and the four expert reference options (the correct "
        "one is marked). Then state, in a short paragraph, what a high-quality correct option "
        "for this passage must accomplish. Output only the criterion.";
    p.criteria_distractor_system =
        "You design one evaluation criterion for judging DISTRACTOR options for the given "
        "passage. Study the passage and the four expert reference options (the correct one is "
        "marked). Then state, in a short paragraph, what a high-quality distractor for this "
        "passage must accomplish. Output only the criterion.";
    p.judge_system =
        "You score one candidate option under one criterion. Award points on three dimensions: "
        "fluency (0-{fluency_max}), confusability (0-{confusability_max}) and {third_label} "
        "(0-{third_max}); the three must sum to the total, out of 10. Reply with exactly four "
        "lines:\nFLUENCY: <points>\nCONFUSABILITY: <points>\n{third_tag}: <points>\nTOTAL: "
        "<points>";
    p.strict_retry =
        "\n\nYour previous reply did not follow the required format. Follow the format exactly "
        "this time.";
    return p;
}

std::string substitute(std::string text, const std::string& placeholder, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

}  // namespace parley::prompts

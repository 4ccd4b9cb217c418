#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "parley/backend.hpp"
#include "parley/prompts.hpp"

namespace parley::mime {

struct Reference {
    std::string text;
    bool correct = false;
};

/// One open-ended item: passage, elicitation prompt, and the four
/// expert-written reference options (exactly one marked correct).
struct Item {
    std::string id;
    std::string passage;
    std::string question;
    std::array<Reference, 4> references;

    void validate() const;
};

/// The evaluated model's four generated options, parsed from an A-D reply.
/// Option A is declared the correct one by the generation prompt.
struct GeneratedOptions {
    std::string correct;
    std::array<std::string, 3> distractors;
    std::string raw_reply;
};

enum class CriteriaKind { correct_option, distractor };
const char* to_string(CriteriaKind k);

struct CriteriaSet {
    CriteriaKind kind = CriteriaKind::correct_option;
    std::array<std::string, 3> criteria;
    std::string generator_model;
};

/// Per-dimension point caps inside the 10-point option total. The third
/// dimension is accuracy for correct options, logical consistency for
/// distractors.
struct DimensionWeights {
    double fluency = 4.0;
    double confusability = 3.0;
    double accuracy_or_logic = 3.0;

    void validate() const;  // caps must be non-negative and sum to 10
};

struct DimScores {
    double fluency = 0.0;
    double confusability = 0.0;
    double accuracy_or_logic = 0.0;

    double total() const { return fluency + confusability + accuracy_or_logic; }
};

struct OptionScore {
    std::string option;
    std::array<double, 3> per_criterion{};  // 0..10 totals, one per criterion
    std::array<DimScores, 3> dimensions{};
    double mean = 0.0;
};

struct ItemScore {
    double s_star = 0.0;
    std::array<double, 3> s_distractors{};
    double s_item = 0.0;  // s_star + sum of distractor scores, in [0, 40]
};

struct ItemBreakdown {
    std::string id;
    bool scorable = false;
    ItemScore score;
};

struct Report {
    double avg = 0.0;    // mean s_item over scorable items
    double corr = 0.0;   // mean s_star
    double wrong = 0.0;  // mean over all individual distractor scores
    int n_scored = 0;
    int n_unscorable = 0;
    std::vector<ItemBreakdown> items;
};

/// Elicits the four options from the evaluated model. Reference options are
/// never shown to it. A reply missing any of A-D earns one strict re-prompt;
/// a second failure raises Error(parse), which marks the item unscorable at
/// dataset level.
GeneratedOptions generate_options(const Item& item, const BackendHandle& evaluated,
                                  const prompts::MimePrompts& prompts = prompts::default_mime_prompts());

/// Three independent criteria generations (three separate calls). The criteria
/// model sees the passage and all four reference options. An empty criterion
/// is regenerated once, then raised.
CriteriaSet generate_criteria(const Item& item, const BackendHandle& criteria_backend,
                              CriteriaKind kind,
                              const prompts::MimePrompts& prompts = prompts::default_mime_prompts());

/// Three judge calls at temperature 0, one per criterion; each reply carries
/// dimension sub-scores that must sum to its 0-10 total.
OptionScore score_option(const std::string& option, const CriteriaSet& criteria,
                         const BackendHandle& judge,
                         const DimensionWeights& weights = {},
                         const prompts::MimePrompts& prompts = prompts::default_mime_prompts());

/// s_item = s_star + sum s_i; exactly 12 judge calls (4 options x 3 criteria).
ItemScore score_item(const GeneratedOptions& options, const CriteriaSet& correct_criteria,
                     const CriteriaSet& distractor_criteria, const BackendHandle& judge,
                     const DimensionWeights& weights = {},
                     const prompts::MimePrompts& prompts = prompts::default_mime_prompts());

/// Full pipeline over a dataset. Unscorable items are excluded from the means
/// and counted; zero scorable items is an error. The identity
/// avg = corr + 3 * wrong holds by construction.
Report evaluate_dataset(const std::vector<Item>& items, const BackendHandle& evaluated,
                        const BackendHandle& criteria_backend, const BackendHandle& judge,
                        const DimensionWeights& weights = {},
                        const prompts::MimePrompts& prompts = prompts::default_mime_prompts());

/// Line-delimited item file: {id, passage, question, references[4 x {text, correct}]}.
std::vector<Item> load_items(const std::filesystem::path& path);

void write_report(const Report& report, const std::filesystem::path& path);

}  // namespace parley::mime

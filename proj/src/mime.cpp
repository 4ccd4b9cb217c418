#include "parley/mime.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <sstream>

#include "parley/jsonl.hpp"

namespace parley::mime {

const char* to_string(CriteriaKind k) {
    return k == CriteriaKind::correct_option ? "correct_option" : "distractor";
}

void Item::validate() const {
    if (id.empty()) throw Error(ErrorKind::config, "mime item has empty id");
    if (passage.empty() || question.empty())
        throw Error(ErrorKind::config, "mime item '" + id + "' needs passage and question");
    int correct = 0;
    for (const Reference& r : references) {
        if (r.text.empty())
            throw Error(ErrorKind::config, "mime item '" + id + "' has an empty reference option");
        if (r.correct) ++correct;
    }
    if (correct != 1)
        throw Error(ErrorKind::config, "mime item '" + id + "' must label exactly 1 reference "
                                       "correct, has " + std::to_string(correct));
}

void DimensionWeights::validate() const {
    if (fluency < 0 || confusability < 0 || accuracy_or_logic < 0)
        throw Error(ErrorKind::config, "mime dimension weights must be non-negative");
    if (std::abs(fluency + confusability + accuracy_or_logic - 10.0) > 1e-9)
        throw Error(ErrorKind::config, "mime dimension weights must sum to 10");
}

namespace {

DecodingConfig judge_decoding() {
    DecodingConfig d;
    d.temperature = 0.0;
    d.strategy = Strategy::direct_response;
    return d;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// "A. text" / "A) text" / "A: text" lines, first occurrence per label.
std::optional<GeneratedOptions> parse_options(const std::string& reply) {
    std::array<std::optional<std::string>, 4> slots;
    std::istringstream in(reply);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.size() < 3) continue;
        char label = t[0];
        if (label < 'A' || label > 'D') continue;
        char sep = t[1];
        if (sep != '.' && sep != ')' && sep != ':') continue;
        std::string text = trim(t.substr(2));
        int slot = label - 'A';
        if (!text.empty() && !slots[slot]) slots[slot] = text;
    }
    for (const auto& s : slots)
        if (!s) return std::nullopt;
    GeneratedOptions out;
    out.correct = *slots[0];
    out.distractors = {*slots[1], *slots[2], *slots[3]};
    out.raw_reply = reply;
    return out;
}

std::string references_block(const Item& item) {
    std::string block;
    for (std::size_t i = 0; i < item.references.size(); ++i) {
        block += std::string(1, static_cast<char>('A' + i)) + ". " + item.references[i].text +
                 (item.references[i].correct ? "  [correct]" : "") + "\n";
    }
    return block;
}

std::string format_points(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

}  // namespace

GeneratedOptions generate_options(const Item& item, const BackendHandle& evaluated,
                                  const prompts::MimePrompts& prompts) {
    item.validate();
    // the evaluated model never sees the reference options
    std::string user = "Passage:\n" + item.passage + "\n\nQuestion:\n" + item.question + "\n\n" +
                       prompts.generate_format;

    CompletionRequest req;
    req.system_prompt = prompts.generate_system;
    req.user_content = user;
    req.agent_id = "mime-generator";

    CompletionResult result = complete(req, evaluated);
    if (auto parsed = parse_options(result.answer_text)) return *parsed;

    req.user_content = user + prompts.strict_retry;
    result = complete(req, evaluated);
    if (auto parsed = parse_options(result.answer_text)) return *parsed;

    throw Error(ErrorKind::parse, "item '" + item.id +
                                      "': option reply missing labels A-D after re-prompt");
}

CriteriaSet generate_criteria(const Item& item, const BackendHandle& criteria_backend,
                              CriteriaKind kind, const prompts::MimePrompts& prompts) {
    item.validate();
    // the criteria model, unlike the evaluated model, sees the references
    std::string user = "Passage:\n" + item.passage + "\n\nReference options:\n" +
                       references_block(item) + "\nWrite the criterion.";

    CompletionRequest req;
    req.system_prompt = kind == CriteriaKind::correct_option ? prompts.criteria_correct_system
                                                             : prompts.criteria_distractor_system;
    req.user_content = user;
    req.agent_id = "mime-criteria";

    CriteriaSet set;
    set.kind = kind;
    set.generator_model = criteria_backend->name();
    for (int k = 0; k < 3; ++k) {
        CompletionResult result = complete(req, criteria_backend);
        std::string text = trim(result.answer_text);
        if (text.empty()) {
            CompletionRequest retry = req;
            retry.user_content = user + prompts.strict_retry;
            result = complete(retry, criteria_backend);
            text = trim(result.answer_text);
            if (text.empty())
                throw Error(ErrorKind::parse, "item '" + item.id + "': empty " +
                                                  std::string(to_string(kind)) +
                                                  " criterion after regeneration");
        }
        set.criteria[k] = text;
    }
    return set;
}

namespace {

std::optional<DimScores> parse_dim_scores(const std::string& reply, double* total_out) {
    DimScores dims;
    bool have_f = false, have_c = false, have_t = false, have_x = false;
    double total = 0.0;
    std::istringstream in(reply);
    std::string line;
    auto starts_with_ci = [](const std::string& s, const char* prefix) {
        std::size_t n = std::strlen(prefix);
        if (s.size() < n) return false;
        for (std::size_t i = 0; i < n; ++i)
            if (std::toupper(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
        return true;
    };
    while (std::getline(in, line)) {
        std::string t = trim(line);
        auto colon = t.find(':');
        if (colon == std::string::npos) continue;
        double value = 0.0;
        try {
            value = std::stod(t.substr(colon + 1));
        } catch (...) {
            continue;
        }
        if (starts_with_ci(t, "FLUENCY")) {
            dims.fluency = value;
            have_f = true;
        } else if (starts_with_ci(t, "CONFUSABILITY")) {
            dims.confusability = value;
            have_c = true;
        } else if (starts_with_ci(t, "ACCURACY") || starts_with_ci(t, "LOGIC")) {
            dims.accuracy_or_logic = value;
            have_x = true;
        } else if (starts_with_ci(t, "TOTAL")) {
            total = value;
            have_t = true;
        }
    }
    if (!(have_f && have_c && have_x && have_t)) return std::nullopt;
    *total_out = total;
    return dims;
}

bool dims_valid(const DimScores& dims, double total, const DimensionWeights& weights) {
    if (dims.fluency < -1e-9 || dims.fluency > weights.fluency + 1e-9) return false;
    if (dims.confusability < -1e-9 || dims.confusability > weights.confusability + 1e-9)
        return false;
    if (dims.accuracy_or_logic < -1e-9 || dims.accuracy_or_logic > weights.accuracy_or_logic + 1e-9)
        return false;
    return std::abs(dims.total() - total) <= 1e-6;
}

}  // namespace

OptionScore score_option(const std::string& option, const CriteriaSet& criteria,
                         const BackendHandle& judge, const DimensionWeights& weights,
                         const prompts::MimePrompts& prompts) {
    weights.validate();
    const bool correct = criteria.kind == CriteriaKind::correct_option;
    std::string system = prompts.judge_system;
    system = prompts::substitute(system, "{fluency_max}", format_points(weights.fluency));
    system = prompts::substitute(system, "{confusability_max}",
                                 format_points(weights.confusability));
    system = prompts::substitute(system, "{third_max}", format_points(weights.accuracy_or_logic));
    system = prompts::substitute(system, "{third_label}",
                                 correct ? "accuracy" : "logical consistency");
    system = prompts::substitute(system, "{third_tag}", correct ? "ACCURACY" : "LOGIC");

    OptionScore score;
    score.option = option;
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
        std::string user = "Criterion:\n" + criteria.criteria[k] + "\n\nCandidate option:\n" +
                           option + "\n\nScore the option.";
        CompletionRequest req;
        req.system_prompt = system;
        req.user_content = user;
        req.decoding = judge_decoding();
        req.agent_id = "mime-judge";

        CompletionResult result = complete(req, judge);
        double total = 0.0;
        std::optional<DimScores> dims = parse_dim_scores(result.answer_text, &total);
        if (!dims || !dims_valid(*dims, total, weights)) {
            req.user_content = user + prompts.strict_retry;
            result = complete(req, judge);
            dims = parse_dim_scores(result.answer_text, &total);
            if (!dims || !dims_valid(*dims, total, weights))
                throw Error(ErrorKind::parse,
                            "mime judge reply invalid after re-prompt (sub-scores must sum to "
                            "the total); raw reply: " + result.answer_text);
        }
        score.dimensions[k] = *dims;
        score.per_criterion[k] = total;
        sum += total;
    }
    score.mean = sum / 3.0;
    return score;
}

ItemScore score_item(const GeneratedOptions& options, const CriteriaSet& correct_criteria,
                     const CriteriaSet& distractor_criteria, const BackendHandle& judge,
                     const DimensionWeights& weights, const prompts::MimePrompts& prompts) {
    if (correct_criteria.kind != CriteriaKind::correct_option ||
        distractor_criteria.kind != CriteriaKind::distractor)
        throw Error(ErrorKind::contract, "criteria kinds do not match their options");

    ItemScore item;
    item.s_star = score_option(options.correct, correct_criteria, judge, weights, prompts).mean;
    double sum = item.s_star;
    for (int i = 0; i < 3; ++i) {
        // all three distractors share the identical criteria set
        item.s_distractors[i] =
            score_option(options.distractors[i], distractor_criteria, judge, weights, prompts)
                .mean;
        sum += item.s_distractors[i];
    }
    item.s_item = sum;
    return item;
}

Report evaluate_dataset(const std::vector<Item>& items, const BackendHandle& evaluated,
                        const BackendHandle& criteria_backend, const BackendHandle& judge,
                        const DimensionWeights& weights, const prompts::MimePrompts& prompts) {
    if (items.empty()) throw Error(ErrorKind::contract, "mime dataset is empty");

    Report report;
    double sum_item = 0.0, sum_star = 0.0, sum_distractor = 0.0;
    for (const Item& item : items) {
        ItemBreakdown breakdown;
        breakdown.id = item.id;
        GeneratedOptions options;
        try {
            options = generate_options(item, evaluated, prompts);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::parse) throw;
            report.n_unscorable += 1;
            report.items.push_back(std::move(breakdown));
            continue;
        }
        CriteriaSet c_star =
            generate_criteria(item, criteria_backend, CriteriaKind::correct_option, prompts);
        CriteriaSet c_minus =
            generate_criteria(item, criteria_backend, CriteriaKind::distractor, prompts);
        ItemScore score = score_item(options, c_star, c_minus, judge, weights, prompts);

        breakdown.scorable = true;
        breakdown.score = score;
        report.items.push_back(std::move(breakdown));
        report.n_scored += 1;
        sum_item += score.s_item;
        sum_star += score.s_star;
        for (double d : score.s_distractors) sum_distractor += d;
    }
    if (report.n_scored == 0)
        throw Error(ErrorKind::contract, "no scorable mime items (all " +
                                             std::to_string(report.n_unscorable) +
                                             " failed option generation)");
    report.avg = sum_item / report.n_scored;
    report.corr = sum_star / report.n_scored;
    report.wrong = sum_distractor / (3.0 * report.n_scored);
    return report;
}

std::vector<Item> load_items(const std::filesystem::path& path) {
    std::vector<Item> items;
    for (const auto& rec : jsonl::read_file(path)) {
        Item item;
        try {
            item.id = rec.at("id").get<std::string>();
            item.passage = rec.at("passage").get<std::string>();
            item.question = rec.at("question").get<std::string>();
            const auto& refs = rec.at("references");
            if (!refs.is_array() || refs.size() != 4)
                throw Error(ErrorKind::parse, path.string() + ": item '" + item.id +
                                                  "' needs exactly 4 references");
            for (std::size_t i = 0; i < 4; ++i) {
                item.references[i].text = refs[i].at("text").get<std::string>();
                item.references[i].correct = refs[i].value("correct", false);
            }
        } catch (const jsonl::json::exception& e) {
            throw Error(ErrorKind::parse, path.string() + ": bad item record: " + e.what());
        }
        item.validate();
        items.push_back(std::move(item));
    }
    return items;
}

void write_report(const Report& report, const std::filesystem::path& path) {
    jsonl::json doc;
    doc["avg"] = report.avg;
    doc["corr"] = report.corr;
    doc["wrong"] = report.wrong;
    doc["n_scored"] = report.n_scored;
    doc["n_unscorable"] = report.n_unscorable;
    jsonl::json items = jsonl::json::array();
    for (const ItemBreakdown& b : report.items) {
        jsonl::json item;
        item["id"] = b.id;
        item["scorable"] = b.scorable;
        if (b.scorable) {
            item["s_star"] = b.score.s_star;
            item["s_distractors"] = b.score.s_distractors;
            item["s_item"] = b.score.s_item;
        }
        items.push_back(std::move(item));
    }
    doc["items"] = std::move(items);
    jsonl::write_text(path, doc.dump(2) + "\n");
}

}  // namespace parley::mime

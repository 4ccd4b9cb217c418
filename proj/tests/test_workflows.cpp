#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "parley/scripted_backend.hpp"
#include "parley/workflow.hpp"
#include "test_util.hpp"

using namespace parley;

namespace {

WorkflowConfig make_config(Paradigm p, int n = 3, int r = 1) {
    WorkflowConfig cfg;
    cfg.paradigm = p;
    cfg.n_debaters = n;
    cfg.rounds = r;
    return cfg;
}

int count_occurrences(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return 0;
    int count = 0;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

}  // namespace

TEST_CASE("sync_peers labels and orders peers") {
    CHECK(sync_peers({{"2", "B"}, {"3", "A"}}) == "Agent 2 answered: B\nAgent 3 answered: A");
    CHECK(sync_peers({{"7", "only"}}) == "Agent 7 answered: only");
    // permutation invariance: sorted by agent id
    auto a = sync_peers({{"debater-1", "x"}, {"debater-2", "y"}, {"debater-3", "z"}});
    auto b = sync_peers({{"debater-3", "z"}, {"debater-1", "x"}, {"debater-2", "y"}});
    CHECK(a == b);
    // numeric-aware ordering
    auto wide = sync_peers({{"debater-10", "t"}, {"debater-2", "s"}});
    CHECK(wide.find("debater-2 answered") < wide.find("debater-10 answered"));
    CHECK_THROWS_AS(sync_peers({}), Error);
}

TEST_CASE("normalize_answer trims, folds case, extracts after the marker") {
    CHECK(normalize_answer("  The Answer  ", "") == "the answer");
    CHECK(normalize_answer("steps...\nFINAL: 42 ", "FINAL:") == "42");
    CHECK(normalize_answer("FINAL: a\nmore\nFINAL: B", "FINAL:") == "b");
    CHECK(normalize_answer("no marker here", "FINAL:") == "no marker here");
}

TEST_CASE("aggregate_majority examples") {
    auto r = aggregate_majority({"A", "A", "B"}, "");
    CHECK(r.answer == "a");
    CHECK_FALSE(r.tie);

    r = aggregate_majority({"A", "B", "C"}, "");
    CHECK(r.answer == "a");  // tie broken by earliest first occurrence
    CHECK(r.tie);

    r = aggregate_majority({"b", "B", "a"}, "");
    CHECK(r.answer == "b");
    CHECK_FALSE(r.tie);

    CHECK_THROWS_AS(aggregate_majority({}, ""), Error);
}

TEST_CASE("aggregate_majority agrees with brute force on all tuples up to size 5") {
    // independent oracle: literal per-element counting, no maps
    auto oracle = [](const std::vector<std::string>& xs) {
        std::vector<std::string> norm;
        for (const auto& x : xs) norm.push_back(normalize_answer(x, ""));
        int best = 0;
        for (std::size_t i = 0; i < norm.size(); ++i) {
            int c = 0;
            for (std::size_t j = 0; j < norm.size(); ++j)
                if (norm[j] == norm[i]) ++c;
            best = std::max(best, c);
        }
        std::string winner;
        bool found = false;
        for (std::size_t i = 0; i < norm.size() && !found; ++i) {
            int c = 0;
            for (std::size_t j = 0; j < norm.size(); ++j)
                if (norm[j] == norm[i]) ++c;
            if (c == best) {
                winner = norm[i];
                found = true;
            }
        }
        int classes_at_max = 0;
        std::vector<std::string> seen;
        for (std::size_t i = 0; i < norm.size(); ++i) {
            if (std::find(seen.begin(), seen.end(), norm[i]) != seen.end()) continue;
            seen.push_back(norm[i]);
            int c = 0;
            for (std::size_t j = 0; j < norm.size(); ++j)
                if (norm[j] == norm[i]) ++c;
            if (c == best) ++classes_at_max;
        }
        return std::make_pair(winner, classes_at_max >= 2);
    };

    const std::vector<std::string> alphabet = {"A", "B", "C"};
    long checked = 0;
    for (int size = 1; size <= 5; ++size) {
        long combos = 1;
        for (int i = 0; i < size; ++i) combos *= 3;
        for (long code = 0; code < combos; ++code) {
            std::vector<std::string> tuple;
            long c = code;
            for (int i = 0; i < size; ++i) {
                tuple.push_back(alphabet[c % 3]);
                c /= 3;
            }
            auto got = aggregate_majority(tuple, "");
            auto [want_answer, want_tie] = oracle(tuple);
            REQUIRE(got.answer == want_answer);
            REQUIRE(got.tie == want_tie);
            ++checked;
        }
    }
    CHECK(checked == 3 + 9 + 27 + 81 + 243);
}

TEST_CASE("single_direct: one call, one message") {
    auto backend = testutil::scripted({{"single", "FINAL: 4", 9, 4}});
    auto t = run_single_model(testutil::math_task(), make_config(Paradigm::single_direct),
                              backend);
    CHECK(backend->ledger_size() == 1);
    REQUIRE(t.messages.size() == 1);
    CHECK(t.messages[0].kind == MessageKind::final_answer);
    CHECK(t.final_answer == "FINAL: 4");
    CHECK(t.total_cost == 4);
    CHECK(t.query_prompt_tokens == 9);
    // direct response means no reasoning strategy on the wire
    CHECK(backend->ledger()[0].decoding.strategy == Strategy::direct_response);
}

TEST_CASE("single_cot: reasoning message recorded, cost covers both") {
    auto backend = testutil::scripted({{"single", "<think>add the twos</think>FINAL: 4", 9, 20}});
    auto t = run_single_model(testutil::math_task(), make_config(Paradigm::single_cot), backend);
    CHECK(backend->ledger_size() == 1);
    CHECK(backend->ledger()[0].decoding.strategy == Strategy::adaptive_reasoning);
    REQUIRE(t.messages.size() == 2);
    CHECK(t.messages[0].kind == MessageKind::reasoning);
    CHECK(t.messages[0].content == "add the twos");
    CHECK(t.messages[0].usage_source == UsageSource::local_estimate);
    CHECK(t.messages[1].kind == MessageKind::final_answer);
    CHECK(t.messages[1].content == "FINAL: 4");
    CHECK(t.messages[0].tokens + t.messages[1].tokens == 20);
    CHECK(t.total_cost == 20);

    SUBCASE("no reasoning emitted, single message") {
        auto plain = testutil::scripted({{"single", "FINAL: 4", 9, 4}});
        auto t2 = run_single_model(testutil::math_task(), make_config(Paradigm::single_cot),
                                   plain);
        CHECK(t2.messages.size() == 1);
        CHECK(t2.total_cost == 4);
    }
}

TEST_CASE("plan_execute: planner then executor, plan passed verbatim") {
    auto planner = testutil::scripted({{"planner", "1. add 2. report", 5, 8}});
    auto executor = testutil::scripted({{"executor", "FINAL: 7", 30, 3}});
    auto task = testutil::math_task("t1", "What is 3 + 4?", "7");
    auto t = run_plan_execute(task, make_config(Paradigm::plan_execute), planner, executor);

    CHECK(planner->ledger_size() == 1);
    CHECK(executor->ledger_size() == 1);
    REQUIRE(t.messages.size() == 2);
    CHECK(t.messages[0].kind == MessageKind::plan);
    CHECK(t.messages[1].kind == MessageKind::final_answer);
    CHECK(t.final_answer == "FINAL: 7");

    const auto exec_req = executor->ledger()[0];
    CHECK(count_occurrences(exec_req.user_content, task.input) == 1);
    CHECK(count_occurrences(exec_req.user_content, "1. add 2. report") == 1);

    SUBCASE("degenerate plan is a hard error with the partial transcript") {
        auto empty_planner = testutil::scripted({{"planner", "   \n ", 5, 0}});
        auto exec2 = testutil::scripted({{"executor", "FINAL: 7", 30, 3}});
        try {
            run_plan_execute(task, make_config(Paradigm::plan_execute), empty_planner, exec2);
            FAIL("expected degenerate plan error");
        } catch (const WorkflowError& e) {
            CHECK(std::string(e.what()).find("degenerate plan") != std::string::npos);
            CHECK(e.partial().failed);
            CHECK(e.partial().messages.size() == 1);
        }
        CHECK(exec2->ledger_size() == 0);  // executor never ran
    }
}

TEST_CASE("reflection: three calls, feedback and revision condition correctly") {
    auto reasoner = testutil::scripted({{"reasoner", "y0: first try", 5, 6}});
    auto reviser = testutil::scripted(
        {{"a", "z-fee: check the carry", 20, 7}, {"b", "y1: FINAL: 9", 40, 5}},
        ScriptMode::sequence);
    auto task = testutil::math_task();
    auto t = run_reflection(task, make_config(Paradigm::reflection), reasoner, reviser);

    CHECK(reasoner->ledger_size() == 1);
    CHECK(reviser->ledger_size() == 2);
    REQUIRE(t.messages.size() == 3);
    CHECK(t.messages[0].kind == MessageKind::candidate_answer);
    CHECK(t.messages[1].kind == MessageKind::feedback);
    CHECK(t.messages[2].kind == MessageKind::final_answer);
    CHECK(t.final_answer == "y1: FINAL: 9");
    CHECK(t.total_cost == 6 + 7 + 5);

    auto reviser_ledger = reviser->ledger();
    // feedback call conditions on (x, y0)
    CHECK(reviser_ledger[0].user_content.find(task.input) != std::string::npos);
    CHECK(reviser_ledger[0].user_content.find("y0: first try") != std::string::npos);
    CHECK(reviser_ledger[0].user_content.find("z-fee") == std::string::npos);
    // revision call conditions on (x, y0, z_fee)
    CHECK(reviser_ledger[1].user_content.find(task.input) != std::string::npos);
    CHECK(reviser_ledger[1].user_content.find("y0: first try") != std::string::npos);
    CHECK(reviser_ledger[1].user_content.find("z-fee: check the carry") != std::string::npos);
}

TEST_CASE("reflection: failure mid-chain yields a partial transcript with a marker") {
    auto reasoner = testutil::scripted({{"reasoner", "y0", 5, 6}});
    auto failing_reviser = testutil::scripted({});  // any request misses
    try {
        run_reflection(testutil::math_task(), make_config(Paradigm::reflection), reasoner,
                       failing_reviser);
        FAIL("expected workflow failure");
    } catch (const WorkflowError& e) {
        CHECK(e.partial().failed);
        CHECK_FALSE(e.partial().failure.empty());
        CHECK(e.partial().messages.size() == 1);  // only y0 made it
        CHECK(std::string(e.what()).find("t1") != std::string::npos);  // task id attached
    }
}

TEST_CASE("reflection single-call mode folds feedback into one reviser call") {
    auto reasoner = testutil::scripted({{"reasoner", "y0", 5, 6}});
    auto reviser = testutil::scripted({{"reviser", "FINAL: 8", 9, 3}});
    auto cfg = make_config(Paradigm::reflection);
    cfg.reflection_single_call = true;
    auto t = run_reflection(testutil::math_task(), cfg, reasoner, reviser);
    CHECK(reviser->ledger_size() == 1);
    CHECK(t.messages.size() == 2);
    CHECK(t.final_answer == "FINAL: 8");
}

TEST_CASE("interactive debate: protocol counts, rounds, and the barrier") {
    const int n = 3, r = 1;
    auto shared = testutil::sequence_backend(n + n * r + 1);
    std::vector<BackendHandle> debaters(n, shared);
    auto cfg = make_config(Paradigm::interactive_debate, n, r);
    auto t = run_interactive_debate(testutil::math_task(), cfg, debaters, shared);

    CHECK(shared->ledger_size() == static_cast<std::size_t>(n + n * r + 1));
    REQUIRE(t.messages.size() == static_cast<std::size_t>(n + n * r + 1));
    std::vector<int> rounds;
    for (const auto& m : t.messages) rounds.push_back(m.round);
    CHECK(rounds == std::vector<int>{0, 0, 0, 1, 1, 1, 1});
    CHECK(t.messages.back().kind == MessageKind::verdict);
    CHECK(t.final_answer == "reply-6");

    auto ledger = shared->ledger();
    // round-1 updates condition on round-0 answers of peers only
    for (int i = 0; i < n; ++i) {
        const auto& update = ledger[n + i];
        for (int j = 0; j < n; ++j) {
            const std::string round0 = "reply-" + std::to_string(j);
            if (j == i)
                CHECK(update.user_content.find(round0) == std::string::npos);  // not own answer
            else
                CHECK(update.user_content.find(round0) != std::string::npos);
        }
        // no round-1 answer may appear in any round-1 request
        for (int j = n; j < 2 * n; ++j)
            CHECK(update.user_content.find("reply-" + std::to_string(j)) == std::string::npos);
    }
    // the aggregation call sees every final-round answer
    const auto& agg = ledger[2 * n];
    for (int j = n; j < 2 * n; ++j)
        CHECK(agg.user_content.find("reply-" + std::to_string(j)) != std::string::npos);
}

TEST_CASE("interactive debate call counts for a second grid point") {
    const int n = 3, r = 2;
    auto shared = testutil::sequence_backend(n + n * r + 1);
    auto t = run_interactive_debate(testutil::math_task(),
                                    make_config(Paradigm::interactive_debate, n, r),
                                    std::vector<BackendHandle>(n, shared), shared);
    CHECK(shared->ledger_size() == 10);
    CHECK(t.messages.size() == 10);
}

TEST_CASE("interactive debate: blank aggregator reply falls back to majority") {
    const int n = 3;
    auto debater = testutil::scripted({{"K", "FINAL: B", 4, 4}});  // all debaters agree
    auto blank_agg = testutil::scripted({{"aggregator", "   ", 4, 0}});
    auto cfg = make_config(Paradigm::interactive_debate, n, 0);
    auto task = testutil::math_task("t1", "pick a letter K", "B");
    auto t = run_interactive_debate(task, cfg, std::vector<BackendHandle>(n, debater), blank_agg);
    CHECK(t.aggregator_fallback);
    CHECK(t.final_answer == "b");  // normalized majority answer
}

TEST_CASE("interactive debate: deterministic_majority mode makes no aggregator call") {
    const int n = 3;
    auto debater = testutil::scripted({{"K", "FINAL: B", 4, 4}});
    auto agg = testutil::scripted({});  // would fail if ever called
    auto cfg = make_config(Paradigm::interactive_debate, n, 0);
    cfg.aggregator_mode = AggregatorMode::deterministic_majority;
    auto task = testutil::math_task("t1", "pick a letter K", "B");
    auto t = run_interactive_debate(task, cfg, std::vector<BackendHandle>(n, debater), agg);
    CHECK(agg->ledger_size() == 0);
    CHECK(t.final_answer == "b");
    REQUIRE(t.messages.size() == static_cast<std::size_t>(n + 1));
    CHECK(t.messages.back().kind == MessageKind::verdict);
    CHECK(t.messages.back().tokens == 0);  // derived, not generated
}

TEST_CASE("interactive debate requires at least two debaters") {
    auto cfg = make_config(Paradigm::interactive_debate, 1, 1);
    auto b = testutil::sequence_backend(5);
    CHECK_THROWS_AS(run_interactive_debate(testutil::math_task(), cfg, {b}, b), Error);
}

TEST_CASE("adversarial debate: alternation, conditioning, judge sees everything once") {
    const int r = 1;
    auto affirmative = testutil::scripted(
        {{"a", "aff-0 claim", 3, 3}, {"b", "aff-1 rebuttal", 3, 3}}, ScriptMode::sequence);
    auto negative = testutil::scripted(
        {{"a", "neg-0 counter", 3, 3}, {"b", "neg-1 rebuttal", 3, 3}}, ScriptMode::sequence);
    auto judge = testutil::scripted({{"judge", "FINAL: aff wins", 9, 4}});
    auto task = testutil::math_task();
    auto t = run_adversarial_debate(task, make_config(Paradigm::adversarial_debate, 3, r),
                                    affirmative, negative, judge);

    CHECK(affirmative->ledger_size() + negative->ledger_size() + judge->ledger_size() ==
          static_cast<std::size_t>(2 + 2 * r + 1));
    REQUIRE(t.messages.size() == 5);
    std::vector<std::string> roles_seen;
    for (const auto& m : t.messages) roles_seen.push_back(m.role);
    CHECK(roles_seen == std::vector<std::string>{"affirmative", "negative", "affirmative",
                                                 "negative", "judge"});
    CHECK(t.messages[2].kind == MessageKind::rebuttal);
    CHECK(t.messages[4].kind == MessageKind::verdict);
    CHECK(t.final_answer == "FINAL: aff wins");

    // aff round 1 conditions on neg round 0; neg round 1 on aff round 1
    CHECK(affirmative->ledger()[1].user_content.find("neg-0 counter") != std::string::npos);
    CHECK(negative->ledger()[1].user_content.find("aff-1 rebuttal") != std::string::npos);

    // the judge reads the complete transcript, each message exactly once, in order
    const std::string judge_content = judge->ledger()[0].user_content;
    std::vector<std::string> expected = {"aff-0 claim", "neg-0 counter", "aff-1 rebuttal",
                                         "neg-1 rebuttal"};
    std::size_t last_pos = 0;
    for (const auto& needle : expected) {
        CHECK(count_occurrences(judge_content, needle) == 1);
        auto pos = judge_content.find(needle);
        CHECK(pos >= last_pos);
        last_pos = pos;
    }
    CHECK(count_occurrences(judge_content, task.input) == 1);

    SUBCASE("judge failure carries the full debate for post-mortem") {
        auto aff2 = testutil::scripted({{"k", "aff", 1, 1}, {"k2", "aff2", 1, 1}},
                                       ScriptMode::sequence);
        auto neg2 = testutil::scripted({{"k", "neg", 1, 1}, {"k2", "neg2", 1, 1}},
                                       ScriptMode::sequence);
        auto bad_judge = testutil::scripted({});
        try {
            run_adversarial_debate(task, make_config(Paradigm::adversarial_debate, 3, r), aff2,
                                   neg2, bad_judge);
            FAIL("expected judge failure");
        } catch (const WorkflowError& e) {
            CHECK(e.partial().messages.size() == 4);  // everything up to the verdict
            CHECK(e.partial().failed);
        }
    }
}

TEST_CASE("call-count law across the full grid") {
    for (int n : {2, 3, 5}) {
        for (int r : {0, 1, 2, 3}) {
            auto task = testutil::math_task();

            auto single = testutil::sequence_backend(1);
            run_single_model(task, make_config(Paradigm::single_direct, n, r), single);
            CHECK(single->ledger_size() == 1);

            auto pe = testutil::sequence_backend(2);
            run_plan_execute(task, make_config(Paradigm::plan_execute, n, r), pe, pe);
            CHECK(pe->ledger_size() == 2);

            auto refl = testutil::sequence_backend(3);
            run_reflection(task, make_config(Paradigm::reflection, n, r), refl, refl);
            CHECK(refl->ledger_size() == 3);

            auto deb = testutil::sequence_backend(n + n * r + 1);
            run_interactive_debate(task, make_config(Paradigm::interactive_debate, n, r),
                                   std::vector<BackendHandle>(n, deb), deb);
            CHECK(deb->ledger_size() == static_cast<std::size_t>(n + n * r + 1));

            auto adv = testutil::sequence_backend(2 + 2 * r + 1);
            run_adversarial_debate(task, make_config(Paradigm::adversarial_debate, n, r), adv,
                                   adv, adv);
            CHECK(adv->ledger_size() == static_cast<std::size_t>(2 + 2 * r + 1));
        }
    }
}

TEST_CASE("transcript_cost sums exactly") {
    Transcript t;
    t.task_id = "t";
    auto msg = [](const std::string& role, std::int64_t tokens, UsageSource src) {
        Message m;
        m.role = role;
        m.tokens = tokens;
        m.usage_source = src;
        return m;
    };
    t.messages = {msg("a", 120, UsageSource::backend_reported),
                  msg("b", 340, UsageSource::backend_reported),
                  msg("a", 85, UsageSource::backend_reported)};
    auto c = transcript_cost(t);
    CHECK(c.total == 545);
    CHECK(c.per_role["a"] == 205);
    CHECK(c.per_role["b"] == 340);
    CHECK_FALSE(c.any_local_estimate);

    SUBCASE("single message is the identity") {
        Transcript one;
        one.messages = {msg("x", 77, UsageSource::backend_reported)};
        CHECK(transcript_cost(one).total == 77);
    }
    SUBCASE("estimated fraction recomputed by filtering") {
        t.messages[1].usage_source = UsageSource::local_estimate;
        auto mixed = transcript_cost(t);
        std::int64_t est = 0, total = 0;
        for (const auto& m : t.messages) {
            total += m.tokens;
            if (m.usage_source == UsageSource::local_estimate) est += m.tokens;
        }
        CHECK(mixed.any_local_estimate);
        CHECK(mixed.estimated_fraction ==
              doctest::Approx(static_cast<double>(est) / static_cast<double>(total)));
    }
}

TEST_CASE("cost additivity over randomized scripted token values") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> tok(0, 100000);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ScriptEntry> entries;
        std::int64_t expected = 0;
        const int n = 3, r = 1;
        for (int i = 0; i < n + n * r + 1; ++i) {
            std::int64_t tokens = tok(rng);
            expected += tokens;
            entries.push_back({"k" + std::to_string(i), "ans-" + std::to_string(i), 5, tokens});
        }
        auto backend = testutil::scripted(std::move(entries), ScriptMode::sequence);
        auto t = run_interactive_debate(testutil::math_task(),
                                        make_config(Paradigm::interactive_debate, n, r),
                                        std::vector<BackendHandle>(n, backend), backend);
        REQUIRE(transcript_cost(t).total == expected);
        REQUIRE(t.total_cost == expected);
    }
}

TEST_CASE("message indices strictly increase") {
    auto shared = testutil::sequence_backend(10);
    auto t = run_interactive_debate(testutil::math_task(),
                                    make_config(Paradigm::interactive_debate, 3, 2),
                                    std::vector<BackendHandle>(3, shared), shared);
    for (std::size_t i = 0; i < t.messages.size(); ++i)
        CHECK(t.messages[i].index == static_cast<int>(i));
}

TEST_CASE("run_workflow dispatches by role map") {
    RoleBackends backends;
    auto shared = testutil::sequence_backend(7);
    backends["*"] = shared;
    auto t = run_workflow(testutil::math_task(),
                          make_config(Paradigm::interactive_debate, 3, 1), backends);
    CHECK(t.messages.size() == 7);

    SUBCASE("missing role is a config error") {
        RoleBackends none;
        CHECK_THROWS_AS(
            run_workflow(testutil::math_task(), make_config(Paradigm::single_direct), none),
            Error);
    }
    SUBCASE("wrong paradigm for runner is a contract error") {
        CHECK_THROWS_AS(run_single_model(testutil::math_task(),
                                         make_config(Paradigm::plan_execute), shared),
                        Error);
    }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "synlens/error.hpp"
#include "synlens/patterns.hpp"

using namespace synlens;
using namespace synlens::patterns;

namespace {

PatternItem tok(const char* v) { return {ItemKind::Token, v}; }
PatternItem pos(const char* v) { return {ItemKind::Pos, v}; }

DualSequence seq(std::initializer_list<std::pair<const char*, const char*>> items) {
    DualSequence s;
    for (const auto& [t, p] : items) s.push_back({t, p});
    return s;
}

oracle::Seq to_oracle(const DualSequence& s) {
    oracle::Seq out;
    for (const auto& d : s) out.emplace_back(d.token, d.pos);
    return out;
}

std::vector<oracle::Item> to_oracle(const std::vector<PatternItem>& items) {
    std::vector<oracle::Item> out;
    for (const auto& it : items) out.emplace_back(it.kind == ItemKind::Pos, it.value);
    return out;
}

DualSequence random_sequence(std::mt19937_64& rng, std::size_t max_len) {
    static const char* toks[] = {"music", "you", "can", "dance", "to", "songs"};
    static const char* tags[] = {"NOUN", "PRON", "VERB", "ADP"};
    const auto n = 1 + rng() % max_len;
    DualSequence s;
    for (std::size_t i = 0; i < n; ++i) s.push_back({toks[rng() % 6], tags[rng() % 4]});
    return s;
}

}  // namespace

TEST_SUITE("patterns") {

TEST_CASE("dual items from an annotated example") {
    const auto ex = test::make_example(0, {"Music", "you", "can", "dance", "to"},
                                       {"NOUN", "PRON", "VERB", "VERB", "ADP"});
    const auto s = to_item_sequence(ex);
    REQUIRE(s.size() == 5);
    CHECK(s[0] == DualItem{"music", "NOUN"});
    CHECK(s[3] == DualItem{"dance", "VERB"});
    CHECK(to_item_sequence(test::make_example(1, {"hi"}, {"INTJ"})).size() == 1);
}

TEST_CASE("gapped containment") {
    const auto s = seq({{"music", "NOUN"}, {"you", "PRON"}, {"can", "VERB"}, {"dance", "VERB"}, {"to", "ADP"}});
    const std::vector<PatternItem> p{tok("music"), pos("VERB")};
    CHECK(contains(s, p));
    const std::vector<PatternItem> q{pos("VERB"), tok("music")};
    CHECK_FALSE(contains(s, q));
    const std::vector<PatternItem> r{pos("VERB"), pos("VERB"), pos("ADP")};
    CHECK(contains(s, r));
    CHECK(matches(pos("NOUN"), s[0]));
    CHECK_FALSE(matches(tok("NOUN"), s[0]));
}

TEST_CASE("mine: identical sequences give every subpattern with full support") {
    const std::vector<DualSequence> seqs(3, seq({{"a", "X"}, {"b", "Y"}}));
    const auto pats = mine_patterns(seqs, 2);
    CHECK(pats.size() == 8);  // 4 singles + 4 pairs
    for (const auto& p : pats) CHECK(p.support == 3);
    bool found = false;
    for (const auto& p : pats) found |= p.items == std::vector<PatternItem>{tok("a"), tok("b")};
    CHECK(found);
}

TEST_CASE("mine: support threshold excludes infrequent items") {
    const std::vector<DualSequence> seqs = {seq({{"music", "NOUN"}}), seq({{"music", "NOUN"}}),
                                            seq({{"songs", "NOUN"}})};
    const auto pats = mine_patterns(seqs, 3);
    REQUIRE(pats.size() == 1);
    CHECK(pats[0].items == std::vector<PatternItem>{pos("NOUN")});
    CHECK_THROWS_AS(mine_patterns(seqs, 1), ContractError);
}

TEST_CASE("mine: an item repeated in one sequence counts once") {
    const std::vector<DualSequence> seqs = {seq({{"a", "X"}, {"a", "X"}}), seq({{"b", "Y"}})};
    const auto pats = mine_patterns(seqs, 2);
    CHECK(pats.empty());
}

TEST_CASE("mine equals exhaustive enumeration on random clusters") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const auto count = 2 + rng() % 7;
        std::vector<DualSequence> seqs;
        for (std::size_t i = 0; i < count; ++i) seqs.push_back(random_sequence(rng, 6));
        const std::size_t min_support = 2 + rng() % 2;
        const auto got = mine_patterns(seqs, min_support, 4);
        std::vector<oracle::Seq> os;
        for (const auto& s : seqs) os.push_back(to_oracle(s));
        const auto want = oracle::enumerate_patterns(os, min_support, 4);
        std::map<std::vector<oracle::Item>, std::size_t> got_map;
        for (const auto& p : got) {
            CHECK(got_map.emplace(to_oracle(p.items), p.support).second);
            CHECK(p.support == count_support(seqs, p.items));
        }
        CHECK(got_map == want);
    }
}

TEST_CASE("scores from the fixed constants") {
    Pattern a{{tok("music"), tok("you"), tok("can"), pos("VERB"), tok("to")}, 4, 0.0};
    Pattern b{{tok("music"), pos("PRON"), tok("can"), pos("VERB")}, 16, 0.0};
    Pattern c{{pos("NOUN")}, 2, 0.0};
    CHECK(score_pattern(a) == 10.0);
    CHECK(score_pattern(b) == 8.0);
    CHECK(score_pattern(c) == 1.5);
    a.score = score_pattern(a);
    b.score = score_pattern(b);
    CHECK(better_summary(a, b));
    CHECK_FALSE(better_summary(b, a));
}

TEST_CASE("summary tie-breaks: support, then items") {
    Pattern x{{tok("a")}, 4, 3.0};
    Pattern y{{tok("b")}, 3, 3.0};
    CHECK(better_summary(x, y));
    Pattern z{{tok("b")}, 4, 3.0};
    CHECK(better_summary(x, z));
    CHECK_FALSE(better_summary(x, x));
}

TEST_CASE("best pattern equals the exhaustive oracle's choice") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 80; ++trial) {
        const auto count = 2 + rng() % 7;
        std::vector<DualSequence> seqs;
        for (std::size_t i = 0; i < count; ++i) seqs.push_back(random_sequence(rng, 6));
        const std::size_t min_support = 2 + rng() % 2;
        const auto got = best_pattern(seqs, min_support);
        std::vector<oracle::Seq> os;
        for (const auto& s : seqs) os.push_back(to_oracle(s));
        const auto all = oracle::enumerate_patterns(os, min_support, 8);
        if (all.empty()) {
            CHECK_FALSE(got.has_value());
            continue;
        }
        REQUIRE(got.has_value());
        const auto [items, support] = oracle::best(all);
        CHECK(to_oracle(got->items) == items);
        CHECK(got->support == support);
        CHECK(std::abs(got->score - oracle::score(items, support)) < 1e-12);
    }
}

TEST_CASE("summary minimum support") {
    CHECK(summary_min_support(1) == 2);
    CHECK(summary_min_support(5) == 2);
    CHECK(summary_min_support(10) == 3);
    CHECK(summary_min_support(11) == 4);
    CHECK(summary_min_support(100) == 30);
}

TEST_CASE("summarize_cluster") {
    std::vector<AnnotatedExample> corpus = {
        test::make_example(0, {"music", "you", "can", "dance", "to"}, {"NOUN", "PRON", "AUX", "VERB", "ADP"}),
        test::make_example(1, {"music", "you", "can", "dance", "to"}, {"NOUN", "PRON", "AUX", "VERB", "ADP"}),
        test::make_example(2, {"music", "you", "can", "dance", "to"}, {"NOUN", "PRON", "AUX", "VERB", "ADP"}),
        test::make_example(3, {"hello"}, {"INTJ"}),
    };
    const std::vector<std::size_t> three{0, 1, 2};
    const auto s = summarize_cluster(three, corpus);
    REQUIRE(s.has_value());
    CHECK(s->items == std::vector<PatternItem>{tok("music"), tok("you"), tok("can"), tok("dance"), tok("to")});
    CHECK(s->support == 3);

    const std::vector<std::size_t> single{3};
    CHECK_FALSE(summarize_cluster(single, corpus).has_value());
    const std::vector<std::size_t> mixed{0, 3};
    CHECK_FALSE(summarize_cluster(mixed, corpus).has_value());
}

TEST_CASE("summary support is re-verified by direct scan") {
    std::mt19937_64 rng(8);
    std::vector<AnnotatedExample> corpus;
    for (std::size_t i = 0; i < 40; ++i) corpus.push_back(test::random_example(rng, i, 5));
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < 40; i += 2) members.push_back(i);
    const auto s = summarize_cluster(members, corpus);
    REQUIRE(s.has_value());
    std::vector<DualSequence> seqs;
    for (auto m : members) seqs.push_back(to_item_sequence(corpus[m]));
    CHECK(s->support == count_support(seqs, s->items));
    CHECK(s->support >= summary_min_support(members.size()));
}

TEST_CASE("formatting") {
    Pattern a{{tok("music"), tok("you"), tok("can"), pos("VERB"), tok("to")}, 12, 0.0};
    CHECK(format_items(a.items) == "(music, you, can, VERB, to)");
    CHECK(format_pattern(a) == "(music, you, can, VERB, to) \xC3\x97" "12");
}

}

#include <doctest.h>

#include <regex>
#include <set>

#include "helpers.hpp"
#include "synlens/error.hpp"
#include "synlens/fixtures.hpp"
#include "synlens/ingest.hpp"

using namespace synlens;
using namespace synlens::fixtures;

namespace {

TemplateSpec load(const char* name) {
    return parse_spec(test::slurp(test::source_dir() / "data" / "fixtures" / name));
}

std::vector<std::string> surfaces(const AnnotatedExample& ex) {
    std::vector<std::string> out;
    for (const auto& t : ex.tokens) out.push_back(t.surface);
    return out;
}

const char* kMini =
    "name = mini\n"
    "count = 12\n"
    "rng_seed = 1\n"
    "duplicates = 2\n"
    "slot.X = a | b | c | d\n"
    "template.t = {X}/NOUN/0/ROOT {X}/NOUN/1/dep\n"
    "template.u = go/VERB/0/ROOT {X}/NOUN/1/dobj\n"
    "family.f = u X 3\n"
    "seed.s = hello/INTJ/0/ROOT\n"
    "outlier.o = why/ADV/0/ROOT ?/PUNCT/1/punct\n";

}  // namespace

TEST_SUITE("fixtures") {

TEST_CASE("music: 500 rows, families, duplicates, seeds and outliers") {
    const auto fx = generate_fixture(load("music.spec"));
    CHECK(fx.name == "music");
    REQUIRE(fx.examples.size() == 500);
    for (std::size_t i = 0; i < 500; ++i) CHECK(fx.examples[i].raw.id == i);

    std::size_t seeds = 0, outliers = 0;
    for (const auto& ex : fx.examples) {
        seeds += ex.raw.seed;
        outliers += ex.raw.label == std::optional<std::string>("outlier");
        CHECK(ex.has_dependencies);
    }
    CHECK(seeds == 5);
    CHECK(outliers == 6);

    // Families: scan the output for single-word-swap sets.
    CHECK(fx.families.size() >= 3);
    for (const auto& fam : fx.families) {
        CHECK(fam.size() >= 2);
        const auto base = surfaces(fx.examples[fam.front()]);
        std::set<std::string> texts;
        for (auto id : fam) {
            const auto s = surfaces(fx.examples[id]);
            REQUIRE(s.size() == base.size());
            std::size_t diffs = 0;
            for (std::size_t i = 0; i < s.size(); ++i) diffs += s[i] != base[i];
            CHECK(diffs <= 1);
            texts.insert(fx.examples[id].raw.text);
        }
        CHECK(texts.size() == fam.size());
    }

    CHECK(fx.duplicate_pairs.size() == 12);
    std::set<std::size_t> in_pairs;
    for (const auto& [a, b] : fx.duplicate_pairs) {
        CHECK(fx.examples[a].raw.text == fx.examples[b].raw.text);
        CHECK(fx.examples[a].tokens == fx.examples[b].tokens);
        CHECK(in_pairs.insert(a).second);
        CHECK(in_pairs.insert(b).second);
    }
    // Only the planted pairs repeat a text.
    std::map<std::string, int> counts;
    for (const auto& ex : fx.examples) ++counts[ex.raw.text];
    std::size_t repeated = 0;
    for (const auto& [t, c] : counts) {
        CHECK(c <= 2);
        repeated += c == 2;
    }
    CHECK(repeated == 12);
}

TEST_CASE("the sound-like template is present") {
    const auto fx = generate_fixture(load("music.spec"));
    const std::regex re("^\\w+ that sound like \\w+$");
    std::size_t hits = 0;
    for (const auto& ex : fx.examples) hits += std::regex_match(ex.raw.text, re);
    CHECK(hits >= 6);
}

TEST_CASE("dialog: favorite and like/love families") {
    const auto fx = generate_fixture(load("dialog.spec"));
    CHECK(fx.examples.size() == 300);
    const std::regex favorite("^what is your favorite \\w+\\?$");
    const std::regex like_to("^(I|we) (like|love) to \\w+( on \\w+)?$");
    std::size_t fav = 0, like = 0;
    for (const auto& ex : fx.examples) {
        fav += std::regex_match(ex.raw.text, favorite);
        like += std::regex_match(ex.raw.text, like_to);
    }
    CHECK(fav >= 6);
    CHECK(like >= 5);
}

TEST_CASE("generation is deterministic and seed-dependent") {
    auto spec = load("music.spec");
    const auto a = to_csv(generate_fixture(spec).examples);
    const auto b = to_csv(generate_fixture(spec).examples);
    CHECK(a == b);
    CHECK(ingest::serialize_conllu(generate_fixture(spec).examples) ==
          ingest::serialize_conllu(generate_fixture(spec).examples));
    spec.rng_seed = 43;
    CHECK(to_csv(generate_fixture(spec).examples) != a);
}

TEST_CASE("generated corpora ingest without diagnostics") {
    for (const auto* name : {"music.spec", "dialog.spec"}) {
        const auto fx = generate_fixture(load(name));
        CHECK(ingest::parse_csv(to_csv(fx.examples)).diagnostics.empty());
        CHECK(ingest::parse_conllu(ingest::serialize_conllu(fx.examples)).diagnostics.empty());
    }
}

TEST_CASE("a small spec") {
    const auto spec = parse_spec(kMini);
    CHECK(spec.templates.size() == 2);
    CHECK(spec.slots.at("X").size() == 4);
    const auto fx = generate_fixture(spec);
    CHECK(fx.examples.size() == 12);
    REQUIRE(fx.families.size() == 1);
    CHECK(fx.families[0].size() == 3);
    CHECK(fx.duplicate_pairs.size() == 2);
}

TEST_CASE("spec errors") {
    const std::string base = kMini;
    CHECK_THROWS_AS(parse_spec(base + "template.v = {Y}/NOUN/0/ROOT\n"), ConfigError);        // unknown slot
    CHECK_THROWS_AS(parse_spec(base + "template.v = a/NN/0/ROOT\n"), ConfigError);             // bad tag
    CHECK_THROWS_AS(parse_spec(base + "template.v = a/NOUN/0/ROOT b/NOUN/0/ROOT\n"), ConfigError);  // two roots
    CHECK_THROWS_AS(parse_spec(base + "template.v = a/NOUN/0/ROOT b/NOUN/5/dep\n"), ConfigError);   // head range
    CHECK_THROWS_AS(parse_spec(base + "template.v = a/NOUN/0\n"), ConfigError);                // short token
    CHECK_THROWS_AS(parse_spec(base + "family.g = t Z 2\n"), ConfigError);                     // unknown slot
    CHECK_THROWS_AS(parse_spec(base + "family.g = u X 9\n"), ConfigError);                     // too many variants
    CHECK_THROWS_AS(parse_spec(base + "weight.nope = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec(base + "colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec(base + "slot.X = a | a\n"), ConfigError);
    CHECK_THROWS_AS(parse_spec("count = 3\n"), ConfigError);
    auto too_many = parse_spec(kMini);
    too_many.count = 1000;
    CHECK_THROWS_AS(generate_fixture(too_many), ConfigError);
    auto too_few = parse_spec(kMini);
    too_few.count = 4;
    CHECK_THROWS_AS(generate_fixture(too_few), ConfigError);
}

TEST_CASE("surface text and csv quoting") {
    CHECK(realize_text({"hi", ",", "how", "are", "you", "?"}) == "hi, how are you?");
    AnnotatedExample ex;
    ex.raw.text = "a, \"b\"";
    ex.raw.seed = true;
    const auto csv = to_csv({ex, ex});
    CHECK(csv == "text,seed,label\n\"a, \"\"b\"\"\",true,\n\"a, \"\"b\"\"\",true,\n");
}

}

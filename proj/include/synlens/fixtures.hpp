#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synlens/corpus.hpp"

namespace synlens::fixtures {

/// One template position: a literal word or a {SLOT}, with its hand-assigned
/// UPOS tag, 1-based head within the template (0 = root) and deprel.
struct TemplateToken {
    std::string surface;  // literal word, or the slot name when `slot` is set
    bool slot = false;
    std::string pos;
    std::size_t head = 0;
    std::string deprel;
};

using TemplateTokens = std::vector<TemplateToken>;

/// A set of single-word-swap variants: one template instance with every
/// slot fixed except `varied_slot`, which takes `variants` distinct words.
struct FamilySpec {
    std::string key;
    std::string template_name;
    std::string varied_slot;
    std::size_t variants = 0;
};

/// Parsed form of a fixture spec file (plain `key = value` lines):
///
///   name = music
///   count = 500
///   rng_seed = 42
///   duplicates = 12
///   slot.NATURE = rain | thunder | wind
///   template.sound_like = {THINGS}/NOUN/0/root that/PRON/3/nsubj ...
///   weight.sound_like = 3
///   family.1 = sound_like NATURE 6
///   seed.1 = oldies/NOUN/0/root but/CCONJ/3/cc goodies/NOUN/1/conj
///   outlier.1 = loud/ADJ/0/root !/PUNCT/1/punct
struct TemplateSpec {
    std::string name;
    std::size_t count = 0;
    std::uint64_t rng_seed = 0;
    std::size_t duplicates = 0;
    std::map<std::string, std::vector<std::string>> slots;
    std::map<std::string, TemplateTokens> templates;
    std::map<std::string, double> weights;
    std::vector<FamilySpec> families;
    std::vector<TemplateTokens> seeds;
    std::vector<TemplateTokens> outliers;
};

/// Throws ConfigError with the offending line on malformed input, unknown
/// slots or families, or inconsistent heads.
TemplateSpec parse_spec(std::string_view text);

struct GeneratedFixture {
    std::string name;
    std::vector<AnnotatedExample> examples;                // ids 0..count-1
    std::vector<std::vector<std::size_t>> families;        // ids per planted family
    std::vector<std::pair<std::size_t, std::size_t>> duplicate_pairs;  // (original, copy)
};

/// Expands the spec into exactly `count` examples: seeds, outliers, planted
/// families, planted exact duplicates and unique weighted template draws,
/// shuffled together. Deterministic for a given rng_seed on any platform.
GeneratedFixture generate_fixture(const TemplateSpec& spec);

/// Surface text: tokens joined by spaces, no space before closing punctuation.
std::string realize_text(const std::vector<std::string>& tokens);

/// CSV with columns text,seed,label.
std::string to_csv(const std::vector<AnnotatedExample>& examples);

}  // namespace synlens::fixtures

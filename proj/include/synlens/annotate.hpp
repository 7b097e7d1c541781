#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "synlens/corpus.hpp"

namespace synlens::annotate {

/// Splits on Unicode whitespace, then peels leading and trailing punctuation
/// off each chunk as one-character tokens. Inner punctuation ("what's",
/// "rock-n-roll") stays attached.
std::vector<std::string> tokenize(std::string_view text);

/// Lowercase-keyed word → UPOS table. The built-in table is compiled from
/// data/lexicon.tsv; users can layer their own file on top.
class Lexicon {
public:
    /// The shipped English lexicon.
    static const Lexicon& builtin();

    /// Parses `token<TAB>UPOS` lines. Blank lines and `#` comments are
    /// ignored. Throws ConfigError on a malformed line or a non-UPOS tag.
    static Lexicon parse(std::string_view tsv);

    /// Adds or overrides entries from another lexicon.
    void merge(const Lexicon& other);

    const std::string* find(std::string_view lowercase_word) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::string, std::less<>> entries_;
};

/// Best-effort rule tagger: punctuation and number patterns, lexicon lookup,
/// a few contextual fixes (relative "that", "to" before a verb, "like" after
/// a subject pronoun), suffix heuristics, then NOUN.
std::vector<std::string> tag_pos(const std::vector<std::string>& tokens,
                                 const Lexicon& lexicon = Lexicon::builtin());

/// Tokenizes and tags every example of a CSV corpus. Dependencies are left
/// empty; the result never has has_dependencies set. Throws ContractError
/// for a CoNLL-U corpus, which arrives annotated already.
std::vector<AnnotatedExample> annotate_corpus(const Corpus& corpus,
                                              const Lexicon& lexicon = Lexicon::builtin());

}  // namespace synlens::annotate

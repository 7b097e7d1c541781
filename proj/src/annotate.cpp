#include "synlens/annotate.hpp"

#include <algorithm>
#include <cctype>

#include "synlens/error.hpp"
#include "text_util.hpp"

namespace synlens::annotate {

namespace {

constexpr std::string_view kDefaultLexicon =
#include "default_lexicon.inc"
    ;

bool is_unicode_space(char32_t cp) {
    return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
           (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F ||
           cp == 0x205F || cp == 0x3000;
}

bool is_punct(char32_t cp) {
    if (cp < 0x80) return std::ispunct(static_cast<int>(cp)) != 0;
    return cp == 0xA1 || cp == 0xA7 || cp == 0xAB || cp == 0xB6 || cp == 0xB7 || cp == 0xBB ||
           cp == 0xBF || (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
           (cp >= 0x3001 && cp <= 0x3003) || (cp >= 0x3008 && cp <= 0x3011);
}

bool is_symbol_char(char c) {
    return std::string_view("$%+=<>^`|~#&@*").find(c) != std::string_view::npos;
}

struct CodePoint {
    char32_t cp;
    std::size_t begin;
    std::size_t end;
};

void split_chunk(std::string_view chunk, std::vector<std::string>& out) {
    std::vector<CodePoint> cps;
    for (std::size_t pos = 0; pos < chunk.size();) {
        const auto begin = pos;
        const auto cp = detail::next_code_point(chunk, pos);
        cps.push_back({cp, begin, pos});
    }
    std::size_t lead = 0;
    while (lead < cps.size() && is_punct(cps[lead].cp)) ++lead;
    std::size_t trail = cps.size();
    while (trail > lead && is_punct(cps[trail - 1].cp)) --trail;

    auto piece = [&](std::size_t from, std::size_t to) {
        return std::string(chunk.substr(cps[from].begin, cps[to - 1].end - cps[from].begin));
    };
    for (std::size_t i = 0; i < lead; ++i) out.push_back(piece(i, i + 1));
    if (trail > lead) out.push_back(piece(lead, trail));
    for (std::size_t i = std::max(trail, lead); i < cps.size(); ++i) out.push_back(piece(i, i + 1));
}

bool all_punct(std::string_view tok) {
    for (std::size_t pos = 0; pos < tok.size();) {
        if (!is_punct(detail::next_code_point(tok, pos))) return false;
    }
    return !tok.empty();
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_number(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front())) ||
        !std::isdigit(static_cast<unsigned char>(s.back()))) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == ',' || c == ':';
    });
}

bool is_ordinal(std::string_view s) {
    if (s.size() < 3) return false;
    const auto suffix = s.substr(s.size() - 2);
    return all_digits(s.substr(0, s.size() - 2)) &&
           (suffix == "st" || suffix == "nd" || suffix == "rd" || suffix == "th");
}

// "90s", "1990s", "'80s"
bool is_decade(std::string_view s) {
    if (!s.empty() && s.front() == '\'') s.remove_prefix(1);
    return s.size() >= 3 && s.back() == 's' && all_digits(s.substr(0, s.size() - 1));
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

const char* suffix_tag(std::string_view w) {
    if (w.size() < 4) return nullptr;
    if (ends_with(w, "ly")) return "ADV";
    if (ends_with(w, "ing") && w.size() >= 5) return "VERB";
    if (ends_with(w, "ed") && w.size() >= 5) return "VERB";
    for (auto suf : {"ous", "ful", "ive", "able", "ible", "less", "ish", "ical"}) {
        if (ends_with(w, suf) && w.size() > std::string_view(suf).size() + 2) return "ADJ";
    }
    if (ends_with(w, "ize")) return "VERB";
    return nullptr;
}

bool is_capitalized(std::string_view s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

bool is_subject_pronoun(std::string_view lower) {
    return lower == "i" || lower == "we" || lower == "you" || lower == "they" || lower == "he" ||
           lower == "she";
}

bool is_modal(std::string_view lower) {
    return lower == "can" || lower == "could" || lower == "will" || lower == "would" ||
           lower == "should" || lower == "might" || lower == "must" || lower == "may" ||
           lower == "shall";
}

enum class Source { Rule, Lexicon, Suffix, Default };

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t chunk_start = 0;
    std::size_t pos = 0;
    bool in_chunk = false;
    while (pos < text.size()) {
        const auto here = pos;
        const auto cp = detail::next_code_point(text, pos);
        if (is_unicode_space(cp)) {
            if (in_chunk) split_chunk(text.substr(chunk_start, here - chunk_start), tokens);
            in_chunk = false;
        } else if (!in_chunk) {
            in_chunk = true;
            chunk_start = here;
        }
    }
    if (in_chunk) split_chunk(text.substr(chunk_start), tokens);
    return tokens;
}

const Lexicon& Lexicon::builtin() {
    static const Lexicon lex = parse(kDefaultLexicon);
    return lex;
}

Lexicon Lexicon::parse(std::string_view tsv) {
    Lexicon lex;
    std::size_t line_no = 0;
    for (auto line : detail::split_lines(tsv)) {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto cols = detail::split(body, '\t');
        if (cols.size() != 2 || detail::trim(cols[0]).empty()) {
            throw ConfigError("lexicon line " + std::to_string(line_no) +
                              ": expected token<TAB>UPOS");
        }
        const auto tag = detail::trim(cols[1]);
        if (!is_upos(tag)) {
            throw ConfigError("lexicon line " + std::to_string(line_no) + ": '" + std::string(tag) +
                              "' is not a UPOS tag");
        }
        lex.entries_[detail::ascii_lower(detail::trim(cols[0]))] = std::string(tag);
    }
    return lex;
}

void Lexicon::merge(const Lexicon& other) {
    for (const auto& [word, tag] : other.entries_) entries_[word] = tag;
}

const std::string* Lexicon::find(std::string_view lowercase_word) const {
    const auto it = entries_.find(lowercase_word);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> tag_pos(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
    const auto n = tokens.size();
    std::vector<std::string> tags(n);
    std::vector<std::string> lower(n);
    std::vector<Source> source(n, Source::Default);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& tok = tokens[i];
        lower[i] = detail::ascii_lower(tok);
        if (all_punct(tok)) {
            tags[i] = std::all_of(tok.begin(), tok.end(), is_symbol_char) ? "SYM" : "PUNCT";
            source[i] = Source::Rule;
        } else if (is_number(tok)) {
            tags[i] = "NUM";
            source[i] = Source::Rule;
        } else if (is_ordinal(lower[i])) {
            tags[i] = "ADJ";
            source[i] = Source::Rule;
        } else if (is_decade(lower[i])) {
            tags[i] = "NOUN";
            source[i] = Source::Rule;
        } else if (const auto* hit = lexicon.find(lower[i])) {
            tags[i] = *hit;
            source[i] = Source::Lexicon;
        } else if (const auto* suf = suffix_tag(lower[i])) {
            tags[i] = suf;
            source[i] = Source::Suffix;
        } else if (i > 0 && is_capitalized(tok)) {
            tags[i] = "PROPN";
        } else {
            tags[i] = "NOUN";
        }
    }

    // Contextual fixes, left to right so each sees earlier corrections.
    for (std::size_t i = 0; i < n; ++i) {
        const bool has_prev = i > 0;
        const bool has_next = i + 1 < n;
        if (lower[i] == "that" && has_prev && (tags[i - 1] == "NOUN" || tags[i - 1] == "PROPN")) {
            tags[i] = "PRON";  // relative pronoun
        }
        if (has_prev && source[i] == Source::Default && tags[i] == "NOUN") {
            const auto& prev = lower[i - 1];
            const bool after_relative =
                tags[i - 1] == "PRON" && (prev == "that" || prev == "which" || prev == "who");
            const bool after_modal = tags[i - 1] == "AUX" && is_modal(prev);
            if (after_relative || after_modal) tags[i] = "VERB";
        }
        if ((lower[i] == "like") && has_prev && is_subject_pronoun(lower[i - 1])) {
            tags[i] = "VERB";
        }
        if (lower[i] == "to" && has_next && (tags[i + 1] == "VERB" || tags[i + 1] == "AUX")) {
            tags[i] = "PART";
        }
    }
    return tags;
}

std::vector<AnnotatedExample> annotate_corpus(const Corpus& corpus, const Lexicon& lexicon) {
    if (corpus.source != SourceKind::Csv) {
        throw ContractError("annotate_corpus: CoNLL-U corpora arrive annotated already");
    }
    std::vector<AnnotatedExample> out;
    out.reserve(corpus.size());
    for (const auto& raw : corpus.examples) {
        AnnotatedExample ex;
        ex.raw = raw;
        const auto surfaces = tokenize(raw.text);
        const auto tags = tag_pos(surfaces, lexicon);
        ex.tokens.reserve(surfaces.size());
        for (std::size_t i = 0; i < surfaces.size(); ++i) {
            TokenAnnotation tok;
            tok.surface = surfaces[i];
            tok.pos = tags[i];
            ex.tokens.push_back(std::move(tok));
        }
        if (ex.tokens.empty()) {
            throw ContractError("annotate_corpus: example " + std::to_string(raw.id) +
                                " has no tokens");
        }
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace synlens::annotate

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synlens {

/// One input example as read from CSV or CoNLL-U, before annotation.
struct RawExample {
    std::size_t id = 0;
    std::string text;
    bool seed = false;
    std::optional<std::vector<double>> embedding;
    std::optional<std::string> label;

    bool operator==(const RawExample&) const = default;
};

enum class SourceKind { Csv, Conllu };

std::string_view to_string(SourceKind kind);

struct Corpus {
    std::vector<RawExample> examples;
    SourceKind source = SourceKind::Csv;

    std::size_t size() const { return examples.size(); }
};

struct TokenAnnotation {
    std::string surface;
    std::string pos;
    // Index of the governing token within the same example. Absent for the
    // root and for tokens whose head is unknown; `root` tells them apart.
    std::optional<std::size_t> head;
    bool root = false;
    std::optional<std::string> deprel;

    bool operator==(const TokenAnnotation&) const = default;
};

struct AnnotatedExample {
    RawExample raw;
    std::vector<TokenAnnotation> tokens;
    bool has_dependencies = false;

    bool operator==(const AnnotatedExample&) const = default;
};

/// True when every token has a resolved head (or is the single root) and a deprel.
bool dependencies_complete(const std::vector<TokenAnnotation>& tokens);

/// A per-row or per-sentence problem found while reading input.
struct Diagnostic {
    enum class Severity { Warning, Rejected };

    Severity severity = Severity::Warning;
    std::size_t location = 0;  // 1-based data row (CSV) or sentence number (CoNLL-U)
    std::string message;
};

std::string format_diagnostic(const Diagnostic& diag, std::string_view unit);

/// The 17 Universal POS tags.
inline constexpr std::string_view kUposTags[] = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

bool is_upos(std::string_view tag);

}  // namespace synlens

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "synlens/corpus.hpp"

namespace synlens::ingest {

/// Column names looked up in the CSV header. Only `text` is required.
struct CsvColumns {
    std::string text = "text";
    std::string seed = "seed";
    std::string label = "label";
    std::string embedding = "embedding";
};

struct CsvResult {
    Corpus corpus;
    std::vector<Diagnostic> diagnostics;
};

struct ConlluResult {
    Corpus corpus;
    std::vector<AnnotatedExample> annotated;
    std::vector<Diagnostic> diagnostics;
};

/// Parses RFC 4180 CSV with a header row.
///
/// Rows with blank text are rejected individually; malformed `seed` or
/// `embedding` cells keep the row but drop the field with a warning.
/// Throws ConfigError when the text column is missing and DataError when
/// embeddings disagree in dimension or fewer than two examples survive.
CsvResult parse_csv(std::string_view bytes, const CsvColumns& columns = {});

/// Parses CoNLL-U. Each sentence becomes one annotated example.
///
/// Honors `# text = ...`, `# seed = true|false`, `# label = ...` and
/// `# embedding = f;f;...` comments. Multiword ranges and empty nodes are
/// skipped. A sentence with an out-of-range or self-referencing head, a
/// second root, or a malformed token line is rejected with a diagnostic.
ConlluResult parse_conllu(std::string_view bytes);

/// Writes annotated examples back out in CoNLL-U. parse_conllu() of the
/// output reproduces the annotations field for field.
std::string serialize_conllu(const std::vector<AnnotatedExample>& examples);

/// Splits a semicolon-separated list of decimal floats. Returns false if any
/// element is empty, non-numeric, or non-finite.
bool parse_embedding_cell(std::string_view cell, std::vector<double>& out);

}  // namespace synlens::ingest

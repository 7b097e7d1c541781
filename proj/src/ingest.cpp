#include "synlens/ingest.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "synlens/error.hpp"
#include "text_util.hpp"

namespace synlens::ingest {

using detail::trim;

namespace {

struct CsvRecord {
    std::vector<std::string> fields;
    bool blank = false;  // a bare empty line
};

// RFC 4180 record splitter. Quoted fields may span lines; "" escapes a quote.
std::vector<CsvRecord> split_csv_records(std::string_view in) {
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    bool in_quotes = false;
    bool field_quoted = false;
    std::size_t record_start_line = 1;
    std::size_t line = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_quoted = false;
    };
    auto end_record = [&] {
        const bool any_quoted = field_quoted;
        end_field();
        current.blank = current.fields.size() == 1 && current.fields[0].empty() && !any_quoted;
        records.push_back(std::move(current));
        current = CsvRecord{};
        record_start_line = line;
    };

    for (std::size_t i = 0; i < in.size(); ++i) {
        const char c = in[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < in.size() && in[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field.empty() && !field_quoted) {
                in_quotes = true;
                field_quoted = true;
            } else {
                field += c;  // stray quote inside an unquoted field: keep it
            }
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (i + 1 < in.size() && in[i + 1] == '\n') break;
            ++line;
            end_record();
            break;
        case '\n':
            ++line;
            end_record();
            break;
        default:
            field += c;
        }
    }
    if (in_quotes) {
        throw DataError("unterminated quoted field in record starting at line " +
                        std::to_string(record_start_line));
    }
    if (!field.empty() || field_quoted || !current.fields.empty()) end_record();
    return records;
}

std::optional<bool> parse_seed_cell(std::string_view cell) {
    const auto v = detail::ascii_lower(trim(cell));
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0" || v.empty()) return false;
    return std::nullopt;
}

std::string dims_mismatch(std::string_view unit, std::size_t first_loc, std::size_t first_dim,
                          std::size_t loc, std::size_t dim) {
    std::ostringstream os;
    os << "inconsistent embedding dimensions: " << unit << ' ' << first_loc << " has " << first_dim
       << ", " << unit << ' ' << loc << " has " << dim;
    return os.str();
}

void require_two(const Corpus& corpus) {
    if (corpus.size() < 2) {
        throw DataError("corpus needs at least 2 valid examples, found " +
                        std::to_string(corpus.size()));
    }
}

}  // namespace

bool parse_embedding_cell(std::string_view cell, std::vector<double>& out) {
    out.clear();
    for (auto part : detail::split(trim(cell), ';')) {
        const auto value = detail::parse_double(part);
        if (!value || !std::isfinite(*value)) {
            out.clear();
            return false;
        }
        out.push_back(*value);
    }
    return !out.empty();
}

CsvResult parse_csv(std::string_view bytes, const CsvColumns& columns) {
    auto records = split_csv_records(detail::strip_bom(bytes));
    std::size_t header_idx = 0;
    while (header_idx < records.size() && records[header_idx].blank) ++header_idx;
    if (header_idx == records.size()) throw ConfigError("CSV input has no header row");

    const auto& header = records[header_idx].fields;
    auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return i;
        }
        return std::nullopt;
    };
    const auto text_col = find_col(columns.text);
    if (!text_col) throw ConfigError("CSV header has no '" + columns.text + "' column");
    const auto seed_col = find_col(columns.seed);
    const auto label_col = find_col(columns.label);
    const auto emb_col = find_col(columns.embedding);

    CsvResult result;
    result.corpus.source = SourceKind::Csv;
    std::optional<std::pair<std::size_t, std::size_t>> first_dim;  // (row, dim)

    std::size_t row = 0;
    for (std::size_t r = header_idx + 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.blank) continue;
        ++row;
        auto reject = [&](std::string msg) {
            result.diagnostics.push_back({Diagnostic::Severity::Rejected, row, std::move(msg)});
        };
        auto warn = [&](std::string msg) {
            result.diagnostics.push_back({Diagnostic::Severity::Warning, row, std::move(msg)});
        };
        if (rec.fields.size() > header.size()) {
            reject("has " + std::to_string(rec.fields.size()) + " fields but the header has " +
                   std::to_string(header.size()));
            continue;
        }
        auto cell = [&](std::optional<std::size_t> col) -> std::string_view {
            if (!col || *col >= rec.fields.size()) return {};
            return rec.fields[*col];
        };

        const auto text = trim(cell(text_col));
        if (text.empty()) {
            reject("empty text");
            continue;
        }
        RawExample ex;
        ex.id = result.corpus.examples.size();
        ex.text = std::string(text);

        if (seed_col) {
            if (auto seed = parse_seed_cell(cell(seed_col))) {
                ex.seed = *seed;
            } else {
                warn("unrecognized seed value '" + std::string(cell(seed_col)) + "', using false");
            }
        }
        if (label_col) {
            const auto label = trim(cell(label_col));
            if (!label.empty()) ex.label = std::string(label);
        }
        if (emb_col && !trim(cell(emb_col)).empty()) {
            std::vector<double> values;
            if (!parse_embedding_cell(cell(emb_col), values)) {
                warn("malformed embedding cell, embedding dropped");
            } else {
                if (!first_dim) {
                    first_dim = {row, values.size()};
                } else if (first_dim->second != values.size()) {
                    throw DataError(
                        dims_mismatch("row", first_dim->first, first_dim->second, row, values.size()));
                }
                ex.embedding = std::move(values);
            }
        }
        result.corpus.examples.push_back(std::move(ex));
    }
    require_two(result.corpus);
    return result;
}

ConlluResult parse_conllu(std::string_view bytes) {
    const auto lines = detail::split_lines(detail::strip_bom(bytes));
    ConlluResult result;
    result.corpus.source = SourceKind::Conllu;
    std::optional<std::pair<std::size_t, std::size_t>> first_dim;  // (sentence, dim)

    std::size_t sentence_no = 0;
    std::size_t i = 0;
    while (i < lines.size()) {
        if (trim(lines[i]).empty()) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < lines.size() && !trim(lines[end]).empty()) ++end;
        ++sentence_no;

        std::vector<Diagnostic> local;
        auto reject = [&](std::string msg) {
            local.push_back({Diagnostic::Severity::Rejected, sentence_no, std::move(msg)});
        };
        auto warn = [&](std::string msg) {
            local.push_back({Diagnostic::Severity::Warning, sentence_no, std::move(msg)});
        };

        AnnotatedExample ex;
        std::string text;
        std::vector<long long> raw_heads;  // -1 = unknown, 0 = root, k = token k (1-based)
        bool bad = false;

        for (std::size_t ln = i; ln < end && !bad; ++ln) {
            const auto line = lines[ln];
            if (line.front() == '#') {
                const auto body = trim(line.substr(1));
                const auto eq = body.find('=');
                if (eq == std::string_view::npos) continue;
                const auto key = trim(body.substr(0, eq));
                const auto value = trim(body.substr(eq + 1));
                if (key == "text") {
                    text = std::string(value);
                } else if (key == "seed") {
                    if (auto seed = parse_seed_cell(value)) {
                        ex.raw.seed = *seed;
                    } else {
                        warn("unrecognized seed value '" + std::string(value) + "', using false");
                    }
                } else if (key == "label") {
                    if (!value.empty()) ex.raw.label = std::string(value);
                } else if (key == "embedding") {
                    std::vector<double> values;
                    if (parse_embedding_cell(value, values)) {
                        ex.raw.embedding = std::move(values);
                    } else {
                        warn("malformed embedding comment, embedding dropped");
                    }
                }
                continue;
            }
            const auto cols = detail::split(line, '\t');
            if (cols.size() != 10) {
                reject("line " + std::to_string(ln + 1) + ": expected 10 tab-separated columns, got " +
                       std::to_string(cols.size()));
                bad = true;
                break;
            }
            if (cols[0].find('-') != std::string_view::npos ||
                cols[0].find('.') != std::string_view::npos) {
                continue;  // multiword range or empty node
            }
            const auto id = detail::parse_int(cols[0]);
            if (!id || *id != static_cast<long long>(ex.tokens.size()) + 1) {
                reject("line " + std::to_string(ln + 1) + ": token id '" + std::string(cols[0]) +
                       "' out of sequence");
                bad = true;
                break;
            }
            TokenAnnotation tok;
            tok.surface = std::string(cols[1]);
            tok.pos = std::string(cols[3]);
            if (tok.pos == "_") {
                warn("token " + std::to_string(*id) + " has no UPOS, using X");
                tok.pos = "X";
            } else if (!is_upos(tok.pos)) {
                warn("token " + std::to_string(*id) + " has non-UPOS tag '" + tok.pos + "'");
            }
            if (cols[6] == "_") {
                raw_heads.push_back(-1);
            } else if (auto head = detail::parse_int(cols[6]); head && *head >= 0) {
                raw_heads.push_back(*head);
            } else {
                reject("line " + std::to_string(ln + 1) + ": malformed HEAD '" +
                       std::string(cols[6]) + "'");
                bad = true;
                break;
            }
            if (cols[7] != "_") tok.deprel = std::string(cols[7]);
            ex.tokens.push_back(std::move(tok));
        }

        if (!bad && ex.tokens.empty()) {
            reject("sentence has no tokens");
            bad = true;
        }
        std::size_t roots = 0;
        for (std::size_t t = 0; t < ex.tokens.size() && !bad; ++t) {
            const auto h = raw_heads[t];
            if (h < 0) continue;
            if (h == 0) {
                ex.tokens[t].root = true;
                ++roots;
            } else if (static_cast<std::size_t>(h) > ex.tokens.size()) {
                reject("token " + std::to_string(t + 1) + ": HEAD " + std::to_string(h) +
                       " out of range (sentence has " + std::to_string(ex.tokens.size()) +
                       " tokens)");
                bad = true;
            } else if (static_cast<std::size_t>(h) == t + 1) {
                reject("token " + std::to_string(t + 1) + " is its own head");
                bad = true;
            } else {
                ex.tokens[t].head = static_cast<std::size_t>(h - 1);
            }
        }
        if (!bad && roots > 1) {
            reject("sentence has " + std::to_string(roots) + " roots");
            bad = true;
        }

        if (!bad) {
            if (text.empty()) {
                for (const auto& tok : ex.tokens) {
                    if (!text.empty()) text += ' ';
                    text += tok.surface;
                }
            }
            ex.raw.text = std::move(text);
            ex.raw.id = result.annotated.size();
            ex.has_dependencies = dependencies_complete(ex.tokens);
            if (ex.raw.embedding) {
                const auto dim = ex.raw.embedding->size();
                if (!first_dim) {
                    first_dim = {sentence_no, dim};
                } else if (first_dim->second != dim) {
                    throw DataError(
                        dims_mismatch("sentence", first_dim->first, first_dim->second, sentence_no, dim));
                }
            }
            result.corpus.examples.push_back(ex.raw);
            result.annotated.push_back(std::move(ex));
        }
        for (auto& d : local) result.diagnostics.push_back(std::move(d));
        i = end;
    }
    require_two(result.corpus);
    return result;
}

std::string serialize_conllu(const std::vector<AnnotatedExample>& examples) {
    std::string out;
    for (const auto& ex : examples) {
        std::string text = ex.raw.text;
        for (char& c : text) {
            if (c == '\n' || c == '\r') c = ' ';
        }
        out += "# text = " + text + "\n";
        if (ex.raw.seed) out += "# seed = true\n";
        if (ex.raw.label) out += "# label = " + *ex.raw.label + "\n";
        if (ex.raw.embedding) {
            out += "# embedding = ";
            for (std::size_t k = 0; k < ex.raw.embedding->size(); ++k) {
                if (k) out += ';';
                out += detail::format_double((*ex.raw.embedding)[k]);
            }
            out += '\n';
        }
        for (std::size_t t = 0; t < ex.tokens.size(); ++t) {
            const auto& tok = ex.tokens[t];
            std::string head = "_";
            if (tok.head) {
                head = std::to_string(*tok.head + 1);
            } else if (tok.root) {
                head = "0";
            }
            out += std::to_string(t + 1) + '\t' + tok.surface + "\t_\t" + tok.pos + "\t_\t_\t" + head +
                   '\t' + tok.deprel.value_or("_") + "\t_\t_\n";
        }
        out += '\n';
    }
    return out;
}

}  // namespace synlens::ingest

#include "synlens/fixtures.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "synlens/error.hpp"
#include "text_util.hpp"

namespace synlens::fixtures {

using detail::trim;

namespace {

// std::mt19937_64 output is fully specified by the standard; the
// distributions are not, so all draws below use raw engine output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

struct Row {
    std::vector<TokenAnnotation> tokens;
    bool seed = false;
    std::string label;
};

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ConfigError("fixture spec line " + std::to_string(line) + ": " + msg);
}

TemplateTokens parse_tokens(std::string_view value, std::size_t line) {
    TemplateTokens out;
    for (auto part : detail::split(value, ' ')) {
        if (part.empty()) continue;
        // surface/UPOS/head/deprel; split from the right so the surface may contain '/'
        std::vector<std::string_view> fields;
        auto rest = part;
        for (int k = 0; k < 3; ++k) {
            const auto slash = rest.rfind('/');
            if (slash == std::string_view::npos) fail(line, "token '" + std::string(part) + "' needs surface/UPOS/head/deprel");
            fields.insert(fields.begin(), rest.substr(slash + 1));
            rest = rest.substr(0, slash);
        }
        if (rest.empty()) fail(line, "token '" + std::string(part) + "' has an empty surface");
        TemplateToken tok;
        if (rest.size() > 2 && rest.front() == '{' && rest.back() == '}') {
            tok.slot = true;
            tok.surface = std::string(rest.substr(1, rest.size() - 2));
        } else {
            tok.surface = std::string(rest);
        }
        tok.pos = std::string(fields[0]);
        if (!is_upos(tok.pos)) fail(line, "'" + tok.pos + "' is not a UPOS tag");
        const auto head = detail::parse_int(fields[1]);
        if (!head || *head < 0) fail(line, "bad head '" + std::string(fields[1]) + "'");
        tok.head = static_cast<std::size_t>(*head);
        tok.deprel = std::string(fields[2]);
        if (tok.deprel.empty()) fail(line, "empty deprel");
        out.push_back(std::move(tok));
    }
    if (out.empty()) fail(line, "no tokens");
    std::size_t roots = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].head == 0) {
            ++roots;
        } else if (out[i].head > out.size() || out[i].head == i + 1) {
            fail(line, "token " + std::to_string(i + 1) + " has an invalid head");
        }
    }
    if (roots != 1) fail(line, "expected exactly one root, found " + std::to_string(roots));
    return out;
}

std::vector<TokenAnnotation> instantiate(const TemplateTokens& tpl,
                                         const std::map<std::string, std::string>& fill) {
    std::vector<TokenAnnotation> out;
    out.reserve(tpl.size());
    for (const auto& t : tpl) {
        TokenAnnotation tok;
        tok.surface = t.slot ? fill.at(t.surface) : t.surface;
        tok.pos = t.pos;
        if (t.head == 0) {
            tok.root = true;
        } else {
            tok.head = t.head - 1;
        }
        tok.deprel = t.deprel;
        out.push_back(std::move(tok));
    }
    return out;
}

std::string row_key(const std::vector<TokenAnnotation>& tokens) {
    std::string key;
    for (const auto& t : tokens) {
        key += detail::ascii_lower(t.surface);
        key += ' ';
    }
    return key;
}

std::vector<std::string> slot_names(const TemplateTokens& tpl) {
    std::vector<std::string> names;
    for (const auto& t : tpl) {
        if (t.slot && std::find(names.begin(), names.end(), t.surface) == names.end()) {
            names.push_back(t.surface);
        }
    }
    return names;
}

bool is_closing_punct(std::string_view tok) {
    return tok == "." || tok == "," || tok == "!" || tok == "?" || tok == ";" || tok == ":" ||
           tok == ")";
}

}  // namespace

TemplateSpec parse_spec(std::string_view text) {
    TemplateSpec spec;
    std::vector<std::pair<std::size_t, std::string>> family_lines;
    std::size_t line_no = 0;
    for (auto raw : detail::split_lines(text)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const auto key = std::string(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const auto dot = key.find('.');
        const auto head = key.substr(0, dot);
        const auto sub = dot == std::string::npos ? std::string() : key.substr(dot + 1);
        auto require_sub = [&] {
            if (sub.empty()) fail(line_no, "'" + head + "' needs a name, e.g. " + head + ".x");
        };
        auto number = [&](std::string_view v) {
            const auto n = detail::parse_int(v);
            if (!n || *n < 0) fail(line_no, "expected a non-negative integer, got '" + std::string(v) + "'");
            return static_cast<std::uint64_t>(*n);
        };

        if (key == "name") {
            spec.name = std::string(value);
        } else if (key == "count") {
            spec.count = number(value);
        } else if (key == "rng_seed") {
            spec.rng_seed = number(value);
        } else if (key == "duplicates") {
            spec.duplicates = number(value);
        } else if (head == "slot") {
            require_sub();
            auto& words = spec.slots[sub];
            words.clear();
            for (auto w : detail::split(value, '|')) {
                const auto word = trim(w);
                if (word.empty() || word.find(' ') != std::string_view::npos) {
                    fail(line_no, "slot words must be single non-empty tokens");
                }
                if (std::find(words.begin(), words.end(), word) != words.end()) {
                    fail(line_no, "duplicate slot word '" + std::string(word) + "'");
                }
                words.emplace_back(word);
            }
        } else if (head == "template") {
            require_sub();
            spec.templates[sub] = parse_tokens(value, line_no);
        } else if (head == "weight") {
            require_sub();
            const auto w = detail::parse_double(value);
            if (!w || *w <= 0) fail(line_no, "weight must be a positive number");
            spec.weights[sub] = *w;
        } else if (head == "family") {
            require_sub();
            family_lines.emplace_back(line_no, key);
            const auto parts = detail::split(value, ' ');
            std::vector<std::string_view> fields;
            for (auto p : parts) {
                if (!p.empty()) fields.push_back(p);
            }
            if (fields.size() != 3) fail(line_no, "family needs: template slot variants");
            spec.families.push_back({sub, std::string(fields[0]), std::string(fields[1]), number(fields[2])});
        } else if (head == "seed") {
            require_sub();
            spec.seeds.push_back(parse_tokens(value, line_no));
        } else if (head == "outlier") {
            require_sub();
            spec.outliers.push_back(parse_tokens(value, line_no));
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
    }

    if (spec.name.empty()) throw ConfigError("fixture spec: missing name");
    if (spec.count == 0) throw ConfigError("fixture spec: count must be positive");
    if (spec.templates.empty()) throw ConfigError("fixture spec: no templates");
    for (const auto& [name, tpl] : spec.templates) {
        for (const auto& slot : slot_names(tpl)) {
            if (!spec.slots.count(slot)) {
                throw ConfigError("fixture spec: template '" + name + "' uses undefined slot {" + slot + "}");
            }
        }
    }
    for (const auto& [name, w] : spec.weights) {
        if (!spec.templates.count(name)) throw ConfigError("fixture spec: weight for unknown template '" + name + "'");
    }
    for (std::size_t f = 0; f < spec.families.size(); ++f) {
        const auto& fam = spec.families[f];
        const auto line = family_lines[f].first;
        const auto it = spec.templates.find(fam.template_name);
        if (it == spec.templates.end()) fail(line, "unknown template '" + fam.template_name + "'");
        const auto names = slot_names(it->second);
        if (std::find(names.begin(), names.end(), fam.varied_slot) == names.end()) {
            fail(line, "template '" + fam.template_name + "' has no slot {" + fam.varied_slot + "}");
        }
        if (fam.variants < 2 || fam.variants > spec.slots.at(fam.varied_slot).size()) {
            fail(line, "variants must be between 2 and the size of slot {" + fam.varied_slot + "}");
        }
    }
    return spec;
}

GeneratedFixture generate_fixture(const TemplateSpec& spec) {
    Rng rng(spec.rng_seed);
    std::vector<Row> rows;
    std::set<std::string> used;

    auto add_literal = [&](const TemplateTokens& tpl, bool seed, const std::string& label) {
        Row row{instantiate(tpl, {}), seed, label};
        if (!used.insert(row_key(row.tokens)).second) {
            throw ConfigError("fixture spec: literal row '" + row_key(row.tokens) + "' appears twice");
        }
        rows.push_back(std::move(row));
    };
    for (const auto& s : spec.seeds) add_literal(s, true, "seed");
    for (const auto& o : spec.outliers) add_literal(o, false, "outlier");

    auto random_fill = [&](const TemplateTokens& tpl) {
        std::map<std::string, std::string> fill;
        for (const auto& slot : slot_names(tpl)) {
            const auto& words = spec.slots.at(slot);
            fill[slot] = words[rng.below(words.size())];
        }
        return fill;
    };

    std::vector<std::vector<std::size_t>> family_rows;
    for (const auto& fam : spec.families) {
        const auto& tpl = spec.templates.at(fam.template_name);
        bool placed = false;
        for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
            auto fill = random_fill(tpl);
            auto words = spec.slots.at(fam.varied_slot);
            rng.shuffle(words);
            std::vector<Row> candidates;
            std::set<std::string> keys;
            for (std::size_t v = 0; v < fam.variants; ++v) {
                fill[fam.varied_slot] = words[v];
                Row row{instantiate(tpl, fill), false, "family:" + fam.key};
                const auto key = row_key(row.tokens);
                if (used.count(key)) break;
                keys.insert(key);
                candidates.push_back(std::move(row));
            }
            if (candidates.size() != fam.variants) continue;
            std::vector<std::size_t> ids;
            for (auto& row : candidates) {
                ids.push_back(rows.size());
                rows.push_back(std::move(row));
            }
            used.insert(keys.begin(), keys.end());
            family_rows.push_back(std::move(ids));
            placed = true;
        }
        if (!placed) throw ConfigError("fixture spec: cannot place family '" + fam.key + "' without collisions");
    }

    if (rows.size() + spec.duplicates > spec.count) {
        throw ConfigError("fixture spec: count " + std::to_string(spec.count) +
                          " is smaller than the literal, family and duplicate rows");
    }
    const auto random_count = spec.count - rows.size() - spec.duplicates;
    if (spec.duplicates > random_count) {
        throw ConfigError("fixture spec: more duplicates than template rows to copy");
    }

    std::vector<std::pair<std::string, double>> weighted;
    double total_weight = 0.0;
    for (const auto& [name, tpl] : spec.templates) {
        const auto it = spec.weights.find(name);
        const double w = it == spec.weights.end() ? 1.0 : it->second;
        weighted.emplace_back(name, w);
        total_weight += w;
    }
    std::vector<std::size_t> random_rows;
    const std::size_t max_attempts = 1000 * (random_count + 1);
    for (std::size_t attempts = 0; random_rows.size() < random_count; ++attempts) {
        if (attempts >= max_attempts) {
            throw ConfigError("fixture spec: templates cannot produce " + std::to_string(random_count) +
                              " distinct rows");
        }
        double r = rng.unit() * total_weight;
        std::size_t pick = 0;
        while (pick + 1 < weighted.size() && r >= weighted[pick].second) {
            r -= weighted[pick].second;
            ++pick;
        }
        const auto& tpl = spec.templates.at(weighted[pick].first);
        Row row{instantiate(tpl, random_fill(tpl)), false, weighted[pick].first};
        if (!used.insert(row_key(row.tokens)).second) continue;
        random_rows.push_back(rows.size());
        rows.push_back(std::move(row));
    }

    std::vector<std::pair<std::size_t, std::size_t>> dup_rows;
    auto pool = random_rows;
    for (std::size_t d = 0; d < spec.duplicates; ++d) {
        std::swap(pool[d], pool[d + rng.below(pool.size() - d)]);
        const auto original = pool[d];
        dup_rows.emplace_back(original, rows.size());
        rows.push_back(rows[original]);
    }

    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<std::size_t> new_id(rows.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) new_id[order[pos]] = pos;

    GeneratedFixture out;
    out.name = spec.name;
    out.examples.resize(rows.size());
    for (std::size_t old = 0; old < rows.size(); ++old) {
        auto& ex = out.examples[new_id[old]];
        ex.raw.id = new_id[old];
        std::vector<std::string> surfaces;
        for (const auto& t : rows[old].tokens) surfaces.push_back(t.surface);
        ex.raw.text = realize_text(surfaces);
        ex.raw.seed = rows[old].seed;
        ex.raw.label = rows[old].label;
        ex.tokens = rows[old].tokens;
        ex.has_dependencies = dependencies_complete(ex.tokens);
    }
    for (const auto& fam : family_rows) {
        std::vector<std::size_t> ids;
        for (auto r : fam) ids.push_back(new_id[r]);
        std::sort(ids.begin(), ids.end());
        out.families.push_back(std::move(ids));
    }
    for (const auto& [a, b] : dup_rows) out.duplicate_pairs.emplace_back(new_id[a], new_id[b]);
    return out;
}

std::string realize_text(const std::vector<std::string>& tokens) {
    std::string text;
    for (const auto& tok : tokens) {
        if (!text.empty() && !is_closing_punct(tok)) text += ' ';
        text += tok;
    }
    return text;
}

std::string to_csv(const std::vector<AnnotatedExample>& examples) {
    auto field = [](std::string_view v) {
        const bool quote = v.find_first_of(",\"\r\n") != std::string_view::npos ||
                           (!v.empty() && (v.front() == ' ' || v.back() == ' '));
        if (!quote) return std::string(v);
        std::string out = "\"";
        for (char c : v) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    };
    std::string out = "text,seed,label\n";
    for (const auto& ex : examples) {
        out += field(ex.raw.text) + ',' + (ex.raw.seed ? "true" : "false") + ',' +
               field(ex.raw.label.value_or("")) + '\n';
    }
    return out;
}

}  // namespace synlens::fixtures

#include "synlens/report.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>

#include <json.hpp>

#include "synlens/error.hpp"

namespace synlens::report {

using nlohmann::json;
using metrics::View;

namespace {

// Rethrows library errors with the originating module named.
template <typename Fn>
auto attributed(std::string_view module, Fn&& fn) -> decltype(fn()) {
    const auto prefix = std::string(module) + ": ";
    try {
        return fn();
    } catch (const UnavailableViewError& e) {
        throw UnavailableViewError(prefix + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const ContractError& e) {
        throw ContractError(prefix + e.what());
    }
}

std::string_view linkage_name(cluster::Linkage l) {
    return l == cluster::Linkage::Average ? "average" : "complete";
}

View view_from_json(const json& j) {
    const auto name = j.get<std::string>();
    const auto v = metrics::parse_view(name);
    if (!v) throw DataError("unknown metric '" + name + "'");
    return *v;
}

json pattern_to_json(const patterns::Pattern& p) {
    json items = json::array();
    for (const auto& it : p.items) {
        items.push_back({{"kind", it.kind == patterns::ItemKind::Token ? "TOKEN" : "POS"},
                         {"value", it.value}});
    }
    return {{"items", std::move(items)}, {"support", p.support}, {"score", p.score}};
}

patterns::Pattern pattern_from_json(const json& j) {
    patterns::Pattern p;
    for (const auto& it : j.at("items")) {
        const auto kind = it.at("kind").get<std::string>();
        if (kind != "TOKEN" && kind != "POS") throw DataError("bad pattern item kind '" + kind + "'");
        p.items.push_back({kind == "TOKEN" ? patterns::ItemKind::Token : patterns::ItemKind::Pos,
                           it.at("value").get<std::string>()});
    }
    p.support = j.at("support").get<std::size_t>();
    p.score = j.at("score").get<double>();
    return p;
}

json example_to_json(const AnnotatedExample& ex) {
    json tokens = json::array();
    json pos = json::array();
    json heads = json::array();
    json deprels = json::array();
    for (const auto& tok : ex.tokens) {
        tokens.push_back(tok.surface);
        pos.push_back(tok.pos);
        if (tok.head) {
            heads.push_back(*tok.head);
        } else if (tok.root) {
            heads.push_back(-1);
        } else {
            heads.push_back(nullptr);
        }
        deprels.push_back(tok.deprel ? json(*tok.deprel) : json(nullptr));
    }
    json j = {{"id", ex.raw.id},
              {"text", ex.raw.text},
              {"seed", ex.raw.seed},
              {"has_dependencies", ex.has_dependencies},
              {"tokens", std::move(tokens)},
              {"pos", std::move(pos)},
              {"heads", std::move(heads)},
              {"deprels", std::move(deprels)}};
    if (ex.raw.label) j["label"] = *ex.raw.label;
    return j;
}

AnnotatedExample example_from_json(const json& j) {
    AnnotatedExample ex;
    ex.raw.id = j.at("id").get<std::size_t>();
    ex.raw.text = j.at("text").get<std::string>();
    ex.raw.seed = j.at("seed").get<bool>();
    if (j.contains("label")) ex.raw.label = j.at("label").get<std::string>();
    ex.has_dependencies = j.at("has_dependencies").get<bool>();
    const auto& tokens = j.at("tokens");
    const auto& pos = j.at("pos");
    const auto& heads = j.at("heads");
    const auto& deprels = j.at("deprels");
    if (pos.size() != tokens.size() || heads.size() != tokens.size() ||
        deprels.size() != tokens.size()) {
        throw DataError("example " + std::to_string(ex.raw.id) + ": annotation arrays differ in length");
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        TokenAnnotation tok;
        tok.surface = tokens[i].get<std::string>();
        tok.pos = pos[i].get<std::string>();
        if (!heads[i].is_null()) {
            const auto h = heads[i].get<long long>();
            if (h == -1) {
                tok.root = true;
            } else if (h >= 0 && static_cast<std::size_t>(h) < tokens.size()) {
                tok.head = static_cast<std::size_t>(h);
            } else {
                throw DataError("example " + std::to_string(ex.raw.id) + ": head out of range");
            }
        }
        if (!deprels[i].is_null()) tok.deprel = deprels[i].get<std::string>();
        ex.tokens.push_back(std::move(tok));
    }
    return ex;
}

json dendrogram_to_json(const cluster::Dendrogram& d) {
    json merges = json::array();
    for (const auto& m : d.merges) {
        merges.push_back(
            {{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
    }
    return {{"n_leaves", d.n_leaves}, {"merges", std::move(merges)}, {"leaf_order", d.leaf_order}};
}

cluster::Dendrogram dendrogram_from_json(const json& j) {
    cluster::Dendrogram d;
    d.n_leaves = j.at("n_leaves").get<std::size_t>();
    for (const auto& m : j.at("merges")) {
        d.merges.push_back({m.at("left").get<std::size_t>(), m.at("right").get<std::size_t>(),
                            m.at("height").get<double>(), m.at("size").get<std::size_t>()});
    }
    d.leaf_order = j.at("leaf_order").get<std::vector<std::size_t>>();
    return d;
}

json matrix_to_json(const metrics::DistanceMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

metrics::DistanceMatrix matrix_from_json(const json& j) {
    metrics::DistanceMatrix m(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i].size() != j.size()) throw DataError("distance matrix is not square");
        for (std::size_t k = 0; k < j.size(); ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

json to_json(const AnalysisBundle& b) {
    json examples = json::array();
    for (const auto& ex : b.examples) examples.push_back(example_to_json(ex));

    json availability = json::object();
    for (const auto& a : b.availability) {
        availability[std::string(metrics::to_string(a.metric))] = {
            {"requested", a.requested},
            {"available", a.available},
            {"reason", a.reason.empty() ? json(nullptr) : json(a.reason)}};
    }

    json metrics_json = json::object();
    for (const auto& m : b.metrics) {
        json clusterings = json::array();
        for (const auto& fc : m.clusterings) {
            json clusters = json::array();
            for (const auto& c : fc.clusters) {
                clusters.push_back({{"members", c.members},
                                    {"min_support", c.min_support},
                                    {"summary", c.summary ? pattern_to_json(*c.summary) : json(nullptr)}});
            }
            clusterings.push_back({{"k", fc.k}, {"clusters", std::move(clusters)}});
        }
        json groups = json::array();
        for (const auto& g : m.near_duplicates) {
            groups.push_back({{"ids", g.ids}, {"max_distance", g.max_distance}});
        }
        json entry = {{"dendrogram", dendrogram_to_json(m.dendrogram)},
                      {"clusterings", std::move(clusterings)},
                      {"near_duplicates", std::move(groups)}};
        if (m.matrix) entry["matrix"] = matrix_to_json(*m.matrix);
        metrics_json[std::string(metrics::to_string(m.metric))] = std::move(entry);
    }

    json comparison = nullptr;
    if (b.comparison) {
        json names = json::array();
        for (auto v : b.comparison->metrics) names.push_back(metrics::to_string(v));
        comparison = {{"metrics", std::move(names)}, {"table", b.comparison->table}};
    }

    const auto& w = b.summary.weights;
    json options = {
        {"ks", b.ks},
        {"dup_threshold", b.dup_threshold},
        {"linkage", linkage_name(b.linkage)},
        {"embedding", {{"source", b.embedding_source}, {"dim", b.embedding_dim}}},
        {"summary",
         {{"min_support_fraction", b.summary.min_support_fraction},
          {"min_support_floor", b.summary.min_support_floor},
          {"max_length", b.summary.max_length},
          {"weights",
           {{"token_item", w.token_item}, {"pos_item", w.pos_item}, {"log2_support", w.log2_support}}}}}};

    json out = {{"version", b.version},
                {"source", to_string(b.source)},
                {"options", std::move(options)},
                {"examples", std::move(examples)},
                {"availability", std::move(availability)},
                {"metrics", std::move(metrics_json)},
                {"comparison", std::move(comparison)}};
    if (!b.comparison_note.empty()) out["comparison_note"] = b.comparison_note;
    return out;
}

AnalysisBundle from_json(const json& j) {
    AnalysisBundle b;
    b.version = j.at("version").get<std::string>();
    if (b.version != kBundleVersion) {
        throw DataError("bundle version '" + b.version + "' is not supported (expected '" +
                        std::string(kBundleVersion) + "')");
    }
    const auto source = j.at("source").get<std::string>();
    if (source != "csv" && source != "conllu") throw DataError("unknown source '" + source + "'");
    b.source = source == "csv" ? SourceKind::Csv : SourceKind::Conllu;

    const auto& opt = j.at("options");
    b.ks = opt.at("ks").get<std::vector<std::size_t>>();
    b.dup_threshold = opt.at("dup_threshold").get<double>();
    const auto linkage = opt.at("linkage").get<std::string>();
    if (linkage != "average" && linkage != "complete") {
        throw DataError("unknown linkage '" + linkage + "'");
    }
    b.linkage = linkage == "average" ? cluster::Linkage::Average : cluster::Linkage::Complete;
    b.embedding_source = opt.at("embedding").at("source").get<std::string>();
    b.embedding_dim = opt.at("embedding").at("dim").get<std::size_t>();
    const auto& sum = opt.at("summary");
    b.summary.min_support_fraction = sum.at("min_support_fraction").get<double>();
    b.summary.min_support_floor = sum.at("min_support_floor").get<std::size_t>();
    b.summary.max_length = sum.at("max_length").get<std::size_t>();
    b.summary.weights.token_item = sum.at("weights").at("token_item").get<double>();
    b.summary.weights.pos_item = sum.at("weights").at("pos_item").get<double>();
    b.summary.weights.log2_support = sum.at("weights").at("log2_support").get<double>();

    for (const auto& ex : j.at("examples")) b.examples.push_back(example_from_json(ex));
    for (std::size_t i = 0; i < b.examples.size(); ++i) {
        if (b.examples[i].raw.id != i) throw DataError("example ids must be 0..n-1 in order");
    }

    for (const auto view : metrics::kAllViews) {
        const auto& a = j.at("availability").at(std::string(metrics::to_string(view)));
        b.availability.push_back({view, a.at("requested").get<bool>(), a.at("available").get<bool>(),
                                  a.at("reason").is_null() ? "" : a.at("reason").get<std::string>()});
    }

    const auto n = b.examples.size();
    for (const auto view : metrics::kAllViews) {
        const auto key = std::string(metrics::to_string(view));
        if (!j.at("metrics").contains(key)) continue;
        const auto& mj = j.at("metrics").at(key);
        MetricResult m;
        m.metric = view;
        m.dendrogram = dendrogram_from_json(mj.at("dendrogram"));
        for (const auto& cj : mj.at("clusterings")) {
            FlatClustering fc;
            fc.k = cj.at("k").get<std::size_t>();
            for (const auto& c : cj.at("clusters")) {
                ClusterSummary cs;
                cs.members = c.at("members").get<std::vector<std::size_t>>();
                cs.min_support = c.at("min_support").get<std::size_t>();
                if (!c.at("summary").is_null()) cs.summary = pattern_from_json(c.at("summary"));
                for (auto id : cs.members) {
                    if (id >= n) throw DataError(key + ": cluster references unknown example " + std::to_string(id));
                }
                fc.clusters.push_back(std::move(cs));
            }
            m.clusterings.push_back(std::move(fc));
        }
        for (const auto& g : mj.at("near_duplicates")) {
            NearDuplicateGroup group{view, g.at("ids").get<std::vector<std::size_t>>(),
                                     g.at("max_distance").get<double>()};
            for (auto id : group.ids) {
                if (id >= n) throw DataError(key + ": group references unknown example " + std::to_string(id));
            }
            m.near_duplicates.push_back(std::move(group));
        }
        if (mj.contains("matrix")) m.matrix = matrix_from_json(mj.at("matrix"));
        if (m.dendrogram.n_leaves != n) throw DataError(key + ": dendrogram size does not match examples");
        b.metrics.push_back(std::move(m));
    }

    if (!j.at("comparison").is_null()) {
        compare::MetricComparison c;
        for (const auto& name : j.at("comparison").at("metrics")) c.metrics.push_back(view_from_json(name));
        c.table = j.at("comparison").at("table").get<std::vector<std::vector<double>>>();
        if (c.table.size() != c.metrics.size()) throw DataError("comparison table size mismatch");
        b.comparison = std::move(c);
    }
    if (j.contains("comparison_note")) b.comparison_note = j.at("comparison_note").get<std::string>();
    return b;
}

std::string quote_text(std::string_view text, std::size_t max_len = 60) {
    std::string s(text.substr(0, max_len));
    if (text.size() > max_len) {
        // Keep whole UTF-8 sequences.
        while (!s.empty() && (static_cast<unsigned char>(s.back()) & 0xC0) == 0x80) s.pop_back();
        if (!s.empty() && static_cast<unsigned char>(s.back()) >= 0xC0) s.pop_back();
        s += "...";
    }
    return "\"" + s + "\"";
}

std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

const FlatClustering* MetricResult::clustering(std::size_t k) const {
    for (const auto& c : clusterings) {
        if (c.k == k) return &c;
    }
    return nullptr;
}

const MetricResult* AnalysisBundle::metric(View view) const {
    for (const auto& m : metrics) {
        if (m.metric == view) return &m;
    }
    return nullptr;
}

std::vector<NearDuplicateGroup> near_duplicates(const cluster::Dendrogram& dendro,
                                                const metrics::DistanceMatrix& d, View metric,
                                                double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw ContractError("near_duplicates: threshold must lie in [0, 1]");
    }
    if (d.size() != dendro.n_leaves) throw ContractError("near_duplicates: matrix/dendrogram size mismatch");
    const auto n = dendro.n_leaves;
    std::vector<NearDuplicateGroup> groups;
    if (dendro.merges.empty()) return groups;

    std::function<void(std::size_t)> visit = [&](std::size_t node) {
        if (node < n) return;
        const auto& m = dendro.merges[node - n];
        if (m.height <= threshold) {
            const auto ids = cluster::subtree_leaves(dendro, node);
            double worst = 0.0;
            for (std::size_t a = 0; a < ids.size(); ++a) {
                for (std::size_t b = a + 1; b < ids.size(); ++b) worst = std::max(worst, d(ids[a], ids[b]));
            }
            if (worst <= threshold) {
                groups.push_back({metric, ids, worst});
                return;
            }
        }
        visit(m.left);
        visit(m.right);
    };
    visit(n + dendro.merges.size() - 1);
    std::stable_sort(groups.begin(), groups.end(),
                     [](const auto& a, const auto& b) { return a.ids.size() > b.ids.size(); });
    return groups;
}

AnalysisBundle build_analysis(const std::vector<AnnotatedExample>& examples, SourceKind source,
                              const AnalysisOptions& options) {
    if (examples.size() < 2) throw DataError("analysis: corpus needs at least 2 examples");
    for (std::size_t i = 0; i < examples.size(); ++i) {
        if (examples[i].raw.id != i) throw ContractError("analysis: example ids must be 0..n-1");
        if (examples[i].tokens.empty()) {
            throw ContractError("analysis: example " + std::to_string(i) + " has no tokens");
        }
    }

    AnalysisBundle b;
    b.source = source;
    b.ks = options.ks;
    std::sort(b.ks.begin(), b.ks.end());
    b.ks.erase(std::unique(b.ks.begin(), b.ks.end()), b.ks.end());
    b.dup_threshold = options.dup_threshold;
    b.linkage = options.linkage;
    b.summary = options.summary;
    b.examples = examples;
    for (auto& ex : b.examples) ex.raw.embedding.reset();

    std::map<View, metrics::DistanceMatrix> matrices;
    for (const auto view : metrics::kAllViews) {
        Availability a;
        a.metric = view;
        a.requested = std::find(options.metrics.begin(), options.metrics.end(), view) !=
                      options.metrics.end();
        if (!a.requested) {
            a.reason = "not requested";
        } else if (auto reason = metrics::unavailable_reason(examples, view, options.embedding)) {
            a.reason = *reason;
        } else {
            a.available = true;
        }
        b.availability.push_back(a);
        if (!a.available) continue;

        if (view == View::Embedding) {
            b.embedding_source = metrics::uses_supplied_embeddings(examples) ? "supplied" : "fallback-hash";
            b.embedding_dim = metrics::uses_supplied_embeddings(examples)
                                  ? examples.front().raw.embedding->size()
                                  : options.embedding.dim;
        }
        auto d = attributed("metrics", [&] { return metrics::distance_matrix(examples, view, options.embedding); });

        MetricResult m;
        m.metric = view;
        m.dendrogram = attributed("cluster", [&] { return cluster::agglomerate(d, options.linkage); });
        for (const auto& [k, flat] : cluster::flatten_all(m.dendrogram, b.ks)) {
            FlatClustering fc;
            fc.k = k;
            for (const auto& members : flat.clusters) {
                ClusterSummary cs;
                cs.members = members;
                cs.min_support = patterns::summary_min_support(members.size(), options.summary);
                cs.summary = attributed("patterns", [&] {
                    return patterns::summarize_cluster(members, examples, options.summary);
                });
                fc.clusters.push_back(std::move(cs));
            }
            m.clusterings.push_back(std::move(fc));
        }
        m.near_duplicates = attributed("report", [&] {
            return near_duplicates(m.dendrogram, d, view, options.dup_threshold);
        });
        if (options.include_matrices) m.matrix = d;
        b.metrics.push_back(std::move(m));
        matrices.emplace(view, std::move(d));
    }

    if (matrices.size() >= 2) {
        b.comparison = attributed("compare", [&] { return compare::metric_table(matrices); });
    } else {
        b.comparison_note = "metric comparison needs at least 2 available metrics";
    }
    return b;
}

std::string serialize_bundle(const AnalysisBundle& bundle) {
    return to_json(bundle).dump() + "\n";
}

AnalysisBundle parse_bundle(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DataError(std::string("bundle is not valid JSON: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const json::exception& e) {
        throw DataError(std::string("bundle does not match the schema: ") + e.what());
    }
}

std::size_t default_report_k(const AnalysisBundle& bundle) {
    std::size_t best = 0;
    for (const auto& m : bundle.metrics) {
        for (const auto& c : m.clusterings) {
            if (c.k == 10) return 10;
            best = std::max(best, c.k);
        }
    }
    return best;
}

std::string render_comparison(const AnalysisBundle& bundle) {
    std::string out = "== metric comparison (Frobenius distance between distance matrices) ==\n";
    if (bundle.comparison) {
        out += compare::render_table(*bundle.comparison);
    } else {
        out += "(" + bundle.comparison_note + ")\n";
    }
    return out;
}

std::string render_text_report(const AnalysisBundle& bundle, std::optional<std::size_t> k) {
    const auto report_k = k.value_or(default_report_k(bundle));
    std::size_t seeds = 0;
    for (const auto& ex : bundle.examples) seeds += ex.raw.seed ? 1 : 0;

    std::string out;
    out += "synlens report (" + bundle.version + ")\n";
    out += "source: " + std::string(to_string(bundle.source)) + ", " +
           std::to_string(bundle.examples.size()) + " examples, " + std::to_string(seeds) + " seed\n";
    out += "metrics:\n";
    for (const auto& a : bundle.availability) {
        out += "  " + std::string(metrics::to_string(a.metric)) + ": " +
               (a.available ? "available" : "unavailable (" + a.reason + ")");
        if (a.available && a.metric == View::Embedding) {
            out += " [" + bundle.embedding_source + ", dim " + std::to_string(bundle.embedding_dim) + "]";
        }
        out += '\n';
    }

    for (const auto& m : bundle.metrics) {
        out += "\n== " + std::string(metrics::to_string(m.metric)) + " ==\n";
        const auto* flat = m.clustering(report_k);
        if (!flat) {
            out += "no clustering at k = " + std::to_string(report_k) + "\n";
        } else {
            out += "k = " + std::to_string(report_k) + ": " + std::to_string(flat->clusters.size()) +
                   " clusters\n";
            for (std::size_t c = 0; c < flat->clusters.size(); ++c) {
                const auto& cl = flat->clusters[c];
                std::string seed_note;
                std::size_t cluster_seeds = 0;
                for (auto id : cl.members) cluster_seeds += bundle.examples[id].raw.seed ? 1 : 0;
                if (cluster_seeds) seed_note = ", " + std::to_string(cluster_seeds) + " seed";
                out += "  cluster " + std::to_string(c + 1) + " (" + std::to_string(cl.members.size()) +
                       " examples" + seed_note + "): " +
                       (cl.summary ? patterns::format_pattern(*cl.summary)
                                   : std::string("(no pattern \xE2\x89\xA5 min support)")) +
                       "\n";
                out += "    e.g. " + quote_text(bundle.examples[cl.members.front()].raw.text) + "\n";
            }
        }
        constexpr std::size_t kShownGroups = 10;
        out += "near-duplicate groups (threshold " + fmt_fixed(bundle.dup_threshold, 2) +
               "): " + std::to_string(m.near_duplicates.size()) + "\n";
        for (std::size_t g = 0; g < m.near_duplicates.size() && g < kShownGroups; ++g) {
            const auto& group = m.near_duplicates[g];
            out += "  " + std::to_string(group.ids.size()) + " examples, max distance " +
                   fmt_fixed(group.max_distance, 4) + ":";
            for (std::size_t i = 0; i < group.ids.size() && i < 3; ++i) {
                out += " " + quote_text(bundle.examples[group.ids[i]].raw.text, 40);
            }
            if (group.ids.size() > 3) out += " ...";
            out += '\n';
        }
        if (m.near_duplicates.size() > kShownGroups) {
            out += "  ... " + std::to_string(m.near_duplicates.size() - kShownGroups) + " more\n";
        }
    }
    out += '\n';
    out += render_comparison(bundle);
    return out;
}

}  // namespace synlens::report

#include "synlens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "synlens/error.hpp"
#include "text_util.hpp"

namespace synlens::metrics {

namespace {

std::vector<std::string> view_items(const AnnotatedExample& ex, View view) {
    std::vector<std::string> items;
    items.reserve(ex.tokens.size());
    for (const auto& tok : ex.tokens) {
        switch (view) {
        case View::Token:
            items.push_back(detail::ascii_lower(tok.surface));
            break;
        case View::Pos:
            items.push_back(tok.pos);
            break;
        case View::Dep:
            items.push_back(tok.deprel.value_or("_"));
            break;
        case View::Embedding:
            break;
        }
    }
    return items;
}

std::size_t intersection_size(const NGramProfile::Multiset& a, const NGramProfile::Multiset& b) {
    std::size_t shared = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            shared += std::min(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
    return shared;
}

// Computes the upper triangle, striding rows across workers, then mirrors it.
template <typename Fn>
void fill_upper(DistanceMatrix& m, Fn&& dist) {
    const auto n = m.size();
    auto work = [&](std::size_t worker, std::size_t workers) {
        for (std::size_t i = worker; i < n; i += workers) {
            for (std::size_t j = i + 1; j < n; ++j) m(i, j) = dist(i, j);
        }
    };
    const std::size_t workers =
        n < 256 ? 1 : std::max<std::size_t>(1, std::min<std::size_t>(8, std::thread::hardware_concurrency()));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) m(j, i) = m(i, j);
    }
}

}  // namespace

std::string_view to_string(View view) {
    switch (view) {
    case View::Token:
        return "TOKEN";
    case View::Pos:
        return "POS";
    case View::Dep:
        return "DEP";
    case View::Embedding:
        return "EMBEDDING";
    }
    return "?";
}

std::optional<View> parse_view(std::string_view name) {
    const auto upper = [&] {
        std::string s(name);
        for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return s;
    }();
    for (auto v : kAllViews) {
        if (upper == to_string(v)) return v;
    }
    if (upper == "EMB") return View::Embedding;
    return std::nullopt;
}

std::size_t NGramProfile::total(std::size_t n) const {
    std::size_t sum = 0;
    for (const auto& [gram, c] : grams[n - 1]) sum += c;
    return sum;
}

std::size_t NGramProfile::count(std::size_t n, std::string_view gram) const {
    const auto& set = grams[n - 1];
    const auto it = std::lower_bound(set.begin(), set.end(), gram,
                                     [](const auto& e, std::string_view g) { return e.first < g; });
    return it != set.end() && it->first == gram ? it->second : 0;
}

NGramProfile extract_profile(const AnnotatedExample& example, View view) {
    if (view == View::Embedding) {
        throw ContractError("extract_profile: EMBEDDING has no n-gram profile");
    }
    if (view == View::Dep && !example.has_dependencies) {
        throw UnavailableViewError("DEP view unavailable: example " +
                                   std::to_string(example.raw.id) + " has no dependency parse");
    }
    const auto items = view_items(example, view);
    NGramProfile profile;
    profile.view = view;
    profile.length = items.size();
    for (std::size_t n = 1; n <= kMaxGram; ++n) {
        std::map<std::string, std::size_t> counts;
        for (std::size_t i = 0; i + n <= items.size(); ++i) {
            std::string gram = items[i];
            for (std::size_t k = 1; k < n; ++k) {
                gram += kGramSeparator;
                gram += items[i + k];
            }
            ++counts[gram];
        }
        profile.grams[n - 1].assign(counts.begin(), counts.end());
    }
    return profile;
}

double ngram_similarity(const NGramProfile& a, const NGramProfile& b) {
    if (a.view != b.view) throw ContractError("ngram_similarity: profiles from different views");
    double sum = 0.0;
    std::size_t valid = 0;
    for (std::size_t n = 1; n <= kMaxGram; ++n) {
        const auto ta = a.total(n);
        const auto tb = b.total(n);
        if (ta == 0 || tb == 0) continue;
        const auto shared = intersection_size(a.grams[n - 1], b.grams[n - 1]);
        sum += static_cast<double>(shared) / static_cast<double>(std::max(ta, tb));
        ++valid;
    }
    return valid == 0 ? 0.0 : sum / static_cast<double>(valid);
}

std::vector<double> fallback_embed(const AnnotatedExample& example, std::size_t dim) {
    if (dim == 0) throw ContractError("fallback_embed: dimension must be positive");
    std::vector<double> v(dim, 0.0);
    auto add = [&](std::string_view feature) {
        const auto h = detail::fnv1a64(feature);
        const double sign = (h & 1U) ? -1.0 : 1.0;
        v[(h >> 1) % dim] += sign;
    };
    std::vector<std::string> lower;
    lower.reserve(example.tokens.size());
    for (const auto& tok : example.tokens) lower.push_back(detail::ascii_lower(tok.surface));
    for (std::size_t i = 0; i < lower.size(); ++i) {
        add(lower[i]);
        if (i + 1 < lower.size()) add(lower[i] + std::string(kGramSeparator) + lower[i + 1]);
    }
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    if (norm2 == 0.0) {
        // Every feature cancelled out; fall back to a single bucket keyed by the text.
        v[(detail::fnv1a64(example.raw.text) >> 1) % dim] = 1.0;
        return v;
    }
    const double norm = std::sqrt(norm2);
    for (double& x : v) x /= norm;
    return v;
}

double embedding_distance(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw ContractError("embedding_distance: dimension mismatch");
    double dot = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i]) || !std::isfinite(v[i])) {
            throw ContractError("embedding_distance: non-finite component");
        }
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw ContractError("embedding_distance: zero vector");
    const double cosine = dot / std::sqrt(nu * nv);
    return std::clamp(1.0 - cosine, 0.0, 1.0);
}

bool uses_supplied_embeddings(std::span<const AnnotatedExample> corpus) {
    return !corpus.empty() && std::all_of(corpus.begin(), corpus.end(), [](const auto& ex) {
        return ex.raw.embedding.has_value();
    });
}

std::optional<std::string> unavailable_reason(std::span<const AnnotatedExample> corpus, View view,
                                              const EmbeddingOptions& options) {
    auto list_missing = [&](auto&& lacks) {
        std::string ids;
        std::size_t missing = 0;
        for (const auto& ex : corpus) {
            if (!lacks(ex)) continue;
            if (++missing <= 10) {
                if (!ids.empty()) ids += ", ";
                ids += std::to_string(ex.raw.id);
            }
        }
        if (missing > 10) ids += ", ... (" + std::to_string(missing) + " total)";
        return ids;
    };
    if (view == View::Dep) {
        const auto ids = list_missing([](const auto& ex) { return !ex.has_dependencies; });
        if (!ids.empty()) return "no dependency parse for examples " + ids;
    }
    if (view == View::Embedding && !options.fallback_enabled && !uses_supplied_embeddings(corpus)) {
        const auto ids = list_missing([](const auto& ex) { return !ex.raw.embedding; });
        return "fallback embedder disabled and no embedding supplied for examples " + ids;
    }
    return std::nullopt;
}

DistanceMatrix distance_matrix(std::span<const AnnotatedExample> corpus, View view,
                               const EmbeddingOptions& options) {
    if (auto reason = unavailable_reason(corpus, view, options)) {
        throw UnavailableViewError(std::string(to_string(view)) + " unavailable: " + *reason);
    }
    DistanceMatrix m(corpus.size());
    if (view == View::Embedding) {
        std::vector<std::vector<double>> vectors;
        vectors.reserve(corpus.size());
        const bool supplied = uses_supplied_embeddings(corpus);
        for (const auto& ex : corpus) {
            vectors.push_back(supplied ? *ex.raw.embedding : fallback_embed(ex, options.dim));
        }
        fill_upper(m, [&](std::size_t i, std::size_t j) {
            return embedding_distance(vectors[i], vectors[j]);
        });
        return m;
    }
    std::vector<NGramProfile> profiles;
    profiles.reserve(corpus.size());
    for (const auto& ex : corpus) profiles.push_back(extract_profile(ex, view));
    fill_upper(m, [&](std::size_t i, std::size_t j) {
        return 1.0 - ngram_similarity(profiles[i], profiles[j]);
    });
    return m;
}

}  // namespace synlens::metrics

#include "synlens/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>

#include "synlens/error.hpp"

namespace synlens::compare {

namespace {

constexpr metrics::View kDisplayOrder[] = {metrics::View::Embedding, metrics::View::Token,
                                           metrics::View::Pos, metrics::View::Dep};

std::string_view short_name(metrics::View v) {
    switch (v) {
    case metrics::View::Embedding:
        return "Emb.";
    case metrics::View::Token:
        return "Token";
    case metrics::View::Pos:
        return "POS";
    case metrics::View::Dep:
        return "Dep.";
    }
    return "?";
}

}  // namespace

double MetricComparison::at(metrics::View a, metrics::View b) const {
    const auto ia = std::find(metrics.begin(), metrics.end(), a);
    const auto ib = std::find(metrics.begin(), metrics.end(), b);
    if (ia == metrics.end() || ib == metrics.end()) {
        throw ContractError("MetricComparison::at: metric not in table");
    }
    return table[static_cast<std::size_t>(ia - metrics.begin())]
                [static_cast<std::size_t>(ib - metrics.begin())];
}

double frobenius_distance(const metrics::DistanceMatrix& a, const metrics::DistanceMatrix& b) {
    if (a.size() != b.size()) throw ContractError("frobenius_distance: dimension mismatch");
    double sum = 0.0;
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        const double diff = ea[i] - eb[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

MetricComparison metric_table(const std::map<metrics::View, metrics::DistanceMatrix>& matrices) {
    if (matrices.size() < 2) {
        throw DataError("metric comparison needs at least 2 metrics, have " +
                        std::to_string(matrices.size()));
    }
    MetricComparison out;
    for (const auto v : kDisplayOrder) {
        if (matrices.count(v)) out.metrics.push_back(v);
    }
    const auto m = out.metrics.size();
    out.table.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d =
                frobenius_distance(matrices.at(out.metrics[i]), matrices.at(out.metrics[j]));
            out.table[i][j] = d;
            out.table[j][i] = d;
        }
    }
    return out;
}

std::string render_table(const MetricComparison& comparison) {
    std::string out;
    char cell[32];
    std::snprintf(cell, sizeof cell, "%-7s|", "");
    out += cell;
    for (const auto v : comparison.metrics) {
        std::snprintf(cell, sizeof cell, " %9s", std::string(short_name(v)).c_str());
        out += cell;
    }
    out += '\n';
    out += std::string(8 + 10 * comparison.metrics.size(), '-');
    out += '\n';
    for (std::size_t i = 0; i < comparison.metrics.size(); ++i) {
        std::snprintf(cell, sizeof cell, "%-7s|", std::string(short_name(comparison.metrics[i])).c_str());
        out += cell;
        for (std::size_t j = 0; j < comparison.metrics.size(); ++j) {
            if (i == j) {
                std::snprintf(cell, sizeof cell, " %9s", "");
            } else {
                std::snprintf(cell, sizeof cell, " %9.4f", comparison.table[i][j]);
            }
            out += cell;
        }
        out += '\n';
    }
    return out;
}

}  // namespace synlens::compare

#include "synlens/cluster.hpp"

#include <algorithm>
#include <limits>

#include "synlens/error.hpp"

namespace synlens::cluster {

Dendrogram agglomerate(const metrics::DistanceMatrix& d, Linkage linkage) {
    const auto n = d.size();
    if (n < 2) throw ContractError("agglomerate: need at least 2 examples");

    // Working distances between active clusters, indexed by each cluster's
    // smallest leaf id. Only rows/columns of active ids are meaningful.
    std::vector<double> dist(d.entries());
    std::vector<std::size_t> active(n);
    std::vector<std::size_t> node_of(n);
    std::vector<std::size_t> size_of(n, 1);
    for (std::size_t i = 0; i < n; ++i) active[i] = node_of[i] = i;

    Dendrogram dendro;
    dendro.n_leaves = n;
    dendro.merges.reserve(n - 1);
    double last_height = 0.0;

    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_a = 0;
        std::size_t best_b = 1;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const auto* row = dist.data() + active[a] * n;
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                const double v = row[active[b]];
                if (v < best - kTieTolerance) {
                    best = v;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        const auto keep = active[best_a];
        const auto gone = active[best_b];
        const auto size_keep = static_cast<double>(size_of[keep]);
        const auto size_gone = static_cast<double>(size_of[gone]);

        // Average linkage is monotone; clamp away rounding-level dips.
        const double height = std::max(best, last_height);
        last_height = height;
        dendro.merges.push_back({std::min(node_of[keep], node_of[gone]),
                                 std::max(node_of[keep], node_of[gone]), height,
                                 size_of[keep] + size_of[gone]});

        for (const auto other : active) {
            if (other == keep || other == gone) continue;
            const double dk = dist[other * n + keep];
            const double dg = dist[other * n + gone];
            const double merged = linkage == Linkage::Average
                                      ? (size_keep * dk + size_gone * dg) / (size_keep + size_gone)
                                      : std::max(dk, dg);
            dist[other * n + keep] = merged;
            dist[keep * n + other] = merged;
        }
        node_of[keep] = n + step;
        size_of[keep] += size_of[gone];
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    }
    dendro.leaf_order = leaf_order(dendro);
    return dendro;
}

std::vector<std::size_t> subtree_leaves(const Dendrogram& dendro, std::size_t node) {
    const auto n = dendro.n_leaves;
    if (node >= n + dendro.merges.size()) throw ContractError("subtree_leaves: no such node");
    // Smallest leaf under every node; the child holding the smaller one goes first.
    std::vector<std::size_t> min_leaf(n + dendro.merges.size());
    for (std::size_t i = 0; i < n; ++i) min_leaf[i] = i;
    for (std::size_t i = 0; i < dendro.merges.size(); ++i) {
        const auto& m = dendro.merges[i];
        min_leaf[n + i] = std::min(min_leaf[m.left], min_leaf[m.right]);
    }
    std::vector<std::size_t> leaves;
    std::vector<std::size_t> stack{node};
    while (!stack.empty()) {
        const auto cur = stack.back();
        stack.pop_back();
        if (cur < n) {
            leaves.push_back(cur);
        } else {
            const auto& m = dendro.merges[cur - n];
            const bool left_first = min_leaf[m.left] < min_leaf[m.right];
            stack.push_back(left_first ? m.right : m.left);
            stack.push_back(left_first ? m.left : m.right);
        }
    }
    return leaves;
}

std::vector<std::size_t> leaf_order(const Dendrogram& dendro) {
    if (dendro.n_leaves == 0) return {};
    if (dendro.merges.size() + 1 != dendro.n_leaves) {
        throw ContractError("leaf_order: dendrogram must have n - 1 merges");
    }
    return subtree_leaves(dendro, dendro.n_leaves + dendro.merges.size() - 1);
}

Clustering flatten(const Dendrogram& dendro, std::size_t k) {
    if (k == 0) throw ContractError("flatten: k must be at least 1");
    const auto n = dendro.n_leaves;
    const auto target = std::min(k, n);
    const auto kept = n - target;

    // top[node] = the highest kept merge above the node (or the node itself).
    std::vector<std::size_t> parent(n + dendro.merges.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    for (std::size_t i = 0; i < kept; ++i) {
        parent[dendro.merges[i].left] = n + i;
        parent[dendro.merges[i].right] = n + i;
    }
    auto top = [&](std::size_t node) {
        while (parent[node] != node) node = parent[node];
        return node;
    };

    Clustering out;
    out.k = k;
    std::size_t current = std::numeric_limits<std::size_t>::max();
    for (const auto leaf : dendro.leaf_order) {
        const auto root = top(leaf);
        if (root != current) {
            out.clusters.emplace_back();
            current = root;
        }
        out.clusters.back().push_back(leaf);
    }
    return out;
}

std::map<std::size_t, Clustering> flatten_all(const Dendrogram& dendro,
                                              const std::vector<std::size_t>& ks) {
    std::map<std::size_t, Clustering> out;
    for (const auto k : ks) {
        if (k >= 1 && k <= dendro.n_leaves) out.emplace(k, flatten(dendro, k));
    }
    return out;
}

}  // namespace synlens::cluster

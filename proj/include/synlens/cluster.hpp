#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "synlens/metrics.hpp"

namespace synlens::cluster {

enum class Linkage { Average, Complete };

/// One agglomeration step. Node ids follow the usual convention: leaves are
/// 0..n-1 and the i-th merge creates node n+i. `left` is the child created
/// first (the smaller node id).
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;

    bool operator==(const Merge&) const = default;
};

struct Dendrogram {
    std::size_t n_leaves = 0;
    std::vector<Merge> merges;
    std::vector<std::size_t> leaf_order;

    bool operator==(const Dendrogram&) const = default;
};

struct Clustering {
    std::size_t k = 0;
    std::vector<std::vector<std::size_t>> clusters;

    bool operator==(const Clustering&) const = default;
};

/// Two candidate distances closer than this count as a tie.
inline constexpr double kTieTolerance = 1e-12;

/// Agglomerative clustering over a distance matrix (n >= 2).
///
/// Each step merges the pair of active clusters with the smallest linkage
/// distance. A cluster is identified by its smallest leaf id; near-ties are
/// broken by the smaller (min id, max id) pair. Average linkage uses the
/// Lance-Williams update, which yields UPGMA heights.
Dendrogram agglomerate(const metrics::DistanceMatrix& d, Linkage linkage = Linkage::Average);

/// In-order traversal; at each merge the child holding the smaller leaf id
/// comes first.
std::vector<std::size_t> leaf_order(const Dendrogram& dendro);

/// Undoes the last min(k, n) - 1 merges. Clusters come in order of their
/// first leaf in leaf_order; members within a cluster follow leaf_order.
Clustering flatten(const Dendrogram& dendro, std::size_t k);

inline const std::vector<std::size_t> kDefaultKs = {3, 5, 10, 20, 30, 40, 50};

/// flatten() for each k in `ks` that lies in [1, n].
std::map<std::size_t, Clustering> flatten_all(const Dendrogram& dendro,
                                              const std::vector<std::size_t>& ks = kDefaultKs);

/// Leaves under a node id (leaf or merge), in leaf order.
std::vector<std::size_t> subtree_leaves(const Dendrogram& dendro, std::size_t node);

}  // namespace synlens::cluster

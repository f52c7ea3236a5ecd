#pragma once

#include <set>
#include <vector>

#include "stochpath/model.hpp"

namespace stochpath {

/// Product of an MDP with accumulated-weight vectors on the tracked
/// dimensions. A coordinate saturates to a bottom marker once it exceeds its
/// cutoff (it can never drop back, weights being strictly positive), and the
/// per-state class with every coordinate saturated collapses to one sink
/// node. States are materialized lazily from (s_init, 0).
struct UnfoldedMdp {
    WeightedMdp mdp;                 // the unfolded graph as a plain MDP
    const WeightedMdp* base = nullptr;
    std::vector<Dim> tracked;        // base dimensions, in tracking order
    std::vector<Weight> cutoffs;     // per tracked dim; saturation above this
    // Per node: base state and accumulated vector; coordinate == cutoff+1
    // encodes the saturated marker.
    std::vector<StateId> node_state;
    std::vector<std::vector<Weight>> node_acc;

    bool saturated(int node, int k) const {
        return node_acc[node][k] > cutoffs[k];
    }
    bool all_saturated(int node) const;

    /// T' = nodes whose base state lies in `target` with the tracked
    /// coordinate `k` within its cutoff.
    std::set<StateId> target_prime(const std::set<StateId>& target, int k) const;
    /// Single-dimension T' (every tracked coordinate within bounds).
    std::set<StateId> target_prime(const std::set<StateId>& target) const;
};

/// `bounds` pairs each tracked base dimension with its cutoff. With
/// `compress` the cutoff is exactly the given bound; without it every
/// coordinate is kept up to `uniform_cap` (the max bound), which reproduces
/// the uncompressed construction for cross-checks.
UnfoldedMdp build_unfolding(const WeightedMdp& model,
                            const std::vector<std::pair<Dim, Weight>>& bounds,
                            bool compress = true);

} // namespace stochpath

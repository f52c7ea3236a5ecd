#pragma once

#include <set>
#include <vector>

#include "stochpath/strategy.hpp"

namespace stochpath {

/// Finite Markov chain induced by fixing a Moore strategy in an MDP. Nodes
/// are the (state, memory) pairs reachable from the initial distribution;
/// transition probabilities follow the product formula
/// sigma_a(s,m)(a) * delta(s,a,s') * sigma_u(a,s,m)(m').
struct InducedChain {
    struct Transition {
        int succ;
        ActionId action;
        Rational prob;
    };

    const WeightedMdp* model = nullptr;
    std::vector<std::pair<StateId, MemoryId>> nodes;
    Distribution initial; // over node indices
    std::vector<std::vector<Transition>> trans;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    StateId state_of(int node) const { return nodes[node].first; }
    Weight step_weight(const Transition& t, Dim dim) const {
        return model->weight_of(t.action, dim);
    }
};

InducedChain induce_chain(const WeightedMdp& model, const MooreStrategy& sigma);

/// Finite run prefix s_1 a_1 ... a_{n-1} s_n.
struct RunPrefix {
    std::vector<StateId> states;
    std::vector<ActionId> actions; // size = states.size() - 1

    static RunPrefix of(std::initializer_list<int> alternating);
};

bool run_is_valid(const WeightedMdp& model, const RunPrefix& run);

/// Sum of action weights up to the first visit of the target; `reached` is
/// false when the prefix never enters the target (truncated sum +inf as far
/// as this prefix can tell).
struct TruncatedSum {
    bool reached = false;
    Weight value = 0;
};

TruncatedSum truncated_sum(const WeightedMdp& model, const RunPrefix& run,
                           const std::set<StateId>& target, Dim dim);

/// P[TS^target_dim <= bound] by exact backward induction over the layered
/// graph of (chain node, accumulated weight) pairs. Requires strictly
/// positive weights on `dim`.
Rational exact_event_probability(const InducedChain& chain,
                                 const std::set<StateId>& target, Dim dim,
                                 Weight bound);

/// E[TS^target_dim]; +inf iff the chain reaches the target with probability
/// < 1 from the initial distribution.
ExtRational exact_expectation(const InducedChain& chain,
                              const std::set<StateId>& target, Dim dim);

/// Per-node probability of ever visiting the target (exact linear solve).
std::vector<Rational> chain_reach_probabilities(const InducedChain& chain,
                                                const std::set<StateId>& target);

} // namespace stochpath

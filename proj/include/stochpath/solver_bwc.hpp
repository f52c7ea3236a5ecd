#pragma once

#include "stochpath/solvers_classic.hpp"

namespace stochpath {

/// Safe-action sets A(s,v) on a bound-unfolding: greatest fixpoint keeping
/// the actions whose whole support retains a nonempty safe set, so that T'
/// is reached no matter how the adversary resolves the transitions. Nodes of
/// T' are terminal and keep all their actions.
std::vector<std::vector<ActionId>> compute_safe_actions(
    const UnfoldedMdp& unfolded, const std::set<StateId>& target_prime);

struct SspweResult {
    bool yes = false;
    ExtRational expectation = ExtRational::infinity();
    ExtWeight worst_case = ExtWeight::infinity();
    std::optional<MooreStrategy> strategy;
    SolveStats stats;
};

/// Beyond-worst-case synthesis: worst case <= bound_worst on every outcome
/// and expectation <= bound_expect. Pipeline: unfolding, safe actions,
/// expected-length optimum on the restriction, pseudo-polynomial-memory
/// pullback, independent exact verification of both guarantees.
SspweResult solve_sspwe(const WeightedMdp& model, const std::set<StateId>& target,
                        Weight bound_worst, const Rational& bound_expect, Dim dim = 0);

} // namespace stochpath

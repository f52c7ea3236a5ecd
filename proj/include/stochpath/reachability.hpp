#pragma once

#include <set>
#include <vector>

#include "stochpath/chain.hpp"
#include "stochpath/lp.hpp"
#include "stochpath/strategy.hpp"

namespace stochpath {

/// States with no path into the target (their maximal reachability
/// probability is 0).
std::set<StateId> cannot_reach(const WeightedMdp& model, const std::set<StateId>& target);

/// States from which the target can be reached almost surely under some
/// strategy. Iteratively discards states that lose all actions once risky
/// actions (support touching discarded states) are pruned.
std::set<StateId> almost_sure_reach(const WeightedMdp& model,
                                    const std::set<StateId>& target);

struct ReachabilityResult {
    std::vector<Rational> values; // per state, maximal reachability probability
    MooreStrategy strategy;       // memoryless, pure
    int lp_rows = 0;
    int lp_vars = 0;
};

/// Maximal stochastic reachability via the exact minimization LP
/// (x_s = 1 on T, x_s = 0 on cannot-reach states, x_s >= sum delta * x).
/// The returned strategy is value-optimal and proper: among value-preserving
/// actions it follows a shortest route towards the target, so it attains
/// values[s] from every state.
ReachabilityResult solve_sr(const WeightedMdp& model, const std::set<StateId>& target);

/// Floating value iteration to convergence (optional mode); exact solvers
/// never depend on it.
std::vector<double> value_iteration(const WeightedMdp& model,
                                    const std::set<StateId>& target, double tol);

/// Maximal end component: member states plus the actions that stay inside.
struct EndComponent {
    std::vector<StateId> states;
    std::vector<std::vector<ActionId>> internal; // aligned with states
    bool closed = true; // no member has an enabled action leaving the MEC
};

std::vector<EndComponent> mec_decomposition(const WeightedMdp& model);

struct MultiReachResult {
    bool yes = false;
    std::vector<Rational> achieved; // exact, verified per constraint
    MooreStrategy strategy;         // randomized, memory = satisfied subsets
    int product_states = 0;
    int lp_vars = 0;
    int lp_rows = 0;
};

/// One strategy meeting q reachability thresholds simultaneously:
/// P[ever visit R_i] >= alpha_i for all i. Product with the subset of
/// already-satisfied constraints, expected-frequency LP over the product
/// (end components absorbed through per-MEC commit mass), randomized
/// memoryless extraction on the product, exact post-hoc verification.
MultiReachResult solve_multiple_reachability(const WeightedMdp& model,
                                             const std::vector<std::set<StateId>>& targets,
                                             const std::vector<Rational>& thresholds);

} // namespace stochpath

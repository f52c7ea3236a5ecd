#include "stochpath/percentile.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "stochpath/errors.hpp"

namespace stochpath {

namespace {

void validate_query(const WeightedMdp& model, const PercentileQuery& query) {
    if (query.constraints.empty()) throw ModelError("percentile query with no constraints");
    std::vector<Dim> dims;
    for (const auto& c : query.constraints) {
        if (c.prob < 0 || c.prob > 1)
            throw ModelError("probability threshold outside [0,1]");
        if (c.bound < 0) throw ModelError("negative value bound");
        if (c.target.empty()) throw ModelError("empty target set in constraint");
        dims.push_back(c.dim);
    }
    auto diags = validate_positive_weights(model, dims);
    if (!diags.empty())
        throw ModelError(diags.front().message +
                         " (percentile queries need strictly positive weights "
                         "on every queried dimension)");
}

struct UnfoldingPlan {
    std::vector<std::pair<Dim, Weight>> bounds; // tracked dim -> cutoff
    std::vector<int> track_of_constraint;       // constraint -> tracked index
};

UnfoldingPlan plan_unfolding(const PercentileQuery& query) {
    UnfoldingPlan plan;
    std::map<Dim, Weight> cutoff;
    for (const auto& c : query.constraints)
        cutoff[c.dim] = std::max(cutoff.count(c.dim) ? cutoff[c.dim] : Weight(0), c.bound);
    std::map<Dim, int> track_index;
    for (const auto& [dim, bound] : cutoff) {
        track_index[dim] = static_cast<int>(plan.bounds.size());
        plan.bounds.emplace_back(dim, bound);
    }
    for (const auto& c : query.constraints)
        plan.track_of_constraint.push_back(track_index[c.dim]);
    return plan;
}

std::vector<std::set<StateId>> constraint_targets(const UnfoldedMdp& unfolded,
                                                  const PercentileQuery& query,
                                                  const UnfoldingPlan& plan) {
    std::vector<std::set<StateId>> out(query.constraints.size());
    for (std::size_t i = 0; i < query.constraints.size(); ++i) {
        const auto& c = query.constraints[i];
        int k = plan.track_of_constraint[i];
        for (StateId node = 0; node < unfolded.mdp.num_states(); ++node)
            if (c.target.count(unfolded.node_state[node]) &&
                unfolded.node_acc[node][k] <= c.bound)
                out[i].insert(node);
    }
    return out;
}

SsppqResult run_multi_reach(const WeightedMdp& model, const PercentileQuery& query,
                            const UnfoldedMdp& unfolded,
                            const std::vector<std::set<StateId>>& targets,
                            const char* witness_name) {
    auto start = std::chrono::steady_clock::now();
    std::vector<Rational> thresholds;
    for (const auto& c : query.constraints) thresholds.push_back(c.prob);

    MultiReachResult mr =
        solve_multiple_reachability(unfolded.mdp, targets, thresholds);

    SsppqResult result;
    result.stats.unfolding_states = unfolded.mdp.num_states();
    result.stats.lp_vars = mr.lp_vars;
    result.stats.lp_rows = mr.lp_rows;
    if (!mr.yes) {
        result.yes = false;
        result.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
        return result;
    }

    MooreStrategy sigma =
        pull_back_unfolding_strategy(unfolded, mr.strategy, witness_name);

    // Witness soundness, checked against the model itself: exact first-visit
    // probability per constraint, independent of the LP.
    InducedChain chain = induce_chain(model, sigma);
    result.achieved.resize(query.constraints.size());
    for (std::size_t i = 0; i < query.constraints.size(); ++i) {
        const auto& c = query.constraints[i];
        Rational p = exact_event_probability(chain, c.target, c.dim, c.bound);
        if (p < c.prob)
            throw Error("internal: percentile witness misses constraint " +
                        std::to_string(i + 1));
        result.achieved[i] = p;
    }
    result.yes = true;
    result.strategy = std::move(sigma);
    result.stats.wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    return result;
}

} // namespace

SsppqResult solve_ssppq(const WeightedMdp& model, const PercentileQuery& query,
                        bool compress) {
    validate_query(model, query);
    UnfoldingPlan plan = plan_unfolding(query);
    UnfoldedMdp unfolded = build_unfolding(model, plan.bounds, compress);
    auto targets = constraint_targets(unfolded, query, plan);
    return run_multi_reach(model, query, unfolded, targets, "ssppq");
}

bool fast_path_eligible(const PercentileQuery& query) {
    if (query.constraints.empty()) return false;
    for (const auto& c : query.constraints)
        if (c.dim != query.constraints.front().dim ||
            c.target != query.constraints.front().target)
            return false;
    return true;
}

SsppqResult fast_path_single(const WeightedMdp& model, const PercentileQuery& query) {
    validate_query(model, query);
    if (!fast_path_eligible(query))
        throw ModelError("fast path needs a single dimension and target set");

    UnfoldingPlan plan = plan_unfolding(query);
    UnfoldedMdp unfolded = build_unfolding(model, plan.bounds, true);

    // The first visit of the shared target decides every constraint, so the
    // target nodes can be made absorbing and the subset product collapses.
    const std::set<StateId>& base_target = query.constraints.front().target;
    ActionId absorb = unfolded.mdp.add_action("_absorb", WeightVector::Ones(model.dims));
    for (StateId node = 0; node < unfolded.mdp.num_states(); ++node) {
        if (!base_target.count(unfolded.node_state[node])) continue;
        unfolded.mdp.enabled[node].clear();
        unfolded.mdp.add_transition(node, absorb, Distribution::dirac(node));
    }

    auto targets = constraint_targets(unfolded, query, plan);
    return run_multi_reach(model, query, unfolded, targets, "ssppq-fast");
}

} // namespace stochpath

#include "stochpath/solver_bwc.hpp"

#include <chrono>
#include <map>

#include "stochpath/errors.hpp"

namespace stochpath {

std::vector<std::vector<ActionId>> compute_safe_actions(
    const UnfoldedMdp& unfolded, const std::set<StateId>& target_prime) {
    const WeightedMdp& P = unfolded.mdp;
    int n = P.num_states();

    std::vector<std::vector<ActionId>> safe(n);
    for (StateId node = 0; node < n; ++node) {
        if (unfolded.all_saturated(node) && !target_prime.count(node))
            continue; // exceeded every bound: hopeless, no safe actions
        safe[node] = P.enabled[node];
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId node = 0; node < n; ++node) {
            if (target_prime.count(node)) continue; // terminal, keep all
            auto& acts = safe[node];
            for (auto it = acts.begin(); it != acts.end();) {
                bool ok = true;
                for (const auto& [succ, p] : P.delta_at(node, *it).support())
                    if (safe[succ].empty() && !target_prime.count(succ)) {
                        ok = false;
                        break;
                    }
                if (ok)
                    ++it;
                else {
                    it = acts.erase(it);
                    changed = true;
                }
            }
        }
    }
    return safe;
}

SspweResult solve_sspwe(const WeightedMdp& model, const std::set<StateId>& target,
                        Weight bound_worst, const Rational& bound_expect, Dim dim) {
    auto start = std::chrono::steady_clock::now();
    require_valid_for_ssp(model, {dim});

    SspweResult result;
    UnfoldedMdp unfolded = build_unfolding(model, {{dim, bound_worst}});
    result.stats.unfolding_states = unfolded.mdp.num_states();
    std::set<StateId> target_prime = unfolded.target_prime(target);
    std::vector<std::vector<ActionId>> safe = compute_safe_actions(unfolded, target_prime);

    auto finish = [&]() {
        result.stats.wall_ms = std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
        return result;
    };

    if (safe[unfolded.mdp.initial].empty() && !target_prime.count(unfolded.mdp.initial))
        return finish(); // no strategy survives the worst-case requirement

    // Restriction to safe actions. Unsafe-saturated nodes disappear; T'
    // nodes become absorbing so the restriction stays a well-formed MDP.
    WeightedMdp restricted;
    restricted.name = model.name + "@safe";
    restricted.dims = model.dims;
    restricted.dim_names = model.dim_names;
    restricted.actions = unfolded.mdp.actions;
    restricted.weights = unfolded.mdp.weights;
    ActionId absorb = restricted.add_action("_absorb", WeightVector::Ones(model.dims));

    std::map<StateId, StateId> id_map; // unfolding node -> restricted state
    std::vector<StateId> back_map;
    for (StateId node = 0; node < unfolded.mdp.num_states(); ++node) {
        if (safe[node].empty() && !target_prime.count(node)) continue;
        StateId r = restricted.add_state(unfolded.mdp.states[node]);
        id_map[node] = r;
        back_map.push_back(node);
    }
    std::set<StateId> restricted_target;
    for (StateId node = 0; node < unfolded.mdp.num_states(); ++node) {
        auto it = id_map.find(node);
        if (it == id_map.end()) continue;
        StateId r = it->second;
        if (target_prime.count(node)) {
            restricted_target.insert(r);
            restricted.add_transition(r, absorb, Distribution::dirac(r));
            continue;
        }
        for (ActionId a : safe[node]) {
            std::vector<Distribution::Entry> entries;
            for (const auto& [succ, p] : unfolded.mdp.delta_at(node, a).support())
                entries.emplace_back(id_map.at(succ), p);
            restricted.add_transition(r, a, Distribution::make(std::move(entries)));
        }
    }
    restricted.initial = id_map.at(unfolded.mdp.initial);

    SspeResult inner = solve_sspe(restricted, restricted_target, dim);
    result.stats.lp_vars = inner.stats.lp_vars;
    result.stats.lp_rows = inner.stats.lp_rows;
    if (!inner.expectation.is_finite())
        throw Error("internal: safe restriction lost target reachability");
    result.expectation = inner.expectation;
    if (!(inner.expectation <= ExtRational(bound_expect))) {
        result.yes = false;
        return finish();
    }

    // Transfer the memoryless optimum back onto unfolding nodes, then pull
    // it back to the model with the accumulated sum as memory.
    MooreStrategy on_unfolding;
    on_unfolding.name = "sspwe";
    MemoryId m0 = on_unfolding.add_memory("m");
    on_unfolding.initial_memory = Distribution::dirac(m0);
    for (StateId r = 0; r < restricted.num_states(); ++r) {
        const Distribution& d = inner.strategy->action_choice(r, 0);
        ActionId a = d.support().front().first;
        if (a == absorb) a = unfolded.mdp.enabled[back_map[r]].front();
        on_unfolding.next_action[{back_map[r], m0}] = Distribution::dirac(a);
    }
    MooreStrategy sigma = pull_back_unfolding_strategy(unfolded, on_unfolding, "sspwe");

    // Both guarantees re-checked exactly and independently.
    ExtWeight worst = evaluate_worst_case(model, sigma, target, dim);
    if (!(worst <= ExtWeight(bound_worst)))
        throw Error("internal: pulled-back strategy violates the worst-case bound");
    ExtRational expect = exact_expectation(induce_chain(model, sigma), target, dim);
    if (!(expect == result.expectation))
        throw Error("internal: pulled-back strategy expectation mismatch");

    result.worst_case = worst;
    result.yes = true;
    result.strategy = std::move(sigma);
    return finish();
}

} // namespace stochpath

#include "stochpath/solvers_classic.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <sstream>

#include "stochpath/errors.hpp"
#include "stochpath/lp.hpp"
#include "stochpath/reachability.hpp"

namespace stochpath {

namespace {

class Stopwatch {
  public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace

SspeResult solve_sspe(const WeightedMdp& model, const std::set<StateId>& target,
                      Dim dim) {
    Stopwatch watch;
    require_valid_for_ssp(model, {dim});

    SspeResult result;
    // Finite value iff the target is reachable almost surely; risky actions
    // (support leaving that region) are not usable by an optimal strategy.
    std::set<StateId> good = almost_sure_reach(model, target);
    if (!good.count(model.initial)) {
        result.expectation = ExtRational::infinity();
        result.stats.wall_ms = watch.ms();
        return result;
    }

    std::vector<int> var_of(model.num_states(), -1);
    std::vector<StateId> lp_states;
    for (StateId s : good)
        if (!target.count(s)) {
            var_of[s] = static_cast<int>(lp_states.size());
            lp_states.push_back(s);
        }

    auto usable = [&](StateId s, ActionId a) {
        for (const auto& [succ, p] : model.delta_at(s, a).support())
            if (!good.count(succ)) return false;
        return true;
    };

    std::vector<Rational> values(model.num_states(), Rational(0));
    if (!lp_states.empty()) {
        LinearProgram lp(static_cast<int>(lp_states.size()), Sense::Maximize);
        for (std::size_t i = 0; i < lp_states.size(); ++i)
            lp.set_objective_term(static_cast<int>(i), Rational(1));
        for (StateId s : lp_states) {
            for (ActionId a : model.enabled[s]) {
                if (!usable(s, a)) continue;
                // x_s <= w(a) + sum delta * x_succ
                std::vector<std::pair<int, Rational>> terms{{var_of[s], Rational(1)}};
                for (const auto& [succ, p] : model.delta_at(s, a).support())
                    if (var_of[succ] >= 0) terms.emplace_back(var_of[succ], -p);
                lp.add_row(terms, Relation::LessEq,
                           Rational(model.weight_of(a, dim)));
            }
        }
        LpResult sol = solve_lp(lp);
        if (sol.status != LpStatus::Optimal)
            throw Error("internal: expected-length LP not optimal");
        result.stats.lp_vars = lp.num_vars;
        result.stats.lp_rows = static_cast<int>(lp.rows.size());
        for (std::size_t i = 0; i < lp_states.size(); ++i)
            values[lp_states[i]] = sol.solution(static_cast<int>(i));
    }

    // argmin over usable actions; positive weights rule out value-preserving
    // cycles, so declaration-order tie-breaking is already proper.
    std::map<StateId, ActionId> choice;
    for (StateId s = 0; s < model.num_states(); ++s) {
        if (target.count(s) || !good.count(s)) {
            choice[s] = model.enabled[s].front();
            continue;
        }
        std::optional<Rational> best;
        ActionId best_action = model.enabled[s].front();
        for (ActionId a : model.enabled[s]) {
            if (!usable(s, a)) continue;
            Rational v(model.weight_of(a, dim));
            for (const auto& [succ, p] : model.delta_at(s, a).support())
                v += p * values[succ];
            if (!best || v < *best) {
                best = v;
                best_action = a;
            }
        }
        choice[s] = best_action;
    }

    result.expectation = ExtRational(values[model.initial]);
    result.strategy = MooreStrategy::memoryless_pure(model, choice, "sspe");
    result.stats.wall_ms = watch.ms();
    return result;
}

MooreStrategy pull_back_unfolding_strategy(const UnfoldedMdp& unfolded,
                                           const MooreStrategy& product_strategy,
                                           const std::string& name) {
    const WeightedMdp& model = *unfolded.base;
    int d = static_cast<int>(unfolded.tracked.size());

    MooreStrategy sigma;
    sigma.name = name;

    // Memory elements pair the accumulated vector with the product
    // strategy's own memory.
    using Key = std::pair<std::vector<Weight>, MemoryId>;
    std::map<Key, MemoryId> mem_of;
    auto memory_of = [&](const std::vector<Weight>& acc, MemoryId pm) {
        auto it = mem_of.find({acc, pm});
        if (it != mem_of.end()) return it->second;
        std::ostringstream label;
        label << "v";
        for (int k = 0; k < d; ++k) {
            if (k) label << "_";
            if (acc[k] > unfolded.cutoffs[k])
                label << "bot";
            else
                label << acc[k];
        }
        if (product_strategy.memory_size() > 1)
            label << "." << product_strategy.memory.at(pm);
        MemoryId m = sigma.add_memory(label.str());
        mem_of[{acc, pm}] = m;
        return m;
    };

    std::map<std::pair<StateId, std::vector<Weight>>, StateId> node_index;
    for (StateId node = 0; node < unfolded.mdp.num_states(); ++node)
        node_index[{unfolded.node_state[node], unfolded.node_acc[node]}] = node;

    auto remap_action = [&](StateId s, ActionId a) {
        // Synthetic actions of derived products (absorbing loops) do not
        // exist on the base model; the run is over at that point anyway.
        return a < model.num_actions() ? a : model.enabled[s].front();
    };

    {
        std::vector<Distribution::Entry> init;
        for (const auto& [pm, p] : product_strategy.initial_memory.support())
            init.emplace_back(memory_of(std::vector<Weight>(d, 0), pm), p);
        sigma.initial_memory = Distribution::make(std::move(init));
    }

    std::set<std::vector<Weight>> accs;
    for (StateId node = 0; node < unfolded.mdp.num_states(); ++node)
        accs.insert(unfolded.node_acc[node]);
    accs.insert(std::vector<Weight>(d, 0));

    for (const auto& acc : accs) {
        for (MemoryId pm = 0; pm < product_strategy.memory_size(); ++pm) {
            MemoryId m = memory_of(acc, pm);
            for (StateId s = 0; s < model.num_states(); ++s) {
                auto it = node_index.find({s, acc});
                StateId node = it != node_index.end() ? it->second : -1;
                std::vector<Distribution::Entry> entries;
                if (node >= 0 && product_strategy.has_action_choice(node, pm)) {
                    for (const auto& [a, p] :
                         product_strategy.action_choice(node, pm).support())
                        entries.emplace_back(remap_action(s, a), p);
                } else {
                    entries.emplace_back(model.enabled[s].front(), Rational(1));
                }
                Distribution choice = Distribution::make(std::move(entries));
                sigma.next_action[{s, m}] = choice;
                for (const auto& [a, p] : choice.support()) {
                    std::vector<Weight> next(acc);
                    for (int k = 0; k < d; ++k)
                        next[k] =
                            std::min(next[k] + model.weight_of(a, unfolded.tracked[k]),
                                     unfolded.cutoffs[k] + 1);
                    Distribution upd =
                        node >= 0 ? product_strategy.update(a, node, pm)
                                  : Distribution::dirac(pm);
                    std::vector<Distribution::Entry> mem_entries;
                    for (const auto& [pm2, p2] : upd.support())
                        mem_entries.emplace_back(memory_of(next, pm2), p2);
                    sigma.memory_update[{a, s, m}] =
                        Distribution::make(std::move(mem_entries));
                }
            }
        }
    }
    return sigma;
}

SsppResult solve_sspp(const WeightedMdp& model, const std::set<StateId>& target,
                      Weight bound, const Rational& alpha, Dim dim) {
    Stopwatch watch;
    require_valid_for_ssp(model, {dim});
    if (bound < 0) throw ModelError("negative bound in percentile constraint");

    UnfoldedMdp unfolded = build_unfolding(model, {{dim, bound}});
    std::set<StateId> target_prime = unfolded.target_prime(target);

    ReachabilityResult sr = solve_sr(unfolded.mdp, target_prime);

    SsppResult result;
    result.stats.unfolding_states = unfolded.mdp.num_states();
    result.stats.lp_vars = sr.lp_vars;
    result.stats.lp_rows = sr.lp_rows;
    result.achieved = sr.values[unfolded.mdp.initial];
    result.yes = result.achieved >= alpha;
    if (result.yes) {
        MooreStrategy sigma =
            pull_back_unfolding_strategy(unfolded, sr.strategy, "sspp");
        // The bijection between unfolding runs and bounded runs of the model
        // makes the pulled-back strategy achieve exactly the SR value.
        InducedChain chain = induce_chain(model, sigma);
        Rational check = exact_event_probability(chain, target, dim, bound);
        if (check != result.achieved)
            throw Error("internal: pullback probability " + to_fraction_string(check) +
                        " differs from SR value " + to_fraction_string(result.achieved));
        result.strategy = std::move(sigma);
    }
    result.stats.wall_ms = watch.ms();
    return result;
}

WorstCaseTable compute_worst_case_table(const WeightedMdp& model,
                                        const std::set<StateId>& target, Dim dim) {
    require_valid_for_ssp(model, {dim});
    int n = model.num_states();
    WorstCaseTable table;
    table.values.resize(n + 1);
    table.values[0].assign(n, ExtWeight::infinity());
    for (StateId t : target) table.values[0][t] = ExtWeight(0);
    for (int i = 1; i <= n; ++i) {
        table.values[i] = table.values[i - 1];
        for (StateId s = 0; s < n; ++s) {
            if (target.count(s)) continue;
            ExtWeight best = table.values[i - 1][s];
            for (ActionId a : model.enabled[s]) {
                ExtWeight worst(0);
                for (const auto& [succ, p] : model.delta_at(s, a).support())
                    worst = max(worst, table.values[i - 1][succ]);
                best = min(best, worst + model.weight_of(a, dim));
            }
            table.values[i][s] = best;
        }
    }
    return table;
}

SpgResult solve_spg(const WeightedMdp& model, const std::set<StateId>& target,
                    Weight bound, Dim dim) {
    Stopwatch watch;
    WorstCaseTable table = compute_worst_case_table(model, target, dim);
    int n = model.num_states();

    SpgResult result;
    result.value = table.at(model.initial, n);
    result.yes = result.value <= ExtWeight(bound);
    if (result.yes) {
        // An action attaining the stabilized value leads to strictly smaller
        // table values (weights are positive), so the induced play is
        // acyclic and reaches the target.
        std::map<StateId, ActionId> choice;
        for (StateId s = 0; s < n; ++s) {
            choice[s] = model.enabled[s].front();
            if (target.count(s) || !table.at(s, n).is_finite()) continue;
            for (ActionId a : model.enabled[s]) {
                ExtWeight worst(0);
                for (const auto& [succ, p] : model.delta_at(s, a).support())
                    worst = max(worst, table.at(succ, n));
                if (worst + model.weight_of(a, dim) == table.at(s, n)) {
                    choice[s] = a;
                    break;
                }
            }
        }
        result.strategy = MooreStrategy::memoryless_pure(model, choice, "spg");
    }
    result.stats.wall_ms = watch.ms();
    return result;
}

ExtWeight evaluate_worst_case(const WeightedMdp& model, const MooreStrategy& sigma,
                              const std::set<StateId>& target, Dim dim) {
    InducedChain chain = induce_chain(model, sigma);
    int n = chain.num_nodes();

    // Longest path to the target over the support graph; any reachable
    // target-avoiding cycle makes the worst case infinite.
    std::vector<int> color(n, 0); // 0 unvisited, 1 on stack, 2 done
    std::vector<ExtWeight> longest(n, ExtWeight(0));
    bool cyclic = false;

    std::function<void(int)> dfs = [&](int node) {
        if (cyclic) return;
        color[node] = 1;
        ExtWeight best(0);
        if (!target.count(chain.state_of(node))) {
            for (const auto& t : chain.trans[node]) {
                if (target.count(chain.state_of(t.succ))) {
                    best = max(best, ExtWeight(chain.step_weight(t, dim)));
                    continue;
                }
                if (color[t.succ] == 1) {
                    cyclic = true;
                    return;
                }
                if (color[t.succ] == 0) dfs(t.succ);
                if (cyclic) return;
                best = max(best, longest[t.succ] + chain.step_weight(t, dim));
            }
        }
        longest[node] = best;
        color[node] = 2;
    };

    ExtWeight worst(0);
    for (const auto& [node, p] : chain.initial.support()) {
        if (color[node] == 0) dfs(node);
        if (cyclic) return ExtWeight::infinity();
        worst = max(worst, longest[node]);
    }
    return worst;
}

} // namespace stochpath

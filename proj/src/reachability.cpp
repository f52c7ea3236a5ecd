#include "stochpath/reachability.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "stochpath/errors.hpp"

namespace stochpath {

namespace {

std::vector<std::vector<int>> predecessor_lists(const WeightedMdp& model) {
    std::vector<std::vector<int>> preds(model.num_states());
    for (StateId s = 0; s < model.num_states(); ++s)
        for (ActionId a : model.enabled[s])
            for (const auto& [succ, p] : model.delta_at(s, a).support())
                preds[succ].push_back(s);
    return preds;
}

} // namespace

std::set<StateId> cannot_reach(const WeightedMdp& model, const std::set<StateId>& target) {
    auto preds = predecessor_lists(model);
    std::vector<char> reach(model.num_states(), 0);
    std::deque<StateId> queue;
    for (StateId t : target) {
        reach[t] = 1;
        queue.push_back(t);
    }
    while (!queue.empty()) {
        StateId v = queue.front();
        queue.pop_front();
        for (StateId p : preds[v])
            if (!reach[p]) {
                reach[p] = 1;
                queue.push_back(p);
            }
    }
    std::set<StateId> out;
    for (StateId s = 0; s < model.num_states(); ++s)
        if (!reach[s]) out.insert(s);
    return out;
}

std::set<StateId> almost_sure_reach(const WeightedMdp& model,
                                    const std::set<StateId>& target) {
    std::vector<char> alive(model.num_states(), 1);
    for (;;) {
        // Usable actions keep their whole support alive; propagate backwards
        // from the target along usable edges only.
        std::vector<char> reach(model.num_states(), 0);
        std::deque<StateId> queue;
        for (StateId t : target)
            if (alive[t]) {
                reach[t] = 1;
                queue.push_back(t);
            }
        std::vector<std::vector<StateId>> preds(model.num_states());
        for (StateId s = 0; s < model.num_states(); ++s) {
            if (!alive[s]) continue;
            for (ActionId a : model.enabled[s]) {
                bool usable = true;
                for (const auto& [succ, p] : model.delta_at(s, a).support())
                    if (!alive[succ]) {
                        usable = false;
                        break;
                    }
                if (!usable) continue;
                for (const auto& [succ, p] : model.delta_at(s, a).support())
                    preds[succ].push_back(s);
            }
        }
        while (!queue.empty()) {
            StateId v = queue.front();
            queue.pop_front();
            for (StateId p : preds[v])
                if (!reach[p]) {
                    reach[p] = 1;
                    queue.push_back(p);
                }
        }
        bool changed = false;
        for (StateId s = 0; s < model.num_states(); ++s)
            if (alive[s] && !reach[s]) {
                alive[s] = 0;
                changed = true;
            }
        if (!changed) break;
    }
    std::set<StateId> out;
    for (StateId s = 0; s < model.num_states(); ++s)
        if (alive[s]) out.insert(s);
    return out;
}

ReachabilityResult solve_sr(const WeightedMdp& model, const std::set<StateId>& target) {
    int n = model.num_states();
    std::set<StateId> zero = cannot_reach(model, target);

    LinearProgram lp(n, Sense::Minimize);
    for (StateId s = 0; s < n; ++s) {
        lp.lower[s] = Rational(0);
        lp.set_objective_term(s, Rational(1));
    }
    for (StateId t : target)
        lp.add_row({{t, Rational(1)}}, Relation::Equal, Rational(1));
    for (StateId z : zero)
        if (!target.count(z)) lp.add_row({{z, Rational(1)}}, Relation::Equal, Rational(0));
    for (StateId s = 0; s < n; ++s) {
        if (target.count(s) || zero.count(s)) continue;
        for (ActionId a : model.enabled[s]) {
            std::vector<std::pair<int, Rational>> terms{{s, Rational(1)}};
            for (const auto& [succ, p] : model.delta_at(s, a).support())
                terms.emplace_back(succ, -p);
            lp.add_row(terms, Relation::GreaterEq, Rational(0));
        }
    }

    LpResult sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw Error("internal: stochastic reachability LP not optimal");

    ReachabilityResult result;
    result.lp_vars = lp.num_vars;
    result.lp_rows = static_cast<int>(lp.rows.size());
    result.values.resize(n);
    for (StateId s = 0; s < n; ++s) result.values[s] = sol.solution(s);

    // Extraction: value-preserving actions only, and among those prefer one
    // whose support already touches a state ranked closer to the target.
    // Plain argmax with declaration-order ties could pick an action that
    // cycles without progressing.
    std::map<StateId, ActionId> choice;
    std::vector<char> ranked(n, 0);
    for (StateId t : target) ranked[t] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s = 0; s < n; ++s) {
            if (ranked[s] || target.count(s) || result.values[s] == 0) continue;
            for (ActionId a : model.enabled[s]) {
                Rational expect(0);
                bool touches_ranked = false;
                for (const auto& [succ, p] : model.delta_at(s, a).support()) {
                    expect += p * result.values[succ];
                    if (ranked[succ]) touches_ranked = true;
                }
                if (expect == result.values[s] && touches_ranked) {
                    choice[s] = a;
                    ranked[s] = 1;
                    changed = true;
                    break;
                }
            }
        }
    }
    for (StateId s = 0; s < n; ++s)
        if (!choice.count(s)) choice[s] = model.enabled[s].front();
    result.strategy = MooreStrategy::memoryless_pure(model, choice, "sr");
    return result;
}

std::vector<double> value_iteration(const WeightedMdp& model,
                                    const std::set<StateId>& target, double tol) {
    int n = model.num_states();
    std::vector<double> x(n, 0.0);
    for (StateId t : target) x[t] = 1.0;
    for (;;) {
        double change = 0.0;
        std::vector<double> next = x;
        for (StateId s = 0; s < n; ++s) {
            if (target.count(s)) continue;
            double best = 0.0;
            for (ActionId a : model.enabled[s]) {
                double v = 0.0;
                for (const auto& [succ, p] : model.delta_at(s, a).support())
                    v += to_double(p) * x[succ];
                best = std::max(best, v);
            }
            next[s] = best;
            change = std::max(change, std::abs(best - x[s]));
        }
        x = std::move(next);
        if (change < tol) break;
    }
    return x;
}

namespace {

// Tarjan strongly connected components, iterative.
std::vector<int> scc_of(int n, const std::vector<std::vector<int>>& succs) {
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    int next_index = 0, next_comp = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.child < succs[f.v].size()) {
                int w = succs[f.v][f.child++];
                if (index[w] < 0) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = next_comp;
                        if (w == f.v) break;
                    }
                    ++next_comp;
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    return comp;
}

} // namespace

std::vector<EndComponent> mec_decomposition(const WeightedMdp& model) {
    int n = model.num_states();
    std::vector<std::vector<ActionId>> usable(n);
    std::vector<char> removed(n, 0);
    for (StateId s = 0; s < n; ++s) usable[s] = model.enabled[s];

    std::vector<int> comp;
    for (;;) {
        std::vector<std::vector<int>> succs(n);
        for (StateId s = 0; s < n; ++s) {
            if (removed[s]) continue;
            for (ActionId a : usable[s])
                for (const auto& [succ, p] : model.delta_at(s, a).support())
                    succs[s].push_back(succ);
        }
        comp = scc_of(n, succs);
        bool changed = false;
        for (StateId s = 0; s < n; ++s) {
            if (removed[s]) continue;
            auto& acts = usable[s];
            for (auto it = acts.begin(); it != acts.end();) {
                bool stays = true;
                for (const auto& [succ, p] : model.delta_at(s, *it).support())
                    if (removed[succ] || comp[succ] != comp[s]) {
                        stays = false;
                        break;
                    }
                if (stays)
                    ++it;
                else {
                    it = acts.erase(it);
                    changed = true;
                }
            }
            if (acts.empty()) {
                removed[s] = 1;
                changed = true;
            }
        }
        if (!changed) break;
    }

    std::map<int, EndComponent> by_comp;
    for (StateId s = 0; s < n; ++s) {
        if (removed[s]) continue;
        auto& mec = by_comp[comp[s]];
        mec.states.push_back(s);
        mec.internal.push_back(usable[s]);
    }
    std::vector<EndComponent> out;
    for (auto& [c, mec] : by_comp) {
        std::set<StateId> members(mec.states.begin(), mec.states.end());
        mec.closed = true;
        for (StateId s : mec.states)
            for (ActionId a : model.enabled[s])
                for (const auto& [succ, p] : model.delta_at(s, a).support())
                    if (!members.count(succ)) mec.closed = false;
        out.push_back(std::move(mec));
    }
    return out;
}

namespace {

struct Product {
    WeightedMdp mdp; // product graph as a plain MDP
    std::vector<std::pair<StateId, std::uint32_t>> info;
    std::uint32_t initial_mask = 0;
};

Product build_subset_product(const WeightedMdp& model,
                             const std::vector<std::set<StateId>>& targets) {
    int q = static_cast<int>(targets.size());
    auto fire = [&](StateId s) {
        std::uint32_t m = 0;
        for (int i = 0; i < q; ++i)
            if (targets[i].count(s)) m |= (1u << i);
        return m;
    };

    Product prod;
    prod.mdp.name = model.name + "#subset";
    prod.mdp.dims = model.dims;
    prod.mdp.dim_names = model.dim_names;
    prod.mdp.actions = model.actions;
    prod.mdp.weights = model.weights;

    std::map<std::pair<StateId, std::uint32_t>, StateId> index;
    std::deque<StateId> queue;
    auto node_of = [&](StateId s, std::uint32_t mask) {
        auto it = index.find({s, mask});
        if (it != index.end()) return it->second;
        StateId id = prod.mdp.add_state(model.states[s] + "|" + std::to_string(mask));
        index[{s, mask}] = id;
        prod.info.emplace_back(s, mask);
        queue.push_back(id);
        return id;
    };

    prod.initial_mask = fire(model.initial);
    prod.mdp.initial = node_of(model.initial, prod.initial_mask);
    while (!queue.empty()) {
        StateId node = queue.front();
        queue.pop_front();
        auto [s, mask] = prod.info[node];
        for (ActionId a : model.enabled[s]) {
            std::vector<Distribution::Entry> entries;
            for (const auto& [succ, p] : model.delta_at(s, a).support())
                entries.emplace_back(node_of(succ, mask | fire(succ)), p);
            prod.mdp.add_transition(node, a, Distribution::make(std::move(entries)));
        }
    }
    return prod;
}

} // namespace

MultiReachResult solve_multiple_reachability(const WeightedMdp& model,
                                             const std::vector<std::set<StateId>>& targets,
                                             const std::vector<Rational>& thresholds) {
    int q = static_cast<int>(targets.size());
    if (q == 0 || q != static_cast<int>(thresholds.size()))
        throw Error("multiple reachability: mismatched targets/thresholds");
    if (q > 20) throw Error("multiple reachability: too many constraints");

    Product prod = build_subset_product(model, targets);
    const WeightedMdp& P = prod.mdp;
    int pn = P.num_states();

    std::vector<EndComponent> mecs = mec_decomposition(P);
    std::vector<int> mec_of(pn, -1);
    for (std::size_t k = 0; k < mecs.size(); ++k)
        for (StateId s : mecs[k].states) mec_of[s] = static_cast<int>(k);

    // Variable layout: y_{p,a} then z_p for MEC members.
    std::map<std::pair<StateId, ActionId>, int> yvar;
    std::vector<int> zvar(pn, -1);
    int nv = 0;
    for (StateId p = 0; p < pn; ++p)
        for (ActionId a : P.enabled[p]) yvar[{p, a}] = nv++;
    for (StateId p = 0; p < pn; ++p)
        if (mec_of[p] >= 0) zvar[p] = nv++;

    LinearProgram lp(nv, Sense::Maximize);
    for (int v = 0; v < nv; ++v) lp.lower[v] = Rational(0);

    // Flow conservation: outflow + commit - inflow = initial mass.
    std::vector<std::vector<std::pair<int, Rational>>> conserve(pn);
    for (StateId p = 0; p < pn; ++p) {
        for (ActionId a : P.enabled[p]) conserve[p].emplace_back(yvar[{p, a}], Rational(1));
        if (zvar[p] >= 0) conserve[p].emplace_back(zvar[p], Rational(1));
    }
    for (StateId p = 0; p < pn; ++p)
        for (ActionId a : P.enabled[p])
            for (const auto& [succ, pr] : P.delta_at(p, a).support())
                conserve[succ].emplace_back(yvar[{p, a}], -pr);
    for (StateId p = 0; p < pn; ++p)
        lp.add_row(conserve[p], Relation::Equal,
                   p == P.initial ? Rational(1) : Rational(0));

    // All mass eventually commits inside some end component.
    {
        std::vector<std::pair<int, Rational>> total;
        for (StateId p = 0; p < pn; ++p)
            if (zvar[p] >= 0) total.emplace_back(zvar[p], Rational(1));
        lp.add_row(total, Relation::Equal, Rational(1));
    }

    // First-satisfaction inflow per constraint.
    std::vector<std::vector<std::pair<int, Rational>>> fire_terms(q);
    for (StateId p = 0; p < pn; ++p) {
        auto [s, mask] = prod.info[p];
        for (ActionId a : P.enabled[p])
            for (const auto& [succ, pr] : P.delta_at(p, a).support()) {
                auto [sp, mask2] = prod.info[succ];
                std::uint32_t fired = mask2 & ~mask;
                for (int i = 0; i < q; ++i)
                    if (fired & (1u << i))
                        fire_terms[i].emplace_back(yvar[{p, a}], pr);
            }
    }
    for (int i = 0; i < q; ++i) {
        Rational base = (prod.initial_mask & (1u << i)) ? Rational(1) : Rational(0);
        lp.add_row(fire_terms[i], Relation::GreaterEq, thresholds[i] - base);
        for (const auto& [v, c] : fire_terms[i]) lp.objective(v) += c;
    }

    MultiReachResult result;
    result.product_states = pn;
    result.lp_vars = nv;
    result.lp_rows = static_cast<int>(lp.rows.size());

    LpResult sol = solve_lp(lp);
    if (sol.status == LpStatus::Infeasible) {
        result.yes = false;
        return result;
    }
    if (sol.status != LpStatus::Optimal)
        throw Error("internal: multiple reachability LP unbounded");

    // Randomized memoryless product strategy. Commit mass stays inside the
    // end component (uniform over internal actions); transit mass follows
    // the flow proportions.
    std::map<std::pair<StateId, MemoryId>, Distribution> product_choice;
    std::vector<std::map<StateId, Rational>> dummy;
    auto internal_actions = [&](StateId p) -> const std::vector<ActionId>& {
        static const std::vector<ActionId> none;
        if (mec_of[p] < 0) return none;
        const auto& mec = mecs[mec_of[p]];
        for (std::size_t i = 0; i < mec.states.size(); ++i)
            if (mec.states[i] == p) return mec.internal[i];
        return none;
    };

    std::vector<Distribution> node_choice(pn);
    for (StateId p = 0; p < pn; ++p) {
        std::map<ActionId, Rational> weight;
        Rational total(0);
        for (ActionId a : P.enabled[p]) {
            Rational y = sol.solution(yvar[{p, a}]);
            if (y > 0) {
                weight[a] += y;
                total += y;
            }
        }
        if (zvar[p] >= 0) {
            Rational z = sol.solution(zvar[p]);
            if (z > 0) {
                const auto& internal = internal_actions(p);
                if (internal.empty())
                    throw Error("internal: commit mass outside an end component");
                Rational share = z / Rational(static_cast<int>(internal.size()));
                for (ActionId a : internal) weight[a] += share;
                total += z;
            }
        }
        if (total == 0) {
            node_choice[p] = Distribution::dirac(P.enabled[p].front());
        } else {
            std::vector<Distribution::Entry> entries;
            for (const auto& [a, w] : weight) entries.emplace_back(a, w / total);
            node_choice[p] = Distribution::make(std::move(entries));
        }
    }

    // Pull back to the base model: the memory is the satisfied-constraint
    // mask of the states seen strictly before the current one; the current
    // state's own contribution is folded in lazily.
    auto fire = [&](StateId s) {
        std::uint32_t m = 0;
        for (int i = 0; i < q; ++i)
            if (targets[i].count(s)) m |= (1u << i);
        return m;
    };

    MooreStrategy sigma;
    sigma.name = "multi-reach";
    std::map<std::uint32_t, MemoryId> mem_of;
    auto memory_of = [&](std::uint32_t mask) {
        auto it = mem_of.find(mask);
        if (it != mem_of.end()) return it->second;
        MemoryId m = sigma.add_memory("w" + std::to_string(mask));
        mem_of[mask] = m;
        return m;
    };
    std::map<std::pair<StateId, std::uint32_t>, StateId> node_index;
    for (StateId p = 0; p < pn; ++p) node_index[prod.info[p]] = p;

    sigma.initial_memory = Distribution::dirac(memory_of(0));
    // Enumerate lagged memories reachable in the product.
    std::set<std::uint32_t> masks{0};
    for (StateId p = 0; p < pn; ++p) masks.insert(prod.info[p].second);
    for (std::uint32_t mask : masks) {
        MemoryId m = memory_of(mask);
        for (StateId s = 0; s < model.num_states(); ++s) {
            std::uint32_t node_mask = mask | fire(s);
            auto it = node_index.find({s, node_mask});
            Distribution choice = it != node_index.end()
                                      ? node_choice[it->second]
                                      : Distribution::dirac(model.enabled[s].front());
            sigma.next_action[{s, m}] = choice;
            for (const auto& [a, pr] : choice.support())
                sigma.memory_update[{a, s, m}] = Distribution::dirac(memory_of(node_mask));
        }
    }

    // Exact post-hoc verification is part of the contract.
    InducedChain chain = induce_chain(model, sigma);
    result.achieved.resize(q);
    for (int i = 0; i < q; ++i) {
        std::set<StateId> chain_targets;
        std::vector<Rational> reach;
        {
            std::set<StateId> ts = targets[i];
            reach = chain_reach_probabilities(chain, ts);
        }
        Rational p(0);
        for (const auto& [node, pr] : chain.initial.support()) p += pr * reach[node];
        result.achieved[i] = p;
        if (p < thresholds[i])
            throw Error("internal: extracted strategy misses threshold " +
                        std::to_string(i + 1) + " (" + to_fraction_string(p) + " < " +
                        to_fraction_string(thresholds[i]) + ")");
    }
    result.yes = true;
    result.strategy = std::move(sigma);
    return result;
}

} // namespace stochpath

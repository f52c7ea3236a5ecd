#include "stochpath/unfolding.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "stochpath/errors.hpp"

namespace stochpath {

bool UnfoldedMdp::all_saturated(int node) const {
    for (std::size_t k = 0; k < tracked.size(); ++k)
        if (!saturated(node, static_cast<int>(k))) return false;
    return true;
}

std::set<StateId> UnfoldedMdp::target_prime(const std::set<StateId>& target, int k) const {
    std::set<StateId> out;
    for (int node = 0; node < mdp.num_states(); ++node)
        if (target.count(node_state[node]) && !saturated(node, k)) out.insert(node);
    return out;
}

std::set<StateId> UnfoldedMdp::target_prime(const std::set<StateId>& target) const {
    std::set<StateId> out;
    for (int node = 0; node < mdp.num_states(); ++node) {
        if (!target.count(node_state[node])) continue;
        bool ok = true;
        for (std::size_t k = 0; k < tracked.size(); ++k)
            if (saturated(node, static_cast<int>(k))) ok = false;
        if (ok) out.insert(node);
    }
    return out;
}

UnfoldedMdp build_unfolding(const WeightedMdp& model,
                            const std::vector<std::pair<Dim, Weight>>& bounds,
                            bool compress) {
    if (bounds.empty()) throw Error("unfolding needs at least one tracked dimension");
    for (const auto& [dim, bound] : bounds) {
        if (bound < 0) throw ModelError("negative unfolding bound");
        auto diags = validate_positive_weights(model, {dim});
        if (!diags.empty()) throw ModelError(diags.front().message);
    }

    UnfoldedMdp unf;
    unf.base = &model;
    Weight uniform_cap = 0;
    for (const auto& [dim, bound] : bounds) {
        unf.tracked.push_back(dim);
        uniform_cap = std::max(uniform_cap, bound);
    }
    for (const auto& [dim, bound] : bounds)
        unf.cutoffs.push_back(compress ? bound : uniform_cap);

    unf.mdp.name = model.name + "@unfolded";
    unf.mdp.dims = model.dims;
    unf.mdp.dim_names = model.dim_names;
    unf.mdp.actions = model.actions;
    unf.mdp.weights = model.weights;

    int d = static_cast<int>(unf.tracked.size());
    auto node_name = [&](StateId s, const std::vector<Weight>& acc) {
        std::ostringstream out;
        out << model.states[s] << "@";
        for (int k = 0; k < d; ++k) {
            if (k) out << "_";
            if (acc[k] > unf.cutoffs[k])
                out << "bot";
            else
                out << acc[k];
        }
        return out.str();
    };

    std::map<std::pair<StateId, std::vector<Weight>>, StateId> index;
    std::deque<StateId> queue;
    auto node_of = [&](StateId s, std::vector<Weight> acc) {
        // Saturate each coordinate; the all-saturated class collapses to a
        // single sink per base state.
        for (int k = 0; k < d; ++k)
            if (acc[k] > unf.cutoffs[k]) acc[k] = unf.cutoffs[k] + 1;
        auto it = index.find({s, acc});
        if (it != index.end()) return it->second;
        StateId id = unf.mdp.add_state(node_name(s, acc));
        index[{s, acc}] = id;
        unf.node_state.push_back(s);
        unf.node_acc.push_back(acc);
        queue.push_back(id);
        return id;
    };

    unf.mdp.initial = node_of(model.initial, std::vector<Weight>(d, 0));
    while (!queue.empty()) {
        StateId node = queue.front();
        queue.pop_front();
        StateId s = unf.node_state[node];
        const std::vector<Weight>& acc = unf.node_acc[node];
        for (ActionId a : model.enabled[s]) {
            std::vector<Weight> next(d);
            for (int k = 0; k < d; ++k)
                next[k] = std::min(acc[k] + model.weight_of(a, unf.tracked[k]),
                                   unf.cutoffs[k] + 1);
            std::vector<Distribution::Entry> entries;
            for (const auto& [succ, p] : model.delta_at(s, a).support())
                entries.emplace_back(node_of(succ, next), p);
            unf.mdp.add_transition(node, a, Distribution::make(std::move(entries)));
        }
    }

    for (const auto& [group, members] : model.target_groups)
        for (int node = 0; node < unf.mdp.num_states(); ++node)
            if (members.count(unf.node_state[node]))
                unf.mdp.add_to_group(group, node);
    return unf;
}

} // namespace stochpath

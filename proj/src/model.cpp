#include "stochpath/model.hpp"

#include <algorithm>

#include "stochpath/errors.hpp"

namespace stochpath {

StateId WeightedMdp::add_state(const std::string& state_name) {
    states.push_back(state_name);
    enabled.emplace_back();
    return static_cast<StateId>(states.size()) - 1;
}

ActionId WeightedMdp::add_action(const std::string& action_name, WeightVector weight) {
    actions.push_back(action_name);
    weights.push_back(std::move(weight));
    return static_cast<ActionId>(actions.size()) - 1;
}

ActionId WeightedMdp::add_action(const std::string& action_name, std::vector<Weight> weight) {
    WeightVector w(weight.size());
    for (std::size_t i = 0; i < weight.size(); ++i) w(static_cast<int>(i)) = weight[i];
    return add_action(action_name, std::move(w));
}

void WeightedMdp::add_transition(StateId s, ActionId a, Distribution d) {
    if (std::find(enabled[s].begin(), enabled[s].end(), a) == enabled[s].end())
        enabled[s].push_back(a);
    delta[{s, a}] = std::move(d);
}

void WeightedMdp::add_to_group(const std::string& group, StateId s) {
    target_groups[group].insert(s);
}

std::optional<StateId> WeightedMdp::state_id(const std::string& state_name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == state_name) return static_cast<StateId>(i);
    return std::nullopt;
}

std::optional<ActionId> WeightedMdp::action_id(const std::string& action_name) const {
    for (std::size_t i = 0; i < actions.size(); ++i)
        if (actions[i] == action_name) return static_cast<ActionId>(i);
    return std::nullopt;
}

const Distribution& WeightedMdp::delta_at(StateId s, ActionId a) const {
    auto it = delta.find({s, a});
    if (it == delta.end())
        throw ModelError("no transition for (" + states.at(s) + ", " + actions.at(a) + ")");
    return it->second;
}

bool WeightedMdp::has_delta(StateId s, ActionId a) const {
    return delta.count({s, a}) > 0;
}

const std::set<StateId>& WeightedMdp::target(const std::string& group) const {
    auto it = target_groups.find(group);
    if (it == target_groups.end()) throw ModelError("unknown target group '" + group + "'");
    return it->second;
}

Dim WeightedMdp::resolve_dim(const std::string& ref) const {
    for (std::size_t i = 0; i < dim_names.size(); ++i)
        if (dim_names[i] == ref) return static_cast<Dim>(i);
    try {
        int k = std::stoi(ref);
        if (k >= 1 && k <= dims) return k - 1;
    } catch (...) {
    }
    throw ModelError("unknown dimension '" + ref + "'");
}

std::vector<Diagnostic> validate_model(const WeightedMdp& model) {
    std::vector<Diagnostic> out;
    if (model.states.empty()) {
        out.push_back({"model", "no states"});
        return out;
    }
    if (model.initial < 0 || model.initial >= model.num_states())
        out.push_back({"model", "initial state out of range"});
    if (model.dims < 1) out.push_back({"model", "dims must be >= 1"});
    if (!model.dim_names.empty() &&
        static_cast<int>(model.dim_names.size()) != model.dims)
        out.push_back({"model", "dimnames arity differs from dims"});

    for (StateId s = 0; s < model.num_states(); ++s) {
        if (model.enabled[s].empty())
            out.push_back({model.states[s], "state has no enabled action"});
        for (ActionId a : model.enabled[s]) {
            auto it = model.delta.find({s, a});
            if (it == model.delta.end()) {
                out.push_back({model.states[s] + "/" + model.actions[a],
                               "enabled action has no distribution"});
                continue;
            }
            const Distribution& d = it->second;
            if (d.empty() || !d.is_stochastic())
                out.push_back({model.states[s] + "/" + model.actions[a],
                               "distribution not stochastic at (" + model.states[s] +
                                   ", " + model.actions[a] + "): sums to " +
                                   to_fraction_string(d.total())});
            for (const auto& [succ, p] : d.support())
                if (succ < 0 || succ >= model.num_states())
                    out.push_back({model.states[s] + "/" + model.actions[a],
                                   "successor out of range"});
        }
    }
    for (const auto& [key, d] : model.delta) {
        auto [s, a] = key;
        const auto& en = model.enabled.at(s);
        if (std::find(en.begin(), en.end(), a) == en.end())
            out.push_back({model.states[s] + "/" + model.actions[a],
                           "distribution defined for non-enabled action"});
    }
    for (ActionId a = 0; a < model.num_actions(); ++a)
        if (model.weights[a].size() != model.dims)
            out.push_back({model.actions[a], "weight vector arity differs from dims"});
    for (const auto& [group, members] : model.target_groups)
        for (StateId s : members)
            if (s < 0 || s >= model.num_states())
                out.push_back({group, "target group member out of range"});
    return out;
}

std::vector<Diagnostic> validate_positive_weights(const WeightedMdp& model,
                                                  const std::vector<Dim>& dims) {
    std::vector<Diagnostic> out;
    for (Dim d : dims) {
        if (d < 0 || d >= model.dims) {
            out.push_back({"model", "queried dimension out of range"});
            continue;
        }
        for (ActionId a = 0; a < model.num_actions(); ++a)
            if (model.weights[a].size() == model.dims && model.weights[a](d) < 1)
                out.push_back({model.actions[a],
                               "nonpositive weight on dimension " + std::to_string(d + 1) +
                                   " for action " + model.actions[a]});
    }
    return out;
}

void require_valid_for_ssp(const WeightedMdp& model, const std::vector<Dim>& dims) {
    auto diags = validate_model(model);
    auto wd = validate_positive_weights(model, dims);
    diags.insert(diags.end(), wd.begin(), wd.end());
    if (!diags.empty())
        throw ModelError("invalid model: " + diags.front().message +
                         (diags.size() > 1
                              ? " (+" + std::to_string(diags.size() - 1) + " more)"
                              : ""));
}

std::optional<int> MultiEnvMdp::env_index(const std::string& env_name) const {
    for (std::size_t i = 0; i < env_names.size(); ++i)
        if (env_names[i] == env_name) return static_cast<int>(i);
    return std::nullopt;
}

std::vector<Diagnostic> validate_multienv(const MultiEnvMdp& model) {
    std::vector<Diagnostic> out;
    if (model.envs.empty()) {
        out.push_back({"memdp", "no environments"});
        return out;
    }
    const WeightedMdp& base = model.envs.front();
    for (int i = 1; i < model.env_count(); ++i) {
        const WeightedMdp& e = model.envs[i];
        if (e.states != base.states || e.actions != base.actions ||
            e.enabled != base.enabled || e.initial != base.initial)
            out.push_back({model.env_names[i],
                           "environment does not share the base state/action structure"});
    }
    for (int i = 0; i < model.env_count(); ++i) {
        auto d = validate_model(model.envs[i]);
        for (auto& diag : d)
            out.push_back({model.env_names[i] + ":" + diag.where, diag.message});
    }
    return out;
}

} // namespace stochpath

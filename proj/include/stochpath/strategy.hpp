#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "stochpath/model.hpp"

namespace stochpath {

using MemoryId = int;

/// Stochastic Moore machine encoding a strategy: next-action function
/// sigma_a(s, m), memory update sigma_u(a, s, m) keyed on the state the
/// action was played from, and an initial distribution over memory elements.
/// Updates absent from the table leave the memory unchanged.
struct MooreStrategy {
    std::string name = "strategy";
    std::vector<std::string> memory;
    Distribution initial_memory;
    std::map<std::pair<StateId, MemoryId>, Distribution> next_action;
    std::map<std::tuple<ActionId, StateId, MemoryId>, Distribution> memory_update;

    int memory_size() const { return static_cast<int>(memory.size()); }

    MemoryId add_memory(const std::string& memory_name);
    std::optional<MemoryId> memory_id(const std::string& memory_name) const;

    /// sigma_a; throws StrategyError when undefined for a queried pair.
    const Distribution& action_choice(StateId s, MemoryId m) const;
    bool has_action_choice(StateId s, MemoryId m) const;

    /// sigma_u with the identity default.
    Distribution update(ActionId a, StateId s, MemoryId m) const;

    bool is_pure() const;
    bool is_memoryless() const { return memory.size() == 1; }

    /// Single-memory pure strategy from a state -> action map.
    static MooreStrategy memoryless_pure(const WeightedMdp& model,
                                         const std::map<StateId, ActionId>& choice,
                                         const std::string& name = "strategy");
};

} // namespace stochpath

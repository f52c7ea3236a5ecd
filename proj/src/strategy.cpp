#include "stochpath/strategy.hpp"

#include "stochpath/errors.hpp"

namespace stochpath {

MemoryId MooreStrategy::add_memory(const std::string& memory_name) {
    memory.push_back(memory_name);
    return static_cast<MemoryId>(memory.size()) - 1;
}

std::optional<MemoryId> MooreStrategy::memory_id(const std::string& memory_name) const {
    for (std::size_t i = 0; i < memory.size(); ++i)
        if (memory[i] == memory_name) return static_cast<MemoryId>(i);
    return std::nullopt;
}

const Distribution& MooreStrategy::action_choice(StateId s, MemoryId m) const {
    auto it = next_action.find({s, m});
    if (it == next_action.end())
        throw StrategyError("strategy has no action choice for state " +
                            std::to_string(s) + ", memory " + std::to_string(m));
    return it->second;
}

bool MooreStrategy::has_action_choice(StateId s, MemoryId m) const {
    return next_action.count({s, m}) > 0;
}

Distribution MooreStrategy::update(ActionId a, StateId s, MemoryId m) const {
    auto it = memory_update.find({a, s, m});
    if (it == memory_update.end()) return Distribution::dirac(m);
    return it->second;
}

bool MooreStrategy::is_pure() const {
    if (!initial_memory.is_dirac()) return false;
    for (const auto& [key, d] : next_action)
        if (!d.is_dirac()) return false;
    for (const auto& [key, d] : memory_update)
        if (!d.is_dirac()) return false;
    return true;
}

MooreStrategy MooreStrategy::memoryless_pure(const WeightedMdp& model,
                                             const std::map<StateId, ActionId>& choice,
                                             const std::string& name) {
    MooreStrategy sigma;
    sigma.name = name;
    MemoryId m = sigma.add_memory("m");
    sigma.initial_memory = Distribution::dirac(m);
    for (const auto& [s, a] : choice)
        sigma.next_action[{s, m}] = Distribution::dirac(a);
    (void)model;
    return sigma;
}

} // namespace stochpath

#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stochpath/distribution.hpp"
#include "stochpath/rational.hpp"

namespace stochpath {

using StateId = int;
using ActionId = int;
using Dim = int; // 0-based dimension index

using WeightVector = Eigen::Matrix<Weight, Eigen::Dynamic, 1>;

/// Finite MDP with d-dimensional integer action weights and exact rational
/// transition probabilities. Instances are filled through the add_* helpers
/// and treated as immutable once handed to a solver.
struct WeightedMdp {
    std::string name = "mdp";
    int dims = 1;
    std::vector<std::string> dim_names;
    std::vector<std::string> states;
    StateId initial = 0;
    std::vector<std::string> actions;
    std::vector<WeightVector> weights;
    std::vector<std::vector<ActionId>> enabled;
    std::map<std::pair<StateId, ActionId>, Distribution> delta;
    std::map<std::string, std::set<StateId>> target_groups;

    StateId add_state(const std::string& state_name);
    ActionId add_action(const std::string& action_name, WeightVector weight);
    ActionId add_action(const std::string& action_name, std::vector<Weight> weight);
    void add_transition(StateId s, ActionId a, Distribution d);
    void add_to_group(const std::string& group, StateId s);

    int num_states() const { return static_cast<int>(states.size()); }
    int num_actions() const { return static_cast<int>(actions.size()); }

    std::optional<StateId> state_id(const std::string& state_name) const;
    std::optional<ActionId> action_id(const std::string& action_name) const;
    const Distribution& delta_at(StateId s, ActionId a) const;
    bool has_delta(StateId s, ActionId a) const;
    const std::set<StateId>& target(const std::string& group) const;
    Weight weight_of(ActionId a, Dim dim) const { return weights[a](dim); }

    /// Dimension reference by 1-based number or by declared name.
    Dim resolve_dim(const std::string& ref) const;
};

struct Diagnostic {
    std::string where;
    std::string message;
};

/// Structural invariants: stochastic distributions, nonempty action sets,
/// delta defined exactly on enabled pairs, weight arity. Returns an empty
/// list iff the model is well-formed.
std::vector<Diagnostic> validate_model(const WeightedMdp& model);

/// Strict positivity of weights on the dimensions a shortest-path solver
/// queries; violation yields a "nonpositive weight" diagnostic.
std::vector<Diagnostic> validate_positive_weights(const WeightedMdp& model,
                                                  const std::vector<Dim>& dims);

/// Throws ModelError if any diagnostic fires.
void require_valid_for_ssp(const WeightedMdp& model, const std::vector<Dim>& dims);

/// Multi-environment MDP: one state/action space, k transition functions.
/// Each environment is materialized as a full WeightedMdp sharing names.
struct MultiEnvMdp {
    std::vector<std::string> env_names;
    std::vector<WeightedMdp> envs;

    int env_count() const { return static_cast<int>(envs.size()); }
    const WeightedMdp& environment(int i) const { return envs.at(i); }
    const WeightedMdp& shared() const { return envs.front(); }
    std::optional<int> env_index(const std::string& env_name) const;
};

/// Shared-structure invariants (same states, actions, enabled sets) plus the
/// per-environment model checks.
std::vector<Diagnostic> validate_multienv(const MultiEnvMdp& model);

} // namespace stochpath

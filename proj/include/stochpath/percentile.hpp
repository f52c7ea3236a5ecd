#pragma once

#include "stochpath/reachability.hpp"
#include "stochpath/solvers_classic.hpp"

namespace stochpath {

struct PercentileConstraint {
    std::set<StateId> target;
    std::string target_name;
    Dim dim = 0;
    Weight bound = 0;
    Rational prob;
};

struct PercentileQuery {
    std::vector<PercentileConstraint> constraints;
    int size() const { return static_cast<int>(constraints.size()); }
};

struct SsppqResult {
    bool yes = false;
    std::vector<Rational> achieved; // per constraint, exact, verified
    std::optional<MooreStrategy> strategy;
    SolveStats stats;
};

/// Multi-constraint percentile query: multi-dimensional unfolding over the
/// queried dimensions only (per-coordinate saturation and compression),
/// first-visit target sets R_i, multiple reachability on the product, and a
/// pullback whose memory is the accumulated weight vector plus the
/// satisfied-constraint subset. Every YES witness is verified per
/// constraint with exact first-visit analysis.
SsppqResult solve_ssppq(const WeightedMdp& model, const PercentileQuery& query,
                        bool compress = true);

/// All constraints on one dimension and one target set: the first visit of
/// the target decides every constraint at once, so the subset product is
/// unnecessary and a single LP suffices.
bool fast_path_eligible(const PercentileQuery& query);
SsppqResult fast_path_single(const WeightedMdp& model, const PercentileQuery& query);

} // namespace stochpath

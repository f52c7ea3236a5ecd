#pragma once

#include <optional>
#include <set>

#include "stochpath/chain.hpp"
#include "stochpath/unfolding.hpp"

namespace stochpath {

struct SolveStats {
    int unfolding_states = 0;
    int lp_vars = 0;
    int lp_rows = 0;
    double wall_ms = 0;
};

struct SspeResult {
    ExtRational expectation = ExtRational::infinity();
    std::optional<MooreStrategy> strategy; // memoryless pure witness
    SolveStats stats;
};

/// Minimal expected truncated sum. States that cannot reach the target
/// almost surely have infinite value and are excluded before the LP; the
/// optimum and the argmin witness are exact.
SspeResult solve_sspe(const WeightedMdp& model, const std::set<StateId>& target,
                      Dim dim = 0);

struct SsppResult {
    bool yes = false;
    Rational achieved; // maximal P[TS <= bound], exact
    std::optional<MooreStrategy> strategy;
    SolveStats stats;
};

/// Single percentile constraint: build the bound-unfolding, maximize
/// reachability of T' there, pull the memoryless witness back as a Moore
/// machine whose memory is the accumulated sum.
SsppResult solve_sspp(const WeightedMdp& model, const std::set<StateId>& target,
                      Weight bound, const Rational& alpha, Dim dim = 0);

/// Dynamic-programming table C(s, i): lowest bound on the length to target
/// that the controller can ensure within i steps against an adversary
/// resolving the transitions.
struct WorstCaseTable {
    std::vector<std::vector<ExtWeight>> values; // [i][s], i = 0..n
    ExtWeight at(StateId s, int i) const { return values.at(i).at(s); }
    int steps() const { return static_cast<int>(values.size()) - 1; }
};

WorstCaseTable compute_worst_case_table(const WeightedMdp& model,
                                        const std::set<StateId>& target, Dim dim = 0);

struct SpgResult {
    bool yes = false;
    ExtWeight value = ExtWeight::infinity();
    std::optional<MooreStrategy> strategy; // memoryless pure
    SolveStats stats;
};

/// Shortest path game: every compatible outcome must reach the target with
/// truncated sum <= bound.
SpgResult solve_spg(const WeightedMdp& model, const std::set<StateId>& target,
                    Weight bound, Dim dim = 0);

/// Longest truncated sum over all runs compatible with the strategy's
/// supports; +inf when a target-avoiding cycle is compatible.
ExtWeight evaluate_worst_case(const WeightedMdp& model, const MooreStrategy& sigma,
                              const std::set<StateId>& target, Dim dim = 0);

/// Memoryless strategy on an unfolding pulled back to the base model with
/// the accumulated weight as memory. Falls back to the first enabled action
/// on nodes the unfolding strategy leaves open.
MooreStrategy pull_back_unfolding_strategy(const UnfoldedMdp& unfolded,
                                           const MooreStrategy& product_strategy,
                                           const std::string& name);

} // namespace stochpath

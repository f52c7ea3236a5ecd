#include "stochpath/chain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/eigen.hpp>
#include <deque>
#include <map>

#include "stochpath/errors.hpp"

namespace stochpath {

namespace {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

RationalVector solve_exact(const RationalMatrix& A, const RationalVector& b) {
    Eigen::FullPivLU<RationalMatrix> lu(A);
    if (!lu.isInvertible()) throw Error("singular linear system in chain analysis");
    return lu.solve(b);
}

void require_positive_dim(const WeightedMdp& model, Dim dim) {
    auto diags = validate_positive_weights(model, {dim});
    if (!diags.empty()) throw ModelError(diags.front().message);
}

} // namespace

InducedChain induce_chain(const WeightedMdp& model, const MooreStrategy& sigma) {
    InducedChain chain;
    chain.model = &model;

    std::map<std::pair<StateId, MemoryId>, int> index;
    auto node_of = [&](StateId s, MemoryId m) {
        auto it = index.find({s, m});
        if (it != index.end()) return it->second;
        int id = static_cast<int>(chain.nodes.size());
        index[{s, m}] = id;
        chain.nodes.emplace_back(s, m);
        return id;
    };

    std::vector<Distribution::Entry> init;
    for (const auto& [m, p] : sigma.initial_memory.support())
        init.emplace_back(node_of(model.initial, m), p);
    chain.initial = Distribution::make(std::move(init));

    std::deque<int> queue;
    for (int i = 0; i < static_cast<int>(chain.nodes.size()); ++i) queue.push_back(i);
    chain.trans.resize(chain.nodes.size());

    while (!queue.empty()) {
        int node = queue.front();
        queue.pop_front();
        auto [s, m] = chain.nodes[node];
        const Distribution& choice = sigma.action_choice(s, m);
        std::map<std::pair<int, ActionId>, Rational> merged;
        for (const auto& [a, pa] : choice.support()) {
            const auto& en = model.enabled[s];
            if (std::find(en.begin(), en.end(), a) == en.end())
                throw StrategyError("strategy plays '" + model.actions.at(a) +
                                    "', not enabled at state '" + model.states[s] + "'");
            const Distribution& succ = model.delta_at(s, a);
            Distribution upd = sigma.update(a, s, m);
            for (const auto& [sp, ps] : succ.support())
                for (const auto& [mp, pm] : upd.support()) {
                    std::size_t before = chain.nodes.size();
                    int t = node_of(sp, mp);
                    if (chain.nodes.size() != before) {
                        chain.trans.emplace_back();
                        queue.push_back(t);
                    }
                    merged[{t, a}] += pa * ps * pm;
                }
        }
        Rational total(0);
        for (const auto& [key, p] : merged) {
            chain.trans[node].push_back({key.first, key.second, p});
            total += p;
        }
        if (total != 1)
            throw StrategyError("induced chain not stochastic at (" + model.states[s] +
                                ", " + sigma.memory.at(m) + ")");
    }
    return chain;
}

RunPrefix RunPrefix::of(std::initializer_list<int> alternating) {
    RunPrefix run;
    bool state = true;
    for (int v : alternating) {
        if (state)
            run.states.push_back(v);
        else
            run.actions.push_back(v);
        state = !state;
    }
    if (run.states.size() != run.actions.size() + 1)
        throw Error("run prefix must alternate s a s ... a s");
    return run;
}

bool run_is_valid(const WeightedMdp& model, const RunPrefix& run) {
    if (run.states.empty() || run.states.size() != run.actions.size() + 1) return false;
    for (std::size_t i = 0; i < run.actions.size(); ++i) {
        StateId s = run.states[i];
        ActionId a = run.actions[i];
        const auto& en = model.enabled.at(s);
        if (std::find(en.begin(), en.end(), a) == en.end()) return false;
        if (model.delta_at(s, a).prob(run.states[i + 1]) == 0) return false;
    }
    return true;
}

TruncatedSum truncated_sum(const WeightedMdp& model, const RunPrefix& run,
                           const std::set<StateId>& target, Dim dim) {
    TruncatedSum ts;
    if (target.count(run.states.front())) {
        ts.reached = true;
        return ts;
    }
    for (std::size_t i = 0; i < run.actions.size(); ++i) {
        ts.value += model.weight_of(run.actions[i], dim);
        if (target.count(run.states[i + 1])) {
            ts.reached = true;
            return ts;
        }
    }
    ts.reached = false;
    return ts;
}

Rational exact_event_probability(const InducedChain& chain,
                                 const std::set<StateId>& target, Dim dim,
                                 Weight bound) {
    require_positive_dim(*chain.model, dim);
    if (bound < 0) return Rational(0);

    // Positive weights make (node, accumulated) acyclic in the weight
    // coordinate, so a memoized recursion over layers terminates.
    std::map<std::pair<int, Weight>, Rational> memo;
    std::vector<std::pair<int, Weight>> stack;

    auto lookup = [&](int node, Weight acc) -> const Rational* {
        auto it = memo.find({node, acc});
        return it == memo.end() ? nullptr : &it->second;
    };

    std::function<Rational(int, Weight)> value = [&](int node, Weight acc) -> Rational {
        if (const Rational* v = lookup(node, acc)) return *v;
        Rational total(0);
        for (const auto& t : chain.trans[node]) {
            Weight next = acc + chain.step_weight(t, dim);
            if (next > bound) continue;
            if (target.count(chain.state_of(t.succ)))
                total += t.prob;
            else
                total += t.prob * value(t.succ, next);
        }
        memo[{node, acc}] = total;
        return total;
    };

    Rational result(0);
    for (const auto& [node, p] : chain.initial.support()) {
        if (target.count(chain.state_of(node)))
            result += p; // TS = 0
        else
            result += p * value(node, 0);
    }
    return result;
}

std::vector<Rational> chain_reach_probabilities(const InducedChain& chain,
                                                const std::set<StateId>& target) {
    int n = chain.num_nodes();
    std::vector<char> is_target(n, 0);
    for (int i = 0; i < n; ++i)
        if (target.count(chain.state_of(i))) is_target[i] = 1;

    // Backward reachability: nodes with a path into the target.
    std::vector<std::vector<int>> preds(n);
    for (int i = 0; i < n; ++i)
        for (const auto& t : chain.trans[i]) preds[t.succ].push_back(i);
    std::vector<char> can_reach(n, 0);
    std::deque<int> queue;
    for (int i = 0; i < n; ++i)
        if (is_target[i]) {
            can_reach[i] = 1;
            queue.push_back(i);
        }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int p : preds[v])
            if (!can_reach[p]) {
                can_reach[p] = 1;
                queue.push_back(p);
            }
    }

    std::vector<int> solve_index(n, -1);
    std::vector<int> transient;
    for (int i = 0; i < n; ++i)
        if (!is_target[i] && can_reach[i]) {
            solve_index[i] = static_cast<int>(transient.size());
            transient.push_back(i);
        }

    std::vector<Rational> result(n, Rational(0));
    for (int i = 0; i < n; ++i)
        if (is_target[i]) result[i] = 1;
    if (transient.empty()) return result;

    int m = static_cast<int>(transient.size());
    RationalMatrix A = RationalMatrix::Zero(m, m);
    RationalVector b = RationalVector::Zero(m);
    for (int row = 0; row < m; ++row) {
        int i = transient[row];
        A(row, row) += 1;
        for (const auto& t : chain.trans[i]) {
            if (is_target[t.succ])
                b(row) += t.prob;
            else if (solve_index[t.succ] >= 0)
                A(row, solve_index[t.succ]) -= t.prob;
            // successors that cannot reach the target contribute 0
        }
    }
    RationalVector x = solve_exact(A, b);
    for (int row = 0; row < m; ++row) result[transient[row]] = x(row);
    return result;
}

ExtRational exact_expectation(const InducedChain& chain,
                              const std::set<StateId>& target, Dim dim) {
    require_positive_dim(*chain.model, dim);
    std::vector<Rational> reach = chain_reach_probabilities(chain, target);

    Rational p_init(0);
    for (const auto& [node, p] : chain.initial.support()) p_init += p * reach[node];
    if (p_init != 1) return ExtRational::infinity();

    int n = chain.num_nodes();
    std::vector<int> solve_index(n, -1);
    std::vector<int> transient;
    for (int i = 0; i < n; ++i)
        if (!target.count(chain.state_of(i))) {
            solve_index[i] = static_cast<int>(transient.size());
            transient.push_back(i);
        }
    Rational result(0);
    if (!transient.empty()) {
        // Every node reachable with positive probability has reach prob 1
        // here, so (I - Q) restricted to non-target reachable nodes is
        // invertible. Unreachable nodes are simply absent from the chain.
        int m = static_cast<int>(transient.size());
        RationalMatrix A = RationalMatrix::Zero(m, m);
        RationalVector b = RationalVector::Zero(m);
        for (int row = 0; row < m; ++row) {
            int i = transient[row];
            A(row, row) += 1;
            for (const auto& t : chain.trans[i]) {
                b(row) += t.prob * chain.step_weight(t, dim);
                if (solve_index[t.succ] >= 0) A(row, solve_index[t.succ]) -= t.prob;
            }
        }
        RationalVector e = solve_exact(A, b);
        for (const auto& [node, p] : chain.initial.support())
            if (solve_index[node] >= 0) result += p * e(solve_index[node]);
    }
    return ExtRational(result);
}

} // namespace stochpath

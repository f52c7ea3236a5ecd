#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <vector>

#include "stochpath/rational.hpp"

namespace stochpath {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Maximize, Minimize };

/// Dense rational linear program. Variables are free unless bounds are set.
struct LinearProgram {
    int num_vars = 0;
    Sense sense = Sense::Maximize;
    RationalVector objective;
    struct Row {
        RationalVector coeffs;
        Relation rel;
        Rational rhs;
    };
    std::vector<Row> rows;
    std::vector<std::optional<Rational>> lower;
    std::vector<std::optional<Rational>> upper;

    explicit LinearProgram(int vars = 0, Sense s = Sense::Maximize);
    void add_row(RationalVector coeffs, Relation rel, Rational rhs);
    /// Sparse convenience: terms are (variable, coefficient).
    void add_row(const std::vector<std::pair<int, Rational>>& terms, Relation rel,
                 Rational rhs);
    void set_objective_term(int var, Rational coeff) { objective(var) = std::move(coeff); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    RationalVector solution; // only for Optimal
    Rational value;          // objective at the optimum
    /// Farkas-style infeasibility certificate: multipliers y over the rows
    /// such that the combined constraint is unsatisfiable. Empty unless
    /// status == Infeasible.
    RationalVector infeasibility_multipliers;
    /// Feasible point plus an improving ray for Unbounded.
    RationalVector ray;
    int pivots = 0;
};

/// Two-phase primal simplex with a dense rational tableau and Bland's rule
/// (anti-cycling, guaranteed termination). Pass `trace` to dump tableaus.
LpResult solve_lp(const LinearProgram& lp, std::ostream* trace = nullptr);

/// Exact substitution check of a candidate point against every constraint
/// and bound.
bool lp_point_feasible(const LinearProgram& lp, const RationalVector& x);

} // namespace stochpath

#include "stochpath/lp.hpp"

#include <algorithm>
#include <ostream>

#include "stochpath/errors.hpp"

namespace stochpath {

LinearProgram::LinearProgram(int vars, Sense s) : num_vars(vars), sense(s) {
    objective = RationalVector::Zero(vars);
    lower.resize(vars);
    upper.resize(vars);
}

void LinearProgram::add_row(RationalVector coeffs, Relation rel, Rational rhs) {
    if (coeffs.size() != num_vars) throw Error("constraint arity mismatch");
    rows.push_back({std::move(coeffs), rel, std::move(rhs)});
}

void LinearProgram::add_row(const std::vector<std::pair<int, Rational>>& terms,
                            Relation rel, Rational rhs) {
    RationalVector c = RationalVector::Zero(num_vars);
    for (const auto& [v, coeff] : terms) c(v) += coeff;
    add_row(std::move(c), rel, std::move(rhs));
}

bool lp_point_feasible(const LinearProgram& lp, const RationalVector& x) {
    if (x.size() != lp.num_vars) return false;
    for (int j = 0; j < lp.num_vars; ++j) {
        if (lp.lower[j] && x(j) < *lp.lower[j]) return false;
        if (lp.upper[j] && x(j) > *lp.upper[j]) return false;
    }
    for (const auto& row : lp.rows) {
        Rational lhs(0);
        for (int j = 0; j < lp.num_vars; ++j) lhs += row.coeffs(j) * x(j);
        switch (row.rel) {
        case Relation::LessEq:
            if (lhs > row.rhs) return false;
            break;
        case Relation::Equal:
            if (lhs != row.rhs) return false;
            break;
        case Relation::GreaterEq:
            if (lhs < row.rhs) return false;
            break;
        }
    }
    return true;
}

namespace {

// min d'u  s.t.  A u <= b, u >= 0, plus the map back to the original space.
struct StandardForm {
    RationalMatrix A;
    RationalVector b;
    RationalVector d;
    Rational offset;
    struct VarMap {
        Rational shift;
        int pos = -1;
        int neg = -1;
    };
    std::vector<VarMap> map;
    int num_u = 0;
};

StandardForm to_standard_form(const LinearProgram& lp) {
    StandardForm sf;
    sf.map.resize(lp.num_vars);
    for (int j = 0; j < lp.num_vars; ++j) {
        auto& vm = sf.map[j];
        if (lp.lower[j]) {
            vm.shift = *lp.lower[j];
            vm.pos = sf.num_u++;
        } else {
            vm.pos = sf.num_u++;
            vm.neg = sf.num_u++;
        }
    }

    std::vector<RationalVector> rows;
    std::vector<Rational> rhs;
    auto emit = [&](const RationalVector& coeffs, const Rational& r) {
        RationalVector u = RationalVector::Zero(sf.num_u);
        Rational adjusted = r;
        for (int j = 0; j < lp.num_vars; ++j) {
            const auto& vm = sf.map[j];
            if (coeffs(j) == 0) continue;
            u(vm.pos) += coeffs(j);
            if (vm.neg >= 0) u(vm.neg) -= coeffs(j);
            adjusted -= coeffs(j) * vm.shift;
        }
        rows.push_back(std::move(u));
        rhs.push_back(std::move(adjusted));
    };

    for (const auto& row : lp.rows) {
        if (row.rel == Relation::LessEq || row.rel == Relation::Equal)
            emit(row.coeffs, row.rhs);
        if (row.rel == Relation::GreaterEq || row.rel == Relation::Equal)
            emit(-row.coeffs, -row.rhs);
    }
    for (int j = 0; j < lp.num_vars; ++j) {
        if (!lp.upper[j]) continue;
        RationalVector c = RationalVector::Zero(lp.num_vars);
        c(j) = 1;
        emit(c, *lp.upper[j]);
    }

    sf.A = RationalMatrix::Zero(static_cast<int>(rows.size()), sf.num_u);
    sf.b = RationalVector::Zero(static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        sf.A.row(static_cast<int>(i)) = rows[i].transpose();
        sf.b(static_cast<int>(i)) = rhs[i];
    }

    sf.d = RationalVector::Zero(sf.num_u);
    sf.offset = 0;
    Rational sign = lp.sense == Sense::Maximize ? Rational(-1) : Rational(1);
    for (int j = 0; j < lp.num_vars; ++j) {
        const auto& vm = sf.map[j];
        Rational c = sign * lp.objective(j);
        sf.d(vm.pos) += c;
        if (vm.neg >= 0) sf.d(vm.neg) -= c;
        sf.offset += c * vm.shift;
    }
    return sf;
}

class Simplex {
  public:
    Simplex(const StandardForm& sf, std::ostream* trace) : sf_(sf), trace_(trace) {
        m_ = static_cast<int>(sf.b.size());
        n_ = sf.num_u;
        // Columns: structural | slacks | artificials (rows with negative rhs).
        art_of_row_.assign(m_, -1);
        int arts = 0;
        for (int i = 0; i < m_; ++i)
            if (sf_.b(i) < 0) art_of_row_[i] = arts++;
        cols_ = n_ + m_ + arts;
        T_ = RationalMatrix::Zero(m_, cols_ + 1);
        basis_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            bool flip = sf_.b(i) < 0;
            Rational s = flip ? Rational(-1) : Rational(1);
            for (int j = 0; j < n_; ++j) T_(i, j) = s * sf_.A(i, j);
            T_(i, n_ + i) = s; // slack (negated on flipped rows)
            T_(i, cols_) = s * sf_.b(i);
            if (flip) {
                T_(i, n_ + m_ + art_of_row_[i]) = 1;
                basis_[i] = n_ + m_ + art_of_row_[i];
            } else {
                basis_[i] = n_ + i;
            }
        }
    }

    LpResult run(const LinearProgram& lp) {
        LpResult result;

        if (has_artificials()) {
            setup_phase1_costs();
            dump("phase 1 start");
            pivot_loop(/*phase1=*/true, result);
            if (cost_value_ != 0) {
                result.status = LpStatus::Infeasible;
                result.infeasibility_multipliers = RationalVector::Zero(m_);
                for (int i = 0; i < m_; ++i)
                    result.infeasibility_multipliers(i) = cost_(n_ + i);
                verify_farkas(result.infeasibility_multipliers);
                return result;
            }
            expel_artificials();
        }

        setup_phase2_costs(lp);
        dump("phase 2 start");
        if (!pivot_loop(/*phase1=*/false, result)) {
            result.status = LpStatus::Unbounded;
            result.ray = extract_ray(lp);
            return result;
        }
        result.status = LpStatus::Optimal;
        result.solution = extract_solution(lp);
        Rational v = -cost_value_ + sf_.offset;
        result.value = lp.sense == Sense::Maximize ? -v : v;
        result.pivots = pivots_;
        return result;
    }

  private:
    bool has_artificials() const {
        return std::any_of(art_of_row_.begin(), art_of_row_.end(),
                           [](int a) { return a >= 0; });
    }

    void setup_phase1_costs() {
        cost_ = RationalVector::Zero(cols_);
        cost_value_ = 0;
        for (int i = 0; i < m_; ++i)
            if (art_of_row_[i] >= 0) cost_(n_ + m_ + art_of_row_[i]) = 1;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_ + m_) reduce_cost_by_row(i);
    }

    void setup_phase2_costs(const LinearProgram&) {
        cost_ = RationalVector::Zero(cols_);
        cost_value_ = 0;
        for (int j = 0; j < n_; ++j) cost_(j) = sf_.d(j);
        for (int i = 0; i < m_; ++i)
            if (cost_(basis_[i]) != 0) reduce_cost_by_row(i);
    }

    void reduce_cost_by_row(int i) {
        Rational f = cost_(basis_[i]);
        if (f == 0) return;
        for (int j = 0; j < cols_; ++j) cost_(j) -= f * T_(i, j);
        cost_value_ -= f * T_(i, cols_);
    }

    // Returns false on unbounded (phase 2 only); stores the entering column.
    bool pivot_loop(bool phase1, LpResult& result) {
        for (;;) {
            int entering = -1;
            for (int j = 0; j < cols_; ++j) {
                if (!phase1 && is_artificial(j)) continue;
                if (is_basic(j)) continue;
                if (cost_(j) < 0) {
                    entering = j;
                    break; // Bland: lowest index
                }
            }
            if (entering < 0) return true;

            int leaving = -1;
            Rational best_ratio;
            for (int i = 0; i < m_; ++i) {
                if (T_(i, entering) <= 0) continue;
                Rational ratio = T_(i, cols_) / T_(i, entering);
                if (leaving < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leaving])) {
                    leaving = i;
                    best_ratio = ratio;
                }
            }
            if (leaving < 0) {
                unbounded_col_ = entering;
                return false;
            }
            pivot(leaving, entering);
            result.pivots = ++pivots_;
        }
    }

    void pivot(int row, int col) {
        Rational p = T_(row, col);
        for (int j = 0; j <= cols_; ++j) T_(row, j) /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            Rational f = T_(i, col);
            if (f == 0) continue;
            for (int j = 0; j <= cols_; ++j) T_(i, j) -= f * T_(row, j);
        }
        Rational f = cost_(col);
        if (f != 0) {
            for (int j = 0; j < cols_; ++j) cost_(j) -= f * T_(row, j);
            cost_value_ -= f * T_(row, cols_);
        }
        basis_[row] = col;
        dump("after pivot");
    }

    // Basic artificials at level zero are pivoted out onto any usable column;
    // rows that reduce to zero are redundant and neutralized.
    void expel_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_ + m_) continue;
            int col = -1;
            for (int j = 0; j < n_ + m_; ++j)
                if (T_(i, j) != 0) {
                    col = j;
                    break;
                }
            if (col >= 0)
                pivot(i, col);
            else
                T_(i, cols_) = 0; // all-zero row: redundant constraint
        }
    }

    bool is_basic(int col) const {
        return std::find(basis_.begin(), basis_.end(), col) != basis_.end();
    }
    bool is_artificial(int col) const { return col >= n_ + m_; }

    RationalVector u_values() const {
        RationalVector u = RationalVector::Zero(n_);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) u(basis_[i]) = T_(i, cols_);
        return u;
    }

    RationalVector map_back(const RationalVector& u, const LinearProgram& lp) const {
        RationalVector x = RationalVector::Zero(lp.num_vars);
        for (int j = 0; j < lp.num_vars; ++j) {
            const auto& vm = sf_.map[j];
            x(j) = vm.shift + u(vm.pos) - (vm.neg >= 0 ? u(vm.neg) : Rational(0));
        }
        return x;
    }

    RationalVector extract_solution(const LinearProgram& lp) const {
        return map_back(u_values(), lp);
    }

    RationalVector extract_ray(const LinearProgram& lp) const {
        RationalVector dir = RationalVector::Zero(n_);
        if (unbounded_col_ < n_) dir(unbounded_col_) = 1;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) dir(basis_[i]) = -T_(i, unbounded_col_);
        RationalVector ray = RationalVector::Zero(lp.num_vars);
        for (int j = 0; j < lp.num_vars; ++j) {
            const auto& vm = sf_.map[j];
            ray(j) = dir(vm.pos) - (vm.neg >= 0 ? dir(vm.neg) : Rational(0));
        }
        return ray;
    }

    void verify_farkas(const RationalVector& w) const {
        for (int i = 0; i < m_; ++i)
            if (w(i) < 0) throw Error("internal: negative Farkas multiplier");
        for (int j = 0; j < n_; ++j) {
            Rational c(0);
            for (int i = 0; i < m_; ++i) c += w(i) * sf_.A(i, j);
            if (c < 0) throw Error("internal: invalid Farkas certificate");
        }
        Rational rhs(0);
        for (int i = 0; i < m_; ++i) rhs += w(i) * sf_.b(i);
        if (rhs >= 0) throw Error("internal: invalid Farkas certificate");
    }

    void dump(const char* label) const {
        if (!trace_) return;
        *trace_ << "-- " << label << " (cost value " << to_fraction_string(-cost_value_)
                << ")\n";
        for (int i = 0; i < m_; ++i) {
            *trace_ << "  [" << basis_[i] << "]";
            for (int j = 0; j <= cols_; ++j)
                *trace_ << " " << to_fraction_string(T_(i, j));
            *trace_ << "\n";
        }
    }

    const StandardForm& sf_;
    std::ostream* trace_;
    int m_ = 0, n_ = 0, cols_ = 0;
    RationalMatrix T_;
    RationalVector cost_;
    Rational cost_value_;
    std::vector<int> basis_;
    std::vector<int> art_of_row_;
    int unbounded_col_ = -1;
    int pivots_ = 0;
};

} // namespace

LpResult solve_lp(const LinearProgram& lp, std::ostream* trace) {
    StandardForm sf = to_standard_form(lp);
    Simplex simplex(sf, trace);
    return simplex.run(lp);
}

} // namespace stochpath

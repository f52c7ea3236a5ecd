#pragma once

#include <utility>
#include <vector>

#include "stochpath/rational.hpp"

namespace stochpath {

/// Rational probability distribution over integer ids (states, actions or
/// memory elements). The stored support contains only positive probabilities
/// and sums to exactly 1.
class Distribution {
  public:
    using Entry = std::pair<int, Rational>;

    Distribution() = default;

    /// Merges duplicate ids; rejects negative probabilities and sums != 1.
    static Distribution make(std::vector<Entry> entries);
    static Distribution dirac(int id);

    /// Variant that does not require the probabilities to sum to 1; used by
    /// the parser so that non-stochastic inputs become diagnostics instead of
    /// construction failures.
    static Distribution make_unchecked(std::vector<Entry> entries);

    const std::vector<Entry>& support() const { return support_; }
    bool empty() const { return support_.empty(); }
    std::size_t size() const { return support_.size(); }

    Rational prob(int id) const;
    Rational total() const;
    bool is_stochastic() const { return total() == 1; }
    bool is_dirac() const { return support_.size() == 1 && support_[0].second == 1; }

    bool operator==(const Distribution& o) const { return support_ == o.support_; }

  private:
    std::vector<Entry> support_; // sorted by id
};

} // namespace stochpath

#include "stochpath/distribution.hpp"

#include <algorithm>
#include <map>

#include "stochpath/errors.hpp"

namespace stochpath {

Distribution Distribution::make_unchecked(std::vector<Entry> entries) {
    std::map<int, Rational> merged;
    for (auto& [id, p] : entries) {
        if (p < 0) throw ModelError("negative probability in distribution");
        if (p == 0) continue;
        merged[id] += p;
    }
    Distribution d;
    d.support_.assign(merged.begin(), merged.end());
    return d;
}

Distribution Distribution::make(std::vector<Entry> entries) {
    Distribution d = make_unchecked(std::move(entries));
    if (d.total() != 1)
        throw ModelError("distribution probabilities sum to " +
                         to_fraction_string(d.total()) + ", expected 1");
    return d;
}

Distribution Distribution::dirac(int id) {
    Distribution d;
    d.support_.emplace_back(id, Rational(1));
    return d;
}

Rational Distribution::prob(int id) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), id,
                               [](const Entry& e, int v) { return e.first < v; });
    if (it != support_.end() && it->first == id) return it->second;
    return Rational(0);
}

Rational Distribution::total() const {
    Rational t(0);
    for (const auto& [id, p] : support_) t += p;
    return t;
}

} // namespace stochpath

#include "deepsupp/levels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace deepsupp {

std::vector<double> SupportLevelSet::prices() const {
    std::vector<double> out(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i)
        out[i] = levels[i].price;
    return out;
}

double median(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("median of empty set");
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1)
        return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty())
        throw std::invalid_argument("percentile of empty set");
    if (p < 0.0 || p > 100.0)
        throw std::invalid_argument("percentile p must be in [0, 100]");
    std::sort(values.begin(), values.end());
    double pos = p / 100.0 * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

std::vector<SupportLevel> merge_close_levels(std::vector<SupportLevel> levels,
                                             double rel_tol) {
    if (levels.empty())
        return levels;
    std::sort(levels.begin(), levels.end(),
              [](const SupportLevel& a, const SupportLevel& b) {
                  return a.price < b.price;
              });
    std::vector<SupportLevel> out;
    std::size_t i = 0;
    while (i < levels.size()) {
        std::size_t j = i;
        while (j + 1 < levels.size() &&
               levels[j + 1].price - levels[j].price < rel_tol * levels[j].price)
            ++j;
        std::vector<double> prices;
        SupportLevel rep = levels[i];
        std::size_t members = 0;
        for (std::size_t k = i; k <= j; ++k) {
            prices.push_back(levels[k].price);
            members += levels[k].member_count;
            if (levels[k].member_count > rep.member_count ||
                (levels[k].member_count == rep.member_count &&
                 levels[k].cluster_id < rep.cluster_id))
                rep = levels[k];
        }
        rep.price = median(std::move(prices));
        rep.member_count = members;
        out.push_back(rep);
        i = j + 1;
    }
    return out;
}

SupportLevelSet make_level_set(std::string ticker, std::string method,
                               std::vector<SupportLevel> levels, double merge_tol) {
    SupportLevelSet set;
    set.ticker = std::move(ticker);
    set.method = std::move(method);
    set.levels = merge_close_levels(std::move(levels), merge_tol);
    for (auto& lvl : set.levels)
        lvl.method = set.method;
    return set;
}

}  // namespace deepsupp

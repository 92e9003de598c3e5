#include "ibt/conway.hpp"

#include "ibt/errors.hpp"

#include <map>
#include <utility>

// Generated by tools/gen_conway.py; do not edit by hand.
namespace ibt {

namespace {

const std::map<std::pair<long, long>, std::vector<long>> kTable = {
    {{2, 1}, {1, 1}},
    {{2, 2}, {1, 1, 1}},
    {{2, 3}, {1, 1, 0, 1}},
    {{2, 4}, {1, 1, 0, 0, 1}},
    {{2, 5}, {1, 0, 1, 0, 0, 1}},
    {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
    {{2, 7}, {1, 1, 0, 0, 0, 0, 0, 1}},
    {{2, 8}, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
    {{2, 9}, {1, 0, 0, 0, 1, 0, 0, 0, 0, 1}},
    {{2, 10}, {1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1}},
    {{2, 11}, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {{2, 12}, {1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1}},
    {{3, 1}, {1, 1}},
    {{3, 2}, {2, 2, 1}},
    {{3, 3}, {1, 2, 0, 1}},
    {{3, 4}, {2, 0, 0, 2, 1}},
    {{3, 5}, {1, 2, 0, 0, 0, 1}},
    {{3, 6}, {2, 2, 1, 0, 2, 0, 1}},
    {{3, 7}, {1, 0, 2, 0, 0, 0, 0, 1}},
    {{3, 8}, {2, 2, 2, 0, 1, 2, 0, 0, 1}},
    {{3, 9}, {1, 1, 2, 2, 0, 0, 0, 0, 0, 1}},
    {{3, 10}, {2, 1, 0, 0, 2, 2, 2, 0, 0, 0, 1}},
    {{3, 11}, {1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
    {{3, 12}, {2, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1}},
    {{5, 1}, {3, 1}},
    {{5, 2}, {2, 4, 1}},
    {{5, 3}, {3, 3, 0, 1}},
    {{5, 4}, {2, 4, 4, 0, 1}},
    {{5, 5}, {3, 4, 0, 0, 0, 1}},
    {{5, 6}, {2, 0, 1, 4, 1, 0, 1}},
    {{5, 7}, {3, 3, 0, 0, 0, 0, 0, 1}},
    {{5, 8}, {2, 4, 3, 0, 1, 0, 0, 0, 1}},
    {{7, 1}, {4, 1}},
    {{7, 2}, {3, 6, 1}},
    {{7, 3}, {4, 0, 6, 1}},
    {{7, 4}, {3, 4, 5, 0, 1}},
};

} // namespace

const std::vector<long>& conway_polynomial(long p, long m) {
    auto it = kTable.find({p, m});
    if (it == kTable.end())
        throw NoConwayPolynomial("no Conway polynomial tabulated for p=" +
                                  std::to_string(p) + ", m=" + std::to_string(m));
    return it->second;
}

bool has_conway_polynomial(long p, long m) { return kTable.count({p, m}) != 0; }

} // namespace ibt

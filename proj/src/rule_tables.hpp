#pragma once

#include <array>

namespace axibie::tables {

struct NodeWeight {
  double node;
  double weight;
};

extern const std::array<NodeWeight, 10> kGauss10;
extern const std::array<std::array<NodeWeight, 20>, 10> kSingular20;
extern const std::array<std::array<NodeWeight, 24>, 14> kNearby24;

}  // namespace axibie::tables

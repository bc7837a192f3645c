#pragma once

#include <cstdint>
#include <vector>

#include "modcash/config_space.hpp"

namespace modcash {

struct ForestSettings {
  int n_trees = 50;
  double bootstrap_ratio = 1.0;
  int min_leaf = 3;
  int features_per_node = 4;  // ceil(sqrt(14))
};

// Bagged regression trees over mixed integer/real points. Integer dims use
// one-vs-rest category splits, real dims threshold splits, both chosen by
// variance reduction.
class ForestModel {
 public:
  ForestModel() = default;

  static ForestModel fit(const std::vector<std::vector<double>>& points,
                         const std::vector<double>& values,
                         const std::vector<bool>& is_integer,
                         const ForestSettings& settings, std::uint64_t seed);

  // (mean over trees, standard deviation across trees)
  std::pair<double, double> predict(const std::vector<double>& point) const;

  int num_trees() const { return static_cast<int>(trees_.size()); }

 private:
  struct Node {
    int dim = -1;          // -1 for leaf
    bool categorical = false;
    double threshold = 0;  // category value or real threshold
    int left = -1, right = -1;
    double value = 0.0;    // leaf mean
  };
  struct Tree {
    std::vector<Node> nodes;
    double eval(const std::vector<double>& p) const;
  };

  std::vector<Tree> trees_;
};

}  // namespace modcash

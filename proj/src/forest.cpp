#include "modcash/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "modcash/rng.hpp"

namespace modcash {

namespace {

struct SplitResult {
  bool found = false;
  int dim = -1;
  bool categorical = false;
  double threshold = 0.0;
  double score = 0.0;  // variance reduction (unnormalized)
};

double sum_sq_dev(const std::vector<double>& values,
                  const std::vector<int>& idx) {
  double s = 0.0, ss = 0.0;
  for (int i : idx) {
    s += values[i];
    ss += values[i] * values[i];
  }
  const double n = static_cast<double>(idx.size());
  return ss - s * s / n;
}

}  // namespace

double ForestModel::Tree::eval(const std::vector<double>& p) const {
  int cur = 0;
  while (nodes[cur].dim >= 0) {
    const Node& nd = nodes[cur];
    const bool go_left = nd.categorical ? p[nd.dim] == nd.threshold
                                        : p[nd.dim] <= nd.threshold;
    cur = go_left ? nd.left : nd.right;
  }
  return nodes[cur].value;
}

ForestModel ForestModel::fit(const std::vector<std::vector<double>>& points,
                             const std::vector<double>& values,
                             const std::vector<bool>& is_integer,
                             const ForestSettings& settings,
                             std::uint64_t seed) {
  if (points.size() < 2 || points.size() != values.size())
    throw std::invalid_argument("ForestModel::fit: need >= 2 observations");
  const int n = static_cast<int>(points.size());
  const int nd = static_cast<int>(points[0].size());

  ForestModel model;
  model.trees_.resize(settings.n_trees);

  for (int t = 0; t < settings.n_trees; ++t) {
    Rng rng(seed_hash(seed, 0xf0e, t));
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int n_boot = std::max(2, static_cast<int>(std::lround(
                                       settings.bootstrap_ratio * n)));
    std::vector<int> sample(n_boot);
    for (auto& s : sample) s = pick(rng);

    Tree& tree = model.trees_[t];
    // iterative construction; each frame carries its index subset
    struct Frame {
      std::vector<int> idx;
      int node;
    };
    tree.nodes.push_back({});
    std::vector<Frame> stack{{sample, 0}};
    while (!stack.empty()) {
      Frame fr = std::move(stack.back());
      stack.pop_back();
      const double ssd = sum_sq_dev(values, fr.idx);
      double mean = 0.0;
      for (int i : fr.idx) mean += values[i];
      mean /= fr.idx.size();

      if (static_cast<int>(fr.idx.size()) <= settings.min_leaf || ssd <= 1e-12) {
        tree.nodes[fr.node].dim = -1;
        tree.nodes[fr.node].value = mean;
        continue;
      }

      // random feature subset
      std::vector<int> dims(nd);
      std::iota(dims.begin(), dims.end(), 0);
      std::shuffle(dims.begin(), dims.end(), rng);
      dims.resize(std::min(nd, settings.features_per_node));

      SplitResult best;
      for (int d : dims) {
        if (is_integer[d]) {
          // one-vs-rest on each observed category
          std::vector<double> cats;
          for (int i : fr.idx) cats.push_back(points[i][d]);
          std::sort(cats.begin(), cats.end());
          cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
          if (cats.size() < 2) continue;
          for (double c : cats) {
            std::vector<int> l, r;
            for (int i : fr.idx)
              (points[i][d] == c ? l : r).push_back(i);
            if (l.empty() || r.empty()) continue;
            const double score = ssd - sum_sq_dev(values, l) - sum_sq_dev(values, r);
            if (!best.found || score > best.score)
              best = {true, d, true, c, score};
          }
        } else {
          std::vector<int> order = fr.idx;
          std::sort(order.begin(), order.end(), [&](int a, int b) {
            return points[a][d] < points[b][d];
          });
          // prefix scan over sorted values
          double ls = 0.0, lss = 0.0;
          double ts = 0.0, tss = 0.0;
          for (int i : order) {
            ts += values[i];
            tss += values[i] * values[i];
          }
          const int m = static_cast<int>(order.size());
          for (int i = 0; i + 1 < m; ++i) {
            const double v = values[order[i]];
            ls += v;
            lss += v * v;
            if (points[order[i]][d] == points[order[i + 1]][d]) continue;
            const double nl = i + 1, nr = m - i - 1;
            const double sdl = lss - ls * ls / nl;
            const double sdr = (tss - lss) - (ts - ls) * (ts - ls) / nr;
            const double score = ssd - sdl - sdr;
            if (!best.found || score > best.score) {
              const double thr =
                  0.5 * (points[order[i]][d] + points[order[i + 1]][d]);
              best = {true, d, false, thr, score};
            }
          }
        }
      }

      if (!best.found) {
        tree.nodes[fr.node].dim = -1;
        tree.nodes[fr.node].value = mean;
        continue;
      }

      std::vector<int> l, r;
      for (int i : fr.idx) {
        const bool go_left = best.categorical
                                 ? points[i][best.dim] == best.threshold
                                 : points[i][best.dim] <= best.threshold;
        (go_left ? l : r).push_back(i);
      }
      const int left_id = static_cast<int>(tree.nodes.size());
      const int right_id = left_id + 1;
      tree.nodes.push_back({});
      tree.nodes.push_back({});
      tree.nodes[fr.node].dim = best.dim;
      tree.nodes[fr.node].categorical = best.categorical;
      tree.nodes[fr.node].threshold = best.threshold;
      tree.nodes[fr.node].left = left_id;
      tree.nodes[fr.node].right = right_id;
      stack.push_back({std::move(r), right_id});
      stack.push_back({std::move(l), left_id});
    }
  }
  return model;
}

std::pair<double, double> ForestModel::predict(
    const std::vector<double>& point) const {
  if (trees_.empty()) throw std::logic_error("ForestModel::predict: empty model");
  double s = 0.0, ss = 0.0;
  for (const auto& t : trees_) {
    const double v = t.eval(point);
    s += v;
    ss += v * v;
  }
  const double n = static_cast<double>(trees_.size());
  const double mean = s / n;
  const double var = std::max(0.0, ss / n - mean * mean);
  return {mean, std::sqrt(var)};
}

}  // namespace modcash

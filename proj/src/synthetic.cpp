#include "ocal/synthetic.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace ocal {

namespace {

struct Cluster {
  double x;
  double y;
  Label label;
};

constexpr std::array<Cluster, 6> kClusters{{
    {0.0, 0.0, Label::target},
    {4.0, 0.0, Label::target},
    {2.0, 3.5, Label::target},
    {2.0, -3.0, Label::outlier},
    {6.0, 2.0, Label::outlier},
    {-2.0, 2.5, Label::outlier},
}};
constexpr int kPerCluster = 20;
constexpr double kSigma = 0.6;

}  // namespace

TwoClusterData gen_two_cluster(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, kSigma);

  const int n = static_cast<int>(kClusters.size()) * kPerCluster;
  Matrix features(n, 2);
  std::vector<Label> labels;
  labels.reserve(static_cast<std::size_t>(n));
  std::array<SampleId, 3> initial{};

  int row = 0;
  for (std::size_t c = 0; c < kClusters.size(); ++c) {
    const Cluster& cl = kClusters[c];
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < kPerCluster; ++s, ++row) {
      const double dx = noise(rng);
      const double dy = noise(rng);
      features(row, 0) = cl.x + dx;
      features(row, 1) = cl.y + dy;
      labels.push_back(cl.label);
      if (cl.label == Label::target && dx * dx + dy * dy < best) {
        best = dx * dx + dy * dy;
        initial[c] = static_cast<SampleId>(row);
      }
    }
  }
  return {Dataset("two_cluster", std::move(features), std::move(labels)), initial};
}

SplitView demo_split(const TwoClusterData& demo) {
  SplitView view;
  view.init_ids.assign(demo.initial_targets.begin(), demo.initial_targets.end());
  std::sort(view.init_ids.begin(), view.init_ids.end());
  for (SampleId i = 0; i < demo.data.size(); ++i) {
    view.test_ids.push_back(i);
    if (!std::binary_search(view.init_ids.begin(), view.init_ids.end(), i)) view.pool_ids.push_back(i);
  }
  return view;
}

}  // namespace ocal

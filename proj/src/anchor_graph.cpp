#include "vrd/anchor_graph.hpp"

#include <sstream>

#include "vrd/errors.hpp"

namespace vrd {

namespace {

void rasterize_into(const Box& b, const Box& grid_region, int resolution, std::vector<double>& acc) {
  const double cell_w = grid_region.w / resolution;
  const double cell_h = grid_region.h / resolution;
  for (int r = 0; r < resolution; ++r) {
    const double cy = grid_region.y + (r + 0.5) * cell_h;
    const bool row_in = cy >= b.y && cy < b.y2();
    if (!row_in) continue;
    for (int c = 0; c < resolution; ++c) {
      const double cx = grid_region.x + (c + 0.5) * cell_w;
      if (cx >= b.x && cx < b.x2()) acc[static_cast<size_t>(r) * resolution + c] += 1.0;
    }
  }
}

std::vector<std::string> tokenize(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace

std::vector<LocationAnchor> build_anchor_bank(std::span<const RelAnnotation> annotations,
                                              int num_predicates, int resolution) {
  if (resolution < 2) throw ConfigError("anchor resolution must be at least 2");

  std::vector<std::vector<int>> by_predicate(num_predicates);
  for (int i = 0; i < static_cast<int>(annotations.size()); ++i) {
    const int p = annotations[i].predicate;
    if (p < 0 || p >= num_predicates) throw InputError("annotation predicate id out of range");
    by_predicate[p].push_back(i);
  }

  const size_t cells = static_cast<size_t>(resolution) * resolution;
  std::vector<LocationAnchor> bank(num_predicates);

#pragma omp parallel for schedule(static)
  for (int p = 0; p < num_predicates; ++p) {
    LocationAnchor& anchor = bank[p];
    anchor.resolution = resolution;
    anchor.sub_mask.assign(cells, 0.0);
    anchor.ob_mask.assign(cells, 0.0);
    for (int idx : by_predicate[p]) {
      const RelAnnotation& ann = annotations[idx];
      const Box u = union_box(ann.sub, ann.ob);
      rasterize_into(ann.sub, u, resolution, anchor.sub_mask);
      rasterize_into(ann.ob, u, resolution, anchor.ob_mask);
    }
    anchor.count = static_cast<long>(by_predicate[p].size());
    if (anchor.count > 0) {
      const double inv = 1.0 / static_cast<double>(anchor.count);
      for (double& v : anchor.sub_mask) v *= inv;
      for (double& v : anchor.ob_mask) v *= inv;
    }
  }
  return bank;
}

double anchor_mse(const LocationAnchor& a, const LocationAnchor& b) {
  if (a.resolution != b.resolution) throw InputError("anchor resolutions differ");
  double sum = 0.0;
  for (size_t i = 0; i < a.sub_mask.size(); ++i) {
    const double d = a.sub_mask[i] - b.sub_mask[i];
    sum += d * d;
  }
  for (size_t i = 0; i < a.ob_mask.size(); ++i) {
    const double d = a.ob_mask[i] - b.ob_mask[i];
    sum += d * d;
  }
  return 0.5 * sum;
}

bool label_contains(const std::string& a, const std::string& b) {
  const auto ta = tokenize(a);
  const auto tb = tokenize(b);
  if (tb.empty() || tb.size() > ta.size()) return false;
  for (size_t start = 0; start + tb.size() <= ta.size(); ++start) {
    bool match = true;
    for (size_t i = 0; i < tb.size(); ++i)
      if (ta[start + i] != tb[i]) {
        match = false;
        break;
      }
    if (match) return true;
  }
  return false;
}

PredicateGraph build_predicate_graph(std::span<const LocationAnchor> anchors,
                                     const std::vector<std::string>& labels, double mse_thresh) {
  if (mse_thresh <= 0.0) throw ConfigError("mse threshold must be positive");
  if (anchors.size() != labels.size()) throw InputError("anchor/label count mismatch");

  const int n = static_cast<int>(anchors.size());
  PredicateGraph graph;
  graph.size = n;
  graph.labels = labels;
  graph.adjacency.assign(static_cast<size_t>(n) * n, 0.0);

  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const bool similar = anchors[u].count > 0 && anchors[v].count > 0 &&
                           anchor_mse(anchors[u], anchors[v]) < mse_thresh;
      const bool phrase = label_contains(labels[u], labels[v]) || label_contains(labels[v], labels[u]);
      if (similar || phrase) {
        graph.at(u, v) = 1.0;
        graph.at(v, u) = 1.0;
      }
    }
  }

  for (int u = 0; u < n; ++u) {
    double row_sum = 0.0;
    for (int v = 0; v < n; ++v) row_sum += graph.at(u, v);
    if (row_sum > 0.0)
      for (int v = 0; v < n; ++v) graph.at(u, v) /= row_sum;
  }
  return graph;
}

}  // namespace vrd

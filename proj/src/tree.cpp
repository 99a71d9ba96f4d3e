#include "glassbox/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "glassbox/errors.hpp"
#include "tree_builder.hpp"

namespace glassbox {

double TreeModel::predict_row(std::span<const double> x) const {
  int i = 0;
  while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
    const TreeNode& nd = nodes[static_cast<std::size_t>(i)];
    i = x[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right;
  }
  return nodes[static_cast<std::size_t>(i)].value;
}

int TreeModel::depth() const {
  int best = 0;
  // nodes are stored level-ordered; walk each explicitly anyway.
  struct Item { int node; int d; };
  std::vector<Item> stack{{0, 0}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const TreeNode& nd = nodes[static_cast<std::size_t>(it.node)];
    if (nd.is_leaf()) {
      best = std::max(best, it.d);
    } else {
      stack.push_back({nd.left, it.d + 1});
      stack.push_back({nd.right, it.d + 1});
    }
  }
  return best;
}

std::vector<double> predict(const TreeModel& model, const Frame& rows) {
  const Matrix m = align_matrix(rows, model.feature_names);
  std::vector<double> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r] = model.predict_row(m.row(r));
  return out;
}

TreeModel train_tree(const Frame& train, const TreeParams& params) {
  if (train.n_rows() == 0) throw DataError("cannot train on an empty frame");
  if (params.max_depth < 1) throw InvalidArgument("max_depth must be >= 1");
  if (!train.target_index()) throw DataError("training frame has no target column");

  const Matrix x = design_matrix(train);
  const std::vector<double> y = train.target_values();

  detail::BuilderConfig cfg;
  cfg.criterion = detail::SplitCriterion::gini;
  cfg.max_depth = params.max_depth;
  cfg.min_samples_leaf = params.min_samples_leaf;

  TreeModel model;
  model.nodes = detail::build_tree(x, detail::presort(x), y, {}, cfg);
  model.feature_names = x.names;
  model.max_depth = params.max_depth;
  model.task = TreeTask::classification_probability;
  return model;
}

TreeModel train_regression_tree(const Matrix& x, std::span<const double> y,
                                const TreeParams& params) {
  if (x.rows == 0) throw DataError("cannot train on an empty matrix");
  if (params.max_depth < 1) throw InvalidArgument("max_depth must be >= 1");

  detail::BuilderConfig cfg;
  cfg.criterion = detail::SplitCriterion::mse;
  cfg.max_depth = params.max_depth;
  cfg.min_samples_leaf = params.min_samples_leaf;

  TreeModel model;
  model.nodes = detail::build_tree(x, detail::presort(x), y, {}, cfg);
  model.feature_names = x.names;
  model.max_depth = params.max_depth;
  model.task = TreeTask::regression;
  return model;
}

namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Stats {
  double n = 0.0;
  double a = 0.0;  // sum of targets, or sum of gradients
  double b = 0.0;  // sum of squared targets, or sum of hessians

  void add(double n_, double a_, double b_) { n += n_; a += a_; b += b_; }
  Stats minus(const Stats& o) const { return {n - o.n, a - o.a, b - o.b}; }
};

// Score to minimize, summed over children.
double node_score(const Stats& s, const BuilderConfig& cfg) {
  switch (cfg.criterion) {
    case SplitCriterion::gini: {
      // n * gini = n - (a^2 + (n-a)^2) / n
      const double neg = s.n - s.a;
      return s.n - (s.a * s.a + neg * neg) / s.n;
    }
    case SplitCriterion::mse:
      return s.b - s.a * s.a / s.n;
    case SplitCriterion::gbm_logistic:
      return -(s.a * s.a) / (s.b + cfg.lambda);
  }
  return 0.0;
}

double leaf_value(const Stats& s, const BuilderConfig& cfg, double lo, double hi) {
  double v;
  if (cfg.criterion == SplitCriterion::gbm_logistic) {
    v = -s.a / (s.b + cfg.lambda);
  } else {
    v = s.a / s.n;
  }
  return std::clamp(v, lo, hi);
}

struct ActiveNode {
  int node_id = 0;
  Stats total;
  double lo = -kInf;
  double hi = kInf;
};

struct Candidate {
  double improvement = 0.0;
  int feature = -1;
  double threshold = 0.0;
  Stats left;
};

}  // namespace

Presort presort(const Matrix& x) {
  Presort ps;
  ps.order.resize(x.cols);
  for (std::size_t j = 0; j < x.cols; ++j) {
    auto& ord = ps.order[j];
    ord.resize(x.rows);
    std::iota(ord.begin(), ord.end(), 0u);
    std::sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
      const double va = x.at(a, j), vb = x.at(b, j);
      if (va != vb) return va < vb;
      return a < b;
    });
  }
  return ps;
}

std::vector<TreeNode> build_tree(const Matrix& x, const Presort& ps,
                                 std::span<const double> t1,
                                 std::span<const double> t2,
                                 const BuilderConfig& cfg) {
  const std::size_t n = x.rows;
  const bool gbm = cfg.criterion == SplitCriterion::gbm_logistic;

  auto row_stat = [&](std::uint32_t r, Stats& s) {
    if (gbm) {
      s.add(1.0, t1[r], t2[r]);
    } else {
      s.add(1.0, t1[r], t1[r] * t1[r]);
    }
  };

  std::vector<TreeNode> nodes;
  std::vector<int> leaf_of(n, 0);

  ActiveNode root;
  root.node_id = 0;
  for (std::uint32_t r = 0; r < n; ++r) row_stat(r, root.total);
  {
    TreeNode nd;
    nd.cover = root.total.n;
    nd.value = leaf_value(root.total, cfg, root.lo, root.hi);
    nodes.push_back(nd);
  }

  std::vector<ActiveNode> frontier{root};

  for (int depth = 0; depth < cfg.max_depth && !frontier.empty(); ++depth) {
    const std::size_t n_slots = frontier.size();
    std::vector<int> slot_of(nodes.size(), -1);
    for (std::size_t s = 0; s < n_slots; ++s) {
      slot_of[static_cast<std::size_t>(frontier[s].node_id)] = static_cast<int>(s);
    }

    std::vector<double> parent_score(n_slots);
    std::vector<double> min_gain(n_slots);
    for (std::size_t s = 0; s < n_slots; ++s) {
      parent_score[s] = node_score(frontier[s].total, cfg);
      min_gain[s] = 1e-12 * (std::abs(parent_score[s]) + 1.0);
    }

    std::vector<Candidate> best(n_slots);

    std::vector<Stats> running(n_slots);
    std::vector<double> prev_val(n_slots);
    std::vector<std::size_t> seen(n_slots);

    for (std::size_t j = 0; j < x.cols; ++j) {
      const int dir = cfg.monotone.empty() ? 0 : cfg.monotone[j];
      std::fill(running.begin(), running.end(), Stats{});
      std::fill(seen.begin(), seen.end(), std::size_t{0});

      for (const std::uint32_t r : ps.order[j]) {
        const int slot = slot_of[static_cast<std::size_t>(leaf_of[r])];
        if (slot < 0) continue;
        const auto s = static_cast<std::size_t>(slot);
        const double v = x.at(r, j);

        if (seen[s] > 0 && v != prev_val[s]) {
          const Stats& left = running[s];
          const Stats right = frontier[s].total.minus(left);
          if (left.n >= cfg.min_samples_leaf && right.n >= cfg.min_samples_leaf) {
            const double improvement =
                parent_score[s] - node_score(left, cfg) - node_score(right, cfg);
            if (improvement > min_gain[s] && improvement > best[s].improvement) {
              bool ok = true;
              if (dir != 0) {
                const double wl = leaf_value(left, cfg, frontier[s].lo, frontier[s].hi);
                const double wr = leaf_value(right, cfg, frontier[s].lo, frontier[s].hi);
                ok = dir > 0 ? wl <= wr : wl >= wr;
              }
              if (ok) {
                double t = 0.5 * (prev_val[s] + v);
                if (t <= prev_val[s]) t = v;  // adjacent doubles: keep partition realizable
                best[s] = Candidate{improvement, static_cast<int>(j), t, left};
              }
            }
          }
        }
        row_stat(r, running[s]);
        prev_val[s] = v;
        ++seen[s];
      }
    }

    std::vector<ActiveNode> next;
    for (std::size_t s = 0; s < n_slots; ++s) {
      if (best[s].feature < 0) continue;
      const ActiveNode& parent = frontier[s];
      TreeNode& pn = nodes[static_cast<std::size_t>(parent.node_id)];
      pn.feature = best[s].feature;
      pn.threshold = best[s].threshold;

      ActiveNode lchild, rchild;
      lchild.total = best[s].left;
      rchild.total = parent.total.minus(best[s].left);
      lchild.lo = rchild.lo = parent.lo;
      lchild.hi = rchild.hi = parent.hi;
      if (gbm && !cfg.monotone.empty()) {
        const int dir = cfg.monotone[static_cast<std::size_t>(best[s].feature)];
        if (dir != 0) {
          const double wl = leaf_value(lchild.total, cfg, parent.lo, parent.hi);
          const double wr = leaf_value(rchild.total, cfg, parent.lo, parent.hi);
          const double mid = 0.5 * (wl + wr);
          if (dir > 0) {
            lchild.hi = std::min(lchild.hi, mid);
            rchild.lo = std::max(rchild.lo, mid);
          } else {
            lchild.lo = std::max(lchild.lo, mid);
            rchild.hi = std::min(rchild.hi, mid);
          }
        }
      }

      lchild.node_id = static_cast<int>(nodes.size());
      rchild.node_id = lchild.node_id + 1;
      pn.left = lchild.node_id;
      pn.right = rchild.node_id;
      for (const ActiveNode* ch : {&lchild, &rchild}) {
        TreeNode nd;
        nd.cover = ch->total.n;
        nd.value = leaf_value(ch->total, cfg, ch->lo, ch->hi);
        nodes.push_back(nd);
      }
      if (depth + 1 < cfg.max_depth) {
        if (lchild.total.n >= 2 * cfg.min_samples_leaf) next.push_back(lchild);
        if (rchild.total.n >= 2 * cfg.min_samples_leaf) next.push_back(rchild);
      }
    }

    // Route rows of split nodes to their children.
    for (std::size_t r = 0; r < n; ++r) {
      const TreeNode& nd = nodes[static_cast<std::size_t>(leaf_of[r])];
      if (!nd.is_leaf()) {
        leaf_of[r] = x.at(r, static_cast<std::size_t>(nd.feature)) < nd.threshold ? nd.left
                                                                                  : nd.right;
      }
    }
    frontier = std::move(next);
  }

  return nodes;
}

}  // namespace detail

}  // namespace glassbox

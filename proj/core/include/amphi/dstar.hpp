#pragma once

#include <functional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "amphi/graph.hpp"

namespace amphi {

/// Incremental shortest paths to a fixed goal (D*-Lite). g and rhs are cost to
/// goal; keys are compared lexicographically with the node id as final
/// tie-break. The heuristic must be consistent with the edge prices.
class DStarLite {
 public:
  using Heuristic = std::function<double(int, int)>;

  DStarLite(const MotionGraph& graph, Heuristic h);

  /// Initial search from `start`.
  void plan(int start);
  /// Moves the search start and repairs the nodes whose incident edges changed
  /// (including newly added edges and nodes).
  void update(int current, std::span<const int> changed_edges);

  [[nodiscard]] double g(int n) const { return at(g_, n); }
  [[nodiscard]] double rhs(int n) const { return at(rhs_, n); }
  [[nodiscard]] bool has_path(int from) const { return g(from) < kInfinity; }

  /// Greedy successor chain from `from` to the goal, ties broken by lower node
  /// id. Empty when g(from) is infinite.
  [[nodiscard]] std::vector<int> path(int from) const;

  /// True if every node off the queue satisfies g == rhs and rhs is the
  /// one-step lookahead of its neighbours (diagnostic, O(E)).
  [[nodiscard]] bool locally_consistent() const;
  [[nodiscard]] long expansions() const { return expansions_; }

 private:
  struct Key {
    double k1;
    double k2;
    int node;
    friend bool operator<(const Key& a, const Key& b) {
      if (a.k1 != b.k1) return a.k1 < b.k1;
      if (a.k2 != b.k2) return a.k2 < b.k2;
      return a.node < b.node;
    }
  };

  void grow();
  [[nodiscard]] double at(const std::vector<double>& v, int n) const;
  [[nodiscard]] Key key(int n) const;
  [[nodiscard]] double lookahead(int n) const;
  void update_vertex(int n);
  void compute();

  const MotionGraph& graph_;
  Heuristic h_;
  std::vector<double> g_;
  std::vector<double> rhs_;
  std::vector<bool> queued_;
  std::vector<Key> queued_key_;
  std::set<Key> open_;
  double km_ = 0.0;
  int start_ = -1;
  int last_ = -1;
  long expansions_ = 0;
};

}  // namespace amphi

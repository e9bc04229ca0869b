#include "amphi/dstar.hpp"

#include <algorithm>
#include <cmath>

#include "amphi/errors.hpp"

namespace amphi {

DStarLite::DStarLite(const MotionGraph& graph, Heuristic h) : graph_(graph), h_(std::move(h)) {
  if (graph_.goal < 0) throw InvalidArgument("graph has no goal");
}

void DStarLite::grow() {
  const std::size_t n = graph_.size();
  if (g_.size() >= n) return;
  g_.resize(n, kInfinity);
  rhs_.resize(n, kInfinity);
  queued_.resize(n, false);
  queued_key_.resize(n, Key{0.0, 0.0, 0});
}

double DStarLite::at(const std::vector<double>& v, int n) const {
  const auto i = static_cast<std::size_t>(n);
  return i < v.size() ? v[i] : kInfinity;
}

DStarLite::Key DStarLite::key(int n) const {
  const double m = std::min(g(n), rhs(n));
  return {m + h_(start_, n) + km_, m, n};
}

double DStarLite::lookahead(int n) const {
  double best = kInfinity;
  for (const int e : graph_.incident(n)) {
    const GraphEdge& edge = graph_.edge(e);
    const double c = edge.cost_from(n);
    if (std::isinf(c)) continue;
    best = std::min(best, c + g(edge.other(n)));
  }
  return best;
}

void DStarLite::update_vertex(int n) {
  const auto i = static_cast<std::size_t>(n);
  if (n != graph_.goal) rhs_[i] = lookahead(n);
  if (queued_[i]) {
    open_.erase(queued_key_[i]);
    queued_[i] = false;
  }
  if (g_[i] != rhs_[i]) {
    queued_key_[i] = key(n);
    open_.insert(queued_key_[i]);
    queued_[i] = true;
  }
}

void DStarLite::compute() {
  while (!open_.empty()) {
    const Key top = *open_.begin();
    const Key start_key = key(start_);
    const bool start_consistent = g(start_) == rhs(start_);
    const bool top_below = top.k1 < start_key.k1 || (top.k1 == start_key.k1 && top.k2 < start_key.k2);
    if (!top_below && start_consistent) break;

    const int u = top.node;
    const auto ui = static_cast<std::size_t>(u);
    const Key fresh = key(u);
    ++expansions_;
    if (top < fresh) {
      open_.erase(open_.begin());
      queued_key_[ui] = fresh;
      open_.insert(fresh);
    } else if (g_[ui] > rhs_[ui]) {
      g_[ui] = rhs_[ui];
      open_.erase(open_.begin());
      queued_[ui] = false;
      for (const int e : graph_.incident(u)) update_vertex(graph_.edge(e).other(u));
    } else {
      g_[ui] = kInfinity;
      for (const int e : graph_.incident(u)) update_vertex(graph_.edge(e).other(u));
      update_vertex(u);
    }
  }
}

void DStarLite::plan(int start) {
  grow();
  g_.assign(graph_.size(), kInfinity);
  rhs_.assign(graph_.size(), kInfinity);
  queued_.assign(graph_.size(), false);
  open_.clear();
  km_ = 0.0;
  start_ = start;
  last_ = start;
  rhs_[static_cast<std::size_t>(graph_.goal)] = 0.0;
  queued_key_[static_cast<std::size_t>(graph_.goal)] = key(graph_.goal);
  open_.insert(queued_key_[static_cast<std::size_t>(graph_.goal)]);
  queued_[static_cast<std::size_t>(graph_.goal)] = true;
  compute();
}

void DStarLite::update(int current, std::span<const int> changed_edges) {
  if (start_ < 0) {
    plan(current);
    return;
  }
  grow();
  start_ = current;
  if (changed_edges.empty()) {
    compute();
    return;
  }
  km_ += h_(last_, start_);
  last_ = start_;
  std::vector<int> touched;
  touched.reserve(changed_edges.size() * 2);
  for (const int e : changed_edges) {
    touched.push_back(graph_.edge(e).a);
    touched.push_back(graph_.edge(e).b);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (const int n : touched) update_vertex(n);
  compute();
}

std::vector<int> DStarLite::path(int from) const {
  std::vector<int> out;
  if (!has_path(from)) return out;
  out.push_back(from);
  int cur = from;
  const std::size_t limit = graph_.size();
  while (cur != graph_.goal) {
    int best = -1;
    double best_cost = kInfinity;
    for (const int e : graph_.incident(cur)) {
      const GraphEdge& edge = graph_.edge(e);
      const double c = edge.cost_from(cur) + g(edge.other(cur));
      const int nb = edge.other(cur);
      if (c < best_cost || (c == best_cost && best >= 0 && nb < best)) {
        best_cost = c;
        best = nb;
      }
    }
    if (best < 0 || std::isinf(best_cost) || out.size() > limit) return {};
    out.push_back(best);
    cur = best;
  }
  return out;
}

bool DStarLite::locally_consistent() const {
  for (int n = 0; n < static_cast<int>(graph_.size()); ++n) {
    const auto i = static_cast<std::size_t>(n);
    if (i < queued_.size() && queued_[i]) continue;
    const double expected = n == graph_.goal ? 0.0 : lookahead(n);
    if (rhs(n) != expected || g(n) != rhs(n)) return false;
  }
  return true;
}

}  // namespace amphi

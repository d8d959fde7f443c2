#include "turnsolve/transition.hpp"

#include <algorithm>
#include <queue>

namespace turnsolve {

TransitionOracle::TransitionOracle(const GridInstance& instance) : instance_(&instance) {
  tables_.resize(static_cast<std::size_t>(instance.size()) * kHeadingCount);
}

int TransitionOracle::state_of(Configuration c) const {
  auto idx = instance_->index_of(c.pixel);
  if (!idx) throw Error(Errc::Unreachable, "configuration " + to_string(c) + " off the instance");
  return *idx * kHeadingCount + static_cast<int>(c.heading);
}

Configuration TransitionOracle::config_of(int state) const {
  return {instance_->pixel(state / kHeadingCount),
          static_cast<Heading>(state % kHeadingCount)};
}

const TransitionOracle::SourceTable& TransitionOracle::table_for(int source) const {
  SourceTable& table = tables_[source];
  if (table.computed) return table;

  int n = instance_->size() * kHeadingCount;
  table.dist.assign(n, Rat(-1));
  table.parent.assign(n, -1);

  // Label-setting search; the priority queue breaks distance ties by state
  // id so the parent tree is the same on every run.
  using Entry = std::pair<Rat, int>;
  auto cmp = [](const Entry& a, const Entry& b) {
    int c = ::cmp(a.first, b.first);
    if (c != 0) return c > 0;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
  std::vector<char> done(n, 0);
  table.dist[source] = 0;
  queue.push({Rat(0), source});

  const Rat& kappa = instance_->kappa();
  const Rat& tau = instance_->tau();

  auto relax = [&](int from, int to, const Rat& weight) {
    Rat candidate = table.dist[from] + weight;
    if (table.dist[to] < 0 || candidate < table.dist[to] ||
        (candidate == table.dist[to] && from < table.parent[to])) {
      table.dist[to] = candidate;
      table.parent[to] = from;
      queue.push({candidate, to});
    }
  };

  while (!queue.empty()) {
    auto [d, state] = queue.top();
    queue.pop();
    if (done[state]) continue;
    done[state] = 1;
    int pixel_index = state / kHeadingCount;
    Heading heading = static_cast<Heading>(state % kHeadingCount);
    // Rotations in place.
    relax(state, pixel_index * kHeadingCount + static_cast<int>(rotate_cw(heading)), tau);
    relax(state, pixel_index * kHeadingCount + static_cast<int>(rotate_ccw(heading)), tau);
    // One move along the current heading.
    int nb = instance_->neighbor(pixel_index, heading);
    if (nb >= 0) relax(state, nb * kHeadingCount + static_cast<int>(heading), kappa);
  }

  table.computed = true;
  return table;
}

TransitionOracle::Result TransitionOracle::route(Configuration from, Configuration to) const {
  int s = state_of(from);
  int t = state_of(to);
  const SourceTable& table = table_for(s);
  if (table.dist[t] < 0)
    throw Error(Errc::Unreachable, to_string(from) + " -> " + to_string(to));

  Result result;
  result.cost = table.dist[t];
  for (int cur = t; cur != -1; cur = cur == s ? -1 : table.parent[cur])
    result.path.push_back(config_of(cur));
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

Rat TransitionOracle::cost(Configuration from, Configuration to) const {
  int s = state_of(from);
  int t = state_of(to);
  const SourceTable& table = table_for(s);
  if (table.dist[t] < 0)
    throw Error(Errc::Unreachable, to_string(from) + " -> " + to_string(to));
  return table.dist[t];
}

Rat TransitionOracle::orientation_free_cost(Pixel from, Pixel to) const {
  Rat best(-1);
  for (int h1 = 0; h1 < kHeadingCount; ++h1)
    for (int h2 = 0; h2 < kHeadingCount; ++h2) {
      Rat c = cost({from, static_cast<Heading>(h1)}, {to, static_cast<Heading>(h2)});
      if (best < 0 || c < best) best = c;
    }
  return best;
}

TransitionOracle::Result TransitionOracle::moved_route(Configuration from, Configuration to) const {
  // Split at the first pixel move: rotate toward a neighbor, step onto it,
  // then take the plain shortest path.
  std::optional<Result> best;
  int from_index = *instance_->index_of(from.pixel);
  for (int h = 0; h < kHeadingCount; ++h) {
    Heading heading = static_cast<Heading>(h);
    int nb = instance_->neighbor(from_index, heading);
    if (nb < 0) continue;
    Configuration step_start{from.pixel, heading};
    Configuration landed{instance_->pixel(nb), heading};
    Rat lead_in = Rat(turn_steps(from.heading, heading)) * instance_->tau() + instance_->kappa();
    Result rest = route(landed, to);
    Rat total = lead_in + rest.cost;
    if (best && total >= best->cost) continue;
    Result cand;
    cand.cost = std::move(total);
    cand.path.push_back(from);
    Heading cur = from.heading;
    while (cur != heading) {
      cur = rotate_ccw(cur) == heading ? rotate_ccw(cur) : rotate_cw(cur);
      cand.path.push_back({from.pixel, cur});
    }
    (void)step_start;
    cand.path.insert(cand.path.end(), rest.path.begin(), rest.path.end());
    best = std::move(cand);
  }
  if (!best) throw Error(Errc::Unreachable, "no neighbor to move to from " + to_string(from));
  return *best;
}

Rat TransitionOracle::moved_cost(Configuration from, Configuration to) const {
  return moved_route(from, to).cost;
}

}  // namespace turnsolve

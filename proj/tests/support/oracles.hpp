#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <tuple>
#include <utility>
#include <vector>

namespace fogbench::test {

/// One stage of a request: a FIFO server (index) busy for `duration`.
struct QueueStage {
  int server = 0;
  double duration = 0.0;
};

/// Closed-loop population against FIFO servers, simulated event by event.
/// Returns the latency of every request in completion order.
inline std::vector<double> closed_loop_oracle(int users, int requests_per_user, double think,
                                              const std::vector<QueueStage>& stages, int server_count) {
  using Ev = std::tuple<double, std::uint64_t, int, std::size_t>;  // time, order, user, stage
  std::priority_queue<Ev, std::vector<Ev>, std::greater<>> q;
  std::vector<double> free_at(static_cast<std::size_t>(server_count), 0.0);
  std::vector<double> began(static_cast<std::size_t>(users), 0.0);
  std::vector<int> done(static_cast<std::size_t>(users), 0);
  std::vector<double> latencies;
  std::uint64_t order = 0;
  for (int u = 0; u < users; ++u) q.emplace(0.0, order++, u, 0);
  while (!q.empty()) {
    auto [t, o, u, s] = q.top();
    q.pop();
    const auto uu = static_cast<std::size_t>(u);
    if (s == 0) began[uu] = t;
    if (s == stages.size()) {
      latencies.push_back(t - began[uu]);
      if (++done[uu] < requests_per_user) q.emplace(t + think, order++, u, 0);
      continue;
    }
    double& f = free_at[static_cast<std::size_t>(stages[s].server)];
    const double start = std::max(t, f);
    f = start + stages[s].duration;
    q.emplace(f, order++, u, s + 1);
  }
  return latencies;
}

struct StatsOracle {
  double mean = 0, stddev = 0, concurrency = 0;
  std::size_t count = 0;
};

/// Textbook formulas in long double; concurrency integrates the number of
/// requests in flight over [first start, last end] with a sweep line.
inline StatsOracle stats_oracle(const std::vector<std::pair<double, double>>& start_latency, double wall) {
  StatsOracle o;
  o.count = start_latency.size();
  long double sum = 0, sq = 0;
  for (auto [s, l] : start_latency) sum += l;
  const long double mean = sum / static_cast<long double>(o.count);
  for (auto [s, l] : start_latency) sq += (l - mean) * (l - mean);
  o.mean = static_cast<double>(mean);
  o.stddev = o.count > 1 ? static_cast<double>(std::sqrt(sq / static_cast<long double>(o.count - 1))) : 0.0;

  std::vector<std::pair<double, int>> edges;
  for (auto [s, l] : start_latency) {
    edges.emplace_back(s, +1);
    edges.emplace_back(s + l, -1);
  }
  std::sort(edges.begin(), edges.end());
  long double area = 0;
  int active = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i > 0) area += static_cast<long double>(active) * (edges[i].first - edges[i - 1].first);
    active += edges[i].second;
  }
  o.concurrency = static_cast<double>(area / wall);
  return o;
}

}  // namespace fogbench::test

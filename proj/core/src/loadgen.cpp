#include "fogbench/loadgen.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <mutex>
#include <queue>
#include <thread>

namespace fogbench {

namespace {

std::uint64_t request_seed(std::uint64_t seed, int user, int seq) {
  const auto tag = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(user)) << 32) |
                   static_cast<std::uint32_t>(seq);
  return splitmix64(seed ^ splitmix64(tag));
}

void check(const LoadProfile& profile, const LoadTarget& target) {
  if (profile.user_count < 1) throw std::invalid_argument("user_count must be >= 1");
  if (profile.requests_per_user.has_value() == profile.duration_seconds.has_value()) {
    throw std::invalid_argument("exactly one of requests_per_user and duration_seconds must be set");
  }
  if (profile.requests_per_user && *profile.requests_per_user < 1) {
    throw std::invalid_argument("requests_per_user must be >= 1");
  }
  if (profile.duration_seconds && !(*profile.duration_seconds > 0)) {
    throw std::invalid_argument("duration_seconds must be > 0");
  }
  if (!(profile.think_time >= 0)) throw std::invalid_argument("think_time must be >= 0");
  if (!target.workload || !target.placement || !target.asset) {
    throw std::invalid_argument("load target needs a workload, a placement and an asset");
  }
}

bool all_virtual(const Testbed& testbed, const ServicePlacement& placement) {
  return std::all_of(placement.assignments.begin(), placement.assignments.end(),
                     [&](const Assignment& a) { return testbed.is_virtual(a.node); });
}

struct Event {
  double time;
  std::uint64_t seq;
  int user;
  bool operator>(const Event& o) const { return time != o.time ? time > o.time : seq > o.seq; }
};

LoadRun run_simulated(const LoadProfile& profile, Testbed& testbed, const LoadTarget& target,
                      const std::function<void(const Occupancy&)>& trace) {
  enum class Phase { Thinking, Active, Finished };
  struct User {
    Phase phase = Phase::Thinking;
    int issued = 0;
    double request_start = 0.0;
    double service_start = 0.0;
    std::optional<PipelineExecution> exec;
  };

  const double t0 = testbed.now();
  const double deadline = profile.duration_seconds ? t0 + *profile.duration_seconds
                                                   : std::numeric_limits<double>::infinity();
  std::vector<User> users(static_cast<std::size_t>(profile.user_count));
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::uint64_t seq = 0;
  for (int u = 0; u < profile.user_count; ++u) events.push({t0, seq++, u});

  LoadRun run;
  run.started_at = t0;
  double last = t0;

  auto emit = [&](double now) {
    if (!trace) return;
    Occupancy o{now, 0, 0, 0, 0};
    for (const auto& u : users) {
      switch (u.phase) {
        case Phase::Thinking:
          ++o.thinking;
          break;
        case Phase::Finished:
          ++o.finished;
          break;
        case Phase::Active:
          (now < u.service_start ? o.queued : o.in_service) += 1;
          break;
      }
    }
    trace(o);
  };

  auto complete = [&](int id, double now, bool success, std::string error) {
    User& u = users[static_cast<std::size_t>(id)];
    RequestRecord r;
    r.user_id = id;
    r.seq = u.issued - 1;
    r.start = u.request_start;
    r.latency = now - u.request_start;
    r.success = success;
    r.error = std::move(error);
    if (success) r.pipeline = u.exec->result();
    run.records.push_back(std::move(r));
    u.exec.reset();
    u.phase = Phase::Thinking;
    last = std::max(last, now);
    events.push({now + profile.think_time, seq++, id});
  };

  while (!events.empty()) {
    const Event ev = events.top();
    events.pop();
    User& u = users[static_cast<std::size_t>(ev.user)];

    if (u.phase == Phase::Thinking) {
      const bool more = profile.requests_per_user ? u.issued < *profile.requests_per_user : ev.time < deadline;
      if (!more) {
        u.phase = Phase::Finished;
        emit(ev.time);
        continue;
      }
      u.exec.emplace(testbed, *target.workload, *target.placement, *target.asset,
                     request_seed(target.seed, ev.user, u.issued));
      u.request_start = ev.time;
      u.phase = Phase::Active;
      ++u.issued;
    }

    if (u.exec->done()) {
      complete(ev.user, ev.time, true, {});
    } else {
      try {
        const auto timing = u.exec->step(ev.time);
        u.service_start = timing.start;
        events.push({timing.finish, seq++, ev.user});
      } catch (const Error& e) {
        complete(ev.user, ev.time, false, e.what());
      }
    }
    emit(ev.time);
  }

  run.wall_duration = last - t0;
  testbed.advance_to(last);
  return run;
}

LoadRun run_threaded(const LoadProfile& profile, Testbed& testbed, const LoadTarget& target) {
  using clock = std::chrono::steady_clock;
  const auto epoch = clock::now();
  const double base = testbed.now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - epoch).count(); };

  std::mutex sink;
  LoadRun run;
  run.started_at = base;

  auto user_loop = [&](int id) {
    for (int seq = 0;; ++seq) {
      if (profile.requests_per_user ? seq >= *profile.requests_per_user : elapsed() >= *profile.duration_seconds) {
        break;
      }
      RequestRecord r;
      r.user_id = id;
      r.seq = seq;
      r.start = elapsed();
      PipelineExecution exec(testbed, *target.workload, *target.placement, *target.asset,
                             request_seed(target.seed, id, seq));
      try {
        double at = base + r.start;
        while (!exec.done()) at = exec.step(at).finish;
        r.pipeline = exec.result();
      } catch (const Error& e) {
        r.success = false;
        r.error = e.what();
      }
      r.latency = elapsed() - r.start;
      {
        std::lock_guard lock(sink);
        run.records.push_back(std::move(r));
      }
      if (profile.think_time > 0) std::this_thread::sleep_for(std::chrono::duration<double>(profile.think_time));
    }
  };

  std::vector<std::thread> threads;
  for (int u = 0; u < profile.user_count; ++u) threads.emplace_back(user_loop, u);
  for (auto& t : threads) t.join();

  run.wall_duration = elapsed();
  std::sort(run.records.begin(), run.records.end(), [](const RequestRecord& a, const RequestRecord& b) {
    return std::tie(a.start, a.user_id, a.seq) < std::tie(b.start, b.user_id, b.seq);
  });
  testbed.advance_to(base + run.wall_duration);
  return run;
}

}  // namespace

LoadRun run_load(const LoadProfile& profile, Testbed& testbed, const LoadTarget& target,
                 const std::function<void(const Occupancy&)>& trace) {
  check(profile, target);
  if (all_virtual(testbed, *target.placement)) return run_simulated(profile, testbed, target, trace);
  return run_threaded(profile, testbed, target);
}

LoadSummary summarize(std::span<const RequestRecord> records, double wall_duration) {
  if (records.empty()) throw EmptyInput("request log is empty");
  std::vector<double> latencies;
  latencies.reserve(records.size());
  LoadSummary s;
  for (const auto& r : records) {
    latencies.push_back(r.latency);
    (r.success ? s.success_count : s.fail_count) += 1;
  }
  // Sorting first makes the sums independent of record order.
  std::sort(latencies.begin(), latencies.end());
  const Stat stat = mean_stddev(latencies);
  double total = 0.0;
  for (double l : latencies) total += l;

  s.throughput = records.size();
  s.avg_response_time = stat.mean;
  s.stddev_response_time = stat.stddev;
  s.avg_latency = stat.mean;
  s.concurrency = wall_duration > 0.0 ? total / wall_duration : 0.0;
  return s;
}

}  // namespace fogbench

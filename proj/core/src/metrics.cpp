#include "fogbench/metrics.hpp"

#include <cmath>
#include <sstream>

namespace fogbench {

double byte_rate(std::uint64_t bytes, double seconds) {
  if (seconds <= 0.0) return 0.0;
  return static_cast<double>(bytes) / seconds;
}

double estimate_cost(double et_seconds, double rate_per_hour) {
  const double raw = et_seconds / 3600.0 * rate_per_hour;
  return std::round(raw * 1e6) / 1e6;
}

AppMetrics compute_app_metrics(const TimingBreakdown& t, double cost_rate_per_hour) {
  AppMetrics m;
  m.rtt = t.t1 + t.et + t.t3;
  m.communication_latency = t.t1 + t.t3;
  m.complete_computation_latency = m.rtt + t.t4;
  m.complete_communication_latency = t.t1 + t.t3 + t.t4;
  m.cost = estimate_cost(t.et, cost_rate_per_hour);
  if (t.file_length && *t.file_length > 0.0) m.rtf = t.et / *t.file_length;
  m.bytes_up_rate = byte_rate(t.bytes_up, t.t1);
  m.bytes_down_rate = byte_rate(t.bytes_down, t.t3);
  m.bytes_down_cloud_edge_rate = byte_rate(t.bytes_down_cloud_edge, t.t4);
  return m;
}

std::vector<std::string> identity_violations(const TimingBreakdown& t, const AppMetrics& m) {
  std::vector<std::string> out;
  auto check = [&](const char* name, double got, double want) {
    if (got != want) {
      std::ostringstream s;
      s.precision(17);
      s << name << ": " << got << " != " << want;
      out.push_back(s.str());
    }
  };
  check("rtt", m.rtt, t.t1 + t.et + t.t3);
  check("cl", m.communication_latency, t.t1 + t.t3);
  check("complete_comp", m.complete_computation_latency, m.rtt + t.t4);
  check("complete_comm", m.complete_communication_latency, t.t1 + t.t3 + t.t4);
  check("rate_up", m.bytes_up_rate, byte_rate(t.bytes_up, t.t1));
  check("rate_down", m.bytes_down_rate, byte_rate(t.bytes_down, t.t3));
  check("rate_down_ce", m.bytes_down_cloud_edge_rate, byte_rate(t.bytes_down_cloud_edge, t.t4));
  return out;
}

Stat mean_stddev(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("no values to summarize");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

AggregateMetrics aggregate(std::span<const MetricSample> samples) {
  if (samples.empty()) throw EmptyInput("aggregate needs at least one sample");
  const CellKey& key = samples.front().key;
  for (const auto& s : samples) {
    if (!(s.key == key)) {
      throw HeterogeneousKey("cannot aggregate '" + s.key.workload + "' " + s.key.placement.label() +
                             " with '" + key.workload + "' " + key.placement.label());
    }
  }

  auto stat = [&](auto field) {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& s : samples) v.push_back(field(s));
    return mean_stddev(v);
  };

  AggregateMetrics a;
  a.t1 = stat([](const MetricSample& s) { return s.timing.t1; });
  a.et = stat([](const MetricSample& s) { return s.timing.et; });
  a.t2 = stat([](const MetricSample& s) { return s.timing.t2; });
  a.t3 = stat([](const MetricSample& s) { return s.timing.t3; });
  a.t4 = stat([](const MetricSample& s) { return s.timing.t4; });
  a.rtt = stat([](const MetricSample& s) { return s.metrics.rtt; });
  a.communication_latency = stat([](const MetricSample& s) { return s.metrics.communication_latency; });
  a.complete_computation_latency =
      stat([](const MetricSample& s) { return s.metrics.complete_computation_latency; });
  a.complete_communication_latency =
      stat([](const MetricSample& s) { return s.metrics.complete_communication_latency; });
  a.cost = stat([](const MetricSample& s) { return s.metrics.cost; });
  a.bytes_up_rate = stat([](const MetricSample& s) { return s.metrics.bytes_up_rate; });
  a.bytes_down_rate = stat([](const MetricSample& s) { return s.metrics.bytes_down_rate; });
  a.bytes_down_cloud_edge_rate = stat([](const MetricSample& s) { return s.metrics.bytes_down_cloud_edge_rate; });

  std::vector<double> rtf;
  for (const auto& s : samples) {
    if (s.metrics.rtf) rtf.push_back(*s.metrics.rtf);
  }
  if (!rtf.empty()) a.rtf = mean_stddev(rtf);
  a.repetition_count = samples.size();
  return a;
}

bool aggregate_identities_hold(const AggregateMetrics& a, double tolerance) {
  auto close = [tolerance](double x, double y) {
    return std::abs(x - y) <= tolerance * std::max({1.0, std::abs(x), std::abs(y)});
  };
  return close(a.rtt.mean, a.t1.mean + a.et.mean + a.t3.mean) &&
         close(a.communication_latency.mean, a.t1.mean + a.t3.mean) &&
         close(a.complete_computation_latency.mean, a.rtt.mean + a.t4.mean) &&
         close(a.complete_communication_latency.mean, a.t1.mean + a.t3.mean + a.t4.mean);
}

}  // namespace fogbench

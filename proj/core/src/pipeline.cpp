#include "fogbench/pipeline.hpp"

#include <cmath>

namespace fogbench {

namespace {

template <typename Failure>
[[noreturn]] void rethrow_named(const std::string& context, const std::exception& e) {
  throw Failure(context + ": " + e.what());
}

}  // namespace

PipelineExecution::PipelineExecution(Testbed& testbed, const WorkloadSpec& workload,
                                     const ServicePlacement& placement, const AssetSpec& asset,
                                     std::uint64_t filter_seed)
    : testbed_(&testbed),
      workload_(&workload),
      placement_(&placement),
      asset_(&asset),
      filter_rng_(filter_seed),
      current_bytes_(asset.payload_bytes) {
  if (workload.services.empty()) throw std::invalid_argument("workload '" + workload.name + "' has no services");
  result_.timing.file_length = workload.audio_length_seconds;
}

const std::string& PipelineExecution::node_of(std::size_t service) const {
  return placement_->node_for(workload_->services.at(service).name);
}

double PipelineExecution::finish_of(double arrival, double queue_wait, double wall, double started_at,
                                    const std::string& node) const {
  if (testbed_->is_virtual(node)) return started_at + wall;
  return arrival + queue_wait + wall;
}

PipelineExecution::StepTiming PipelineExecution::step(double arrival) {
  if (!started_) {
    started_ = true;
    result_.issued_at = arrival;
  }
  const std::string context = "workload '" + workload_->name + "'";
  TimingBreakdown& t = result_.timing;

  switch (next_) {
    case StepKind::Deliver: {
      const std::string& node = node_of(0);
      TransferResult r;
      try {
        r = testbed_->transfer(Endpoint::observer(), Endpoint::node(node), current_bytes_, Direction::Up, arrival);
      } catch (const std::exception& e) {
        rethrow_named<TransferFailure>(context + " asset delivery to '" + node + "'", e);
      }
      const double finish = finish_of(arrival, r.queue_wait, r.wall_time, r.started_at, node);
      t.t1 += finish - arrival;
      t.bytes_up += current_bytes_;
      next_ = StepKind::Execute;
      return {finish - r.wall_time, finish};
    }

    case StepKind::Execute: {
      const ServiceSpec& svc = workload_->services[service_];
      const std::string& node = node_of(service_);
      const std::string where = context + " service '" + svc.name + "'";
      ExecResult r;
      try {
        const EnvironmentHandle& env = testbed_->environment(node, workload_->name);
        ExecOptions options;
        options.arrival = arrival;
        options.service = &svc;
        options.input_bytes = current_bytes_;
        r = testbed_->exec_task(env, svc.work_for(current_bytes_), options);
      } catch (const std::out_of_range& e) {
        rethrow_named<ExecFailure>(where, e);
      } catch (const ExecFailure& e) {
        rethrow_named<ExecFailure>(where, e);
      }
      const double finish = finish_of(arrival, r.queue_wait, r.wall_time, r.started_at, node);
      t.et += finish - arrival;
      current_bytes_ = static_cast<std::uint64_t>(std::llround(static_cast<double>(current_bytes_) * svc.output_ratio));
      result_.execs.push_back(std::move(r));
      result_.output_bytes.push_back(current_bytes_);
      result_.final_output_bytes = current_bytes_;

      if (svc.filter_probability < 1.0 && filter_rng_.uniform() >= svc.filter_probability) {
        result_.dropped = true;
        next_ = StepKind::Return;
      } else if (service_ + 1 < workload_->services.size()) {
        next_ = node_of(service_ + 1) == node ? StepKind::Execute : StepKind::Forward;
        ++service_;
      } else {
        next_ = StepKind::Return;
      }
      return {finish - result_.execs.back().wall_time, finish};
    }

    case StepKind::Forward: {
      const std::string& from = node_of(service_ - 1);
      const std::string& to = node_of(service_);
      TransferResult r;
      try {
        r = testbed_->transfer(Endpoint::node(from), Endpoint::node(to), current_bytes_, Direction::Up, arrival);
      } catch (const std::exception& e) {
        rethrow_named<TransferFailure>(context + " forward to service '" + workload_->services[service_].name + "'",
                                       e);
      }
      const double finish = finish_of(arrival, r.queue_wait, r.wall_time, r.started_at, testbed_->is_virtual(from) ? to : from);
      t.t1 += finish - arrival;
      result_.forward_time += finish - arrival;
      t.bytes_up += current_bytes_;
      next_ = StepKind::Execute;
      return {finish - r.wall_time, finish};
    }

    case StepKind::Return: {
      const std::size_t last = result_.execs.size() - 1;
      const std::string& node = node_of(last);
      const std::uint64_t bytes = result_.dropped ? 0 : current_bytes_;
      TransferResult r;
      try {
        r = testbed_->transfer(Endpoint::node(node), Endpoint::observer(), bytes, Direction::Down, arrival);
      } catch (const std::exception& e) {
        rethrow_named<TransferFailure>(context + " result return from '" + node + "'", e);
      }
      const double finish = finish_of(arrival, r.queue_wait, r.wall_time, r.started_at, node);
      t.t3 += finish - arrival;
      t.bytes_down += bytes;

      TransferResult store;
      try {
        store = testbed_->transfer(Endpoint::node(node), Endpoint::result_store(), bytes, Direction::ToResultStore,
                                   finish);
      } catch (const std::exception& e) {
        rethrow_named<TransferFailure>(context + " result store upload", e);
      }
      t.t2 += store.wall_time;
      result_.completed_at = finish;
      next_ = StepKind::Done;
      return {finish - r.wall_time, finish};
    }

    case StepKind::Done:
      break;
  }
  throw std::logic_error("pipeline already complete");
}

PipelineResult run_pipeline(Testbed& testbed, const WorkloadSpec& workload, const ServicePlacement& placement,
                            const AssetSpec& asset, std::uint64_t filter_seed) {
  PipelineExecution exec(testbed, workload, placement, asset, filter_seed);
  double at = testbed.now();
  while (!exec.done()) at = exec.step(at).finish;
  testbed.advance_to(at);
  return exec.result();
}

}  // namespace fogbench

#pragma once

#include <chrono>
#include <map>
#include <string>

#include "config.hpp"

namespace linattn::cli {

// Collects report.json content and stage timings for one invocation.
class Run {
 public:
  Run(std::string command, std::string out_dir);

  const std::string& out() const { return out_; }
  json& results() { return results_; }
  json& stability() { return stability_; }

  // Times everything until the next stage() call or finish().
  void stage(const std::string& name);

  std::string path(const std::string& file) const;
  void finish(const json& config);

 private:
  using Clock = std::chrono::steady_clock;
  void close_stage();

  std::string command_;
  std::string out_;
  json results_ = json::object();
  json stability_ = json::array();
  std::map<std::string, double> timings_;
  std::string current_;
  Clock::time_point started_;
  Clock::time_point total_start_;
};

void cmd_gen_data(const ExperimentConfig& cfg, Run& run);
void cmd_kernel(const ExperimentConfig& cfg, Run& run);
void cmd_spectral_check(const ExperimentConfig& cfg, Run& run);
void cmd_ntk_sweep(const ExperimentConfig& cfg, Run& run);
void cmd_influence(const ExperimentConfig& cfg, Run& run);
void cmd_attack(const ExperimentConfig& cfg, Run& run);
void cmd_malleability(const ExperimentConfig& cfg, Run& run);
void cmd_intervene(const ExperimentConfig& cfg, Run& run);
void cmd_train(const ExperimentConfig& cfg, Run& run);
void cmd_landscape(const ExperimentConfig& cfg, Run& run);

// Pinned desk configurations; the resolved config is returned for the report.
json reproduce_fig1(int threads, Run& run);
json reproduce_table2(int threads, Run& run);
json reproduce_table4(int threads, Run& run);

}  // namespace linattn::cli

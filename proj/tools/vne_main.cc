// vne: command-line front end for the experiment harness.
//
//   vne embed --config cfg.json     sequential VN embedding experiment
//   vne study --config cfg.json     primal/dual convergence study
//   vne gen --kind mesh|vn          instance generation
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure, 1 other.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vne/harness.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format;
  std::string log_level = "info";
};

void AddCommonFlags(CLI::App& cmd, CommonFlags& flags) {
  cmd.add_option("--config", flags.config, "JSON experiment configuration");
  cmd.add_option("--seed", flags.seed, "override the configured seed");
  cmd.add_option("--out-dir", flags.out_dir, "override the output directory");
  cmd.add_option("--format", flags.format, "report format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd.add_option("--log-level", flags.log_level, "trace|debug|info|warn|error|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
}

vne::ExperimentConfig ResolveConfig(const CommonFlags& flags) {
  vne::ExperimentConfig cfg =
      flags.config.empty() ? vne::ExperimentConfig{} : vne::LoadConfig(flags.config);
  if (flags.seed) cfg.seed = *flags.seed;
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (!flags.format.empty()) cfg.format = vne::ParseReportFormat(flags.format);
  cfg.Validate();
  return cfg;
}

int RunEmbed(const CommonFlags& flags) {
  const vne::ExperimentConfig cfg = ResolveConfig(flags);
  spdlog::info("embedding with {} (policy {}), seed {}", vne::ToString(cfg.algorithm),
               cfg.partition_policy.ToString(), cfg.seed);
  const vne::ExperimentReport report = vne::RunExperiment(cfg);
  for (const vne::VnOutcome& o : report.outcomes) {
    if (o.accepted) {
      spdlog::debug("vn {} accepted after {} iteration(s)", o.request_id, o.iterations);
    } else {
      spdlog::debug("vn {} rejected: {}", o.request_id, o.diagnostic);
    }
  }
  const auto path = vne::EmitReport(report, cfg.format, cfg.out_dir);
  if (!report.error.empty()) spdlog::warn("{}", report.error);
  spdlog::info("accepted {}/{} (ratio {}), revenue {:.6g}, {} messages, {} bytes",
               report.accepted, report.requested,
               report.allocation_ratio ? fmt::format("{:.4f}", *report.allocation_ratio)
                                       : std::string("undefined"),
               report.revenue, report.messages, report.bytes);
  if (report.capacity_violations > 0) {
    spdlog::error("{} capacity violation(s) detected", report.capacity_violations);
  }
  spdlog::info("report written to {}", path.string());
  return kExitOk;
}

int RunStudy(const CommonFlags& flags) {
  const vne::ExperimentConfig cfg = ResolveConfig(flags);
  spdlog::info("convergence study: {} seeds from {}, {} nodes, {} vnodes, policy {}",
               cfg.study.seeds, cfg.seed, cfg.study.nodes, cfg.study.vnodes,
               cfg.study.policy.ToString());
  const vne::ConvergenceStudy study = vne::RunConvergenceStudy(cfg);
  int dual_wins = 0;
  for (const vne::StudyRun& run : study.runs) {
    const double p = run.primal.final_gap();
    const double d = run.dual.final_gap();
    dual_wins += d <= p ? 1 : 0;
    spdlog::debug("seed {}: optimum {:.6g}, primal gap {:.3g} ({}), dual gap {:.3g} ({})",
                  run.seed, run.reference, p, run.primal.stop_reason, d,
                  run.dual.stop_reason);
  }
  const auto files = vne::EmitStudy(study, cfg.format, cfg.out_dir);
  spdlog::info("dual gap <= primal gap on {}/{} seeds; {} files in {}", dual_wins,
               study.runs.size(), files.size(), cfg.out_dir.string());
  return kExitOk;
}

struct GenFlags {
  std::string kind;
  std::string output;
  std::optional<int> nodes;
  std::optional<double> node_capacity;
  std::optional<double> link_capacity;
  std::optional<int> count;
  std::optional<double> link_prob;
};

int RunGen(const CommonFlags& flags, const GenFlags& gen) {
  vne::ExperimentConfig cfg = ResolveConfig(flags);
  if (gen.nodes) cfg.mesh.nodes = *gen.nodes;
  if (gen.node_capacity) cfg.mesh.node_capacity = *gen.node_capacity;
  if (gen.link_capacity) cfg.mesh.link_capacity = *gen.link_capacity;
  if (gen.count) cfg.stream.count = *gen.count;
  if (gen.link_prob) cfg.stream.link_prob = *gen.link_prob;
  if (gen.kind == "mesh") cfg.stream.count = 0;
  cfg.instance_file.reset();
  cfg.Validate();
  const vne::Instance instance = vne::MaterializeInstance(cfg);
  if (gen.output.empty() || gen.output == "-") {
    vne::WriteInstance(instance, std::cout);
  } else {
    vne::SaveInstance(instance, gen.output);
    spdlog::info("wrote {} node(s), {} link(s), {} request(s) to {}",
                 instance.network.node_count(), instance.network.link_count(),
                 instance.requests.size(), gen.output);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual network embedding by primal and dual decomposition"};
  app.require_subcommand(1);

  CommonFlags flags;
  GenFlags gen;
  CLI::App* embed = app.add_subcommand("embed", "run a sequential embedding experiment");
  AddCommonFlags(*embed, flags);
  CLI::App* study = app.add_subcommand("study", "run the primal/dual convergence study");
  AddCommonFlags(*study, flags);
  CLI::App* generate = app.add_subcommand("gen", "generate an instance file");
  AddCommonFlags(*generate, flags);
  generate->add_option("--kind", gen.kind, "mesh: network only; vn: network and VN stream")
      ->required()
      ->check(CLI::IsMember({"mesh", "vn"}));
  generate->add_option("-o,--output", gen.output, "output file (default stdout)");
  generate->add_option("--nodes", gen.nodes, "physical node count");
  generate->add_option("--node-capacity", gen.node_capacity, "CPU capacity per node");
  generate->add_option("--link-capacity", gen.link_capacity, "bandwidth per link");
  generate->add_option("--count", gen.count, "number of VN requests");
  generate->add_option("--link-prob", gen.link_prob, "vlink probability per vnode pair");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  // Logs go to stderr so `gen` can write the instance to stdout.
  spdlog::set_default_logger(spdlog::stderr_color_mt("vne"));
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_level(spdlog::level::from_str(flags.log_level));

  try {
    if (embed->parsed()) return RunEmbed(flags);
    if (study->parsed()) return RunStudy(flags);
    return RunGen(flags, gen);
  } catch (const vne::ConfigError& e) {
    spdlog::error("configuration error: {}", e.what());
    return kExitConfig;
  } catch (const vne::SolverFailure& e) {
    spdlog::error("solver failure: {}", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitOther;
  }
}

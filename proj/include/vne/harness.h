#ifndef VNE_HARNESS_H_
#define VNE_HARNESS_H_

// Experiment runner: sequential VN arrivals against residual capacity, the
// convergence study on a single placement instance, and report files.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vne/decomposition.h"
#include "vne/instance_io.h"
#include "vne/model.h"
#include "vne/monolith.h"
#include "vne/partition.h"
#include "vne/protocol.h"

namespace vne {

// Invalid or inconsistent configuration, raised before any work starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ReportFormat { kCsv, kJsonLines };
ReportFormat ParseReportFormat(const std::string& name);
std::string ToString(ReportFormat format);

struct MeshSpec {
  int nodes = 5;
  double node_capacity = 100.0;
  double link_capacity = 100.0;
};

struct VnStreamSpec {
  int count = 100;
  int min_vnodes = 2;
  int max_vnodes = 6;
  double link_prob = 0.5;
  Interval node_demand{1.0, 10.0};
  Interval link_demand{1.0, 10.0};
  ValueRule value_rule = ValueRule::kNodeDemandSum;
};

// Placement instances for the convergence study: `vnodes` demands uniform in
// [1, 10], `nodes` capacities whose total equals the total demand, all scaled
// so the largest capacity is 1. The utility is demand * affinity with
// affinity uniform in [0.5, 1.5] per (vnode, node).
struct StudySpec {
  int nodes = 10;
  int vnodes = 50;
  int seeds = 20;
  PartitionPolicy policy{PartitionKind::kHalves, 2};
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  // When set, the network (and any requests it lists) come from this file.
  std::optional<std::filesystem::path> instance_file;
  MeshSpec mesh;
  VnStreamSpec stream;
  int k_paths = 4;
  Algorithm algorithm = Algorithm::kPrimal;
  PartitionPolicy partition_policy;
  UtilitySpec utility;
  AssignmentMode assignment = AssignmentMode::kAtMostOnce;
  bool distinct_hosts = false;
  StepRule step;
  StopRule stop;
  // Gap reference: the coupled program optimum, or none ("blind").
  bool blind_gap = false;
  bool parallel = false;
  ByteModel bytes;
  StudySpec study;
  std::filesystem::path out_dir = "out";
  ReportFormat format = ReportFormat::kCsv;

  // Throws ConfigError naming the offending key.
  void Validate() const;
};

// Unknown keys are rejected so typos do not silently fall back to defaults.
ExperimentConfig ParseConfig(std::istream& in);
ExperimentConfig LoadConfig(const std::filesystem::path& path);

struct VnOutcome {
  int request_id = 0;
  bool accepted = false;
  double value = 0.0;
  int vnodes = 0;
  int vlinks = 0;
  int cross_vlinks = 0;
  int attempts = 0;
  int iterations = 0;
  long long messages = 0;
  long long bytes = 0;
  double solver_seconds = 0.0;
  std::string diagnostic;  // reason for rejection, empty when accepted
};

struct ExperimentReport {
  std::vector<VnOutcome> outcomes;
  int requested = 0;
  int accepted = 0;
  // Undefined for an empty run, which sets `error` instead.
  std::optional<double> allocation_ratio;
  double revenue = 0.0;
  long long messages = 0;
  long long bytes = 0;
  // Resources found below zero by the check after each acceptance.
  int capacity_violations = 0;
  double solver_seconds = 0.0;
  double wall_seconds = 0.0;
  std::string error;
  std::vector<Embedding> embeddings;  // accepted requests, arrival order
  MessageLog messages_log;
};

// The network and VN stream a configuration describes.
Instance MaterializeInstance(const ExperimentConfig& cfg);

// Processes requests in arrival order. Each request is placed by the
// configured algorithm against the residual node capacity; its vlinks then
// take the first listed path between their hosts with enough residual
// bandwidth. A failed placement is retried once with a refreshed mask that
// hides nodes unable to host the smallest vnode or reach any link with room
// for the smallest vlink; a second failure rejects the request. Solver
// failures reject the request with a diagnostic.
ExperimentReport RunExperiment(const ExperimentConfig& cfg);
ExperimentReport RunExperiment(const ExperimentConfig& cfg, const Instance& instance);

struct PlacementInstance {
  VnRequest request;
  std::vector<double> capacity;
  UtilitySpec utility;
};

PlacementInstance MakeStudyInstance(const StudySpec& spec, std::uint64_t seed);

struct StudyRun {
  std::uint64_t seed = 0;
  double reference = 0.0;  // coupled program optimum
  IterateTrace primal;
  IterateTrace dual;
  MessageLog primal_log;
  MessageLog dual_log;
};

struct ConvergenceStudy {
  std::vector<StudyRun> runs;
};

// Runs both methods on the same instance for seeds cfg.seed, cfg.seed + 1,
// ... (cfg.study.seeds of them).
ConvergenceStudy RunConvergenceStudy(const ExperimentConfig& cfg);
StudyRun RunStudySeed(const ExperimentConfig& cfg, std::uint64_t seed);

// Columns: kind,request_id,accepted,requested,allocation_ratio,revenue,
// vnodes,vlinks,cross_vlinks,attempts,iterations,messages,bytes,diagnostic,
// solver_seconds. One row per request, then a summary row; an empty report
// writes the header only.
void WriteReportCsv(const ExperimentReport& report, std::ostream& out);
// One JSON object per request, then a summary object (which carries
// `error` when set).
void WriteReportJsonLines(const ExperimentReport& report, std::ostream& out);

struct ReportSummary {
  int requested = 0;
  int accepted = 0;
  std::optional<double> allocation_ratio;
  double revenue = 0.0;
  long long messages = 0;
  long long bytes = 0;
};

ReportSummary Summarize(const ExperimentReport& report);
// Reads the summary row back from either format.
ReportSummary ParseReportSummary(std::istream& in, ReportFormat format);

// Writes report.<csv|jsonl> and messages.csv into `dir`; returns the report
// path. IO failures throw std::runtime_error naming the path.
std::filesystem::path EmitReport(const ExperimentReport& report, ReportFormat format,
                                 const std::filesystem::path& dir);

// gap_vs_iteration (seed,t,primal_gap,dual_gap) and gap_vs_time
// (seed,algorithm,t,seconds,gap) tables, plus per-run traces.
std::vector<std::filesystem::path> EmitStudy(const ConvergenceStudy& study,
                                             ReportFormat format,
                                             const std::filesystem::path& dir);

}  // namespace vne

#endif  // VNE_HARNESS_H_

#include "vne/harness.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vne/dual_decomposition.h"
#include "vne/primal_decomposition.h"
#include "vne/rng.h"

namespace vne {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::duration d) { return std::chrono::duration<double>(d).count(); }

// Shortest text that reads back to the same double.
std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

// ---- configuration --------------------------------------------------------

// Walks a JSON object and remembers which keys were read, so leftovers can be
// reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(Where() + " must be an object");
  }

  bool Has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  void Read(const std::string& key, T& out) {
    if (!j_.contains(key)) return;
    used_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(Where(key) + " has the wrong type");
    }
  }

  void ReadInterval(const std::string& key, Interval& out) {
    if (!j_.contains(key)) return;
    used_.insert(key);
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError(Where(key) + " must be a [lo, hi] pair");
    }
    out = {v[0].get<double>(), v[1].get<double>()};
  }

  Section Child(const std::string& key) {
    used_.insert(key);
    return Section(j_.at(key), path_.empty() ? key : path_ + "." + key);
  }

  void Finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ConfigError("unknown key " + Where(key));
    }
  }

  std::string Where(const std::string& key = {}) const {
    if (key.empty()) return path_.empty() ? "config" : "'" + path_ + "'";
    return "'" + (path_.empty() ? key : path_ + "." + key) + "'";
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <typename Fn>
auto Translate(const std::string& where, Fn fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

ExperimentConfig FromJson(const json& root) {
  ExperimentConfig cfg;
  Section top(root, "");
  top.Read("seed", cfg.seed);
  if (top.Has("instance")) {
    std::string path;
    top.Read("instance", path);
    cfg.instance_file = path;
  }
  if (top.Has("mesh")) {
    Section s = top.Child("mesh");
    s.Read("nodes", cfg.mesh.nodes);
    s.Read("node_capacity", cfg.mesh.node_capacity);
    s.Read("link_capacity", cfg.mesh.link_capacity);
    s.Finish();
  }
  if (top.Has("vn_stream")) {
    Section s = top.Child("vn_stream");
    s.Read("count", cfg.stream.count);
    s.Read("min_vnodes", cfg.stream.min_vnodes);
    s.Read("max_vnodes", cfg.stream.max_vnodes);
    s.Read("link_prob", cfg.stream.link_prob);
    s.ReadInterval("node_demand", cfg.stream.node_demand);
    s.ReadInterval("link_demand", cfg.stream.link_demand);
    if (s.Has("value_rule")) {
      std::string name;
      s.Read("value_rule", name);
      cfg.stream.value_rule =
          Translate(s.Where("value_rule"), [&] { return ParseValueRule(name); });
    }
    s.Finish();
  }
  top.Read("k_paths", cfg.k_paths);
  if (top.Has("algorithm")) {
    std::string name;
    top.Read("algorithm", name);
    cfg.algorithm = Translate("'algorithm'", [&] { return ParseAlgorithm(name); });
  }
  if (top.Has("partition_policy")) {
    std::string name;
    top.Read("partition_policy", name);
    cfg.partition_policy =
        Translate("'partition_policy'", [&] { return PartitionPolicy::Parse(name); });
  }
  if (top.Has("utility")) {
    Section s = top.Child("utility");
    if (s.Has("mode")) {
      std::string name;
      s.Read("mode", name);
      cfg.utility.mode = Translate(s.Where("mode"), [&] { return ParseUtilityMode(name); });
    }
    s.Read("node_weights", cfg.utility.node_weights);
    s.Finish();
  }
  if (top.Has("assignment")) {
    std::string name;
    top.Read("assignment", name);
    if (name == "at_most_once") {
      cfg.assignment = AssignmentMode::kAtMostOnce;
    } else if (name == "exactly_once") {
      cfg.assignment = AssignmentMode::kExactlyOnce;
    } else {
      throw ConfigError("'assignment' must be at_most_once or exactly_once");
    }
  }
  top.Read("distinct_hosts", cfg.distinct_hosts);
  if (top.Has("step_rule")) {
    Section s = top.Child("step_rule");
    if (s.Has("kind")) {
      std::string name;
      s.Read("kind", name);
      cfg.step.kind = Translate(s.Where("kind"), [&] { return StepRule::ParseKind(name); });
    }
    s.Read("a", cfg.step.a);
    s.Read("b", cfg.step.b);
    s.Finish();
  }
  if (top.Has("stop")) {
    Section s = top.Child("stop");
    s.Read("max_iterations", cfg.stop.max_iterations);
    s.Read("gap_tolerance", cfg.stop.gap_tolerance);
    s.Finish();
  }
  if (top.Has("gap_reference")) {
    std::string name;
    top.Read("gap_reference", name);
    if (name != "coupled" && name != "blind") {
      throw ConfigError("'gap_reference' must be coupled or blind");
    }
    cfg.blind_gap = name == "blind";
  }
  top.Read("parallel", cfg.parallel);
  if (top.Has("bytes")) {
    Section s = top.Child("bytes");
    s.Read("header", cfg.bytes.header_bytes);
    s.Read("per_scalar", cfg.bytes.bytes_per_scalar);
    s.Finish();
  }
  if (top.Has("study")) {
    Section s = top.Child("study");
    s.Read("nodes", cfg.study.nodes);
    s.Read("vnodes", cfg.study.vnodes);
    s.Read("seeds", cfg.study.seeds);
    if (s.Has("policy")) {
      std::string name;
      s.Read("policy", name);
      cfg.study.policy =
          Translate(s.Where("policy"), [&] { return PartitionPolicy::Parse(name); });
    }
    s.Finish();
  }
  if (top.Has("output")) {
    Section s = top.Child("output");
    std::string dir = cfg.out_dir.string();
    s.Read("dir", dir);
    cfg.out_dir = dir;
    if (s.Has("format")) {
      std::string name;
      s.Read("format", name);
      cfg.format = Translate(s.Where("format"), [&] { return ParseReportFormat(name); });
    }
    s.Finish();
  }
  top.Finish();
  return cfg;
}

json ReadJson(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return j;
}

// ---- placement ------------------------------------------------------------

struct Placement {
  bool ok = false;
  Embedding embedding;
  std::string diagnostic;
  int iterations = 0;
  int cross_vlinks = 0;
  double solver_seconds = 0.0;
};

std::vector<std::uint8_t> NodeMask(const PhysicalNetwork& net, const VnRequest& r,
                                   std::span<const double> node_residual,
                                   std::span<const double> link_residual, bool refreshed) {
  const int n = net.node_count();
  std::vector<std::uint8_t> mask(n, 0);
  double min_vnode = lp::kInfinity;
  for (const VirtualNode& v : r.vnodes()) min_vnode = std::min(min_vnode, v.demand);
  double min_vlink = lp::kInfinity;
  for (const VirtualLink& e : r.vlinks()) min_vlink = std::min(min_vlink, e.demand);
  for (int i = 0; i < n; ++i) {
    if (!refreshed) {
      mask[i] = node_residual[i] > 0.0 ? 1 : 0;
      continue;
    }
    bool ok = node_residual[i] >= min_vnode - 1e-9;
    if (ok && r.vlink_count() > 0) {
      bool reachable = false;
      for (int w : net.Neighbours(i)) {
        const int l = *net.LinkBetween(i, w);
        reachable |= link_residual[l] >= min_vlink - 1e-9;
      }
      ok = reachable;
    }
    mask[i] = ok ? 1 : 0;
  }
  return mask;
}

// First listed path between the hosts with room on every link, in vlink
// order, charging each choice before the next vlink is routed.
bool RouteVlinks(const PathSet& paths, const VnRequest& r, Embedding& e,
                 std::vector<double> link_residual, std::string& diagnostic) {
  e.link_map.assign(r.vlink_count(), kNoPath);
  for (int k = 0; k < r.vlink_count(); ++k) {
    const VirtualLink& vl = r.vlinks()[k];
    const int a = e.node_map[vl.from];
    const int b = e.node_map[vl.to];
    if (a == b) continue;
    int chosen = kNoPath;
    for (int p : paths.Between(a, b)) {
      bool fits = true;
      for (int l : paths.path(p).links) fits &= link_residual[l] >= vl.demand - 1e-9;
      if (fits) {
        chosen = p;
        break;
      }
    }
    if (chosen == kNoPath) {
      diagnostic = "no path with room for vlink " + std::to_string(k);
      return false;
    }
    for (int l : paths.path(chosen).links) link_residual[l] -= vl.demand;
    e.link_map[k] = chosen;
  }
  return true;
}

Placement PlaceMonolithic(const ExperimentConfig& cfg, const PhysicalNetwork& net,
                          const PathSet& paths, const VnRequest& r,
                          const std::vector<std::uint8_t>& nodes,
                          const std::vector<double>& node_residual,
                          const std::vector<double>& link_residual) {
  CapacityBudget budget{node_residual, link_residual, PathResiduals(paths, link_residual)};
  DiscoveryMask mask;
  mask.node_available = {nodes};
  std::vector<std::uint8_t> visible(paths.size(), 0);
  for (int k = 0; k < paths.size(); ++k) {
    const Path& p = paths.path(k);
    visible[k] = nodes[p.source()] && nodes[p.target()] && budget.path[k] > 0.0 ? 1 : 0;
  }
  mask.path_available = {visible};
  ProgramOptions options;
  options.distinct_hosts = cfg.distinct_hosts;
  const auto start = Clock::now();
  const MonolithResult result =
      EmbedMonolithic(net, paths, {r}, cfg.utility, options, &mask, &budget);
  Placement out;
  out.solver_seconds = Seconds(Clock::now() - start);
  out.iterations = 1;
  if (result.status != lp::LpStatus::kOptimal &&
      result.status != lp::LpStatus::kInfeasible &&
      result.status != lp::LpStatus::kNodeLimit) {
    throw SolverFailure("embedding program: " + lp::ToString(result.status));
  }
  out.embedding = result.embeddings.at(0);
  out.ok = out.embedding.accepted;
  if (!out.ok) {
    out.diagnostic = result.diagnostic.empty() ? "rejected by the embedding program"
                                               : result.diagnostic;
  }
  return out;
}

Placement PlaceDecomposed(const ExperimentConfig& cfg, const PathSet& paths,
                          const VnRequest& r, const std::vector<std::uint8_t>& nodes,
                          const std::vector<double>& node_residual,
                          const std::vector<double>& link_residual, MessageLog& log) {
  const VnSplit split = Split(r, cfg.partition_policy);
  const PartitionedLp plp = BuildPartitionedLp(r, split, node_residual, nodes, cfg.utility,
                                               cfg.assignment);
  RunOptions options;
  options.step = cfg.step;
  options.stop = cfg.stop;
  options.parallel = cfg.parallel;
  Placement out;
  out.cross_vlinks = static_cast<int>(split.cross_vlinks.size());
  const auto start = Clock::now();
  if (!cfg.blind_gap) {
    const lp::LpSolution coupled = lp::SolveLp(CoupledProgram(plp));
    if (coupled.status == lp::LpStatus::kInfeasible) {
      out.solver_seconds = Seconds(Clock::now() - start);
      out.diagnostic = "placement program infeasible";
      return out;
    }
    if (!coupled.optimal()) {
      throw SolverFailure("coupled program: " + lp::ToString(coupled.status));
    }
    options.reference = coupled.objective;
  }
  const IterateTrace trace = RunDistributed(cfg.algorithm, plp, options, log);
  out.solver_seconds = Seconds(Clock::now() - start);
  out.iterations = static_cast<int>(trace.records.size());

  Embedding& e = out.embedding;
  e.request_id = r.id();
  e.node_map.assign(r.vnode_count(), kUnmapped);
  const int n = plp.node_count;
  for (int v = 0; v < r.vnode_count(); ++v) {
    for (int i = 0; i < n; ++i) {
      if (trace.x_best.at(static_cast<std::size_t>(v) * n + i) > 0.5) e.node_map[v] = i;
    }
  }
  const int placed = static_cast<int>(
      std::count_if(e.node_map.begin(), e.node_map.end(), [](int h) { return h != kUnmapped; }));
  if (placed < r.vnode_count()) {
    out.diagnostic = "placed " + std::to_string(placed) + " of " +
                     std::to_string(r.vnode_count()) + " vnodes";
    return out;
  }
  if (!RouteVlinks(paths, r, e, link_residual, out.diagnostic)) return out;
  e.accepted = true;
  out.ok = true;
  return out;
}

// ---- report helpers -------------------------------------------------------

std::string Quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

constexpr const char* kReportHeader =
    "kind,request_id,accepted,requested,allocation_ratio,revenue,vnodes,vlinks,"
    "cross_vlinks,attempts,iterations,messages,bytes,diagnostic,solver_seconds";

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void CloseChecked(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

double Gap(const IterateRecord& r) { return r.gap; }

}  // namespace

ReportFormat ParseReportFormat(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "jsonl") return ReportFormat::kJsonLines;
  throw std::invalid_argument("unknown report format '" + name + "' (csv or jsonl)");
}

std::string ToString(ReportFormat format) {
  return format == ReportFormat::kCsv ? "csv" : "jsonl";
}

void ExperimentConfig::Validate() const {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  if (instance_file) {
    require(std::filesystem::exists(*instance_file),
            "instance file " + instance_file->string() + " does not exist");
  } else {
    require(mesh.nodes >= 2, "'mesh.nodes' must be at least 2");
    require(mesh.node_capacity > 0.0, "'mesh.node_capacity' must be positive");
    require(mesh.link_capacity > 0.0, "'mesh.link_capacity' must be positive");
  }
  require(stream.count >= 0, "'vn_stream.count' must not be negative");
  require(stream.min_vnodes >= 1, "'vn_stream.min_vnodes' must be at least 1");
  require(stream.max_vnodes >= stream.min_vnodes,
          "'vn_stream.max_vnodes' must be at least min_vnodes");
  require(stream.link_prob >= 0.0 && stream.link_prob <= 1.0,
          "'vn_stream.link_prob' must lie in [0, 1]");
  require(stream.node_demand.lo > 0.0 && stream.node_demand.lo <= stream.node_demand.hi,
          "'vn_stream.node_demand' must be a nonempty positive interval");
  require(stream.link_demand.lo > 0.0 && stream.link_demand.lo <= stream.link_demand.hi,
          "'vn_stream.link_demand' must be a nonempty positive interval");
  require(k_paths >= 1, "'k_paths' must be at least 1");
  require(stop.max_iterations >= 1, "'stop.max_iterations' must be at least 1");
  require(bytes.header_bytes >= 0 && bytes.bytes_per_scalar >= 0 &&
              bytes.header_bytes + bytes.bytes_per_scalar > 0,
          "'bytes' must give every message a positive size");
  require(study.nodes >= 1, "'study.nodes' must be at least 1");
  require(study.vnodes >= 1, "'study.vnodes' must be at least 1");
  require(study.seeds >= 1, "'study.seeds' must be at least 1");
  require(study.policy.kind == PartitionKind::kNone || study.policy.k <= study.vnodes,
          "'study.policy' asks for more parts than vnodes");
  try {
    step.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("'step_rule': ") + e.what());
  }
  for (double w : utility.node_weights) {
    require(std::isfinite(w) && w >= 0.0, "'utility.node_weights' must be nonnegative");
  }
  if (!instance_file) {
    require(utility.node_weights.empty() ||
                static_cast<int>(utility.node_weights.size()) == mesh.nodes,
            "'utility.node_weights' needs one weight per physical node");
  }
}

ExperimentConfig ParseConfig(std::istream& in) {
  ExperimentConfig cfg = FromJson(ReadJson(in));
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    ExperimentConfig cfg = FromJson(ReadJson(in));
    // Relative instance paths are resolved against the config's directory.
    if (cfg.instance_file && cfg.instance_file->is_relative() &&
        !std::filesystem::exists(*cfg.instance_file)) {
      const auto beside = path.parent_path() / *cfg.instance_file;
      if (std::filesystem::exists(beside)) cfg.instance_file = beside;
    }
    cfg.Validate();
    return cfg;
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Instance MaterializeInstance(const ExperimentConfig& cfg) {
  Instance instance;
  if (cfg.instance_file) {
    try {
      instance = LoadInstance(*cfg.instance_file);
    } catch (const InstanceFormatError& e) {
      throw ConfigError(e.what());
    }
    if (!cfg.utility.node_weights.empty() &&
        static_cast<int>(cfg.utility.node_weights.size()) != instance.network.node_count()) {
      throw ConfigError("'utility.node_weights' needs one weight per physical node");
    }
    if (!instance.requests.empty()) return instance;
  } else {
    instance.network =
        GenerateFullMesh(cfg.mesh.nodes, cfg.mesh.node_capacity, cfg.mesh.link_capacity);
  }
  Rng rng(cfg.seed);
  for (int j = 0; j < cfg.stream.count; ++j) {
    const int size = rng.UniformInt(cfg.stream.min_vnodes, cfg.stream.max_vnodes);
    instance.requests.push_back(GenerateRandomVn(j, size, cfg.stream.link_prob,
                                                 cfg.stream.node_demand,
                                                 cfg.stream.link_demand,
                                                 cfg.stream.value_rule, rng.Next()));
  }
  return instance;
}

ExperimentReport RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  return RunExperiment(cfg, MaterializeInstance(cfg));
}

ExperimentReport RunExperiment(const ExperimentConfig& cfg, const Instance& instance) {
  const auto run_start = Clock::now();
  ExperimentReport report;
  report.messages_log = MessageLog(cfg.bytes);
  const PhysicalNetwork& net = instance.network;
  const PathSet paths = EnumerateLoopFreePaths(net, cfg.k_paths);
  std::vector<double> node_residual = net.NodeCapacities();
  std::vector<double> link_residual = net.LinkBandwidths();
  std::vector<VnRequest> committed;

  for (const VnRequest& r : instance.requests) {
    VnOutcome outcome;
    outcome.request_id = r.id();
    outcome.value = r.value();
    outcome.vnodes = r.vnode_count();
    outcome.vlinks = r.vlink_count();
    MessageLog log(cfg.bytes);
    std::vector<std::uint8_t> previous_mask;
    try {
      for (int attempt = 0; attempt < 2; ++attempt) {
        const std::vector<std::uint8_t> mask =
            NodeMask(net, r, node_residual, link_residual, attempt > 0);
        if (attempt > 0 && mask == previous_mask) {
          outcome.diagnostic += "; retry skipped, mask unchanged";
          break;
        }
        previous_mask = mask;
        ++outcome.attempts;
        const Placement p =
            cfg.algorithm == Algorithm::kMonolithic
                ? PlaceMonolithic(cfg, net, paths, r, mask, node_residual, link_residual)
                : PlaceDecomposed(cfg, paths, r, mask, node_residual, link_residual, log);
        outcome.iterations += p.iterations;
        outcome.cross_vlinks = p.cross_vlinks;
        outcome.solver_seconds += p.solver_seconds;
        if (p.ok) {
          outcome.accepted = true;
          outcome.diagnostic.clear();
          report.embeddings.push_back(p.embedding);
          committed.push_back(r);
          break;
        }
        outcome.diagnostic = outcome.diagnostic.empty()
                                 ? p.diagnostic
                                 : outcome.diagnostic + "; retry: " + p.diagnostic;
      }
    } catch (const SolverFailure& e) {
      outcome.accepted = false;
      outcome.diagnostic = std::string("solver failure: ") + e.what();
    }

    if (outcome.accepted) {
      // Residuals are recomputed from every committed embedding, which also
      // checks that none of them overdraws a resource.
      try {
        const Residuals res = ResidualCapacity(net, paths, report.embeddings, committed);
        node_residual = res.node;
        link_residual = res.link;
      } catch (const CapacityViolation&) {
        ++report.capacity_violations;
      }
      ++report.accepted;
      report.revenue += r.value();
    }
    outcome.messages = log.message_count();
    outcome.bytes = log.total_bytes();
    for (const MessageRecord& m : log.records()) report.messages_log.Append(m);
    report.messages += outcome.messages;
    report.bytes += outcome.bytes;
    report.solver_seconds += outcome.solver_seconds;
    report.outcomes.push_back(std::move(outcome));
  }
  report.requested = static_cast<int>(instance.requests.size());
  if (report.requested > 0) {
    report.allocation_ratio = static_cast<double>(report.accepted) / report.requested;
  } else {
    report.error = "allocation ratio undefined: no VN requests";
  }
  report.wall_seconds = Seconds(Clock::now() - run_start);
  return report;
}

PlacementInstance MakeStudyInstance(const StudySpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> demand(spec.vnodes);
  for (double& d : demand) d = rng.Uniform(1.0, 10.0);
  const double total = std::accumulate(demand.begin(), demand.end(), 0.0);
  std::vector<double> weight(spec.nodes);
  for (double& w : weight) w = rng.Uniform(0.5, 1.5);
  const double weight_sum = std::accumulate(weight.begin(), weight.end(), 0.0);
  PlacementInstance out;
  for (double w : weight) out.capacity.push_back(total * w / weight_sum);
  const double scale = *std::max_element(out.capacity.begin(), out.capacity.end());
  for (double& c : out.capacity) c /= scale;
  std::vector<VirtualNode> vnodes;
  for (double d : demand) vnodes.push_back({d / scale});
  out.request = VnRequest(0, std::move(vnodes), {}, total / scale);
  out.utility.mode = UtilityMode::kWeightedNode;
  out.utility.affinity.assign(1, std::vector<std::vector<double>>(spec.vnodes));
  for (auto& row : out.utility.affinity[0]) {
    row.resize(spec.nodes);
    for (double& a : row) a = rng.Uniform(0.5, 1.5);
  }
  return out;
}

StudyRun RunStudySeed(const ExperimentConfig& cfg, std::uint64_t seed) {
  const PlacementInstance inst = MakeStudyInstance(cfg.study, seed);
  const PartitionedLp plp =
      BuildPartitionedLp(inst.request, Split(inst.request, cfg.study.policy), inst.capacity,
                         {}, inst.utility, cfg.assignment);
  const lp::LpSolution coupled = lp::SolveLp(CoupledProgram(plp));
  if (!coupled.optimal()) {
    throw SolverFailure("study instance " + std::to_string(seed) + ": " +
                        lp::ToString(coupled.status));
  }
  RunOptions options;
  options.step = cfg.step;
  options.stop = cfg.stop;
  options.parallel = cfg.parallel;
  if (!cfg.blind_gap) options.reference = coupled.objective;
  StudyRun run;
  run.seed = seed;
  run.reference = coupled.objective;
  run.primal_log = MessageLog(cfg.bytes);
  run.dual_log = MessageLog(cfg.bytes);
  run.primal = RunDistributed(Algorithm::kPrimal, plp, options, run.primal_log);
  run.dual = RunDistributed(Algorithm::kDual, plp, options, run.dual_log);
  return run;
}

ConvergenceStudy RunConvergenceStudy(const ExperimentConfig& cfg) {
  cfg.Validate();
  ConvergenceStudy study;
  for (int s = 0; s < cfg.study.seeds; ++s) {
    study.runs.push_back(RunStudySeed(cfg, cfg.seed + static_cast<std::uint64_t>(s)));
  }
  return study;
}

ReportSummary Summarize(const ExperimentReport& report) {
  return {report.requested, report.accepted, report.allocation_ratio,
          report.revenue,   report.messages, report.bytes};
}

void WriteReportCsv(const ExperimentReport& report, std::ostream& out) {
  out << kReportHeader << '\n';
  if (report.outcomes.empty()) return;
  long long vnodes = 0, vlinks = 0, cross = 0, attempts = 0, iterations = 0;
  for (const VnOutcome& o : report.outcomes) {
    out << "vn," << o.request_id << ',' << (o.accepted ? 1 : 0) << ",1,"
        << (o.accepted ? 1 : 0) << ',' << Num(o.accepted ? o.value : 0.0) << ','
        << o.vnodes << ',' << o.vlinks << ',' << o.cross_vlinks << ',' << o.attempts << ','
        << o.iterations << ',' << o.messages << ',' << o.bytes << ','
        << Quote(o.diagnostic) << ',' << Num(o.solver_seconds) << '\n';
    vnodes += o.vnodes;
    vlinks += o.vlinks;
    cross += o.cross_vlinks;
    attempts += o.attempts;
    iterations += o.iterations;
  }
  out << "summary,," << report.accepted << ',' << report.requested << ','
      << (report.allocation_ratio ? Num(*report.allocation_ratio) : "") << ','
      << Num(report.revenue) << ',' << vnodes << ',' << vlinks << ',' << cross << ','
      << attempts << ',' << iterations << ',' << report.messages << ',' << report.bytes
      << ',' << Quote(report.error) << ',' << Num(report.solver_seconds) << '\n';
}

void WriteReportJsonLines(const ExperimentReport& report, std::ostream& out) {
  for (const VnOutcome& o : report.outcomes) {
    json j = {{"kind", "vn"},
              {"request_id", o.request_id},
              {"accepted", o.accepted},
              {"value", o.value},
              {"vnodes", o.vnodes},
              {"vlinks", o.vlinks},
              {"cross_vlinks", o.cross_vlinks},
              {"attempts", o.attempts},
              {"iterations", o.iterations},
              {"messages", o.messages},
              {"bytes", o.bytes},
              {"diagnostic", o.diagnostic},
              {"solver_seconds", o.solver_seconds}};
    out << j.dump() << '\n';
  }
  json s = {{"kind", "summary"},
            {"requested", report.requested},
            {"accepted", report.accepted},
            {"revenue", report.revenue},
            {"messages", report.messages},
            {"bytes", report.bytes},
            {"capacity_violations", report.capacity_violations},
            {"solver_seconds", report.solver_seconds},
            {"wall_seconds", report.wall_seconds}};
  s["allocation_ratio"] =
      report.allocation_ratio ? json(*report.allocation_ratio) : json(nullptr);
  if (!report.error.empty()) s["error"] = report.error;
  out << s.dump() << '\n';
}

ReportSummary ParseReportSummary(std::istream& in, ReportFormat format) {
  ReportSummary out;
  std::string line;
  if (format == ReportFormat::kJsonLines) {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (j.value("kind", "") != "summary") continue;
      out.requested = j.at("requested").get<int>();
      out.accepted = j.at("accepted").get<int>();
      if (!j.at("allocation_ratio").is_null()) {
        out.allocation_ratio = j.at("allocation_ratio").get<double>();
      }
      out.revenue = j.at("revenue").get<double>();
      out.messages = j.at("messages").get<long long>();
      out.bytes = j.at("bytes").get<long long>();
    }
    return out;
  }
  if (!std::getline(in, line)) throw std::runtime_error("report CSV is empty");
  const std::vector<std::string> header = SplitCsvLine(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("report CSV lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  while (std::getline(in, line)) {
    const std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != header.size() || f[column("kind")] != "summary") continue;
    out.accepted = std::stoi(f[column("accepted")]);
    out.requested = std::stoi(f[column("requested")]);
    const std::string& ratio = f[column("allocation_ratio")];
    if (!ratio.empty()) out.allocation_ratio = std::stod(ratio);
    out.revenue = std::stod(f[column("revenue")]);
    out.messages = std::stoll(f[column("messages")]);
    out.bytes = std::stoll(f[column("bytes")]);
  }
  return out;
}

std::filesystem::path EmitReport(const ExperimentReport& report, ReportFormat format,
                                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  const auto path = dir / (format == ReportFormat::kCsv ? "report.csv" : "report.jsonl");
  std::ofstream out = OpenForWrite(path);
  if (format == ReportFormat::kCsv) {
    WriteReportCsv(report, out);
  } else {
    WriteReportJsonLines(report, out);
  }
  CloseChecked(out, path);
  const auto messages = dir / "messages.csv";
  std::ofstream log = OpenForWrite(messages);
  WriteMessageCsv(report.messages_log, log);
  CloseChecked(log, messages);
  return path;
}

std::vector<std::filesystem::path> EmitStudy(const ConvergenceStudy& study,
                                             ReportFormat format,
                                             const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "traces", ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  const bool csv = format == ReportFormat::kCsv;
  const std::string ext = csv ? ".csv" : ".jsonl";
  std::vector<std::filesystem::path> written;

  const auto by_iteration = dir / ("gap_vs_iteration" + ext);
  std::ofstream it = OpenForWrite(by_iteration);
  if (csv) it << "seed,t,primal_gap,dual_gap\n";
  const auto by_time = dir / ("gap_vs_time" + ext);
  std::ofstream tm = OpenForWrite(by_time);
  if (csv) tm << "seed,algorithm,t,seconds,gap\n";
  const auto summary = dir / ("study_summary" + ext);
  std::ofstream sm = OpenForWrite(summary);
  if (csv) {
    sm << "seed,reference,primal_gap,dual_gap,primal_iterations,dual_iterations,"
          "primal_messages,dual_messages,primal_seconds,dual_seconds\n";
  }

  for (const StudyRun& run : study.runs) {
    const std::size_t rows = std::max(run.primal.records.size(), run.dual.records.size());
    for (std::size_t t = 0; t < rows; ++t) {
      const bool has_p = t < run.primal.records.size();
      const bool has_d = t < run.dual.records.size();
      if (csv) {
        it << run.seed << ',' << t + 1 << ','
           << (has_p ? Num(Gap(run.primal.records[t])) : "") << ','
           << (has_d ? Num(Gap(run.dual.records[t])) : "") << '\n';
      } else {
        json j = {{"seed", run.seed}, {"t", t + 1}};
        j["primal_gap"] = has_p ? json(Gap(run.primal.records[t])) : json(nullptr);
        j["dual_gap"] = has_d ? json(Gap(run.dual.records[t])) : json(nullptr);
        it << j.dump() << '\n';
      }
    }
    for (const IterateTrace* trace : {&run.primal, &run.dual}) {
      for (const IterateRecord& r : trace->records) {
        if (csv) {
          tm << run.seed << ',' << trace->algorithm << ',' << r.t << ','
             << Num(r.solver_seconds) << ',' << Num(r.gap) << '\n';
        } else {
          tm << json({{"seed", run.seed},
                      {"algorithm", trace->algorithm},
                      {"t", r.t},
                      {"seconds", r.solver_seconds},
                      {"gap", r.gap}})
                    .dump()
             << '\n';
        }
      }
      const auto trace_path = dir / "traces" /
                              (trace->algorithm + "_seed" + std::to_string(run.seed) + ".csv");
      std::ofstream tr = OpenForWrite(trace_path);
      WriteTraceCsv(*trace, tr);
      CloseChecked(tr, trace_path);
      written.push_back(trace_path);
    }
    if (csv) {
      sm << run.seed << ',' << Num(run.reference) << ',' << Num(run.primal.final_gap())
         << ',' << Num(run.dual.final_gap()) << ',' << run.primal.records.size() << ','
         << run.dual.records.size() << ',' << run.primal_log.message_count() << ','
         << run.dual_log.message_count() << ',' << Num(run.primal.total_solver_seconds())
         << ',' << Num(run.dual.total_solver_seconds()) << '\n';
    } else {
      sm << json({{"seed", run.seed},
                  {"reference", run.reference},
                  {"primal_gap", run.primal.final_gap()},
                  {"dual_gap", run.dual.final_gap()},
                  {"primal_iterations", run.primal.records.size()},
                  {"dual_iterations", run.dual.records.size()},
                  {"primal_messages", run.primal_log.message_count()},
                  {"dual_messages", run.dual_log.message_count()},
                  {"primal_seconds", run.primal.total_solver_seconds()},
                  {"dual_seconds", run.dual.total_solver_seconds()}})
                .dump()
         << '\n';
    }
  }
  CloseChecked(it, by_iteration);
  CloseChecked(tm, by_time);
  CloseChecked(sm, summary);
  written.insert(written.begin(), {by_iteration, by_time, summary});
  return written;
}

}  // namespace vne

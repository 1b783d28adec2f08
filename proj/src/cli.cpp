#include "cone/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "cone/bounds.hpp"
#include "cone/environment.hpp"
#include "cone/hetero.hpp"
#include "cone/radius_dist.hpp"
#include "cone/tree_sim.hpp"

namespace cone::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kGrammar =
    "Distribution specs: family ':' key '=' value (',' key '=' value)*\n"
    "  bernoulli:p=<p>         P[R=1] = p\n"
    "  geometric:p=<p>         P[R=k] = (1-p) p^k, 0 <= p < 1\n"
    "  binomial:n=<n>,p=<p>    P[R=k] = C(n,k) p^k (1-p)^(n-k)\n"
    "  pmf:<w0>,<w1>,...       P[R=k] proportional to w_k\n"
    "Environment files: one spec per depth, optional last line\n"
    "  'tail: constant' or 'tail: periodic=<k>'\n";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Json number(double v) {
  if (!std::isfinite(v)) return v > 0 ? Json("inf") : Json(fmt10(v));
  return Json(round_report(v));
}

Json number(ExtendedReal v) {
  return v.is_infinite() ? Json("inf") : number(v.value());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string csv_value(ExtendedReal v) {
  return v.is_infinite() ? "inf" : fmt10(v.value());
}

// Options shared by the subcommands; only the ones a subcommand registers
// are meaningful for it.
struct Options {
  std::string graph = "td";
  int d = 2;
  std::string dist;
  std::string env_file;
  long depth = 40;
  std::optional<long> generations;
  std::size_t node_cap = std::size_t{1} << 14;
  std::uint64_t runs = 10'000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string format;
  std::string output;
  std::string axis;
  std::string mode = "bounds";
  long n = 1;
  std::optional<long> n_max;
  long j_max = 64;
};

Graph parse_graph(const std::string& s) {
  return s == "td" ? Graph::Td : Graph::TdPlus;
}

RadiusDistribution dist_or_usage(const std::string& spec) {
  try {
    return parse_dist(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid --dist '") + spec + "': " + e.what());
  }
}

void require_engine_law(const RadiusDistribution& dist) {
  const double p0 = dist.p0();
  if (!(p0 > 0.0 && p0 < 1.0)) {
    throw UsageError("--dist: bounds need 0 < P[R = 0] < 1, got P[R = 0] = " +
                     fmt10(p0));
  }
}

HeteroEnvironment env_or_usage(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open --env-file '" + path + "'");
  try {
    return parse_environment(in);
  } catch (const std::invalid_argument& e) {
    throw UsageError("invalid --env-file '" + path + "': " + e.what());
  }
}

StopPolicy policy_from(const Options& o) {
  StopPolicy p{o.depth, o.generations.value_or(4 * o.depth), o.node_cap};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

// ---------------------------------------------------------------------------

Json bounds_json(const SurvivalBounds& b) {
  Json j;
  j["verdict"] = std::string(to_string(b.verdict.kind));
  j["criterion"] = std::string(to_string(b.verdict.fired));
  j["mean_d_power_r"] = number(b.verdict.mean_d_power_r);
  j["survival_threshold"] = number(b.verdict.survival_threshold);
  j["extinction_threshold"] = number(b.verdict.extinction_threshold);
  j["rho"] = number(b.rho);
  j["psi"] = number(b.psi);
  j["lower"] = number(b.lower);
  j["upper"] = number(b.upper);
  return j;
}

SurvivalBounds compute_bounds(Graph g, const RadiusDistribution& dist, int d) {
  return g == Graph::Td ? survival_bounds_full(dist, d)
                        : survival_bounds_plus(dist, d);
}

std::string cmd_bounds(const Options& o) {
  const auto dist = dist_or_usage(o.dist);
  require_engine_law(dist);
  const Graph g = parse_graph(o.graph);
  const SurvivalBounds b = compute_bounds(g, dist, o.d);
  if (o.format == "csv") {
    std::ostringstream s;
    s << "graph,d,dist,verdict,mean_d_power_r,rho,psi,lower,upper\n"
      << to_string(g) << ',' << o.d << ',' << csv_field(format_dist(dist)) << ','
      << to_string(b.verdict.kind) << ',' << csv_value(b.verdict.mean_d_power_r)
      << ',' << fmt10(b.rho) << ',' << fmt10(b.psi) << ',' << fmt10(b.lower)
      << ',' << fmt10(b.upper) << '\n';
    return s.str();
  }
  Json j;
  j["command"] = "bounds";
  j["graph"] = std::string(to_string(g));
  j["d"] = o.d;
  j["dist"] = format_dist(dist);
  j.update(bounds_json(b));
  return j.dump(2) + "\n";
}

RadiusSource source_from(const Options& o) {
  if (!o.env_file.empty()) return env_or_usage(o.env_file);
  return dist_or_usage(o.dist);
}

std::string source_label(const Options& o, const RadiusSource& src) {
  if (!o.env_file.empty()) return "env:" + o.env_file;
  return format_dist(std::get<RadiusDistribution>(src));
}

std::string cmd_simulate(const Options& o) {
  if (o.dist.empty() == o.env_file.empty()) {
    throw UsageError("simulate needs exactly one of --dist and --env-file");
  }
  SimulationConfig cfg;
  cfg.graph = parse_graph(o.graph);
  cfg.d = o.d;
  cfg.source = source_from(o);
  cfg.policy = policy_from(o);
  cfg.n_runs = o.runs;
  cfg.master_seed = o.seed;
  cfg.threads = o.threads;
  const SurvivalEstimate est = estimate_survival(cfg);
  const std::string label = source_label(o, cfg.source);
  if (o.format == "csv") {
    std::ostringstream s;
    s << "graph,d,source,depth,generations,node_cap,runs,seed,point,ci_low,"
         "ci_high,reached_depth,frontier_died,cap_hits\n"
      << to_string(cfg.graph) << ',' << o.d << ',' << csv_field(label) << ','
      << cfg.policy.depth_target << ',' << cfg.policy.generation_cap << ','
      << cfg.policy.node_cap << ',' << o.runs << ',' << o.seed << ','
      << fmt10(est.point) << ',' << fmt10(est.ci_low) << ','
      << fmt10(est.ci_high) << ',' << est.reached_depth << ','
      << est.frontier_died << ',' << est.cap_hits << '\n';
    return s.str();
  }
  Json j;
  j["command"] = "simulate";
  j["graph"] = std::string(to_string(cfg.graph));
  j["d"] = o.d;
  j["source"] = label;
  j["depth"] = cfg.policy.depth_target;
  j["generations"] = cfg.policy.generation_cap;
  j["node_cap"] = cfg.policy.node_cap;
  j["runs"] = o.runs;
  j["seed"] = o.seed;
  j["point"] = number(est.point);
  j["ci_low"] = number(est.ci_low);
  j["ci_high"] = number(est.ci_high);
  j["reached_depth"] = est.reached_depth;
  j["frontier_died"] = est.frontier_died;
  j["cap_hits"] = est.cap_hits;
  return j.dump(2) + "\n";
}

struct Axis {
  std::string name;
  std::vector<double> values;
};

Axis parse_axis(const std::string& text) {
  // name:start:stop:steps
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 4 || parts[0].empty()) {
    throw UsageError("--axis must look like name:start:stop:steps");
  }
  Axis axis{parts[0], {}};
  double start = 0;
  double stop = 0;
  long steps = 0;
  try {
    std::size_t used = 0;
    start = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("start");
    stop = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("stop");
    steps = std::stol(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("steps");
  } catch (const std::exception&) {
    throw UsageError("--axis: could not parse '" + text + "'");
  }
  if (steps < 1) throw UsageError("--axis: steps must be >= 1");
  for (long i = 0; i < steps; ++i) {
    const double v =
        steps == 1 ? start : start + (stop - start) * static_cast<double>(i) /
                                         static_cast<double>(steps - 1);
    // Grid values are the ones a user would type: 0.05 + 20 * 0.01 is 0.25.
    axis.values.push_back(round_report(v));
  }
  return axis;
}

std::string substitute(const std::string& pattern, const std::string& value) {
  std::string out;
  for (char c : pattern) {
    if (c == '?') {
      out += value;
    } else {
      out += c;
    }
  }
  return out;
}

std::string cmd_sweep(const Options& o) {
  if (o.dist.find('?') == std::string::npos) {
    throw UsageError("sweep: --dist must contain a '?' placeholder for the axis");
  }
  const Axis axis = parse_axis(o.axis);
  const Graph g = parse_graph(o.graph);
  const bool simulate = o.mode == "simulate";

  std::vector<RadiusDistribution> dists;
  for (double v : axis.values) {
    dists.push_back(dist_or_usage(substitute(o.dist, fmt10(v))));
    if (!simulate) require_engine_law(dists.back());
  }
  const StopPolicy policy = simulate ? policy_from(o) : StopPolicy{};

  Json rows = Json::array();
  std::ostringstream csv;
  csv << csv_field(axis.name)
      << (simulate ? ",point,ci_low,ci_high,n_runs,cap_hits\n"
                   : ",verdict,rho,psi,lower,upper\n");
  for (std::size_t i = 0; i < dists.size(); ++i) {
    Json row;
    row[axis.name] = number(axis.values[i]);
    csv << fmt10(axis.values[i]);
    if (simulate) {
      SimulationConfig cfg;
      cfg.graph = g;
      cfg.d = o.d;
      cfg.source = dists[i];
      cfg.policy = policy;
      cfg.n_runs = o.runs;
      cfg.master_seed = o.seed;
      cfg.threads = o.threads;
      const auto est = estimate_survival(cfg);
      row["point"] = number(est.point);
      row["ci_low"] = number(est.ci_low);
      row["ci_high"] = number(est.ci_high);
      row["n_runs"] = est.n_runs;
      row["cap_hits"] = est.cap_hits;
      csv << ',' << fmt10(est.point) << ',' << fmt10(est.ci_low) << ','
          << fmt10(est.ci_high) << ',' << est.n_runs << ',' << est.cap_hits;
    } else {
      const auto b = compute_bounds(g, dists[i], o.d);
      row["verdict"] = std::string(to_string(b.verdict.kind));
      row["rho"] = number(b.rho);
      row["psi"] = number(b.psi);
      row["lower"] = number(b.lower);
      row["upper"] = number(b.upper);
      csv << ',' << to_string(b.verdict.kind) << ',' << fmt10(b.rho) << ','
          << fmt10(b.psi) << ',' << fmt10(b.lower) << ',' << fmt10(b.upper);
    }
    csv << '\n';
    rows.push_back(std::move(row));
  }
  if (o.format == "json") {
    Json j;
    j["command"] = "sweep";
    j["mode"] = o.mode;
    j["graph"] = std::string(to_string(g));
    j["d"] = o.d;
    j["dist"] = o.dist;
    j["axis"] = axis.name;
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
  }
  return csv.str();
}

Json report_json(const CertificationReport& r) {
  Json j;
  j["n"] = r.n;
  j["j_max"] = r.j_max;
  Json c = Json::array();
  for (double v : r.c_values) c.push_back(number(v));
  j["c_values"] = std::move(c);
  j["tail_start"] = r.tail_start;
  j["tail_period"] = r.tail_period;
  j["liminf"] = number(r.liminf_estimate);
  j["certified"] = r.certified;
  return j;
}

std::string cmd_hetero(const Options& o) {
  const HeteroEnvironment env = env_or_usage(o.env_file);
  Json j;
  j["command"] = "hetero-check";
  j["d"] = o.d;
  j["env_file"] = o.env_file;
  bool certified = false;
  std::vector<CertificationReport> all;
  try {
    if (o.n_max) {
      const auto sweep = certify_sweep(env, o.d, *o.n_max, o.j_max);
      j["first_certifying_n"] =
          sweep.first_certifying_n ? Json(*sweep.first_certifying_n) : Json();
      Json reports = Json::array();
      for (const auto& r : sweep.reports) reports.push_back(report_json(r));
      all = sweep.reports;
      j["reports"] = std::move(reports);
      certified = sweep.first_certifying_n.has_value();
    } else {
      const auto report = certify_survival(env, o.d, o.n, o.j_max);
      j.update(report_json(report));
      certified = report.certified;
      all.push_back(report);
    }
  } catch (const HorizonTooShort& e) {
    throw UsageError(std::string("--j-max: ") + e.what());
  }
  if (!certified) {
    j["note"] =
        "not certified; the criterion is one-sided, so this is not a proof of "
        "extinction. Retry with a larger block length n.";
  }
  if (o.format == "csv") {
    // One row per block length; the c_j series stays JSON-only.
    std::ostringstream csv;
    csv << "n,j_max,tail_start,tail_period,liminf,certified\n";
    for (const auto& r : all) {
      csv << r.n << ',' << r.j_max << ',' << r.tail_start << ',' << r.tail_period << ','
          << fmt10(r.liminf_estimate) << ',' << (r.certified ? "true" : "false") << '\n';
    }
    return csv.str();
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

void add_output_flags(CLI::App* cmd, Options& o, const std::string& def) {
  cmd->add_option("--format", o.format, "Report format (default " + def + ")")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output", o.output, "Write the report here instead of stdout");
}

void add_sim_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--depth", o.depth, "Survival proxy: depth target L")
      ->capture_default_str();
  cmd->add_option("--generations", o.generations,
                  "Generation cap G (default 4 L)");
  cmd->add_option("--node-cap", o.node_cap, "Materialized-vertex cap N")
      ->capture_default_str();
  cmd->add_option("--runs", o.runs, "Number of episodes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", o.threads,
                  "Worker threads (0: available parallelism)")
      ->check(CLI::NonNegativeNumber);
}

void add_graph_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--graph", o.graph, "Tree: td or tdplus")
      ->check(CLI::IsMember({"td", "tdplus"}))
      ->capture_default_str();
  cmd->add_option("--d", o.d, "Branching number d (>= 2)")
      ->required()
      ->check(CLI::Range(2, 1 << 20));
}

}  // namespace

double round_report(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(fmt10(v).c_str(), nullptr);
}

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Cone percolation on homogeneous trees", "coneperc"};
  app.footer(kGrammar);
  app.require_subcommand(1);
  Options o;

  auto* bounds = app.add_subcommand("bounds", "Mean criteria and fixed-point survival bounds");
  add_graph_flags(bounds, o);
  bounds->add_option("--dist", o.dist, "Radius law")->required();
  add_output_flags(bounds, o, "json");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo survival estimate");
  add_graph_flags(simulate, o);
  simulate->add_option("--dist", o.dist, "Radius law");
  simulate->add_option("--env-file", o.env_file, "Depth-indexed environment");
  add_sim_flags(simulate, o);
  add_output_flags(simulate, o, "json");

  auto* sweep = app.add_subcommand("sweep", "Bounds or estimates along a parameter axis");
  add_graph_flags(sweep, o);
  sweep->add_option("--dist", o.dist, "Radius law with '?' where the axis value goes")
      ->required();
  sweep->add_option("--axis", o.axis, "name:start:stop:steps")->required();
  sweep->add_option("--mode", o.mode, "bounds or simulate")
      ->check(CLI::IsMember({"bounds", "simulate"}))
      ->capture_default_str();
  add_sim_flags(sweep, o);
  add_output_flags(sweep, o, "csv");

  auto* hetero = app.add_subcommand("hetero-check",
                                    "Supercriticality certificate for a depth-indexed environment");
  hetero->add_option("--d", o.d, "Branching number d (>= 2)")
      ->required()
      ->check(CLI::Range(2, 1 << 20));
  hetero->add_option("--env-file", o.env_file, "Environment file")->required();
  hetero->add_option("--n", o.n, "Block length n")->check(CLI::PositiveNumber)
      ->capture_default_str();
  hetero->add_option("--n-max", o.n_max, "Try n = 1..n_max, stop at the first certificate")
      ->check(CLI::PositiveNumber);
  hetero->add_option("--j-max", o.j_max, "Last block index evaluated")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_output_flags(hetero, o, "json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help()
                                          : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  if (o.format.empty()) o.format = sweep->parsed() ? "csv" : "json";

  std::string report;
  try {
    if (bounds->parsed()) {
      report = cmd_bounds(o);
    } else if (simulate->parsed()) {
      report = cmd_simulate(o);
    } else if (sweep->parsed()) {
      report = cmd_sweep(o);
    } else {
      report = cmd_hetero(o);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << kGrammar;
    return kUsage;
  } catch (const ConvergenceError& e) {
    err << "computation error: " << e.what() << '\n';
    return kComputation;
  } catch (const std::exception& e) {
    err << "computation error: " << e.what() << '\n';
    return kComputation;
  }

  if (!o.output.empty()) {
    std::ofstream file(o.output, std::ios::binary);
    if (!file || !(file << report)) {
      err << "error: cannot write '" << o.output << "'\n";
      return kComputation;
    }
    return kOk;
  }
  out << report;
  return kOk;
}

}  // namespace cone::cli

#include "repwalk/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "repwalk/errors.hpp"
#include "repwalk/exact_oracle.hpp"
#include "repwalk/gks_verifier.hpp"
#include "repwalk/mcmc_sampler.hpp"
#include "repwalk/multiscale.hpp"
#include "repwalk/tilt_analysis.hpp"
#include "repwalk/transfer_matrix.hpp"

namespace repwalk {
namespace {

Json scalar_to_json(const YAML::Node& node) {
  const std::string s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i); ec == std::errc() && p == s.data() + s.size())
    return i;
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d); ec == std::errc() && p == s.data() + s.size())
    return d;
  if (s == "true" || s == "True") return true;
  if (s == "false" || s == "False") return false;
  if (s == "null" || s == "~" || s.empty()) return nullptr;
  return s;
}

Json node_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return scalar_to_json(node);
    case YAML::NodeType::Sequence: {
      Json arr = Json::array();
      for (const auto& n : node) arr.push_back(node_to_json(n));
      return arr;
    }
    case YAML::NodeType::Map: {
      Json obj = Json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = node_to_json(kv.second);
      return obj;
    }
  }
  return nullptr;
}

/// Parameter block with typed access, defaults and unknown-key detection.
class Params {
 public:
  Params(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ValidationError(where_ + ": expected a mapping");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError(where_ + "." + key + ": wrong type");
    }
  }

  const Json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  Params sub(const std::string& key) {
    used_.insert(key);
    return Params(j_.contains(key) ? j_.at(key) : empty_, where_ + "." + key);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) throw ValidationError(where_ + ": unknown key '" + k + "'");
  }

 private:
  inline static const Json empty_ = Json::object();
  Json j_;
  std::string where_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

struct CsvTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct JsonlFile {
  std::string name;
  std::vector<Json> lines;
};

struct Output {
  std::vector<CsvTable> tables;
  std::vector<JsonlFile> jsonl;
  bool certified = true;
  std::string summary;
};

using Plan = std::function<Output()>;

std::string num(double v) { return format_double(v); }
std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

GibbsSpec spec_param(Params& p, const Json& fallback) {
  return spec_from_json(p.has("spec") ? p.raw("spec") : fallback);
}

SamplerConfig sampler_param(Params& p, std::uint64_t seed) {
  Params s = p.sub("sampler");
  SamplerConfig cfg;
  cfg.sweeps = s.get<std::int64_t>("sweeps", 20000);
  cfg.burnin = s.get<std::int64_t>("burnin", 2000);
  cfg.thin = s.get<std::int64_t>("thin", 1);
  cfg.chains = s.get<int>("chains", 4);
  cfg.keep_traces = s.get<bool>("keep_traces", false);
  cfg.seed = seed;
  s.finish();
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw ValidationError(std::string("params.sampler: ") + e.what());
  }
  require(cfg.chains >= 4, "params.sampler.chains: error bars need at least 4 chains");
  return cfg;
}

Plan plan_exact(Params& p) {
  const GibbsSpec spec = spec_param(p, Json{{"T", 2}, {"alpha", 0.5}});
  std::vector<Observable> obs;
  const Json list = p.has("observables") ? p.raw("observables") : Json::array({Json{{"kind", "endpoint_square"}}});
  require(list.is_array() && !list.empty(), "params.observables: expected a non-empty list");
  for (const auto& o : list) {
    obs.push_back(observable_from_json(o, spec.horizon));
    validate(obs.back(), spec.dimension, spec.horizon);
  }
  check_enumeration_capacity(spec);
  return [spec, obs] {
    const auto results = expectations(spec, obs);
    CsvTable t{"exact.csv", {"spec_hash", "observable", "value", "log_partition", "configurations"}, {}};
    const auto hash = spec_hash(spec);
    for (std::size_t i = 0; i < obs.size(); ++i)
      t.rows.push_back({hash, describe(obs[i]), num(results[i].value), num(results[i].log_partition),
                        std::to_string(results[i].config_count)});
    return Output{{t}, {}, true, "enumerated " + std::to_string(results.front().config_count) + " configurations"};
  };
}

Plan plan_transfer(Params& p) {
  const PairPotential potential =
      p.has("potential") ? potential_from_json(p.raw("potential")) : PairPotential::nearest_quadratic();
  const double amplitude = p.get<double>("amplitude", 1.0);
  const auto alphas = p.get<std::vector<double>>("alphas", {0.5});
  const auto horizons = p.get<std::vector<std::int64_t>>("horizons", {16});
  require(amplitude > 0.0, "params.amplitude: must be > 0");
  for (double a : alphas) require(a >= 0.0 && std::isfinite(a), "params.alphas: entries must be >= 0");
  for (auto t : horizons) require(t >= 1 && t <= 1000000, "params.horizons: entries must lie in 1..1e6");
  try {
    BandedTransferOperator op(potential, alphas.empty() ? 0.0 : alphas.front(), amplitude);
  } catch (const Error& e) {
    throw ValidationError(std::string("params.potential: ") + e.what());
  }
  return [=] {
    CsvTable t{"transfer.csv", {"alpha", "T", "msd", "msd_per_step"}, {}};
    for (double a : alphas)
      for (auto h : horizons) {
        const double m = banded_msd(potential, a, h, amplitude);
        t.rows.push_back({num(a), num(h), num(m), num(m / static_cast<double>(h))});
      }
    return Output{{t}, {}, true, std::to_string(t.rows.size()) + " transfer-matrix rows"};
  };
}

Plan plan_mcmc(Params& p, std::uint64_t seed) {
  const GibbsSpec spec = spec_param(p, Json{{"T", 8}, {"alpha", 0.25}});
  const Observable obs =
      observable_from_json(p.has("observable") ? p.raw("observable") : Json{{"kind", "endpoint_square"}}, spec.horizon);
  validate(obs, spec.dimension, spec.horizon);
  const SamplerConfig cfg = sampler_param(p, seed);
  check_sampler_budget(spec, cfg);
  return [=] {
    const Estimate e = sample_expectation(spec, obs, cfg);
    Output out;
    out.tables.push_back({"mcmc.csv",
                          {"spec_hash", "observable", "mean", "std_error", "n_samples", "tau_int", "acceptance_rate",
                           "chains"},
                          {{spec_hash(spec), describe(obs), num(e.mean), num(e.std_error), num(e.n_samples),
                            num(e.autocorrelation_time), num(e.acceptance_rate), num(cfg.chains)}}});
    if (cfg.keep_traces) {
      CsvTable tr{"mcmc_traces.csv", {"chain", "sweep", "value"}, {}};
      for (std::size_t c = 0; c < e.traces.size(); ++c)
        for (std::size_t s = 0; s < e.traces[c].size(); ++s)
          tr.rows.push_back({num(static_cast<int>(c)), num(cfg.burnin + static_cast<std::int64_t>(s + 1) * cfg.thin),
                             num(e.traces[c][s])});
      out.tables.push_back(std::move(tr));
    }
    out.summary = "mean " + num(e.mean) + " +/- " + num(e.std_error);
    return out;
  };
}

Plan plan_recursion(Params& p) {
  const double alpha = p.get<double>("alpha", 2.0);
  const double c = p.get<double>("c", 0.5);
  const int n_max = p.get<int>("n_max", 10);
  const bool clamped = p.get<bool>("clamped", true);
  require(alpha > 0.0 && std::isfinite(alpha), "params.alpha: must be > 0");
  require(c > 0.0 && std::isfinite(c), "params.c: must be > 0");
  require(n_max >= 1 && n_max <= 10000, "params.n_max: must lie in 1..10000");
  return [=] {
    CsvTable t{"recursion.csv", {"n", "V_n", "y_n", "log_V_n", "log_y_n"}, {}};
    for (const auto& s : iterate_recursion(alpha, c, n_max, clamped))
      t.rows.push_back({num(s.n), num(s.v), num(s.y), num(s.log_v), num(s.log_y)});
    return Output{{t}, {}, true, std::to_string(n_max) + " recursion levels"};
  };
}

Plan plan_tilt(Params& p) {
  const auto vs = p.get<std::vector<double>>("V", {1.0});
  const auto betas = p.get<std::vector<double>>("beta", {1.0});
  const double rel = p.get<double>("resolution", 1e-3);
  const int grid_points = p.get<int>("convexity_points", 64);
  for (double v : vs) require(v > 0.0 && std::isfinite(v), "params.V: entries must be > 0");
  for (double b : betas) require(b >= 0.0 && std::isfinite(b), "params.beta: entries must be >= 0");
  require(rel > 0.0 && rel <= 1e-3, "params.resolution: must lie in (0, 1e-3]");
  require(grid_points >= 3, "params.convexity_points: must be >= 3");
  return [=] {
    CsvTable t{"tilt.csv",
               {"V", "beta", "bound", "grid_min", "gap", "argmin_a", "argmin_b", "argmin_p", "beta_V", "certified",
                "convexity_pass"},
               {}};
    bool ok = true;
    for (double v : vs)
      for (double b : betas) {
        const auto bound = tanh_lower_bound(v, b);
        const auto mn = minimize_four_point(v, b, rel * v);
        int convex = -1;
        if (b > 0.0 && b * v < 2.0) {
          std::vector<double> grid;
          for (int i = 1; i <= grid_points; ++i) grid.push_back(4.0 * v * v * i / grid_points);
          convex = convexity_certificate(v, b, grid).pass ? 1 : 0;
        }
        const double gap = mn.value - bound.value;
        if (bound.certified && (gap < -kSlackTolerance || convex == 0)) ok = false;
        t.rows.push_back({num(v), num(b), num(bound.value), num(mn.value), num(gap), num(mn.argmin.a),
                          num(mn.argmin.b), num(mn.argmin.p), num(b * v), num(bound.certified ? 1 : 0), num(convex)});
      }
    return Output{{t}, {}, ok, ok ? "tanh bound holds on every certified row" : "tanh bound violated"};
  };
}

Plan plan_gks(Params& p, std::uint64_t seed) {
  const int pairs = p.get<int>("pair_instances", 500);
  const int omissions = p.get<int>("omission_instances", 200);
  const int max_spins = p.get<int>("max_spins", 10);
  const int max_horizon = p.get<int>("max_horizon", 8);
  require(pairs >= 0 && omissions >= 0, "params: instance counts must be >= 0");
  require(max_spins >= 2 && max_spins <= 20, "params.max_spins: must lie in 2..20");
  require(max_horizon >= 2 && max_horizon <= 20, "params.max_horizon: must lie in 2..20");
  return [=] {
    JsonlFile f{"gks.jsonl", {}};
    std::size_t failures = 0;
    double min_slack = 0.0;
    bool first = true;
    for (const auto& rep : {run_gks_pair_suite(pairs, seed, max_spins), run_omission_suite(omissions, seed + 1, max_horizon)}) {
      failures += rep.failures;
      for (const auto& c : rep.certificates) {
        min_slack = first ? c.slack : std::min(min_slack, c.slack);
        first = false;
        f.lines.push_back(to_json(c));
      }
    }
    return Output{{}, {f}, failures == 0,
                  std::to_string(f.lines.size()) + " certificates, " + std::to_string(failures) +
                      " failures, min slack " + num(min_slack)};
  };
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return v;
}

Plan plan_phase_diagram(Params& p) {
  const double a_lo = p.get<double>("alpha_min", 0.1), a_hi = p.get<double>("alpha_max", 3.0);
  const double c_lo = p.get<double>("c_min", 0.05), c_hi = p.get<double>("c_max", 0.95);
  const int na = p.get<int>("alpha_count", 20), nc = p.get<int>("c_count", 20);
  require(a_lo > 0.0 && a_hi >= a_lo, "params.alpha_min/alpha_max: need 0 < alpha_min <= alpha_max");
  require(c_lo > 0.0 && c_hi >= c_lo && c_hi < c_crit(), "params.c_min/c_max: need 0 < c_min <= c_max < c_crit");
  require(na >= 1 && nc >= 1 && na * nc <= 1000000, "params.alpha_count/c_count: need 1..1e6 grid points");
  return [=] {
    CsvTable t{"phase_diagram.csv", {"alpha", "c", "phase", "alpha_star", "ratio", "n_reached", "consistent"}, {}};
    bool ok = true;
    for (double c : linspace(c_lo, c_hi, nc))
      for (double a : linspace(a_lo, a_hi, na)) {
        const auto pt = classify_phase(a, c);
        ok = ok && pt.iteration_consistent;
        t.rows.push_back({num(a), num(c), to_string(pt.classification), num(alpha_star(c)), num(pt.ratio),
                          num(pt.n_reached), num(pt.iteration_consistent ? 1 : 0)});
      }
    return Output{{t}, {}, ok, ok ? "iteration agrees with the analytic threshold" : "iteration disagrees"};
  };
}

Plan plan_scaling_sweep(Params& p, std::uint64_t seed) {
  const PairPotential potential =
      p.has("potential") ? potential_from_json(p.raw("potential")) : PairPotential::power_law(2, 1.5);
  const double alpha = p.get<double>("alpha", 0.7);
  const auto horizons = p.get<std::vector<int>>("horizons", {16, 32, 64, 128});
  const SamplerConfig cfg = sampler_param(p, seed);
  require(potential.is_power_law(), "params.potential: scaling sweeps need a power-law potential");
  require(alpha >= 0.0 && std::isfinite(alpha), "params.alpha: must be >= 0");
  require(horizons.size() >= 2, "params.horizons: need at least two horizons");
  for (int h : horizons) {
    require(h >= 1 && (h & (h - 1)) == 0, "params.horizons: entries must be powers of two");
    GibbsSpec s;
    s.horizon = h;
    s.alpha = alpha;
    s.potential = potential;
    check_sampler_budget(s, cfg);
  }
  return [=] {
    const auto sweep = msd_scaling_sweep(potential, alpha, horizons, cfg);
    CsvTable t{"scaling_sweep.csv", {"T", "msd", "std_error", "n_samples", "tau_int", "acceptance_rate"}, {}};
    for (const auto& pt : sweep.points)
      t.rows.push_back({num(pt.horizon), num(pt.msd.mean), num(pt.msd.std_error), num(pt.msd.n_samples),
                        num(pt.msd.autocorrelation_time), num(pt.msd.acceptance_rate)});
    JsonlFile fit{"scaling_fit.jsonl",
                  {Json{{"slope", sweep.slope}, {"slope_std_error", sweep.slope_std_error}, {"label", sweep.label}}}};
    return Output{{t}, {fit}, true, "slope " + num(sweep.slope) + " +/- " + num(sweep.slope_std_error) + " (" +
                                        sweep.label + ")"};
  };
}

std::string rng_for(const std::string& kind) {
  return kind == "mcmc" || kind == "scaling-sweep" || kind == "gks" ? kGeneratorName : "none";
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& t, const std::string& header) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << header;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

void write_jsonl(const std::filesystem::path& path, const JsonlFile& f, const std::string& header) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  os << header;
  for (const auto& line : f.lines) os << line.dump() << '\n';
}

}  // namespace

Json yaml_to_json(const std::string& text) {
  try {
    return node_to_json(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

ExperimentConfig config_from_json(const Json& j) {
  Params top(j, "config");
  ExperimentConfig cfg;
  cfg.kind = top.get<std::string>("kind", "");
  cfg.seed = top.get<std::uint64_t>("seed", 0);
  cfg.workers = top.get<int>("workers", 0);
  cfg.out = top.get<std::string>("out", "results");
  cfg.params = top.has("params") ? top.raw("params") : Json::object();
  top.finish();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (path.extension() == ".json" || (first != std::string::npos && text[first] == '{')) {
    try {
      return config_from_json(Json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("config: ") + e.what());
    }
  }
  return config_from_json(yaml_to_json(text));
}

std::string config_hash(const ExperimentConfig& cfg) {
  const Json canon{{"kind", cfg.kind}, {"params", cfg.params}, {"seed", cfg.seed}};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canon.dump())));
  return buf;
}

std::string csv_metadata(const ExperimentConfig& cfg, const std::string& rng) {
  std::ostringstream os;
  os << "# artifact_version: " << kArtifactVersion << '\n'
     << "# kind: " << cfg.kind << '\n'
     << "# config_hash: " << config_hash(cfg) << '\n'
     << "# seed: " << cfg.seed << '\n'
     << "# rng: " << rng << '\n'
     << "# timestamp: " << timestamp_utc() << '\n';
  return os.str();
}

std::string jsonl_metadata(const ExperimentConfig& cfg, const std::string& rng) {
  const Json meta{{"metadata",
                   {{"artifact_version", kArtifactVersion},
                    {"kind", cfg.kind},
                    {"config_hash", config_hash(cfg)},
                    {"seed", cfg.seed},
                    {"rng", rng}}}};
  const Json ts{{"timestamp", timestamp_utc()}};
  return meta.dump() + '\n' + ts.dump() + '\n';
}

RunOutcome run(const ExperimentConfig& cfg, std::ostream& log) {
  RunOutcome outcome;
  Plan plan;
  try {
    require(std::find(experiment_kinds().begin(), experiment_kinds().end(), cfg.kind) != experiment_kinds().end(),
            "config.kind: unknown experiment kind '" + cfg.kind + "'");
    require(cfg.workers >= 0, "config.workers: must be >= 0");
    Params p(cfg.params, "params");
    if (cfg.kind == "exact") plan = plan_exact(p);
    else if (cfg.kind == "transfer") plan = plan_transfer(p);
    else if (cfg.kind == "mcmc") plan = plan_mcmc(p, cfg.seed);
    else if (cfg.kind == "recursion") plan = plan_recursion(p);
    else if (cfg.kind == "tilt") plan = plan_tilt(p);
    else if (cfg.kind == "gks") plan = plan_gks(p, cfg.seed);
    else if (cfg.kind == "phase-diagram") plan = plan_phase_diagram(p);
    else plan = plan_scaling_sweep(p, cfg.seed);
    p.finish();
  } catch (const Error& e) {
    outcome.exit_code = 2;
    outcome.message = std::string("validation failed: ") + e.what();
    log << outcome.message << '\n';
    return outcome;
  }

  if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
  Output out;
  try {
    out = plan();
  } catch (const NumericError& e) {
    outcome.exit_code = 1;
    outcome.message = std::string("numeric failure: ") + e.what();
    log << outcome.message << '\n';
    return outcome;
  } catch (const Error& e) {
    outcome.exit_code = 2;
    outcome.message = std::string("precondition violated: ") + e.what();
    log << outcome.message << '\n';
    return outcome;
  }

  std::filesystem::create_directories(cfg.out);
  const std::string rng = rng_for(cfg.kind);
  for (const auto& t : out.tables) {
    const auto path = cfg.out / t.name;
    write_csv(path, t, csv_metadata(cfg, rng));
    outcome.files.push_back(path);
  }
  for (const auto& f : out.jsonl) {
    const auto path = cfg.out / f.name;
    write_jsonl(path, f, jsonl_metadata(cfg, rng));
    outcome.files.push_back(path);
  }
  outcome.exit_code = out.certified ? 0 : 1;
  outcome.message = cfg.kind + ": " + out.summary;
  log << outcome.message << '\n';
  for (const auto& f : outcome.files) log << "  wrote " << f.string() << '\n';
  return outcome;
}

std::string output_columns_help() {
  return "Output files (CSV cells carry 17 significant digits; '#' lines hold metadata):\n"
         "  exact          exact.csv: spec_hash,observable,value,log_partition,configurations\n"
         "  transfer       transfer.csv: alpha,T,msd,msd_per_step\n"
         "  mcmc           mcmc.csv: spec_hash,observable,mean,std_error,n_samples,tau_int,acceptance_rate,chains\n"
         "                 mcmc_traces.csv (keep_traces): chain,sweep,value\n"
         "  recursion      recursion.csv: n,V_n,y_n,log_V_n,log_y_n\n"
         "  tilt           tilt.csv: V,beta,bound,grid_min,gap,argmin_a,argmin_b,argmin_p,beta_V,certified,"
         "convexity_pass\n"
         "  gks-check      gks.jsonl: one certificate per line\n"
         "  phase-diagram  phase_diagram.csv: alpha,c,phase,alpha_star,ratio,n_reached,consistent\n"
         "  scaling-sweep  scaling_sweep.csv: T,msd,std_error,n_samples,tau_int,acceptance_rate\n"
         "                 scaling_fit.jsonl: slope,slope_std_error,label\n";
}

}  // namespace repwalk

#include "degtest/cli.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "degtest/calibration.hpp"
#include "degtest/divergence.hpp"
#include "degtest/experiments.hpp"

namespace degtest::cli {

namespace {

Field num(std::string name, double v, std::string help) { return {std::move(name), Kind::number, v, false, std::move(help)}; }
Field integer(std::string name, std::int64_t v, std::string help) {
  return {std::move(name), Kind::integer, v, false, std::move(help)};
}
Field str(std::string name, std::string v, std::string help) {
  return {std::move(name), Kind::string, std::move(v), false, std::move(help)};
}
Field required(std::string name, Kind kind, std::string help) { return {std::move(name), kind, nullptr, false, std::move(help)}; }
Field derived(std::string name, Kind kind, std::string help) { return {std::move(name), kind, nullptr, true, std::move(help)}; }

const std::map<std::string, std::vector<Field>>& schema() {
  static const std::map<std::string, std::vector<Field>> table{
      {"sample",
       {required("model", Kind::string, "model JSON to sample from"), integer("m", 1000, "number of samples")}},
      {"learn",
       {required("truth", Kind::string, "model JSON generating the samples"),
        derived("graph", Kind::string, "dag or model JSON to learn on (default: the truth's dag)"),
        num("eps", 0.25, "accuracy parameter"),
        derived("degree", Kind::integer, "in-degree bound d (default: the dag's max in-degree)")}},
      {"support",
       {required("truth", Kind::string, "model JSON generating the samples"),
        derived("graph", Kind::string, "dag or model JSON (default: the truth's dag)"),
        num("eps", 0.25, "accuracy parameter"),
        derived("degree", Kind::integer, "in-degree bound d (default: the dag's max in-degree)")}},
      {"test",
       {derived("graph", Kind::string, "dag or model JSON to test against"),
        derived("all_degree", Kind::integer, "test every dag of this in-degree bound instead of one graph"),
        derived("truth", Kind::string, "model JSON generating the samples (default: the --graph model)"),
        num("eps", 0.25, "distance parameter"), str("mode", "hellinger", "hellinger or tv")}},
      {"minimax",
       {integer("n", 12, "number of bits"), num("eps", 0.1, "target accuracy"),
        derived("m", Kind::integer, "samples per trial (default: floor(2^(n/2) / (4 eps)))"),
        integer("trials", 200, "number of trials"), str("learner", "addk", "ignorant, addk, empirical or nearproper"),
        num("k", 1.0, "smoothing of the addk learner"),
        derived("eps0", Kind::number, "rare-bit probability (default: 2 eps / 2^(n/2))")}},
      {"risk",
       {str("target", "uniform", "uniform, zipf or step"), integer("size", 64, "alphabet size"),
        num("eps", 0.1, "accuracy parameter"), num("delta", 0.01, "failure probability"),
        num("C", 1.0, "sample-size multiplier"),
        derived("n_samples", Kind::integer, "samples per trial (default: ceil(C (size/eps) ln(size/delta)))"),
        derived("k", Kind::number, "smoothing (default: choose_k(delta, c_K))"),
        integer("trials", 1000, "number of trials")}},
      {"distances",
       {required("p", Kind::string, "first model JSON"), required("q", Kind::string, "second model JSON"),
        derived("mask", Kind::string, "mask JSON on p's dag for restricted divergences")}},
      {"calibrate",
       {str("target", "all", "gamma, c_acc, C_rec, c_K-check or all"),
        derived("budget", Kind::integer, "trials per protocol arm (default: per target)"),
        derived("file", Kind::string, "calibration JSON to update (default: <out>/calibration.json)")}},
      {"enumerate-dags", {integer("n", 3, "number of nodes"), integer("d", 1, "in-degree bound")}},
  };
  return table;
}

Json to_typed(const Field& f, const Json& v) {
  if (v.is_null()) return v;
  switch (f.kind) {
    case Kind::number:
      if (!v.is_number()) throw ConfigError("field '" + f.name + "' must be a number");
      return v.get<double>();
    case Kind::integer:
      if (!v.is_number_integer()) throw ConfigError("field '" + f.name + "' must be an integer");
      return v;
    case Kind::string:
      if (!v.is_string()) throw ConfigError("field '" + f.name + "' must be a string");
      return v;
  }
  return v;
}

Json resolve_block(const std::vector<Field>& fields, const Json& given, const std::string& what) {
  if (!given.is_null() && !given.is_object()) throw ConfigError(what + " must be an object");
  Json out = Json::object();
  if (given.is_object()) {
    for (const auto& [key, value] : given.items()) {
      bool known = false;
      for (const auto& f : fields) known = known || f.name == key;
      if (!known) throw ConfigError(what + ": unknown field '" + key + "'");
    }
  }
  for (const auto& f : fields) {
    const Json v = given.is_object() && given.contains(f.name) ? given.at(f.name) : f.fallback;
    if (v.is_null() && !f.derived) throw ConfigError(what + ": missing required field '" + f.name + "'");
    out[f.name] = to_typed(f, v);
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_eps(const Json& block) {
  if (block.contains("eps")) {
    const double e = block["eps"].get<double>();
    require(e > 0.0 && e < 1.0, "eps must lie in (0, 1)");
  }
}

void check_positive_int(const Json& block, const char* key) {
  if (block.contains(key) && !block[key].is_null()) require(block[key].get<std::int64_t>() > 0, std::string(key) + " must be positive");
}

void check_ranges(const std::string& command, const Json& p) {
  check_eps(p);
  for (const char* key : {"m", "trials", "size", "n_samples", "budget"}) check_positive_int(p, key);
  if (command == "test") {
    parse_mode(p["mode"].get<std::string>());
    require(p["graph"].is_null() != p["all_degree"].is_null(), "test needs exactly one of graph and all_degree");
    if (!p["all_degree"].is_null()) {
      require(p["all_degree"].get<std::int64_t>() >= 0, "all_degree must be non-negative");
      require(!p["truth"].is_null(), "test with all_degree needs truth");
    }
  } else if (command == "minimax") {
    require(p["n"].get<std::int64_t>() >= 2 && p["n"].get<std::int64_t>() <= kDefaultOracleCap, "n must lie in [2, 20]");
    parse_learner(p["learner"].get<std::string>());
    require(p["k"].get<double>() >= 0.0, "k must be non-negative");
    if (!p["eps0"].is_null()) {
      const double e0 = p["eps0"].get<double>();
      require(e0 > 0.0 && e0 < 1.0, "eps0 must lie in (0, 1)");
    }
  } else if (command == "risk") {
    suites::risk_target(p["target"].get<std::string>(), 2);
    const double delta = p["delta"].get<double>();
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    require(p["C"].get<double>() > 0.0, "C must be positive");
    if (!p["k"].is_null()) require(p["k"].get<double>() >= 0.0, "k must be non-negative");
  } else if (command == "calibrate") {
    const auto t = p["target"].get<std::string>();
    const auto all = calibration_targets();
    require(t == "all" || std::find(all.begin(), all.end(), t) != all.end(), "unknown calibration target '" + t + "'");
  } else if (command == "enumerate-dags") {
    require(p["n"].get<std::int64_t>() >= 1 && p["n"].get<std::int64_t>() <= 5, "n must lie in [1, 5]");
    require(p["d"].get<std::int64_t>() >= 0, "d must be non-negative");
  } else if (command == "learn" || command == "support") {
    if (!p["degree"].is_null()) require(p["degree"].get<std::int64_t>() >= 0, "degree must be non-negative");
  }
}

// ---------------------------------------------------------------- helpers

Dag dag_from_json(const Json& j) {
  if (j.contains("cpt")) return model_from_json(j).dag;
  for (const auto& [key, value] : j.items()) {
    if (key != "n" && key != "parents" && key != "provenance") throw FormatError("dag: unknown field '" + key + "'");
  }
  Dag dag{j.at("n").get<int>(), j.at("parents").get<std::vector<std::vector<int>>>()};
  const auto problems = validate(dag, dag.n);
  if (!problems.empty()) throw FormatError("dag: " + problems.front());
  return dag;
}

Json with_provenance(Json body, const Json& config) {
  Json out{{"config", config}};
  for (auto& [key, value] : body.items()) out[key] = value;
  return out;
}

Json model_with_provenance(const BayesNetModel& net, const Json& config) {
  Json j = model_to_json(net);
  j["provenance"] = config;
  return j;
}

Json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

LearnerConfig learner_config(const ExperimentConfig& cfg, double eps, const Json& degree) {
  LearnerConfig lc;
  lc.epsilon = eps;
  lc.c = cfg.constants["c"].get<double>();
  lc.m1_multiplier = cfg.constants["m1_multiplier"].get<double>();
  lc.m2_multiplier = cfg.constants["m2_multiplier"].get<double>();
  if (!degree.is_null()) lc.degree_bound = degree.get<int>();
  lc.validate();
  return lc;
}

TesterConfig tester_config(const ExperimentConfig& cfg) {
  TesterConfig tc;
  tc.epsilon = cfg.params["eps"].get<double>();
  tc.gamma = cfg.constants["gamma"].get<double>();
  tc.m_multiplier = cfg.constants["m_multiplier"].get<double>();
  tc.c_amp = cfg.constants["c_amp"].get<double>();
  tc.mode = parse_mode(cfg.params["mode"].get<std::string>());
  tc.learner = learner_config(cfg, tc.epsilon, nullptr);
  tc.validate();
  return tc;
}

// ---------------------------------------------------------------- commands

int run_sample(const ExperimentConfig& cfg, const Json& config, std::ostream& out) {
  const BayesNetModel net = model_from_json(read_json(cfg.params["model"].get<std::string>()));
  const auto m = cfg.params["m"].get<std::size_t>();
  const auto draws = sample(net, m, cfg.seed);
  std::ostringstream csv;
  for (int i = 0; i < net.n(); ++i) csv << (i ? "," : "") << 'x' << i;
  csv << '\n';
  for (const Assignment x : draws) {
    for (int i = 0; i < net.n(); ++i) csv << (i ? "," : "") << bit(x, i);
    csv << '\n';
  }
  const auto path = cfg.output_dir / "samples.csv";
  write_text(path, csv_with_provenance(config, csv.str()));
  out << with_provenance({{"samples", m}, {"file", path.string()}}, config).dump() << '\n';
  return kExitAccept;
}

struct LearnInputs {
  BayesNetModel truth;
  Dag dag;
  LearnerConfig lc;
};

LearnInputs learn_inputs(const ExperimentConfig& cfg) {
  LearnInputs in{model_from_json(read_json(cfg.params["truth"].get<std::string>())), Dag::empty(1), {}};
  in.dag = cfg.params["graph"].is_null() ? in.truth.dag : dag_from_json(read_json(cfg.params["graph"].get<std::string>()));
  if (in.dag.n != in.truth.n()) throw ConfigError("graph and truth have different dimensions");
  in.lc = learner_config(cfg, cfg.params["eps"].get<double>(), cfg.params["degree"]);
  const auto problems = validate(in.dag, in.lc.degree_for(in.dag));
  if (!problems.empty()) throw ConfigError("graph violates the degree bound: " + problems.front());
  return in;
}

Json mask_oracles(const BayesNetModel& truth, const SupportMask& mask) {
  if (truth.n() > kDefaultOracleCap) return nullptr;
  const DenseDistribution p = exact_distribution(truth);
  return {{"truth_mass_on_support", mass_on(p.mass, support_subset(mask))}};
}

void echo_derived(const LearnInputs& in, Json& block) {
  block["degree"] = in.lc.degree_for(in.dag);
}

int run_support(const ExperimentConfig& cfg, Json& config, std::ostream& out) {
  const LearnInputs in = learn_inputs(cfg);
  echo_derived(in, config["support"]);
  const NetSampler source(in.truth);
  Rng rng(cfg.seed);
  const SupportMask mask = identify_support(source, in.dag, in.lc, rng);
  Json mj = mask_to_json(mask);
  mj["provenance"] = config;
  write_json(cfg.output_dir / "mask.json", mj);
  const int d = in.lc.degree_for(in.dag);
  Json report{{"support_samples", support_sample_size(in.dag.n, d, in.lc)},
              {"threshold", exclusion_threshold(in.dag.n, d, in.lc)},
              {"excluded_pairs", mask.excluded().size()},
              {"oracle", mask_oracles(in.truth, mask)}};
  report = with_provenance(report, config);
  write_json(cfg.output_dir / "support_report.json", report);
  out << report.dump() << '\n';
  return kExitAccept;
}

int run_learn(const ExperimentConfig& cfg, Json& config, std::ostream& out) {
  const LearnInputs in = learn_inputs(cfg);
  echo_derived(in, config["learn"]);
  const NetSampler source(in.truth);
  const NearProperResult r = near_proper_learn(source, in.dag, in.lc, Rng(cfg.seed));
  write_json(cfg.output_dir / "learned_model.json", model_with_provenance(r.q, config));
  Json mj = mask_to_json(r.mask);
  mj["provenance"] = config;
  write_json(cfg.output_dir / "mask.json", mj);

  Json report{{"support_samples", r.support_samples}, {"learn_samples", r.learn_samples}, {"k", r.k},
              {"excluded_pairs", r.mask.excluded().size()}};
  try {
    const BayesNetModel shifted = mass_shift(r.q, r.mask);
    write_json(cfg.output_dir / "shifted_model.json", model_with_provenance(shifted, config));
    report["mass_shift"] = "ok";
  } catch (const std::domain_error& e) {
    report["mass_shift"] = std::string("failed: ") + e.what();
  }
  if (in.truth.n() <= kDefaultOracleCap) {
    const DenseDistribution p = exact_distribution(in.truth);
    const DenseDistribution q = exact_distribution(r.q);
    const Subset s = support_subset(r.mask);
    report["oracle"] = {{"truth_mass_on_support", mass_on(p.mass, s)},
                        {"chi2_restricted", finite_or_string(chi2_restricted(p.mass, q.mass, s))},
                        {"tv", tv(p, q)},
                        {"hellinger_sq", hellinger_sq(p, q)}};
  }
  report = with_provenance(report, config);
  write_json(cfg.output_dir / "learn_report.json", report);
  out << report.dump() << '\n';
  return kExitAccept;
}

int run_test(const ExperimentConfig& cfg, const Json& config, std::ostream& out) {
  const TesterConfig tc = tester_config(cfg);
  const Json& p = cfg.params;
  Json report;
  bool accept = false;
  if (!p["all_degree"].is_null()) {
    const BayesNetModel truth = model_from_json(read_json(p["truth"].get<std::string>()));
    const int d = p["all_degree"].get<int>();
    const DegreeTestReport r = test_degree(NetSampler(truth), truth.n(), d, tc, cfg.seed);
    accept = r.accept;
    report = to_json(r);
  } else {
    const Json graph_json = read_json(p["graph"].get<std::string>());
    const Dag dag = dag_from_json(graph_json);
    const BayesNetModel truth =
        p["truth"].is_null() ? model_from_json(graph_json) : model_from_json(read_json(p["truth"].get<std::string>()));
    if (truth.n() != dag.n) throw ConfigError("graph and truth have different dimensions");
    TestReport r = test_graph(NetSampler(truth), dag, tc, cfg.seed);
    r.graph_id = p["graph"].get<std::string>();
    accept = r.accept;
    report = to_json(r);
  }
  report = with_provenance(report, config);
  write_json(cfg.output_dir / "test_report.json", report);
  out << report.dump() << '\n';
  return accept ? kExitAccept : kExitReject;
}

int run_minimax(const ExperimentConfig& cfg, Json& config, std::ostream& out) {
  Json& p = config["minimax"];
  const int n = p["n"].get<int>();
  const double eps = p["eps"].get<double>();
  if (p["m"].is_null()) p["m"] = lower_bound_sample_size(n, eps);
  if (p["eps0"].is_null()) p["eps0"] = default_eps0(n, eps);
  const double eps0 = p["eps0"].get<double>();
  const auto kind = parse_learner(p["learner"].get<std::string>());
  MinimaxLearner learner;
  switch (kind) {
    case LearnerKind::ignorant: learner = ignorant_learner(eps0); break;
    case LearnerKind::addk: learner = addk_learner(p["k"].get<double>()); break;
    case LearnerKind::empirical: learner = empirical_learner(); break;
    case LearnerKind::nearproper: learner = nearproper_learner(learner_config(cfg, eps, nullptr)); break;
  }
  const MinimaxReport r = minimax_experiment(learner, to_string(kind), n, eps, p["m"].get<std::size_t>(),
                                             p["trials"].get<std::size_t>(), cfg.seed, eps0);
  write_text(cfg.output_dir / "minimax_trials.csv", csv_with_provenance(config, minimax_csv(r)));
  const Json summary = with_provenance(summary_json(r), config);
  write_json(cfg.output_dir / "minimax_summary.json", summary);
  out << summary.dump() << '\n';
  return kExitAccept;
}

int run_risk(const ExperimentConfig& cfg, Json& config, std::ostream& out) {
  Json& p = config["risk"];
  const auto size = p["size"].get<std::size_t>();
  const double eps = p["eps"].get<double>();
  const double delta = p["delta"].get<double>();
  if (p["n_samples"].is_null()) p["n_samples"] = suites::risk_sample_size(p["C"].get<double>(), size, eps, delta);
  if (p["k"].is_null()) p["k"] = static_cast<double>(choose_k(delta, cfg.constants["c_K"].get<double>()));
  const RiskReport r =
      high_prob_risk_experiment(suites::risk_target(p["target"].get<std::string>(), size), p["n_samples"].get<std::size_t>(),
                                p["k"].get<double>(), p["trials"].get<std::size_t>(), delta, cfg.seed, 1.0);
  Json summary = summary_json(r);
  summary["fraction_above_eps"] = r.fraction_above(eps);
  summary = with_provenance(summary, config);
  write_text(cfg.output_dir / "risk_trials.csv", csv_with_provenance(config, risk_csv(r)));
  write_json(cfg.output_dir / "risk_summary.json", summary);
  out << summary.dump() << '\n';
  return kExitAccept;
}

int run_distances(const ExperimentConfig& cfg, const Json& config, std::ostream& out) {
  const BayesNetModel pm = model_from_json(read_json(cfg.params["p"].get<std::string>()));
  const BayesNetModel qm = model_from_json(read_json(cfg.params["q"].get<std::string>()));
  if (pm.n() != qm.n()) throw ConfigError("p and q have different dimensions");
  const DenseDistribution p = exact_distribution(pm);
  const DenseDistribution q = exact_distribution(qm);
  Json report{{"tv", tv(p, q)},
              {"kl", finite_or_string(kl(p, q))},
              {"hellinger_sq", hellinger_sq(p, q)},
              {"chi2", finite_or_string(chi2(p, q))}};
  if (!cfg.params["mask"].is_null()) {
    const SupportMask mask = mask_from_json(read_json(cfg.params["mask"].get<std::string>()), pm.dag);
    const Subset s = support_subset(mask);
    const auto split = hellinger_sq_split(p.mass, q.mass, s);
    Json restricted{{"p_mass", mass_on(p.mass, s)}, {"q_mass", mass_on(q.mass, s)},
                    {"tv_restricted", tv_restricted(p.mass, q.mass, s)},
                    {"hellinger_sq_on", split.on_subset}, {"hellinger_sq_off", split.off_subset}};
    try {
      restricted["chi2_restricted"] = chi2_restricted(p.mass, q.mass, s);
    } catch (const std::domain_error& e) {
      restricted["chi2_restricted"] = std::string("undefined: ") + e.what();
    }
    report["restricted"] = restricted;
  }
  report = with_provenance(report, config);
  write_json(cfg.output_dir / "distances.json", report);
  out << report.dump() << '\n';
  return kExitAccept;
}

int run_calibrate(const ExperimentConfig& cfg, Json& config, std::ostream& out) {
  Json& p = config["calibrate"];
  if (p["file"].is_null()) p["file"] = (cfg.output_dir / "calibration.json").string();
  const std::filesystem::path file = p["file"].get<std::string>();
  const std::string target = p["target"].get<std::string>();
  const std::vector<std::string> targets = target == "all" ? calibration_targets() : std::vector<std::string>{target};

  Json calibration = std::filesystem::exists(file) ? read_json(file) : Json::object();
  Json summary = Json::object();
  for (const auto& t : targets) {
    const std::size_t budget = p["budget"].is_null() ? default_budget(t) : p["budget"].get<std::size_t>();
    Json record = calibrate(t, budget, cfg.seed);
    record["config"] = config;
    summary[t] = record["value"];
    calibration[t] = std::move(record);
  }
  write_json(file, calibration);
  out << with_provenance({{"file", file.string()}, {"values", summary}}, config).dump() << '\n';
  return kExitAccept;
}

int run_enumerate(const ExperimentConfig& cfg, const Json& config, std::ostream& out) {
  const auto dags = enumerate_dags(cfg.params["n"].get<int>(), cfg.params["d"].get<int>());
  Json list = Json::array();
  for (const auto& dag : dags) list.push_back(dag.parents);
  const Json report = with_provenance({{"count", dags.size()}, {"dags", list}}, config);
  write_json(cfg.output_dir / "dags.json", report);
  out << with_provenance({{"count", dags.size()}}, config).dump() << '\n';
  return kExitAccept;
}

}  // namespace

std::vector<std::string> commands() {
  std::vector<std::string> out;
  for (const auto& [name, fields] : schema()) out.push_back(name);
  return out;
}

const std::vector<Field>& command_fields(const std::string& command) {
  const auto it = schema().find(command);
  if (it == schema().end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

const std::vector<Field>& constant_fields() {
  static const std::vector<Field> fields{
      num("c", 1.0, "support-identification constant"),
      num("c_K", 1.0, "smoothing multiplier in choose_k"),
      num("gamma", kCalibratedGamma, "tester acceptance multiplier"),
      num("m1_multiplier", 3.0, "support-identification sample multiplier"),
      num("m2_multiplier", 4.0, "learning sample multiplier"),
      num("m_multiplier", 1.0, "tester sample multiplier"),
      num("c_amp", 2.0, "amplification constant"),
  };
  return fields;
}

Json parse_field_value(const Field& field, const std::string& text) {
  try {
    std::size_t used = 0;
    switch (field.kind) {
      case Kind::number: {
        const double v = std::stod(text, &used);
        if (used != text.size()) break;
        return v;
      }
      case Kind::integer: {
        const long long v = std::stoll(text, &used);
        if (used != text.size()) break;
        return v;
      }
      case Kind::string:
        return text;
    }
  } catch (const std::logic_error&) {
  }
  throw ConfigError("invalid value '" + text + "' for " + field.name);
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  if (!j.contains("command") || !j["command"].is_string()) throw ConfigError("config needs a string 'command'");
  cfg.command = j["command"].get<std::string>();
  command_fields(cfg.command);
  for (const auto& [key, value] : j.items()) {
    if (key == "command" || key == "seed" || key == "output_dir" || key == "constants") continue;
    if (!schema().contains(key)) throw ConfigError("unknown field '" + key + "'");
    resolve_block(command_fields(key), value, key);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
      throw ConfigError("seed must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  } else {
    cfg.seed = cfg.command == "calibrate" ? kDefaultCalibrationSeed : 0;
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("output_dir must be a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  cfg.constants = resolve_block(constant_fields(), j.contains("constants") ? j["constants"] : Json(nullptr), "constants");
  for (const auto& [key, value] : cfg.constants.items())
    require(value.get<double>() > 0.0, "constant " + key + " must be positive");
  cfg.params = resolve_block(command_fields(cfg.command), j.contains(cfg.command) ? j[cfg.command] : Json(nullptr),
                             cfg.command);
  check_ranges(cfg.command, cfg.params);
  return cfg;
}

Json ExperimentConfig::to_json() const {
  return {{"command", command},
          {"seed", seed},
          {"output_dir", output_dir.string()},
          {"constants", constants},
          {command, params}};
}

Json error_json(const std::string& kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

int run(const ExperimentConfig& config, std::ostream& out) {
  try {
    Json resolved = config.to_json();
    const std::string& c = config.command;
    if (c == "sample") return run_sample(config, resolved, out);
    if (c == "learn") return run_learn(config, resolved, out);
    if (c == "support") return run_support(config, resolved, out);
    if (c == "test") return run_test(config, resolved, out);
    if (c == "minimax") return run_minimax(config, resolved, out);
    if (c == "risk") return run_risk(config, resolved, out);
    if (c == "distances") return run_distances(config, resolved, out);
    if (c == "calibrate") return run_calibrate(config, resolved, out);
    if (c == "enumerate-dags") return run_enumerate(config, resolved, out);
    throw ConfigError("unknown command '" + c + "'");
  } catch (const CalibrationError& e) {
    Json err = error_json("calibration", e.what());
    err["diagnostics"] = e.diagnostics();
    out << err.dump() << '\n';
  } catch (const ConfigError& e) {
    out << error_json("config", e.what()).dump() << '\n';
  } catch (const FormatError& e) {
    out << error_json("format", e.what()).dump() << '\n';
  } catch (const CycleError& e) {
    out << error_json("cycle", e.what()).dump() << '\n';
  } catch (const std::exception& e) {
    out << error_json("runtime", e.what()).dump() << '\n';
  }
  return kExitError;
}

int run_json(const Json& config, std::ostream& out) {
  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::from_json(config);
  } catch (const ConfigError& e) {
    out << error_json("config", e.what()).dump() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    out << error_json("config", e.what()).dump() << '\n';
    return kExitError;
  }
  return run(cfg, out);
}

}  // namespace degtest::cli

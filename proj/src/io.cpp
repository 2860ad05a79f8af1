#include "degtest/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace degtest {

namespace {

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw FormatError(std::string(what) + ": unknown field '" + key + "'");
  }
}

Json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Json model_to_json(const BayesNetModel& net) {
  Json j;
  j["n"] = net.dag.n;
  j["parents"] = net.dag.parents;
  j["cpt"] = net.cpt;
  return j;
}

BayesNetModel model_from_json(const Json& j) {
  reject_unknown_keys(j, {"n", "parents", "cpt", "provenance"}, "model");
  BayesNetModel net;
  try {
    net.dag.n = j.at("n").get<int>();
    net.dag.parents = j.at("parents").get<std::vector<std::vector<int>>>();
    net.cpt = j.at("cpt").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
  if (net.dag.n < 0) throw FormatError("model: n must be nonnegative");
  const auto issues = validate(net, net.dag.n);
  if (!issues.empty()) throw FormatError("model: " + issues.front());
  return net;
}

Json mask_to_json(const SupportMask& mask) {
  Json excluded = Json::array();
  for (const auto& e : mask.excluded()) excluded.push_back({e.node, e.value, e.config});
  Json j;
  j["excluded"] = std::move(excluded);
  return j;
}

SupportMask mask_from_json(const Json& j, const Dag& dag) {
  reject_unknown_keys(j, {"excluded", "provenance"}, "mask");
  SupportMask mask(dag);
  try {
    for (const auto& triple : j.at("excluded")) {
      if (!triple.is_array() || triple.size() != 3) throw FormatError("mask: each entry must be [node, value, config]");
      mask.exclude(triple[0].get<int>(), triple[1].get<int>(), triple[2].get<std::size_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("mask: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(std::string("mask: ") + e.what());
  }
  return mask;
}

Json to_json(const TestReport& r) {
  Json j;
  j["verdict"] = r.accept ? "accept" : "reject";
  j["statistic"] = finite_or_string(r.statistic);
  j["threshold"] = r.threshold;
  j["m"] = r.m;
  j["poissonized_count"] = r.poissonized_count;
  j["out_of_support"] = r.out_of_support;
  j["seed"] = r.seed;
  j["stream"] = r.stream;
  j["graph_id"] = r.graph_id;
  j["n"] = r.n;
  j["d"] = r.d;
  j["epsilon"] = r.epsilon;
  j["mode"] = to_string(r.mode);
  j["mass_shift_applied"] = r.mass_shift_applied;
  j["support_samples"] = r.support_samples;
  j["learn_samples"] = r.learn_samples;
  return j;
}

Json to_json(const DegreeTestReport& r) {
  Json j;
  j["verdict"] = r.accept ? "accept" : "reject";
  j["n"] = r.n;
  j["d"] = r.d;
  j["epsilon"] = r.epsilon;
  j["mode"] = to_string(r.mode);
  j["seed"] = r.seed;
  j["dags_total"] = r.dags_total;
  j["reps"] = r.reps;
  if (r.accepting_dag) {
    j["accepting_index"] = *r.accepting_index;
    j["accepting_dag"] = {{"n", r.accepting_dag->n}, {"parents", r.accepting_dag->parents}};
  } else {
    j["accepting_index"] = nullptr;
    j["accepting_dag"] = nullptr;
  }
  Json tried = Json::array();
  for (const auto& t : r.tried)
    tried.push_back({{"dag_index", t.dag_index}, {"accepts", t.verdict.accepts}, {"reps", t.verdict.reps}});
  j["tried"] = std::move(tried);
  return j;
}

Json to_json(const RecurrenceAudit& audit) {
  Json steps = Json::array();
  for (const auto& s : audit.steps)
    steps.push_back({{"k", s.k},
                     {"divergence", s.divergence},
                     {"expanded", s.expanded},
                     {"p_mass", s.p_mass},
                     {"q_mass", s.q_mass},
                     {"bound", s.bound},
                     {"gap", s.gap},
                     {"flagged", s.flagged}});
  Json j;
  j["c_rec"] = audit.c_rec;
  j["required_c_rec"] = audit.required_c_rec;
  j["any_flagged"] = audit.any_flagged();
  j["steps"] = std::move(steps);
  return j;
}

Json summary_json(const RiskReport& r) {
  Json j;
  j["domain_size"] = r.domain_size;
  j["n_samples"] = r.n_samples;
  j["k"] = r.k;
  j["delta"] = r.delta;
  j["seed"] = r.seed;
  j["trials"] = r.chi2.size();
  j["bound_multiple"] = r.bound_multiple;
  j["bound"] = r.bound;
  j["quantile"] = finite_or_string(r.quantile);
  j["mean"] = finite_or_string(r.mean);
  j["exceed_fraction"] = r.exceed_fraction;
  return j;
}

Json summary_json(const MinimaxReport& r) {
  Json j;
  j["n"] = r.n;
  j["epsilon"] = r.epsilon;
  j["eps0"] = r.eps0;
  j["m"] = r.m_samples;
  j["trials"] = r.trials.size();
  j["seed"] = r.seed;
  j["learner"] = r.learner;
  j["mean_risk"] = finite_or_string(r.mean_risk);
  j["median_risk"] = finite_or_string(r.median_risk);
  j["q90_risk"] = finite_or_string(r.q90_risk);
  j["no_rare_fraction"] = r.no_rare_fraction;
  j["no_rare_expected"] = r.no_rare_expected;
  j["no_rare_std_error"] = r.no_rare_std_error;
  return j;
}

std::string risk_csv(const RiskReport& r) {
  std::ostringstream os;
  os << "trial_index,seed,chi2\n";
  for (std::size_t t = 0; t < r.chi2.size(); ++t)
    os << t << ',' << r.trial_stream[t] << ',' << format_double(r.chi2[t]) << '\n';
  return os.str();
}

std::string minimax_csv(const MinimaxReport& r) {
  std::ostringstream os;
  os << "trial_index,seed,risk,no_rare_sample,restricted_risk,support_mass\n";
  for (const auto& t : r.trials) {
    os << t.trial << ',' << t.stream << ',' << format_double(t.risk) << ',' << (t.no_rare_sample ? 1 : 0) << ','
       << (t.restricted_risk ? format_double(*t.restricted_risk) : "") << ','
       << (t.support_mass ? format_double(*t.support_mass) : "") << '\n';
  }
  return os.str();
}

std::string csv_with_provenance(const Json& provenance, const std::string& csv) {
  return "# " + provenance.dump() + "\n" + csv;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& row) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream rs(row);
    while (std::getline(rs, cell, ',')) cells.push_back(cell);
    if (!row.empty() && row.back() == ',') cells.emplace_back();
    return cells;
  };
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!have_header && line.rfind("# ", 0) == 0) {
      try {
        table.provenance = Json::parse(line.substr(2));
      } catch (const Json::parse_error& e) {
        throw FormatError(std::string("csv provenance: ") + e.what());
      }
      continue;
    }
    if (!have_header) {
      table.header = split(line);
      have_header = true;
      continue;
    }
    auto cells = split(line);
    if (cells.size() != table.header.size())
      throw FormatError("csv row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw FormatError("csv has no header");
  return table;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace degtest

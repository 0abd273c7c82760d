// Copyright 2026 The gibbsineq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Exit status: 0 when every check passes, 1 on a
// failing check, numeric error or I/O error, 2 on a usage error.

#ifndef GIBBSINEQ_TOOLS_CLI_HPP
#define GIBBSINEQ_TOOLS_CLI_HPP

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gibbsineq/gibbsineq.hpp"

namespace gibbsineq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Records are written for campaigns up to this size unless --verbose.
inline constexpr std::size_t kAutoRecordLimit = 32;

struct UsageError : Error {
  using Error::Error;
};

struct CampaignConfig {
  std::vector<ModelSpec> models;
  std::vector<double> betas{1.0};
  int trials = 1;
  std::uint64_t seed = 0;
  double tol = kDefaultInequalityTol;
  std::vector<std::string> families;
  std::vector<int> ns{0, 1, 2};
  std::vector<int> ks{1, 2, 3};
  std::vector<double> ps{1.25, 1.5, 2.0, 3.0};
  std::string output_path = "-";
  std::optional<std::string> csv_path;
  std::optional<int> jobs;
  bool verbose = false;

  void validate() const {
    if (models.empty()) throw UsageError("no model given");
    if (betas.empty()) throw UsageError("no beta given");
    for (double b : betas)
      if (!(b > 0.0) || !std::isfinite(b)) throw UsageError("beta must be positive and finite");
    if (trials < 1) throw UsageError("trials must be >= 1");
    if (!(tol > 0.0)) throw UsageError("tol must be positive");
    for (const auto& f : families)
      if (f != "fidelity" && f != "expansion") parse_inequality_family(f);
  }
};

inline Json to_json(const ModelSpec& m) {
  return {{"name", to_string(m.kind)}, {"params", m.params}, {"dim", m.dim()}};
}

inline Json to_json(const CampaignConfig& c) {
  Json models = Json::array();
  for (const auto& m : c.models) models.push_back(to_json(m));
  return {{"models", models}, {"betas", c.betas}, {"trials", c.trials}, {"seed", c.seed},
          {"tol", c.tol},     {"families", c.families}, {"n", c.ns},   {"k", c.ks},
          {"p", c.ps}};
}

/// Reads a JSON campaign file. Unknown keys are rejected.
inline CampaignConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config '" + path + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::set<std::string> known = {"models", "betas", "trials", "seed", "tol",
                                              "families", "n", "k", "p", "jobs"};
  CampaignConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) throw UsageError("config: unknown key '" + key + "'");
      if (key == "models") {
        for (const auto& m : value) {
          ModelSpec spec;
          spec.kind = parse_model_kind(m.at("name").get<std::string>());
          if (m.contains("params")) spec.params = m.at("params").get<std::map<std::string, double>>();
          c.models.push_back(std::move(spec));
        }
      } else if (key == "betas") {
        c.betas = value.get<std::vector<double>>();
      } else if (key == "trials") {
        c.trials = value.get<int>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "tol") {
        c.tol = value.get<double>();
      } else if (key == "families") {
        c.families = value.get<std::vector<std::string>>();
      } else if (key == "n") {
        c.ns = value.get<std::vector<int>>();
      } else if (key == "k") {
        c.ks = value.get<std::vector<int>>();
      } else if (key == "p") {
        c.ps = value.get<std::vector<double>>();
      } else if (key == "jobs") {
        c.jobs = value.get<int>();
      }
    }
  } catch (const Json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  return c;
}

/// One concrete (T, S, beta) drawn from a campaign.
struct CampaignInstance {
  ModelPair pair;
  double beta = 1.0;
  std::uint64_t seed = 0;
  std::string label;
};

inline std::string model_label(const ModelSpec& m) {
  std::string s = to_string(m.kind);
  const char* sep = "(";
  for (const auto& [k, v] : m.params) {
    std::ostringstream os;
    os << sep << k << '=' << v;
    s += os.str();
    sep = ",";
  }
  if (!m.params.empty()) s += ")";
  return s;
}

/// Models x trials x betas, in that nesting order. Deterministic models are
/// drawn once regardless of the trial count.
inline std::vector<CampaignInstance> build_instances(const CampaignConfig& c) {
  std::vector<CampaignInstance> out;
  for (const auto& m : c.models) {
    const int draws = m.is_random() ? c.trials : 1;
    for (int t = 0; t < draws; ++t) {
      const std::uint64_t seed =
          m.is_random() ? instance_seed(c.seed, static_cast<std::uint64_t>(t)) : 0;
      ModelPair pair = m.build(seed);
      std::string label = model_label(m);
      if (m.is_random()) label += "#" + std::to_string(t);
      for (double b : c.betas) out.push_back({pair, b, seed, label});
    }
  }
  return out;
}

struct Outcome {
  Json report;
  std::optional<SuiteReport> suite;
  std::optional<FidelityCampaignReport> fidelity;
  bool passed = true;
};

inline Json failure_entry(const CampaignInstance& in, std::size_t index, const char* observable,
                          const Json& record) {
  Json j = record;
  j["index"] = index;
  j["t"] = matrix_to_json(in.pair.t.matrix());
  j[observable] = matrix_to_json(in.pair.s.matrix());
  return j;
}

inline Outcome run_campaign(const std::string& command, const CampaignConfig& c) {
  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CampaignInstance> instances = build_instances(c);

  ParameterGrid grid{{}, c.ns, c.ks, c.ps};
  bool want_fidelity = false;
  bool want_expansion = false;
  for (const auto& f : c.families) {
    if (f == "fidelity") want_fidelity = true;
    else if (f == "expansion") want_expansion = true;
    else grid.families.push_back(parse_inequality_family(f));
  }

  Outcome out;
  Json families = Json::object();
  Json failures = Json::array();
  std::size_t failure_count = 0;
  std::size_t error_count = 0;
  const bool records = c.verbose || instances.size() <= kAutoRecordLimit;
  Json report = {{"schema_version", kSchemaVersion},
                 {"command", command},
                 {"version", kVersion},
                 {"config", to_json(c)},
                 {"instance_count", instances.size()}};

  if (!grid.empty()) {
    std::vector<SuiteInstance> si;
    si.reserve(instances.size());
    for (const auto& in : instances)
      si.push_back({in.pair.t, in.pair.s.matrix(), in.beta, in.seed, in.label});
    SuiteReport r = run_suite(si, grid, c.tol, c.jobs);
    for (const auto& [name, agg] : r.families) families[name] = to_json(agg);
    Json recs = Json::array();
    for (const auto& rec : r.instances) {
      if (records) recs.push_back(to_json(rec));
      if (rec.error) ++error_count;
      if (!rec.passed()) {
        ++failure_count;
        if (failures.size() < kMaxSerializedFailures) {
          Json rj = to_json(rec);
          Json failing = Json::array();
          for (const auto& chk : rj["checks"])
            if (!chk["pass"].get<bool>()) failing.push_back(chk);
          rj["checks"] = failing;
          failures.push_back(failure_entry(instances[rec.index], rec.index, "j", rj));
        }
      }
    }
    if (records) report["instances"] = std::move(recs);
    out.passed = out.passed && r.all_passed();
    out.suite = std::move(r);
  }

  if (want_fidelity || want_expansion) {
    std::vector<FidelityInstance> fi;
    fi.reserve(instances.size());
    for (const auto& in : instances) fi.push_back({in.pair.t, in.pair.s, in.beta, in.seed, in.label});
    FidelityCampaignReport r = run_fidelity_campaign(fi, want_fidelity, want_expansion, {}, c.jobs);
    for (const auto& [name, agg] : r.families) families[name] = to_json(agg);
    Json recs = Json::array();
    for (const auto& rec : r.instances) {
      if (records) recs.push_back(to_json(rec));
      if (rec.error) ++error_count;
      if (!rec.passed()) {
        ++failure_count;
        if (failures.size() < kMaxSerializedFailures)
          failures.push_back(failure_entry(instances[rec.index], rec.index, "s", to_json(rec)));
      }
    }
    if (records) report["fidelity_instances"] = std::move(recs);
    out.passed = out.passed && r.all_passed();
    out.fidelity = std::move(r);
  }

  report["families"] = std::move(families);
  report["failures"] = std::move(failures);
  report["failure_count"] = failure_count;
  report["error_count"] = error_count;
  report["all_passed"] = out.passed;
  report["conventions"] = Json::array();
  std::set<std::string> seen;
  for (const auto& in : instances)
    if (seen.insert(in.pair.convention).second) report["conventions"].push_back(in.pair.convention);

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::time_t tt = std::chrono::system_clock::to_time_t(started);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  report["timing"] = {{"started_utc", stamp}, {"elapsed_seconds", elapsed}};
  out.report = std::move(report);
  return out;
}

inline Json catalogue_json() {
  Json list = Json::array();
  for (const auto& m : model_catalogue()) {
    Json defaults = Json::object();
    for (const auto& [k, v] : m.defaults) defaults[k] = v;
    list.push_back({{"name", m.name}, {"description", m.description}, {"defaults", defaults}});
  }
  Json fam = Json::array();
  for (InequalityFamily f : kAllInequalityFamilies) fam.push_back(to_string(f));
  fam.push_back("fidelity");
  fam.push_back("expansion");
  return {{"schema_version", kSchemaVersion}, {"models", list}, {"families", fam}};
}

/// "r.csv" -> "r.fidelity.csv".
inline std::string fidelity_csv_path(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ".fidelity.csv";
  return path.substr(0, dot) + ".fidelity" + path.substr(dot);
}

inline void print_summary(std::ostream& os, const Outcome& o) {
  const Json& r = o.report;
  os << r["command"].get<std::string>() << ": " << r["instance_count"].get<std::size_t>()
     << " instance(s)\n";
  for (const auto& [name, agg] : r["families"].items()) {
    os << "  " << name << ": " << agg["pass_count"].get<std::size_t>() << "/"
       << agg["count"].get<std::size_t>();
    if (agg.contains("worst_slack")) os << "  worst_slack " << agg["worst_slack"].dump();
    os << "\n";
  }
  os << (o.passed ? "PASS" : "FAIL") << "\n";
}

/// Parses argv and runs the requested subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Gibbs-state inequality and fidelity-susceptibility checks", "gibbsineq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::vector<std::string> model_names;
  std::map<std::string, double> model_params;
  std::vector<double> betas;
  int trials = 1;
  std::uint64_t seed = 0;
  double tol = kDefaultInequalityTol;
  std::string out_path = "-";
  std::string csv_path;
  int jobs = 0;
  std::vector<std::string> families;
  std::vector<int> ns, ks;
  std::vector<double> ps;
  std::string config_path;
  bool verbose = false;

  struct ParamFlag {
    const char* key;
    const char* help;
  };
  static const ParamFlag param_flags[] = {
      {"delta", "single-spin splitting"},  {"sites", "ising-chain length (2..10)"},
      {"coupling", "ising-chain coupling"}, {"field", "ising-chain transverse field"},
      {"nmax", "dicke boson cutoff"},      {"spins", "dicke spin count (1..4)"},
      {"omega", "dicke boson frequency"},   {"omega0", "dicke spin splitting"},
      {"lambda", "dicke coupling"},        {"dim", "random model dimension (2..64)"},
  };

  auto add_campaign_flags = [&](CLI::App* sub) {
    sub->add_option("--model", model_names, "model name(s), comma separated")
                        ->delimiter(',');
    for (const auto& p : param_flags)
      sub->add_option_function<double>(std::string("--") + p.key,
                                        [&, key = std::string(p.key)](double v) { model_params[key] = v; },
                                        p.help);
    sub->add_option("--seed", seed, "campaign seed");
    sub->add_option("--trials", trials, "draws per random model");
    sub->add_option("--beta", betas, "inverse temperatures, comma separated")
                       ->delimiter(',');
    sub->add_option("--tol", tol, "relative slack tolerance");
    sub->add_option("--out", out_path, "JSON report path ('-' for stdout)");
    sub->add_option("--csv", csv_path, "per-instance CSV path");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--config", config_path, "JSON campaign file")
                         ->check(CLI::ExistingFile);
    sub->add_flag("--verbose", verbose, "write every per-instance record");
  };

  CLI::App* suite = app.add_subcommand("suite", "inequality campaign");
  add_campaign_flags(suite);
  suite->add_option("--families", families,
                                       "families to run, comma separated (also fidelity, expansion)")
                         ->delimiter(',');
  suite->add_option("--n", ns, "n values, comma separated")->delimiter(',');
  suite->add_option("--k", ks, "k values, comma separated")->delimiter(',');
  suite->add_option("--p", ps, "Hoelder p values, comma separated")->delimiter(',');

  CLI::App* fidelity = app.add_subcommand("fidelity", "fidelity-susceptibility routes and bounds");
  add_campaign_flags(fidelity);
  CLI::App* expansion = app.add_subcommand("expansion", "two-sided expansion checks");
  add_campaign_flags(expansion);
  CLI::App* models = app.add_subcommand("models", "list built-in models");
  models->add_option("--out", out_path, "JSON output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (models->parsed()) {
      write_text(out_path, dump_json(catalogue_json()), out);
      return kExitOk;
    }
    CLI::App* sub = suite->parsed() ? suite : fidelity->parsed() ? fidelity : expansion;
    const std::string command = sub->get_name();
    auto given = [&](const char* name) {
      const CLI::Option* o = sub->get_option_no_throw(std::string("--") + name);
      return o != nullptr && o->count() > 0;
    };

    CampaignConfig c;
    try {
      if (!config_path.empty()) c = load_config(config_path);
      if (given("model") || c.models.empty()) {
        c.models.clear();
        if (model_names.empty()) model_names = {"single-spin"};
        for (const auto& name : model_names) c.models.push_back({parse_model_kind(name), {}});
      }
      for (auto& m : c.models)
        for (const auto& [k, v] : model_params) m.params[k] = v;
      if (given("beta")) c.betas = betas;
      if (given("trials")) c.trials = trials;
      if (given("seed")) c.seed = seed;
      if (given("tol")) c.tol = tol;
      if (given("jobs")) c.jobs = jobs;
      if (command == "suite") {
        if (given("families")) c.families = families;
        if (c.families.empty())
          for (InequalityFamily f : kAllInequalityFamilies) c.families.push_back(to_string(f));
        if (given("n")) c.ns = ns;
        if (given("k")) c.ks = ks;
        if (given("p")) c.ps = ps;
      } else {
        c.families = {command};
      }
      c.output_path = out_path;
      if (given("csv")) c.csv_path = csv_path;
      c.verbose = verbose;
      c.validate();
      c.jobs = resolve_jobs(c.jobs);
      for (const auto& m : c.models) m.build(c.seed);  // size and range checks
      for (int n : c.ns)
        if (n < 0 || n > kMaxInequalityN) throw UsageError("n must lie in [0, 3]");
      for (int k : c.ks)
        if (k < 1 || k > kMaxInequalityK) throw UsageError("k must lie in [1, 3]");
      for (double p : c.ps)
        if (!(p > 1.0)) throw UsageError("p must exceed 1");
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const ParameterError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }

    const Outcome o = run_campaign(command, c);
    write_text(c.output_path, dump_json(o.report), out);
    if (c.csv_path) {
      // One table per file; a suite that also ran fidelity checks writes
      // those next to the main table.
      if (o.suite) {
        std::ostringstream csv;
        write_csv(csv, *o.suite);
        write_text(*c.csv_path, csv.str(), out);
      }
      if (o.fidelity) {
        std::ostringstream csv;
        write_csv(csv, *o.fidelity);
        write_text(o.suite ? fidelity_csv_path(*c.csv_path) : *c.csv_path, csv.str(), out);
      }
    }
    print_summary(c.output_path == "-" ? err : out, o);
    return o.passed ? kExitOk : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace gibbsineq::cli

#endif  // GIBBSINEQ_TOOLS_CLI_HPP

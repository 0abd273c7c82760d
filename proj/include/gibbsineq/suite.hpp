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

// Batch campaigns. Instances are evaluated on a worker pool; every record is
// written to its own slot and the aggregates are reduced afterwards in
// instance order, so reports do not depend on scheduling.

#ifndef GIBBSINEQ_SUITE_HPP
#define GIBBSINEQ_SUITE_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gibbsineq/fidelity.hpp"
#include "gibbsineq/inequalities.hpp"
#include "gibbsineq/spectral.hpp"

namespace gibbsineq {

/// Worker count: explicit value, else GIBBS_INEQ_JOBS, else hardware threads.
inline int resolve_jobs(std::optional<int> jobs = std::nullopt) {
  if (jobs) {
    if (*jobs < 1) throw ParameterError("jobs must be >= 1");
    return *jobs;
  }
  if (const char* env = std::getenv("GIBBS_INEQ_JOBS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw ParameterError("GIBBS_INEQ_JOBS must be a positive integer");
    return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

// fn(i) for i in [0, count). The first exception escaping fn is rethrown
// after all workers have joined.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Running pass count and worst relative slack of one family of checks.
/// Every check reports a slack with the convention pass <=> slack >= -tol.
struct FamilyAggregate {
  std::size_t count = 0;
  std::size_t pass_count = 0;
  std::optional<double> worst_slack;
  std::size_t worst_instance = 0;
  std::uint64_t worst_instance_seed = 0;
  std::string worst_params;

  void add(double slack, bool pass, std::size_t index, std::uint64_t seed,
           const std::string& params) {
    ++count;
    if (pass) ++pass_count;
    // NaN slack is always the worst.
    const bool worse = !worst_slack || std::isnan(slack) ||
                       (!std::isnan(*worst_slack) && slack < *worst_slack);
    if (worse) {
      worst_slack = slack;
      worst_instance = index;
      worst_instance_seed = seed;
      worst_params = params;
    }
  }

  bool all_passed() const { return pass_count == count; }
};

using FamilyTable = std::map<std::string, FamilyAggregate>;

inline std::string format_params(const InequalityParams& p) {
  std::ostringstream os;
  os.precision(17);
  const char* sep = "";
  if (p.n) { os << sep << "n=" << *p.n; sep = ","; }
  if (p.k) { os << sep << "k=" << *p.k; sep = ","; }
  if (p.p) { os << sep << "p=" << *p.p; sep = ","; }
  if (p.q) { os << sep << "q=" << *p.q; sep = ","; }
  return os.str();
}

// ---------------------------------------------------------------------------
// Inequality campaign

/// Hamiltonian T, observable J (original basis, not necessarily Hermitian).
struct SuiteInstance {
  HermitianOperator t;
  Matrix j;
  double beta = 1.0;
  std::uint64_t seed = 0;
  std::string label;
};

/// Which families to run and the (n, k, p) values each one is swept over.
struct ParameterGrid {
  std::vector<InequalityFamily> families;
  std::vector<int> ns;
  std::vector<int> ks;
  std::vector<double> ps;

  static ParameterGrid standard() {
    return {{kAllInequalityFamilies.begin(), kAllInequalityFamilies.end()},
            {0, 1, 2},
            {1, 2, 3},
            {1.25, 1.5, 2.0, 3.0}};
  }

  bool empty() const { return families.empty(); }
};

/// All checks of the grid on one instance.
inline std::vector<InequalityReport> run_checks(const ObservableInBasis& j,
                                                const GibbsEnsemble& ens,
                                                const ParameterGrid& grid, double tol) {
  std::vector<InequalityReport> out;
  for (InequalityFamily f : grid.families) {
    switch (f) {
      case InequalityFamily::harris:
        out.push_back(check_harris(j, ens, tol));
        break;
      case InequalityFamily::ginibre:
        out.push_back(check_ginibre(j, ens, tol));
        break;
      case InequalityFamily::bogoliubov_jr:
        out.push_back(check_bogoliubov_jr(j, ens, tol));
        break;
      case InequalityFamily::plechko:
        for (int k : grid.ks) out.push_back(check_plechko(j, ens, k, tol));
        break;
      case InequalityFamily::bpr:
        for (int k : grid.ks) out.push_back(check_bpr(j, ens, k, tol));
        break;
      case InequalityFamily::gen_harris:
        for (int n : grid.ns) out.push_back(check_harris_gen(j, ens, n, tol));
        break;
      case InequalityFamily::gen_plechko:
        for (int n : grid.ns)
          for (double p : grid.ps) out.push_back(check_plechko_gen(j, ens, n, p, tol));
        break;
      case InequalityFamily::gen_ginibre:
        for (int n : grid.ns)
          for (int k : grid.ks) out.push_back(check_ginibre_gen(j, ens, n, k, tol));
        break;
      case InequalityFamily::gen_bpr:
        for (int n : grid.ns)
          for (int k : grid.ks) out.push_back(check_bpr_gen(j, ens, n, k, tol));
        break;
    }
  }
  return out;
}

struct InstanceRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string label;
  double beta = 0.0;
  std::vector<InequalityReport> reports;
  std::optional<std::string> error;

  bool passed() const {
    return !error && std::all_of(reports.begin(), reports.end(),
                                 [](const InequalityReport& r) { return r.pass; });
  }
};

struct SuiteReport {
  double tol = kDefaultInequalityTol;
  FamilyTable families;
  std::vector<InstanceRecord> instances;

  bool all_passed() const {
    return std::all_of(instances.begin(), instances.end(),
                       [](const InstanceRecord& r) { return r.passed(); });
  }

  /// Indices of instances with a failing check or an error.
  std::vector<std::size_t> failures() const {
    std::vector<std::size_t> out;
    for (const auto& r : instances)
      if (!r.passed()) out.push_back(r.index);
    return out;
  }

  std::size_t error_count() const {
    return static_cast<std::size_t>(std::count_if(
        instances.begin(), instances.end(), [](const InstanceRecord& r) { return r.error; }));
  }
};

/// Evaluates every grid check on every instance. Errors raised by a single
/// instance are recorded on its record, not thrown.
inline SuiteReport run_suite(const std::vector<SuiteInstance>& instances, const ParameterGrid& grid,
                             double tol = kDefaultInequalityTol,
                             std::optional<int> jobs = std::nullopt) {
  if (instances.empty()) throw ParameterError("run_suite: empty instance list");
  if (!(tol > 0.0)) throw ParameterError("run_suite: tol must be positive");
  SuiteReport report;
  report.tol = tol;
  if (grid.empty()) return report;
  for (int n : grid.ns)
    if (n < 0 || n > kMaxInequalityN) throw ParameterError("run_suite: n must lie in [0, 3]");
  for (int k : grid.ks)
    if (k < 1 || k > kMaxInequalityK) throw ParameterError("run_suite: k must lie in [1, 3]");
  for (double p : grid.ps)
    if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("run_suite: p must exceed 1");

  report.instances.resize(instances.size());
  detail::parallel_for(instances.size(), resolve_jobs(jobs), [&](std::size_t i) {
    const SuiteInstance& in = instances[i];
    InstanceRecord& rec = report.instances[i];
    rec.index = i;
    rec.seed = in.seed;
    rec.label = in.label;
    rec.beta = in.beta;
    try {
      if (in.j.rows() != in.t.dim() || in.j.cols() != in.t.dim())
        throw DimensionError("run_suite: J and T dimensions differ");
      const GibbsEnsemble ens = decompose(in.t, in.beta);
      rec.reports = run_checks(to_eigenbasis(in.j, ens), ens, grid, tol);
    } catch (const Error& e) {
      rec.reports.clear();
      rec.error = e.what();
    }
  });

  for (InequalityFamily f : grid.families) report.families[to_string(f)];
  for (const auto& rec : report.instances)
    for (const auto& r : rec.reports)
      report.families[to_string(r.family)].add(r.relative_slack(), r.pass, rec.index, rec.seed,
                                               format_params(r.params));
  return report;
}

// ---------------------------------------------------------------------------
// Fidelity and expansion campaign

struct FidelityInstance {
  HermitianOperator t;
  HermitianOperator s;
  double beta = 1.0;
  std::uint64_t seed = 0;
  std::string label;
};

struct FidelityTolerances {
  double sandwich = 1e-10;   ///< lower <= chi <= upper, relative to max(1, |bounds|)
  double forms = 1e-9;       ///< spectral form 1 vs form 2
  double routes = 1e-4;      ///< finite-difference routes vs spectral
  double link = 1e-5;        ///< upper vs (beta/4) susceptibility
  double commuting = 1e-12;  ///< chi vs upper when [T, S] = 0
  double trace_x = 1e-12;    ///< |Tr X|
  double min_order = 2.8;    ///< expansion residual order
  double trace_y = 1e-8;     ///< Tr Y closed form vs assembled
};

/// One named check; pass <=> slack >= -tol.
struct CheckOutcome {
  std::string family;
  double value = 0.0;
  double slack = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// 0 - e rather than -e, so an exact agreement reports +0.
inline double neg(double e) { return 0.0 - e; }

inline CheckOutcome make_outcome(std::string family, double value, double slack, double tol) {
  return {std::move(family), value, slack, tol, !std::isnan(slack) && slack >= -tol};
}

struct FidelityRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string label;
  double beta = 0.0;
  bool commuting = false;
  std::optional<FidelityReport> report;
  std::optional<ExpansionCheck> expansion;
  std::vector<CheckOutcome> checks;
  std::optional<std::string> error;

  bool passed() const {
    return !error && std::all_of(checks.begin(), checks.end(),
                                 [](const CheckOutcome& c) { return c.pass; });
  }
};

struct FidelityCampaignReport {
  FidelityTolerances tols;
  FamilyTable families;
  std::vector<FidelityRecord> instances;

  bool all_passed() const {
    return std::all_of(instances.begin(), instances.end(),
                       [](const FidelityRecord& r) { return r.passed(); });
  }

  std::vector<std::size_t> failures() const {
    std::vector<std::size_t> out;
    for (const auto& r : instances)
      if (!r.passed()) out.push_back(r.index);
    return out;
  }
};

inline bool operators_commute(const HermitianOperator& a, const HermitianOperator& b) {
  const Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return max_abs(c) <= kHermiticityRtol * std::max(1.0, max_abs(a.matrix()) * max_abs(b.matrix()));
}

namespace detail {

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

inline std::vector<CheckOutcome> fidelity_checks(const FidelityReport& r, bool commuting,
                                                 const FidelityTolerances& tol) {
  std::vector<CheckOutcome> out;
  const double chi = r.chi_spectral_form2;
  const double scale = std::max({1.0, std::abs(r.bound_lower), std::abs(r.bound_upper)});
  const double sandwich = std::min(chi - r.bound_lower, r.bound_upper - chi) / scale;
  out.push_back(make_outcome("fidelity_sandwich", chi, sandwich, tol.sandwich));
  if (!r.low_temperature) {
    const double e = rel_err(r.chi_spectral_form1, r.chi_spectral_form2);
    out.push_back(make_outcome("fidelity_forms", e, neg(e), tol.forms));
  }
  const double e_routes = std::max({rel_err(r.chi_fd_one_sided, chi),
                                    rel_err(r.chi_fd_two_sided, chi),
                                    rel_err(r.chi_fd_one_sided, r.chi_fd_two_sided)});
  out.push_back(make_outcome("fidelity_routes", e_routes, neg(e_routes), tol.routes));
  const double e_link = rel_err(r.bound_upper, 0.25 * r.beta * r.susceptibility_fd);
  out.push_back(make_outcome("fidelity_link", e_link, neg(e_link), tol.link));
  if (commuting) {
    const double e = rel_err(chi, r.bound_upper);
    out.push_back(make_outcome("fidelity_commuting", e, neg(e), tol.commuting));
  }
  return out;
}

inline std::vector<CheckOutcome> expansion_checks(const ExpansionCheck& c,
                                                  const FidelityTolerances& tol) {
  std::vector<CheckOutcome> out;
  out.push_back(make_outcome("expansion_trace_x", c.trace_x, neg(std::abs(c.trace_x)), tol.trace_x));
  out.push_back(
      make_outcome("expansion_order", c.residual_order, c.residual_order - tol.min_order, 0.0));
  const double e = rel_err(c.trace_y, c.trace_y_assembled);
  out.push_back(make_outcome("expansion_trace_y", e, neg(e), tol.trace_y));
  return out;
}

}  // namespace detail

/// chi_F routes, bounds and (optionally) the two-sided expansion at x = 0 on
/// every instance.
inline FidelityCampaignReport run_fidelity_campaign(const std::vector<FidelityInstance>& instances,
                                                    bool fidelity, bool expansion,
                                                    const FidelityTolerances& tols = {},
                                                    std::optional<int> jobs = std::nullopt) {
  if (instances.empty()) throw ParameterError("run_fidelity_campaign: empty instance list");
  FidelityCampaignReport report;
  report.tols = tols;
  if (!fidelity && !expansion) return report;
  report.instances.resize(instances.size());
  detail::parallel_for(instances.size(), resolve_jobs(jobs), [&](std::size_t i) {
    const FidelityInstance& in = instances[i];
    FidelityRecord& rec = report.instances[i];
    rec.index = i;
    rec.seed = in.seed;
    rec.label = in.label;
    rec.beta = in.beta;
    try {
      if (in.t.dim() != in.s.dim()) throw DimensionError("fidelity campaign: T and S differ");
      rec.commuting = operators_commute(in.t, in.s);
      if (fidelity) {
        rec.report = fidelity_report(in.t, in.s, in.beta);
        auto c = detail::fidelity_checks(*rec.report, rec.commuting, tols);
        rec.checks.insert(rec.checks.end(), c.begin(), c.end());
      }
      if (expansion) {
        rec.expansion = expansion_check(in.t, in.s, in.beta, 0.0);
        auto c = detail::expansion_checks(*rec.expansion, tols);
        rec.checks.insert(rec.checks.end(), c.begin(), c.end());
      }
    } catch (const Error& e) {
      rec.checks.clear();
      rec.error = e.what();
    }
  });

  if (fidelity)
    for (const char* name : {"fidelity_sandwich", "fidelity_forms", "fidelity_routes",
                             "fidelity_link", "fidelity_commuting"})
      report.families[name];
  if (expansion)
    for (const char* name : {"expansion_trace_x", "expansion_order", "expansion_trace_y"})
      report.families[name];
  for (const auto& rec : report.instances)
    for (const auto& c : rec.checks)
      report.families[c.family].add(c.slack, c.pass, rec.index, rec.seed, "");
  return report;
}

}  // namespace gibbsineq

#endif  // GIBBSINEQ_SUITE_HPP

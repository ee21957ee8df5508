// Acceptance suite: runs the nine criteria and prints one PASS/FAIL line each.
//
//   lte_acceptance [--only 1,4] [--expect-fail 3] [--report file] [--threads n]
//
// Exit status is 0 when every selected criterion passes, except those named
// by --expect-fail, which must fail.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "lte/harness.hpp"

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

const std::vector<std::string> kModels{"allen-cahn", "nagumo", "sis"};

unsigned g_threads = 8;

template <class R>
std::string to_csv(const R& r) {
  std::ostringstream os;
  lte::write_csv(os, r);
  return os.str();
}

lte::ExperimentConfig table_config(const std::string& model, std::vector<std::string> schemes,
                                   std::vector<double> lambdas) {
  lte::ExperimentConfig cfg;
  cfg.model = model;
  cfg.schemes = std::move(schemes);
  cfg.lambdas = std::move(lambdas);
  cfg.dx = 1.0 / 16;
  cfg.dt = 0.25;
  cfg.T = 1.0;
  cfg.samples = 100;
  cfg.threads = g_threads;
  return cfg;
}

lte::ExperimentConfig weak_config(const std::string& model, unsigned threads) {
  lte::ExperimentConfig cfg;
  cfg.model = model;
  cfg.levels = {2, 3, 4, 5};
  cfg.reference_level = 7;
  cfg.samples = 2000;
  cfg.test_functions = {"F1", "F2"};
  cfg.threads = threads;
  cfg.record_timing = false;
  return cfg;
}

// Weak-error CSVs keyed by (model, threads); criteria 4 and 9 share them.
std::map<std::pair<std::string, unsigned>, std::pair<std::string, std::vector<lte::WeakErrorReport>>>
    g_weak;

const std::pair<std::string, std::vector<lte::WeakErrorReport>>& weak_run(const std::string& model,
                                                                         unsigned threads) {
  const auto key = std::make_pair(model, threads);
  auto it = g_weak.find(key);
  if (it == g_weak.end()) {
    std::cerr << fmt::format("  weak-error {} on {} thread(s)...\n", model, threads);
    auto reps = lte::weak_error_experiment(weak_config(model, threads));
    std::string text = to_csv(reps);
    it = g_weak.emplace(key, std::make_pair(std::move(text), std::move(reps))).first;
  }
  return it->second;
}

Outcome criterion1() {
  bool ok = true;
  std::string bad;
  for (const auto& m : kModels) {
    for (const auto& r : lte::boundary_table(table_config(m, {"lte"}, {1, 2, 3, 4})).rows) {
      if (r.in_domain != r.samples || r.samples != 100) {
        ok = false;
        bad += fmt::format(" {}/lambda={}:{}/{}", m, r.lambda, r.in_domain, r.samples);
      }
    }
  }
  return {ok, ok ? "LTE 100/100 for 3 models x lambda 1..4" : "violations:" + bad};
}

Outcome criterion2() {
  bool ok = true;
  std::string counts;
  for (const auto& r : lte::boundary_table(table_config("allen-cahn", {"em"}, {1, 2, 3})).rows) {
    ok = ok && r.in_domain <= 5;
    counts += fmt::format(" lambda={}:{}/100", r.lambda, r.in_domain);
  }
  return {ok, "Allen-Cahn EM in-domain" + counts + " (need <= 5)"};
}

Outcome criterion3() {
  const auto rep = lte::boundary_table(table_config("allen-cahn", {"sem", "exp"}, {3}));
  const auto sem = rep.rows.at(0).in_domain;
  const auto exp = rep.rows.at(1).in_domain;
  const bool ok = sem >= 5 && sem <= 40 && exp >= 35 && exp <= 75;
  return {ok, fmt::format("Allen-Cahn lambda=3: SEM {}/100 (need 5..40), EXP {}/100 (need 35..75)",
                          sem, exp)};
}

Outcome criterion4() {
  bool ok = true;
  std::string slopes;
  for (const auto& m : kModels) {
    for (const auto& r : weak_run(m, g_threads).second) {
      const double s = r.fit.slope;
      ok = ok && r.has_fit && s >= 0.15 && s <= 0.40;
      slopes += fmt::format(" {}/{}:{:.3f}", m, r.test_function, s);
    }
  }
  return {ok, "weak-error slopes" + slopes + " (need 0.15..0.40)"};
}

Outcome criterion5() {
  bool ok = true;
  std::string detail;
  for (const auto& name : kModels) {
    const auto model = lte::ModelSpec::by_name(name);
    const auto c = lte::exactsim_check(model, 0.2, 0.05, 1.0, 100000, 1e-5, 1, g_threads);
    const double zm = std::abs(c.mean.exact - c.mean.oracle) / c.mean.std_error;
    const double zv = std::abs(c.variance.exact - c.variance.oracle) / c.variance.std_error;
    const bool here = c.mean.within(3.0) && c.variance.within(3.0) && c.ks_distance < 0.01;
    ok = ok && here;
    detail += fmt::format(" {}: |dmean|={:.2f}se |dvar|={:.2f}se KS={:.4f};", name, zm, zv, c.ks_distance);
  }
  return {ok, "exact step vs Euler oracle" + detail};
}

Outcome criterion6() {
  const auto mach = lte::ModelSpec::allen_cahn().lamperti(0.0, 1.0);
  const double T = lte::max_exact_horizon(mach);
  lte::RngStream rng(1, 0x600);
  const int n = 10000;
  int accepted = 0;
  for (int i = 0; i < n; ++i) {
    const double y = lte::sample_endpoint(mach, T, rng);
    accepted += lte::thinning_accept(mach, y, T, rng).accepted ? 1 : 0;
  }
  const double p = static_cast<double>(accepted) / n;
  const double sigma = std::sqrt(p * (1 - p) / n);
  const double floor = std::exp(-1.0) - 3.0 * sigma;
  return {p >= floor, fmt::format("Allen-Cahn lambda=1, T_h={:.4f}: acceptance {:.4f} (need >= {:.4f})",
                                  T, p, floor)};
}

Outcome criterion7() {
  double dev = 0.0, law = 0.0, neg = 0.0, rowsum = 0.0;
  lte::RngStream rng(1, 0x700);
  for (int N : {2, 4, 8, 16}) {
    const int n = N - 1;
    lte::SemigroupApplicator app(N);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      A(i, i) = -2.0 * N * N;
      if (i > 0) A(i, i - 1) = 1.0 * N * N;
      if (i + 1 < n) A(i, i + 1) = 1.0 * N * N;
    }
    for (double t : {1e-3, 1e-2, 1e-1}) {
      const Eigen::MatrixXd E = (t * A).exp();
      Eigen::MatrixXd S(n, n);
      for (int j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        const auto col = lte::apply_semigroup(app, t, e);
        for (int i = 0; i < n; ++i) S(i, j) = col[i];
      }
      dev = std::max(dev, (S - E).cwiseAbs().maxCoeff());
      neg = std::max(neg, -S.minCoeff());
      rowsum = std::max(rowsum, S.rowwise().sum().maxCoeff() - 1.0);
      for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> v(n);
        double scale = 0.0;
        for (auto& x : v) {
          x = 2.0 * rng.uniform() - 1.0;
          scale = std::max(scale, std::abs(x));
        }
        const double s = rng.uniform();
        const auto two = app.apply(t, app.apply(s, v));
        const auto one = app.apply(t + s, v);
        for (int i = 0; i < n; ++i) law = std::max(law, std::abs(two[i] - one[i]) / scale);
      }
    }
  }
  const bool ok = dev < 1e-10 && law < 1e-12 && neg <= 1e-12 && rowsum <= 1e-12;
  return {ok, fmt::format("max |S - expm| {:.2e}, semigroup law {:.2e}, min entry {:.2e}, "
                          "row sum - 1 {:.2e}",
                          dev, law, -neg, rowsum)};
}

Outcome criterion8() {
  bool ok = true;
  std::string detail;
  for (const auto& name : {"allen-cahn", "nagumo"}) {
    const auto model = lte::ModelSpec::by_name(name);
    lte::RngStream rng(1, 0x800);
    const double nu = 0.5;
    const double kappas[] = {0.5, 1.0, 2.0, 4.0};
    std::uint64_t violations = 0;
    double worst = -INFINITY;
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) {
      const double x0 = 1.98 * rng.uniform() - 0.99;
      const auto mach = model.lamperti(x0, kappas[i % 4]);
      const double T = std::min(1.0, lte::max_exact_horizon(mach));
      const auto mix = lte::endpoint_mixture(mach, T, nu);
      const double mean = rng.uniform() < mix.weight_first ? mix.mean_first : mix.mean_second;
      const double r = mean + std::sqrt(mix.variance) * rng.normal();
      const double log_ratio =
          lte::log_target_density(mach, r, T) - lte::log_proposal_density(mach, r, T, nu);
      const double gap = log_ratio - lte::log_rejection_bound(mach, T, nu);
      worst = std::max(worst, gap);
      if (gap > 0.0) ++violations;
    }
    ok = ok && violations == 0;
    detail += fmt::format(" {}: {} violations in {} draws (max log ratio - log K {:.3g});", name,
                          violations, draws, worst);
  }
  return {ok, "unnormalized rejection bound" + detail};
}

Outcome criterion9() {
  bool ok = true;
  std::string detail;
  for (const auto& m : kModels) {
    const auto cfg = table_config(m, {"lte", "em", "sem", "exp"}, {1, 2, 3, 4});
    auto one = cfg;
    one.threads = 1;
    auto many = cfg;
    many.threads = 8;
    const bool same = to_csv(lte::boundary_table(one)) == to_csv(lte::boundary_table(many));
    ok = ok && same;
    detail += fmt::format(" boundary-table {} {};", m, same ? "identical" : "DIFFERS");
  }
  for (const auto& m : kModels) {
    const bool same = weak_run(m, 1).first == weak_run(m, 8).first;
    ok = ok && same;
    detail += fmt::format(" weak-error {} {};", m, same ? "identical" : "DIFFERS");
  }
  return {ok, "threads 1 vs 8:" + detail};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expect_fail;
  std::string report_path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto value = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << "missing value for " << arg << '\n';
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--only") {
      only = parse_list(value());
    } else if (arg == "--expect-fail") {
      expect_fail = parse_list(value());
    } else if (arg == "--report") {
      report_path = value();
    } else if (arg == "--threads") {
      g_threads = static_cast<unsigned>(std::stoul(value()));
    } else {
      std::cerr << "usage: lte_acceptance [--only 1,2] [--expect-fail 3] [--report file] [--threads n]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"LTE boundary preservation", criterion1},
      {"EM domain violation", criterion2},
      {"baseline gradation", criterion3},
      {"weak order 1/4", criterion4},
      {"exact-step distributional oracle", criterion5},
      {"thinning acceptance floor", criterion6},
      {"semigroup oracle equivalence", criterion7},
      {"rejection-bound validity", criterion8},
      {"reproducibility", criterion9},
  };

  std::ofstream report;
  if (!report_path.empty()) report.open(report_path, std::ios::trunc);
  int unexpected = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    std::cerr << fmt::format("running criterion {} ({})...\n", id, criteria[k].first);
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool expected_fail = expect_fail.count(id) > 0;
    if (out.pass == expected_fail) ++unexpected;
    const std::string line =
        fmt::format("criterion {} {}: {}: {} [{:.1f}s]{}", id, out.pass ? "PASS" : "FAIL",
                    criteria[k].first, out.detail, secs,
                    expected_fail ? (out.pass ? " (expected to fail)" : " (known failure)") : "");
    std::cout << line << std::endl;
    if (report) report << line << std::endl;
  }
  return unexpected == 0 ? 0 : 1;
}

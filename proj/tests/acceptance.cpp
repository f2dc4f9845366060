// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries a wall-clock budget that is part of the
// pass condition.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "robustmean/robustmean.hpp"

namespace {

using namespace robustmean;
using Clock = std::chrono::steady_clock;

int g_failures = 0;
std::vector<std::string> g_notes;

void expect(bool ok, const std::string& what) {
  if (!ok) g_notes.push_back(what);
}

void criterion(int number, const std::string& title, double budget_seconds,
               const std::function<void()>& body) {
  g_notes.clear();
  const auto start = Clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    g_notes.push_back(std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  if (elapsed > budget_seconds) {
    g_notes.push_back("over time budget: " + std::to_string(elapsed) + "s > " +
                      std::to_string(budget_seconds) + "s");
  }
  if (g_notes.empty()) {
    std::printf("[PASS] criterion %d: %s (%.1fs)\n", number, title.c_str(), elapsed);
  } else {
    ++g_failures;
    std::printf("[FAIL] criterion %d: %s (%.1fs)\n", number, title.c_str(), elapsed);
    for (const auto& note : g_notes) std::printf("       - %s\n", note.c_str());
  }
  std::fflush(stdout);
}

std::string frac(const Rational& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

}  // namespace

int main() {
  const double c1 = std::sqrt(2.0 * M_PI);
  const double sigma_mad = 0.6744897501960817;  // MAD of the unit Gaussian

  criterion(1, "breakdown ordering across estimators at n = 20", 10.0, [&] {
    const std::uint64_t seed = 42;
    const auto mean_r = empirical_rbp(EstimatorSpec::Mean(), 20, seed);
    expect(mean_r.empirical_rbp == Rational{1, 20},
           "mean breakdown " + frac(mean_r.empirical_rbp) + " != 1/20");

    const auto catoni_r = empirical_rbp(EstimatorSpec::Catoni(1.0), 20, seed);
    expect(catoni_r.empirical_rbp == Rational{1, 20},
           "catoni breakdown " + frac(catoni_r.empirical_rbp) + " != 1/20");

    const auto mom_r = empirical_rbp(EstimatorSpec::Mom(10), 20, seed);
    expect(mom_r.empirical_rbp.value() >= 1.0 / 20.0 &&
               mom_r.empirical_rbp.value() <= 5.0 / 20.0,
           "mom(k=10) breakdown " + frac(mom_r.empirical_rbp) + " outside [1/20, 5/20]");
    expect(mom_r.monotone, "mom divergence not monotone in m");

    const auto lm_r = empirical_rbp(EstimatorSpec::LmTrimmed(0.2), 20, seed);
    expect(lm_r.empirical_rbp == Rational{5, 40},
           "lm_trimmed breakdown " + frac(lm_r.empirical_rbp) + " != 5/40");

    const auto win_r = empirical_rbp(EstimatorSpec::Winsorized(3.0), 20, seed);
    expect(win_r.empirical_rbp == Rational{10, 20},
           "winsorized breakdown " + frac(win_r.empirical_rbp) + " != 10/20");
    expect(win_r.monotone, "winsorized divergence not monotone in m");

    // One point below the breakdown count, the winsorized mean never
    // diverges, over 100 independent base samples.
    for (std::uint64_t s = 0; s < 100; ++s) {
      if (breakdown_probe(EstimatorSpec::Winsorized(3.0), 20, 9,
                          default_magnitude_schedule(), s)
              .diverged) {
        expect(false, "winsorized diverged at m = 9, seed " + std::to_string(s));
        break;
      }
    }
  });

  criterion(2, "median breakdown at odd n = 21", 5.0, [&] {
    const auto r = empirical_rbp(EstimatorSpec::Median(), 21, 42);
    expect(r.empirical_rbp == Rational{11, 21},
           "median breakdown " + frac(r.empirical_rbp) + " != 11/21");
    expect(r.theoretical_rbp == Rational{11, 21}, "theory mismatch");
    expect(!r.theoretical_is_upper_bound, "median breakdown should be exact");
  });

  criterion(3, "deviation bound dominates the empirical 95% quantile", 120.0, [&] {
    const auto dist = DistributionSpec::Gaussian(0.0, 1.0);
    for (const double eps : {0.0, 0.02}) {
      BoundParams p;
      p.n = 100000;
      p.delta = 0.05;
      p.eps = eps;
      p.eps_star = 2.0 * eps;
      p.beta = 3.0;
      p.mu = 0.0;
      p.sigma = sigma_mad;
      p.sigma_x = 1.0;
      p.c1 = p.c2 = c1;
      const ValidityResult v = check_validity(p);
      expect(v.valid, "validity precondition fails at eps = " + std::to_string(eps));
      const double bound = theorem41_bound(p).value;

      const DeviationReport r = deviation_experiment(
          EstimatorSpec::Winsorized(3.0), dist, p.n, 2000, eps,
          ContaminationStrategy::point_mass, 1e6, 0.05, 2024, 0);
      expect(r.quantile_at_delta < bound,
             "quantile " + std::to_string(r.quantile_at_delta) + " >= bound " +
                 std::to_string(bound) + " at eps = " + std::to_string(eps));
      std::printf("       criterion 3, eps=%.2f: quantile=%.6f bound=%.6f slack=%.2fx\n",
                  eps, r.quantile_at_delta, bound, bound / r.quantile_at_delta);
    }
  });

  criterion(4, "winsorized tails are sub-Gaussian where the mean's are not", 120.0, [&] {
    const DeviationReport win = deviation_experiment(
        EstimatorSpec::Winsorized(3.0), DistributionSpec::Gaussian(0.0, 1.0), 1000,
        10000, 0.0, ContaminationStrategy::point_mass, 1e6, 0.05, 7, 0);
    const TailFit win_fit = tail_fit(win);
    expect(win_fit.slope < 0.0, "winsorized slope not negative");
    expect(win_fit.r_squared >= 0.95,
           "winsorized fit r^2 = " + std::to_string(win_fit.r_squared) + " < 0.95");

    const DeviationReport heavy = deviation_experiment(
        EstimatorSpec::Mean(), DistributionSpec::Pareto(1.5), 500, 4000, 0.0,
        ContaminationStrategy::point_mass, 1e6, 0.05, 13, 0);
    const TailFit heavy_fit = tail_fit(heavy);
    expect(heavy_fit.r_squared < 0.95,
           "heavy-tailed mean fit r^2 = " + std::to_string(heavy_fit.r_squared) +
               " unexpectedly >= 0.95");
    std::printf("       criterion 4: winsorized r2=%.4f slope=%.1f, pareto mean r2=%.4f\n",
                win_fit.r_squared, win_fit.slope, heavy_fit.r_squared);
  });

  criterion(5, "median stability frequency under contamination", 60.0, [&] {
    const Lemma41Report r =
        lemma41_check(DistributionSpec::Gaussian(0.0, 1.0), 100000, 1000, 0.02, 0.05,
                      c1, c1, 3.0, 1e6, 2024, 0);
    const double needed = 1.0 - 0.05 / 6.0;
    expect(r.median_ok_fraction >= needed,
           "median ok fraction " + std::to_string(r.median_ok_fraction) + " < " +
               std::to_string(needed));
    std::printf("       criterion 5: median ok fraction=%.4f (needed %.4f)\n",
                r.median_ok_fraction, needed);
  });

  criterion(6, "bound calculators agree with straight-line evaluation", 5.0, [&] {
    std::size_t points = 0;
    for (std::size_t n : {100, 1000, 10000, 100000, 1000000}) {
      for (double delta : {0.01, 0.05, 0.2, 0.5}) {
        for (double eps : {0.0, 0.02, 0.05, 0.1, 0.2}) {
          const double eps_star = eps == 0.0 ? 0.0 : 2.0 * eps;
          BoundParams p;
          p.n = n;
          p.delta = delta;
          p.eps = eps;
          p.eps_star = eps_star;
          p.beta = 3.0;
          p.sigma = sigma_mad;
          p.sigma_x = 1.0;
          p.c1 = p.c2 = c1;
          const double want = oracles::theorem41_bound(n, delta, eps, eps_star, 3.0, 0.0,
                                                       sigma_mad, 1.0, c1, c1);
          expect(std::fabs(theorem41_bound(p).value - want) <= 1e-12 * std::fabs(want),
                 "bound mismatch at n=" + std::to_string(n));
          const double bt = oracles::bernstein_tail(n, delta, 0.3, 1.0);
          expect(std::fabs(bernstein_tail(n, delta, 0.3, 1.0) - bt) <= 1e-12 * bt,
                 "bernstein mismatch at n=" + std::to_string(n));
          if (eps_star > 0.0) {
            const double ds = oracles::delta_star(n, eps_star);
            expect(std::fabs(delta_star(n, eps_star) - ds) <= 1e-12 * ds,
                   "delta_star mismatch at n=" + std::to_string(n));
          }
          const double sr = oracles::subgaussian_radius(1.7, n, delta, 1.3);
          expect(std::fabs(subgaussian_radius(1.7, n, delta, 1.3) - sr) <= 1e-12 * sr,
                 "radius mismatch at n=" + std::to_string(n));
          ++points;
        }
      }
    }
    expect(points == 100, "grid size != 100");
  });

  criterion(7, "winsorizing matches brute force on every small sample", 30.0, [&] {
    const std::vector<double> grid{-2.0, -0.5, 0.0, 1.0, 3.0};
    std::size_t checked = 0, failures = 0;
    // Exhaustive sweep of every tuple of sizes 1..8 over the grid.
    for (std::size_t n = 1; n <= 8 && failures == 0; ++n) {
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = grid[idx[i]];
        const Sample s{v};
        for (double beta : {0.0, 1.0, 3.0}) {
          bool lib_throws = false, oracle_throws = false;
          double lib = 0.0, want = 0.0;
          try {
            lib = winsorized_mean(s, {.beta = beta});
          } catch (const std::domain_error&) {
            lib_throws = true;
          }
          try {
            want = oracles::winsorized_mean(v, beta);
          } catch (const std::domain_error&) {
            oracle_throws = true;
          }
          if (lib_throws != oracle_throws ||
              (!lib_throws && std::fabs(lib - want) > 1e-9)) {
            ++failures;
            expect(false, "mismatch at n=" + std::to_string(n) +
                              " beta=" + std::to_string(beta));
            break;
          }
          ++checked;
        }
        // Sample-range invariant.
        if (std::fabs(mad(s)) > 0.0) {
          const double est = winsorized_mean(s, {.beta = 3.0});
          if (est < s.sorted().front() - 1e-12 || est > s.sorted().back() + 1e-12) {
            ++failures;
            expect(false, "estimate outside sample range");
          }
        }
        // Next tuple.
        std::size_t pos = 0;
        while (pos < n && ++idx[pos] == grid.size()) idx[pos++] = 0;
        if (pos == n) break;
      }
    }
    expect(failures == 0, "brute-force sweep found mismatches");
    std::printf("       criterion 7: %zu exhaustive comparisons\n", checked);
  });

  criterion(8, "efficiency cost on clean Gaussian data", 60.0, [&] {
    const EfficiencyReport r = efficiency_comparison(
        DistributionSpec::Gaussian(0.0, 1.0), 1000, 5000,
        {EstimatorSpec::Winsorized(3.0), EstimatorSpec::Median()}, 17, 0);
    const double win = r.rows[1].relative_to_mean;
    const double med = r.rows[2].relative_to_mean;
    expect(win <= 1.10, "winsorized/mean se ratio " + std::to_string(win) + " > 1.10");
    expect(med >= 1.10 && med <= 1.40,
           "median/mean se ratio " + std::to_string(med) + " outside [1.10, 1.40]");
    std::printf("       criterion 8: winsorized ratio=%.4f median ratio=%.4f\n", win, med);
  });

  criterion(9, "reports are byte-identical across worker counts", 30.0, [&] {
    const auto dist = DistributionSpec::Gaussian(0.0, 1.0);
    const auto run = [&](unsigned threads) {
      return json(deviation_experiment(EstimatorSpec::Winsorized(3.0), dist, 500, 500,
                                       0.05, ContaminationStrategy::point_mass, 1e6,
                                       0.05, 99, threads))
          .dump();
    };
    const std::string serial = run(1);
    expect(serial == run(4), "deviation JSON differs between 1 and 4 workers");
    expect(serial == run(1), "deviation JSON differs between repeated runs");

    const auto eff = [&](unsigned threads) {
      return json(efficiency_comparison(dist, 200, 1000, {EstimatorSpec::Median()}, 5,
                                        threads))
          .dump();
    };
    expect(eff(1) == eff(3), "efficiency JSON differs between 1 and 3 workers");
  });

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}

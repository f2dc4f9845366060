#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "robustmean/bounds.hpp"
#include "robustmean/experiments.hpp"
#include "robustmean/rng.hpp"

using namespace robustmean;
using Catch::Approx;

TEST_CASE("breakdown_probe basic cases", "[experiments]") {
  const auto& schedule = default_magnitude_schedule();
  CHECK(breakdown_probe(EstimatorSpec::Mean(), 10, 1, schedule, 42).diverged);
  CHECK_FALSE(breakdown_probe(EstimatorSpec::Winsorized(3.0), 10, 4, schedule, 42).diverged);
  CHECK(breakdown_probe(EstimatorSpec::Winsorized(3.0), 10, 5, schedule, 42).diverged);
  CHECK_THROWS_AS(breakdown_probe(EstimatorSpec::Mean(), 10, 11, schedule, 42),
                  std::domain_error);
  CHECK_THROWS_AS(breakdown_probe(EstimatorSpec::Mean(), 10, 1, {1e3}, 42),
                  std::domain_error);
}

TEST_CASE("empirical_rbp matches theory", "[experiments]") {
  const BreakdownReport catoni = empirical_rbp(EstimatorSpec::Catoni(1.0), 20, 42);
  CHECK(catoni.empirical_rbp == Rational{1, 20});
  CHECK(catoni.monotone);

  const BreakdownReport mom_report = empirical_rbp(EstimatorSpec::Mom(5), 20, 42);
  CHECK(mom_report.empirical_rbp.value() <= Rational{3, 20}.value());
  CHECK(mom_report.theoretical_is_upper_bound);
  CHECK(mom_report.monotone);

  const BreakdownReport med = empirical_rbp(EstimatorSpec::Median(), 21, 42);
  CHECK(med.empirical_rbp == Rational{11, 21});
  CHECK(med.theoretical_rbp == Rational{11, 21});
  CHECK(med.monotone);
}

TEST_CASE("deviation_experiment on the clean Gaussian mean", "[experiments]") {
  const auto dist = DistributionSpec::Gaussian(0, 1);
  const DeviationReport r = deviation_experiment(
      EstimatorSpec::Mean(), dist, 1000, 2000, 0.0, ContaminationStrategy::point_mass,
      1e6, 0.05, 7, 1);
  // The Gaussian mean is exactly sub-Gaussian: the empirical 95% deviation
  // quantile sits at 1.96 / sqrt(n) and below the radius with c = sqrt(2).
  const double normal_q = 1.959963984540054 / std::sqrt(1000.0);
  CHECK(r.quantile_at_delta == Approx(normal_q).epsilon(0.06));
  CHECK(r.quantile_at_delta <= subgaussian_radius(1.0, 1000, 0.05, std::sqrt(2.0)));
  CHECK(r.target == 0.0);
  CHECK(std::is_sorted(r.deviations.begin(), r.deviations.end()));
  // Tail curve is a valid survival function.
  double prev = 1.0;
  for (const TailPoint& p : r.tail_curve) {
    CHECK(p.probability >= 0.0);
    CHECK(p.probability <= prev);
    prev = p.probability;
  }
}

TEST_CASE("deviation_experiment input validation", "[experiments]") {
  const auto dist = DistributionSpec::Gaussian(0, 1);
  CHECK_THROWS_AS(deviation_experiment(EstimatorSpec::Mean(), dist, 100, 50, 0.0,
                                       ContaminationStrategy::point_mass, 1e6, 0.05, 0),
                  std::domain_error);
  // Asymmetric family without a supplied target.
  CHECK_THROWS_AS(deviation_experiment(EstimatorSpec::Winsorized(3.0),
                                       DistributionSpec::Pareto(1.5), 100, 100, 0.0,
                                       ContaminationStrategy::point_mass, 1e6, 0.05, 0),
                  std::domain_error);
  // A caller-supplied target unblocks it.
  CHECK_NOTHROW(deviation_experiment(EstimatorSpec::Winsorized(3.0),
                                     DistributionSpec::Pareto(1.5), 100, 100, 0.0,
                                     ContaminationStrategy::point_mass, 1e6, 0.05, 0, 1,
                                     1.9));
}

TEST_CASE("fractional eps n is floored and flagged", "[experiments]") {
  const auto dist = DistributionSpec::Gaussian(0, 1);
  const DeviationReport r = deviation_experiment(
      EstimatorSpec::Median(), dist, 101, 100, 0.02, ContaminationStrategy::point_mass,
      1e6, 0.05, 3, 1);
  CHECK(r.eps_n_fractional);
}

TEST_CASE("tail_fit on synthetic exact-Gaussian deviations", "[experiments][oracle]") {
  // Deviations set to |Phi^-1((i + 1/2) / N)|: the absolute error of a unit
  // Gaussian, so the fitted slope must sit near -1/2 (the log-survival of a
  // Gaussian against r^2 carries a -log r correction, which puts the
  // least-squares slope at about -0.60 on this grid).
  const std::size_t trials = 10000;
  DeviationReport r;
  r.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(trials);
    r.deviations.push_back(std::fabs(rng::normal_quantile(u)));
  }
  std::sort(r.deviations.begin(), r.deviations.end());
  const double lo = r.deviations[trials / 2];
  const double hi = r.deviations[static_cast<std::size_t>(0.999 * trials)];
  for (int i = 0; i < 50; ++i) {
    const double f = i / 49.0;
    const double radius = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
    const auto exceed = r.deviations.end() -
                        std::upper_bound(r.deviations.begin(), r.deviations.end(), radius);
    r.tail_curve.push_back({radius, static_cast<double>(exceed) / trials});
  }
  const TailFit fit = tail_fit(r);
  CHECK(fit.slope < 0.0);
  CHECK(fit.slope == Approx(-0.605).margin(0.05));
  CHECK(std::fabs(fit.slope - (-0.5)) / 0.5 < 0.25);
  CHECK(fit.r_squared > 0.99);
}

TEST_CASE("tail_fit rejects degenerate input", "[experiments]") {
  DeviationReport r;
  r.deviations.assign(500, 0.0);  // all-zero deviations: no usable tail points
  CHECK_THROWS_AS(tail_fit(r), std::runtime_error);
}

TEST_CASE("heavy-tailed mean fails the sub-Gaussian fit", "[experiments]") {
  const auto dist = DistributionSpec::Pareto(1.5);
  const DeviationReport r = deviation_experiment(
      EstimatorSpec::Mean(), dist, 500, 3000, 0.0, ContaminationStrategy::point_mass,
      1e6, 0.05, 13, 1);
  CHECK(tail_fit(r).r_squared < 0.9);
}

TEST_CASE("lemma41_check", "[experiments]") {
  const auto dist = DistributionSpec::Gaussian(0, 1);
  const double c1 = std::sqrt(2.0 * M_PI);

  // Point-mass family: the contaminated median is exactly unchanged while
  // the replaced points stay a minority.
  const Lemma41Report pm = lemma41_check(DistributionSpec::PointMass(2.0), 101, 100, 0.1,
                                         0.2, c1, c1, 3.0, 1e6, 5, 1);
  CHECK(pm.median_ok_fraction == 1.0);

  // Contamination only hurts: paired-seed comparison at eps = 0 vs 0.02.
  const Lemma41Report clean =
      lemma41_check(dist, 2000, 200, 0.0, 0.05, c1, c1, 3.0, 1e6, 21, 1);
  const Lemma41Report dirty =
      lemma41_check(dist, 2000, 200, 0.02, 0.05, c1, c1, 3.0, 1e6, 21, 1);
  CHECK(clean.median_ok_fraction >= dirty.median_ok_fraction);
  CHECK(clean.median_ok_fraction > 0.95);

  CHECK_THROWS_AS(lemma41_check(dist, 100, 100, 0.1, 0.1, c1, c1, 3.0, 1e6, 0, 1),
                  std::domain_error);
}

TEST_CASE("efficiency_comparison on the Gaussian", "[experiments]") {
  const auto dist = DistributionSpec::Gaussian(0, 1);
  const EfficiencyReport r = efficiency_comparison(
      dist, 1000, 1500,
      {EstimatorSpec::Median(), EstimatorSpec::Winsorized(3.0)}, 17, 1);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].estimator == "mean");
  CHECK(r.rows[0].relative_to_mean == 1.0);
  // Classical asymptotic relative efficiency sqrt(pi/2) for the median.
  CHECK(r.rows[1].relative_to_mean == Approx(std::sqrt(M_PI / 2.0)).epsilon(0.10));
  CHECK(r.rows[2].relative_to_mean <= 1.10);
  CHECK_THROWS_AS(efficiency_comparison(dist, 100, 100, {}, 0, 1), std::domain_error);
}

TEST_CASE("winsorized beats the mean on heavy tails", "[experiments]") {
  const auto dist = DistributionSpec::StudentT(2.0);
  const EfficiencyReport r =
      efficiency_comparison(dist, 500, 1500, {EstimatorSpec::Winsorized(3.0)}, 29, 1);
  CHECK(r.rows[1].relative_to_mean < 1.0);
}

TEST_CASE("experiments are deterministic across thread widths", "[experiments][determinism]") {
  const auto dist = DistributionSpec::Gaussian(0, 1);
  const auto run = [&](unsigned threads) {
    return deviation_experiment(EstimatorSpec::Winsorized(3.0), dist, 200, 400, 0.05,
                                ContaminationStrategy::point_mass, 1e6, 0.05, 99, threads);
  };
  const DeviationReport serial = run(1);
  const DeviationReport wide = run(4);
  CHECK(serial == wide);
  CHECK(run(1) == serial);

  const auto eff = [&](unsigned threads) {
    return efficiency_comparison(dist, 100, 1000, {EstimatorSpec::Median()}, 5, threads);
  };
  CHECK(eff(1) == eff(3));
}

#pragma once

#include <cstdint>
#include <sstream>
#include <string>

#include <json.hpp>

#include "robustmean/bounds.hpp"
#include "robustmean/experiments.hpp"

// Report serialization. JSON is the round-trip format; CSV is the fixed
// column schema with a versioned header comment; the SVG tail plot is
// self-contained (inline styles only).

namespace robustmean {

using nlohmann::json;

inline std::string csv_header(const std::string& command, std::uint64_t seed) {
  std::ostringstream out;
  out << "# robust-mean-lab report v1, command=" << command << ", seed=" << seed << "\n";
  return out.str();
}

// ---- BreakdownReport ----

inline void to_json(json& j, const Rational& r) { j = json{{"num", r.num}, {"den", r.den}}; }
inline void from_json(const json& j, Rational& r) {
  j.at("num").get_to(r.num);
  j.at("den").get_to(r.den);
}

inline void to_json(json& j, const BreakdownEntry& e) {
  j = json{{"m", e.m}, {"diverged", e.diverged}, {"max_abs_estimate", e.max_abs_estimate}};
}
inline void from_json(const json& j, BreakdownEntry& e) {
  j.at("m").get_to(e.m);
  j.at("diverged").get_to(e.diverged);
  j.at("max_abs_estimate").get_to(e.max_abs_estimate);
}

inline void to_json(json& j, const BreakdownReport& r) {
  j = json{{"estimator", r.estimator},
           {"n", r.n},
           {"per_m", r.per_m},
           {"empirical_rbp", r.empirical_rbp},
           {"theoretical_rbp", r.theoretical_rbp},
           {"theoretical_is_upper_bound", r.theoretical_is_upper_bound},
           {"monotone", r.monotone},
           {"seed", r.seed}};
}
inline void from_json(const json& j, BreakdownReport& r) {
  j.at("estimator").get_to(r.estimator);
  j.at("n").get_to(r.n);
  j.at("per_m").get_to(r.per_m);
  j.at("empirical_rbp").get_to(r.empirical_rbp);
  j.at("theoretical_rbp").get_to(r.theoretical_rbp);
  j.at("theoretical_is_upper_bound").get_to(r.theoretical_is_upper_bound);
  j.at("monotone").get_to(r.monotone);
  j.at("seed").get_to(r.seed);
}

inline std::string to_csv(const BreakdownReport& r) {
  std::ostringstream out;
  out << csv_header("breakdown", r.seed);
  out << "estimator,n,m,diverged,max_abs_estimate,empirical_rbp,theoretical_rbp,upper_bound\n";
  for (const auto& e : r.per_m) {
    out << r.estimator << ',' << r.n << ',' << e.m << ',' << (e.diverged ? 1 : 0) << ','
        << e.max_abs_estimate << ',' << r.empirical_rbp.num << '/' << r.empirical_rbp.den
        << ',' << r.theoretical_rbp.num << '/' << r.theoretical_rbp.den << ','
        << (r.theoretical_is_upper_bound ? 1 : 0) << '\n';
  }
  return out.str();
}

// ---- DeviationReport ----

inline void to_json(json& j, const TailPoint& p) {
  j = json{{"r", p.r}, {"probability", p.probability}};
}
inline void from_json(const json& j, TailPoint& p) {
  j.at("r").get_to(p.r);
  j.at("probability").get_to(p.probability);
}

inline void to_json(json& j, const DeviationReport& r) {
  j = json{{"estimator", r.estimator},
           {"dist", r.dist},
           {"n", r.n},
           {"trials", r.trials},
           {"eps", r.eps},
           {"delta", r.delta},
           {"target", r.target},
           {"seed", r.seed},
           {"eps_n_fractional", r.eps_n_fractional},
           {"deviations", r.deviations},
           {"tail_curve", r.tail_curve},
           {"quantile_at_delta", r.quantile_at_delta}};
}
inline void from_json(const json& j, DeviationReport& r) {
  j.at("estimator").get_to(r.estimator);
  j.at("dist").get_to(r.dist);
  j.at("n").get_to(r.n);
  j.at("trials").get_to(r.trials);
  j.at("eps").get_to(r.eps);
  j.at("delta").get_to(r.delta);
  j.at("target").get_to(r.target);
  j.at("seed").get_to(r.seed);
  j.at("eps_n_fractional").get_to(r.eps_n_fractional);
  j.at("deviations").get_to(r.deviations);
  j.at("tail_curve").get_to(r.tail_curve);
  j.at("quantile_at_delta").get_to(r.quantile_at_delta);
}

inline std::string to_csv(const DeviationReport& r) {
  std::ostringstream out;
  out << csv_header("deviation", r.seed);
  out << "estimator,dist,n,trials,eps,delta,target,quantile_at_delta,r,probability\n";
  for (const auto& p : r.tail_curve) {
    out << r.estimator << ',' << r.dist << ',' << r.n << ',' << r.trials << ',' << r.eps
        << ',' << r.delta << ',' << r.target << ',' << r.quantile_at_delta << ',' << p.r
        << ',' << p.probability << '\n';
  }
  return out.str();
}

// ---- Lemma41Report ----

inline void to_json(json& j, const Lemma41Report& r) {
  j = json{{"dist", r.dist},
           {"n", r.n},
           {"trials", r.trials},
           {"eps", r.eps},
           {"eps_star", r.eps_star},
           {"median_threshold", r.median_threshold},
           {"mad_threshold", r.mad_threshold},
           {"median_ok_fraction", r.median_ok_fraction},
           {"mad_ok_fraction", r.mad_ok_fraction},
           {"seed", r.seed}};
}
inline void from_json(const json& j, Lemma41Report& r) {
  j.at("dist").get_to(r.dist);
  j.at("n").get_to(r.n);
  j.at("trials").get_to(r.trials);
  j.at("eps").get_to(r.eps);
  j.at("eps_star").get_to(r.eps_star);
  j.at("median_threshold").get_to(r.median_threshold);
  j.at("mad_threshold").get_to(r.mad_threshold);
  j.at("median_ok_fraction").get_to(r.median_ok_fraction);
  j.at("mad_ok_fraction").get_to(r.mad_ok_fraction);
  j.at("seed").get_to(r.seed);
}

// ---- EfficiencyReport ----

inline void to_json(json& j, const EfficiencyRow& r) {
  j = json{{"estimator", r.estimator},
           {"standard_error", r.standard_error},
           {"relative_to_mean", r.relative_to_mean}};
}
inline void from_json(const json& j, EfficiencyRow& r) {
  j.at("estimator").get_to(r.estimator);
  j.at("standard_error").get_to(r.standard_error);
  j.at("relative_to_mean").get_to(r.relative_to_mean);
}

inline void to_json(json& j, const EfficiencyReport& r) {
  j = json{{"dist", r.dist}, {"n", r.n},       {"trials", r.trials},
           {"rows", r.rows}, {"seed", r.seed}};
}
inline void from_json(const json& j, EfficiencyReport& r) {
  j.at("dist").get_to(r.dist);
  j.at("n").get_to(r.n);
  j.at("trials").get_to(r.trials);
  j.at("rows").get_to(r.rows);
  j.at("seed").get_to(r.seed);
}

inline std::string to_csv(const EfficiencyReport& r) {
  std::ostringstream out;
  out << csv_header("efficiency", r.seed);
  out << "dist,n,trials,estimator,standard_error,relative_to_mean\n";
  for (const auto& row : r.rows) {
    out << r.dist << ',' << r.n << ',' << r.trials << ',' << row.estimator << ','
        << row.standard_error << ',' << row.relative_to_mean << '\n';
  }
  return out.str();
}

// ---- Bound summary ----

struct BoundReport {
  BoundParams params;
  double delta_star_value = 0.0;
  bool valid = false;
  std::size_t min_n = 0;
  double bound = 0.0;
  double statistical = 0.0;
  double contamination = 0.0;
};

inline BoundReport evaluate_bounds(const BoundParams& params) {
  BoundReport r;
  r.params = params;
  const ValidityResult v = check_validity(params);
  r.delta_star_value = v.delta_star_value;
  r.valid = v.valid;
  r.min_n = v.min_n;
  const DeviationBound b = theorem41_bound(params);
  r.bound = b.value;
  r.statistical = b.statistical;
  r.contamination = b.contamination;
  return r;
}

inline void to_json(json& j, const BoundReport& r) {
  j = json{{"n", r.params.n},
           {"delta", r.params.delta},
           {"eps", r.params.eps},
           {"eps_star", r.params.eps_star},
           {"beta", r.params.beta},
           {"mu", r.params.mu},
           {"sigma", r.params.sigma},
           {"sigma_x", r.params.sigma_x},
           {"c1", r.params.c1},
           {"c2", r.params.c2},
           {"delta_star", r.delta_star_value},
           {"valid", r.valid},
           {"min_n", r.min_n},
           {"bound", r.bound},
           {"statistical", r.statistical},
           {"contamination", r.contamination}};
}

inline std::string to_csv(const BoundReport& r, std::uint64_t seed) {
  std::ostringstream out;
  out << csv_header("bounds", seed);
  out << "n,delta,eps,eps_star,beta,delta_star,valid,min_n,bound,statistical,contamination\n";
  out << r.params.n << ',' << r.params.delta << ',' << r.params.eps << ','
      << r.params.eps_star << ',' << r.params.beta << ',' << r.delta_star_value << ','
      << (r.valid ? 1 : 0) << ',' << r.min_n << ',' << r.bound << ',' << r.statistical
      << ',' << r.contamination << '\n';
  return out.str();
}

// ---- SVG tail plot: log P against r^2 scatter with the fitted line ----

inline std::string tail_svg(const DeviationReport& report, const TailFit& fit) {
  constexpr int kWidth = 640, kHeight = 480, kMargin = 60;
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  std::vector<std::pair<double, double>> points;
  for (const auto& p : report.tail_curve) {
    if (p.probability <= 0.0) continue;
    const double x = p.r * p.r, y = std::log(p.probability);
    points.emplace_back(x, y);
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  if (points.empty() || x_max <= x_min || y_max <= y_min) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>";
  }
  const auto px = [&](double x) {
    return kMargin + (x - x_min) / (x_max - x_min) * (kWidth - 2 * kMargin);
  };
  const auto py = [&](double y) {
    return kHeight - kMargin - (y - y_min) / (y_max - y_min) * (kHeight - 2 * kMargin);
  };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">r^2</text>\n";
  svg << "<text x=\"18\" y=\"" << kHeight / 2
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 "
      << kHeight / 2 << ")\">log P(|T - target| &gt; r)</text>\n";
  svg << "<text x=\"" << kWidth / 2
      << "\" y=\"25\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
      << report.estimator << " on " << report.dist << ", n=" << report.n
      << ", slope=" << fit.slope << ", r2=" << fit.r_squared << "</text>\n";
  for (const auto& [x, y] : points) {
    svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
        << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  // Fitted line over the plotted x range; intercept recovered from the
  // point cloud so the line passes through its centroid.
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  const double intercept = my - fit.slope * mx;
  svg << "<line x1=\"" << px(x_min) << "\" y1=\"" << py(fit.slope * x_min + intercept)
      << "\" x2=\"" << px(x_max) << "\" y2=\"" << py(fit.slope * x_max + intercept)
      << "\" stroke=\"crimson\" stroke-width=\"1.5\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace robustmean

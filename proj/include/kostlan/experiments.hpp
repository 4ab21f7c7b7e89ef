#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kostlan/sampler.hpp"
#include "kostlan/serialization.hpp"
#include "kostlan/topology.hpp"

namespace kostlan {

// One Monte Carlo run. `threads` controls execution only and is never echoed
// into reports, so serial and parallel runs emit identical bytes.
struct ExperimentConfig {
  int schema = 1;
  std::string kind;  // stability | isotopy | betti_tail | nest_tail |
                     // mean_root_count | c1_sobolev_ratio
  int n = 1;
  std::vector<int> d_list;
  std::vector<int> L_list;  // empty -> L_rule applies
  std::string L_rule = "sqrt(b*d*log d)";
  double b = 4.0;
  double alpha = 0.0;
  int trials = 100;
  std::uint64_t master_seed = 0;
  int threads = 1;
};

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  if (j.value("schema", 1) != 1)
    throw std::invalid_argument("config: unsupported schema version");
  cfg.kind = j.at("kind").get<std::string>();
  cfg.n = j.value("n", 1);
  const auto& d = j.at("d");
  if (d.is_array())
    cfg.d_list = d.get<std::vector<int>>();
  else
    cfg.d_list = {d.get<int>()};
  if (j.contains("L")) {
    const auto& L = j.at("L");
    if (L.is_array())
      cfg.L_list = L.get<std::vector<int>>();
    else
      cfg.L_list = {L.get<int>()};
  }
  cfg.L_rule = j.value("L_rule", cfg.L_rule);
  cfg.b = j.value("b", cfg.b);
  cfg.alpha = j.value("alpha", cfg.alpha);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.master_seed = j.value("master_seed", std::uint64_t(0));
  cfg.threads = j.value("threads", 1);
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.n != 1 && cfg.n != 2) throw std::invalid_argument("config: n must be 1 or 2");
  if (cfg.d_list.empty()) throw std::invalid_argument("config: empty degree list");
  return cfg;
}

inline json config_echo(const ExperimentConfig& cfg) {
  return {{"schema", cfg.schema},   {"kind", cfg.kind},
          {"n", cfg.n},             {"d", cfg.d_list},
          {"L", cfg.L_list},        {"L_rule", cfg.L_rule},
          {"b", cfg.b},             {"alpha", cfg.alpha},
          {"trials", cfg.trials},   {"master_seed", cfg.master_seed}};
}

// 95% Wilson score interval.
inline std::pair<double, double> wilson95(int successes, int trials) {
  if (trials <= 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double nh = double(trials);
  const double ph = double(successes) / nh;
  const double z2n = z * z / nh;
  const double denom = 1.0 + z2n;
  const double center = (ph + 0.5 * z2n) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nh + 0.25 * z2n / nh) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace detail {

// Index-slotted parallel trial runner; results land in caller-owned vectors
// keyed by trial index, so aggregation order never depends on scheduling.
template <class F>
void parallel_trials(int trials, int threads, F&& fn) {
  threads = std::max(1, std::min(threads, trials));
  if (threads == 1) {
    for (int i = 0; i < trials; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

inline int rule_L(int d, double b) {
  int L = int(std::ceil(std::sqrt(b * d * std::log(double(d)))));
  if (L > d) L = d;
  if ((d - L) % 2 != 0) --L;  // parity-adjust down
  if (L < 0) L = 0;
  return L;
}

inline json prob_cell(json base, int successes, int effective) {
  const auto [lo, hi] = wilson95(successes, effective);
  base["successes"] = successes;
  base["estimate"] = effective > 0 ? double(successes) / effective : 0.0;
  base["ci_lo"] = lo;
  base["ci_hi"] = hi;
  return base;
}

inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * double(v.size() - 1);
  const std::size_t i = std::size_t(pos);
  if (i + 1 >= v.size()) return v.back();
  const double frac = pos - double(i);
  return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

}  // namespace detail

// P{ ||p - p|_L||_C1 < delta(p)/2 } per (d, L); all L evaluated on the same
// sample path so the L-sweep is exactly coupled per trial.
inline json stability_probability(const ExperimentConfig& cfg) {
  json cells = json::array();
  json diagnostics = json::array();
  bool valid = true;
  for (int d : cfg.d_list) {
    std::vector<int> Ls = cfg.L_list;
    if (Ls.empty()) Ls = {detail::rule_L(d, cfg.b)};
    std::sort(Ls.begin(), Ls.end());
    const int nl = int(Ls.size());
    std::vector<char> excluded(cfg.trials, 0);
    std::vector<std::vector<char>> event(cfg.trials, std::vector<char>(nl, 0));
    std::vector<char> nonmono(cfg.trials, 0);
    detail::parallel_trials(cfg.trials, cfg.threads, [&](int t) {
      try {
        auto e = sample_harmonic(cfg.n, d, {cfg.master_seed, std::uint64_t(t)});
        auto dl = delta(e);
        if (dl.singular) throw degenerate_input_error("singular sample");
        bool fired = false;
        for (int k = 0; k < nl; ++k) {
          const double c1 = c1_norm(truncation_residual(e, Ls[k])).value;
          event[t][k] = c1 < 0.5 * dl.value;
          // The event should latch as L grows; a true-then-false trial is the
          // non-monotonicity the diagnostics track.
          if (fired && !event[t][k]) nonmono[t] = 1;
          fired = fired || event[t][k];
        }
      } catch (const std::exception&) {
        excluded[t] = 1;
      }
    });
    int excl = 0, nm = 0;
    for (int t = 0; t < cfg.trials; ++t) {
      excl += excluded[t];
      nm += nonmono[t];
    }
    if (excl * 100 > cfg.trials) valid = false;
    for (int k = 0; k < nl; ++k) {
      int succ = 0;
      for (int t = 0; t < cfg.trials; ++t)
        if (!excluded[t] && event[t][k]) ++succ;
      json cell = {{"d", d}, {"L", Ls[k]}, {"trials", cfg.trials - excl}, {"excluded", excl}};
      cells.push_back(detail::prob_cell(std::move(cell), succ, cfg.trials - excl));
    }
    diagnostics.push_back({{"d", d}, {"nonmonotone_trials", nm}});
  }
  return {{"kind", "stability"},     {"config", config_echo(cfg)}, {"rng", kRngTag},
          {"cells", cells},          {"diagnostics", diagnostics}, {"valid", valid}};
}

// Rate of topology_equal(p, p|_L); also tallies the sufficient stability
// condition per trial so the implication "stable => equal topology" is
// checkable (counterexamples must be zero).
inline json low_degree_isotopy_rate(const ExperimentConfig& cfg) {
  json cells = json::array();
  bool valid = true;
  for (std::size_t di = 0; di < cfg.d_list.size(); ++di) {
    const int d = cfg.d_list[di];
    int L;
    if (cfg.L_list.size() == cfg.d_list.size())
      L = cfg.L_list[di];
    else if (cfg.L_list.size() == 1)
      L = cfg.L_list[0];
    else
      L = detail::rule_L(d, cfg.b);
    std::vector<char> excluded(cfg.trials, 0), equal(cfg.trials, 0), stable(cfg.trials, 0);
    detail::parallel_trials(cfg.trials, cfg.threads, [&](int t) {
      try {
        auto e = sample_harmonic(cfg.n, d, {cfg.master_seed, std::uint64_t(t)});
        auto dl = delta(e);
        if (dl.singular) throw degenerate_input_error("singular sample");
        auto q = truncate(e, L);
        stable[t] = c1_norm(truncation_residual(e, L)).value < 0.5 * dl.value;
        equal[t] = topology_equal(signature(e), signature(q));
      } catch (const std::exception&) {
        excluded[t] = 1;
      }
    });
    int excl = 0, succ = 0, nst = 0, both = 0, counter = 0;
    for (int t = 0; t < cfg.trials; ++t) {
      if (excluded[t]) {
        ++excl;
        continue;
      }
      succ += equal[t];
      nst += stable[t];
      both += stable[t] && equal[t];
      counter += stable[t] && !equal[t];
    }
    if (excl * 100 > cfg.trials) valid = false;
    json cell = {{"d", d},
                 {"L", L},
                 {"trials", cfg.trials - excl},
                 {"excluded", excl},
                 {"stable_trials", nst},
                 {"stable_and_equal", both},
                 {"counterexamples", counter}};
    cells.push_back(detail::prob_cell(std::move(cell), succ, cfg.trials - excl));
  }
  return {{"kind", "isotopy"}, {"config", config_echo(cfg)}, {"rng", kRngTag},
          {"cells", cells},    {"valid", valid}};
}

// P{ b(Z(p)) >= alpha d^n } with b = root count (n=1) or twice the component
// count (n=2).
inline json betti_tail(const ExperimentConfig& cfg) {
  json cells = json::array();
  bool valid = true;
  for (int d : cfg.d_list) {
    const double threshold = cfg.alpha * std::pow(double(d), cfg.n);
    std::vector<char> excluded(cfg.trials, 0), hit(cfg.trials, 0);
    detail::parallel_trials(cfg.trials, cfg.threads, [&](int t) {
      try {
        auto e = sample_harmonic(cfg.n, d, {cfg.master_seed, std::uint64_t(t)});
        hit[t] = double(signature(e).betti_total) >= threshold;
      } catch (const std::exception&) {
        excluded[t] = 1;
      }
    });
    int excl = 0, succ = 0;
    for (int t = 0; t < cfg.trials; ++t)
      excluded[t] ? ++excl : (succ += hit[t], 0);
    if (excl * 100 > cfg.trials) valid = false;
    json cell = {{"d", d}, {"alpha", cfg.alpha}, {"threshold", threshold},
                 {"trials", cfg.trials - excl}, {"excluded", excl}};
    cells.push_back(detail::prob_cell(std::move(cell), succ, cfg.trials - excl));
  }
  return {{"kind", "betti_tail"}, {"config", config_echo(cfg)}, {"rng", kRngTag},
          {"cells", cells},       {"valid", valid}};
}

// P{ nest_depth >= alpha d } on S^2.
inline json nest_tail(const ExperimentConfig& cfg) {
  if (cfg.n != 2) throw std::invalid_argument("nest_tail: n must be 2");
  json cells = json::array();
  bool valid = true;
  for (int d : cfg.d_list) {
    const double threshold = cfg.alpha * double(d);
    std::vector<char> excluded(cfg.trials, 0), hit(cfg.trials, 0);
    detail::parallel_trials(cfg.trials, cfg.threads, [&](int t) {
      try {
        auto e = sample_harmonic(2, d, {cfg.master_seed, std::uint64_t(t)});
        hit[t] = double(signature(e).nest_depth) >= threshold;
      } catch (const std::exception&) {
        excluded[t] = 1;
      }
    });
    int excl = 0, succ = 0;
    for (int t = 0; t < cfg.trials; ++t)
      excluded[t] ? ++excl : (succ += hit[t], 0);
    if (excl * 100 > cfg.trials) valid = false;
    json cell = {{"d", d}, {"alpha", cfg.alpha}, {"threshold", threshold},
                 {"trials", cfg.trials - excl}, {"excluded", excl}};
    cells.push_back(detail::prob_cell(std::move(cell), succ, cfg.trials - excl));
  }
  return {{"kind", "nest_tail"}, {"config", config_echo(cfg)}, {"rng", kRngTag},
          {"cells", cells},      {"valid", valid}};
}

// Mean zero count on the circle. Circle roots come in antipodal pairs, so the
// projective count (circle roots / 2) is what the sqrt(d) law governs; both
// are reported.
inline json mean_root_count(const ExperimentConfig& cfg) {
  if (cfg.n != 1) throw std::invalid_argument("mean_root_count: n must be 1");
  json cells = json::array();
  bool valid = true;
  for (int d : cfg.d_list) {
    std::vector<char> excluded(cfg.trials, 0);
    std::vector<double> count(cfg.trials, 0.0);
    detail::parallel_trials(cfg.trials, cfg.threads, [&](int t) {
      try {
        auto e = sample_harmonic(1, d, {cfg.master_seed, std::uint64_t(t)});
        count[t] = double(roots_on_circle(e).root_count);
      } catch (const std::exception&) {
        excluded[t] = 1;
      }
    });
    int excl = 0;
    double mean = 0.0, m2 = 0.0;
    int eff = 0;
    for (int t = 0; t < cfg.trials; ++t) {
      if (excluded[t]) {
        ++excl;
        continue;
      }
      ++eff;
      mean += count[t];
      m2 += count[t] * count[t];
    }
    if (excl * 100 > cfg.trials) valid = false;
    mean = eff > 0 ? mean / eff : 0.0;
    const double var = eff > 1 ? (m2 / eff - mean * mean) * eff / (eff - 1) : 0.0;
    const double proj = 0.5 * mean;
    const double se = 0.5 * std::sqrt(std::max(0.0, var) / std::max(1, eff));
    cells.push_back({{"d", d},
                     {"trials", eff},
                     {"excluded", excl},
                     {"mean_circle", mean},
                     {"mean_projective", proj},
                     {"stderr", se},
                     {"estimate", proj},
                     {"ci_lo", proj - 1.959963984540054 * se},
                     {"ci_hi", proj + 1.959963984540054 * se}});
  }
  return {{"kind", "mean_root_count"}, {"config", config_echo(cfg)}, {"rng", kRngTag},
          {"cells", cells},            {"valid", valid}};
}

// Distribution of ||p||_C1 / (sqrt(d) ||p||_{H^q}) with q = (n+1)/2.
inline json c1_sobolev_ratio_survey(const ExperimentConfig& cfg) {
  const double q = 0.5 * (cfg.n + 1);
  json cells = json::array();
  bool valid = true;
  for (int d : cfg.d_list) {
    std::vector<char> excluded(cfg.trials, 0);
    std::vector<double> ratio(cfg.trials, 0.0);
    detail::parallel_trials(cfg.trials, cfg.threads, [&](int t) {
      try {
        auto e = sample_harmonic(cfg.n, d, {cfg.master_seed, std::uint64_t(t)});
        const double hq = e.sobolev_norm(q);
        if (hq == 0.0) throw degenerate_input_error("zero Sobolev norm");
        ratio[t] = c1_norm(e).value / (std::sqrt(double(d)) * hq);
      } catch (const std::exception&) {
        excluded[t] = 1;
      }
    });
    std::vector<double> kept;
    int excl = 0;
    for (int t = 0; t < cfg.trials; ++t)
      excluded[t] ? ++excl : (kept.push_back(ratio[t]), 0);
    if (excl * 100 > cfg.trials) valid = false;
    const double mx = kept.empty() ? 0.0 : *std::max_element(kept.begin(), kept.end());
    cells.push_back({{"d", d},
                     {"trials", int(kept.size())},
                     {"excluded", excl},
                     {"max_ratio", mx},
                     {"median_ratio", detail::quantile(kept, 0.5)},
                     {"q90_ratio", detail::quantile(kept, 0.9)},
                     {"estimate", mx},
                     {"ci_lo", mx},
                     {"ci_hi", mx}});
  }
  return {{"kind", "c1_sobolev_ratio"}, {"config", config_echo(cfg)}, {"rng", kRngTag},
          {"cells", cells},             {"valid", valid}};
}

inline json run_experiment(const ExperimentConfig& cfg) {
  if (cfg.kind == "stability") return stability_probability(cfg);
  if (cfg.kind == "isotopy") return low_degree_isotopy_rate(cfg);
  if (cfg.kind == "betti_tail") return betti_tail(cfg);
  if (cfg.kind == "nest_tail") return nest_tail(cfg);
  if (cfg.kind == "mean_root_count") return mean_root_count(cfg);
  if (cfg.kind == "c1_sobolev_ratio") return c1_sobolev_ratio_survey(cfg);
  throw std::invalid_argument("run_experiment: unknown kind '" + cfg.kind + "'");
}

// Flat CSV view: one row per cell.
inline std::string report_to_csv(const json& report) {
  std::ostringstream out;
  out << "cell,estimate,ci_lo,ci_hi,trials,exclusions\n";
  for (const auto& cell : report.at("cells")) {
    std::string label = "d=" + cell.at("d").dump();
    if (cell.contains("L")) label += ";L=" + cell.at("L").dump();
    if (cell.contains("alpha")) label += ";alpha=" + cell.at("alpha").dump();
    out << label << ',' << cell.at("estimate").dump() << ',' << cell.at("ci_lo").dump() << ','
        << cell.at("ci_hi").dump() << ',' << cell.at("trials").dump() << ','
        << cell.at("excluded").dump() << '\n';
  }
  return out.str();
}

}  // namespace kostlan

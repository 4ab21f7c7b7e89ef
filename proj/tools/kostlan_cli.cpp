// Command-line front end for the kostlan library.
//
// Subcommands: sample, decompose, truncate, norms, delta, topology,
// experiment.  All numerical work is delegated to the headers under
// include/kostlan; this file only parses arguments and moves JSON around.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "kostlan/experiments.hpp"
#include "kostlan/serialization.hpp"
#include "kostlan/topology.hpp"

namespace {

using kostlan::json;

// Shared option values.
struct Opts {
  int n = 1;
  int d = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  int L = -1;
  std::string basis = "monomial";
  std::string in = "-";
  std::string out = "-";
  std::string format = "json";
  std::string config_path;
  std::string emit_curves;
  int threads = 0;
};

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw CLI::ValidationError("--in", "cannot open '" + path + "'");
    buf << f.rdbuf();
  }
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << "\n";
  } else {
    std::ofstream f(path);
    if (!f) throw CLI::ValidationError("--out", "cannot open '" + path + "'");
    f << text << "\n";
  }
}

// Either a polynomial or an expansion, detected from the JSON shape.
struct Input {
  bool is_poly = false;
  kostlan::HomogeneousPoly poly{1, 0};
  kostlan::HarmonicExpansion exp{1, 0};
};

Input parse_input(const std::string& text) {
  json j = json::parse(text);
  Input in;
  if (j.contains("coeffs")) {
    in.is_poly = true;
    in.poly = kostlan::poly_from_json(j);
  } else if (j.contains("components")) {
    in.exp = kostlan::expansion_from_json(j);
  } else {
    throw std::invalid_argument("input JSON has neither 'coeffs' nor 'components'");
  }
  return in;
}

void echo_config(const std::string& cmd, const json& resolved) {
  std::cerr << "resolved config: " << json{{"command", cmd}, {"options", resolved}}.dump()
            << "\n";
}

json curves_to_csv_rows(const std::vector<kostlan::Polyline>& curves, const std::string& path) {
  std::ostringstream csv;
  csv << "component,x,y,z\n";
  for (std::size_t c = 0; c < curves.size(); ++c)
    for (const auto& v : curves[c])
      csv << c << "," << v[0] << "," << v[1] << "," << v[2] << "\n";
  std::ofstream f(path);
  if (!f) throw CLI::ValidationError("--emit-curves", "cannot open '" + path + "'");
  f << csv.str();
  return json{{"file", path}, {"components", curves.size()}};
}

int run(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for random Kostlan polynomials on S^1 and S^2"};
  app.require_subcommand(1);
  Opts o;

  auto add_shared = [&](CLI::App* sub, bool needs_dims) {
    if (needs_dims) {
      sub->add_option("--n", o.n, "ambient sphere dimension (1 or 2)")
          ->check(CLI::Range(1, 2));
      sub->add_option("--d", o.d, "polynomial degree")->check(CLI::NonNegativeNumber);
    }
    sub->add_option("--out", o.out, "output file ('-' = stdout)")->capture_default_str();
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--in", o.in, "input JSON file ('-' = stdin)")->capture_default_str();
  };

  auto* sample = app.add_subcommand("sample", "draw one Kostlan sample");
  add_shared(sample, true);
  sample->add_option("--seed", o.seed, "master seed")->capture_default_str();
  sample->add_option("--stream", o.stream, "stream id")->capture_default_str();
  sample->add_option("--basis", o.basis, "coefficient basis")
      ->check(CLI::IsMember({"monomial", "harmonic"}))
      ->capture_default_str();

  auto* decompose = app.add_subcommand("decompose", "harmonic decomposition of a polynomial");
  add_shared(decompose, false);
  add_input(decompose);

  auto* truncate = app.add_subcommand("truncate", "drop harmonic components above L");
  add_shared(truncate, true);
  add_input(truncate);
  truncate->add_option("--L", o.L, "truncation level")->required();

  auto* norms = app.add_subcommand("norms", "BW, L2, and C1 norms of the input");
  add_shared(norms, false);
  add_input(norms);

  auto* delta_cmd = app.add_subcommand("delta", "distance to the discriminant");
  add_shared(delta_cmd, false);
  add_input(delta_cmd);

  auto* topology = app.add_subcommand("topology", "zero-set topology signature");
  add_shared(topology, false);
  add_input(topology);
  topology->add_option("--emit-curves", o.emit_curves,
                       "also write extracted S^2 curves to this CSV file");

  auto* experiment = app.add_subcommand("experiment", "run a Monte Carlo experiment");
  add_shared(experiment, false);
  experiment->add_option("--config", o.config_path, "experiment config JSON file")->required();
  experiment->add_option("--threads", o.threads,
                         "worker threads (0 = machine parallelism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Normalize CLI11's per-error exit codes: 0 for --help, 1 for usage errors.
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (o.format == "csv" && !experiment->parsed())
    throw CLI::ValidationError("--format", "csv output is only available for 'experiment'");

  if (sample->parsed()) {
    echo_config("sample", {{"n", o.n}, {"d", o.d}, {"seed", o.seed}, {"stream", o.stream},
                           {"basis", o.basis}, {"rng", kostlan::kRngTag}, {"out", o.out}});
    kostlan::SeedSpec s{o.seed, o.stream};
    json out = o.basis == "monomial"
                   ? kostlan::poly_to_json(kostlan::sample_monomial(o.n, o.d, s))
                   : kostlan::expansion_to_json(kostlan::sample_harmonic(o.n, o.d, s));
    write_output(o.out, out.dump());
    return 0;
  }

  if (decompose->parsed()) {
    echo_config("decompose", {{"in", o.in}, {"out", o.out}});
    Input in = parse_input(read_input(o.in));
    if (!in.is_poly) throw std::invalid_argument("decompose expects a polynomial input");
    write_output(o.out, kostlan::expansion_to_json(kostlan::decompose(in.poly)).dump());
    return 0;
  }

  if (truncate->parsed()) {
    echo_config("truncate", {{"L", o.L}, {"in", o.in}, {"out", o.out}});
    Input in = parse_input(read_input(o.in));
    auto e = in.is_poly ? kostlan::decompose(in.poly) : in.exp;
    write_output(o.out, kostlan::expansion_to_json(kostlan::truncate(e, o.L)).dump());
    return 0;
  }

  if (norms->parsed()) {
    echo_config("norms", {{"in", o.in}, {"out", o.out}});
    Input in = parse_input(read_input(o.in));
    auto e = in.is_poly ? kostlan::decompose(in.poly) : in.exp;
    auto c1 = kostlan::c1_norm(e);
    write_output(o.out, json{{"bw", e.bw_norm()},
                             {"l2", e.l2_norm()},
                             {"c1", kostlan::extremum_to_json(c1, e.n)}}
                            .dump());
    return 0;
  }

  if (delta_cmd->parsed()) {
    echo_config("delta", {{"in", o.in}, {"out", o.out}});
    Input in = parse_input(read_input(o.in));
    auto r = in.is_poly ? kostlan::delta(in.poly) : kostlan::delta(in.exp);
    const int n = in.is_poly ? in.poly.n : in.exp.n;
    write_output(o.out, kostlan::extremum_to_json(r, n).dump());
    return 0;
  }

  if (topology->parsed()) {
    echo_config("topology", {{"in", o.in}, {"out", o.out}, {"emit_curves", o.emit_curves}});
    Input in = parse_input(read_input(o.in));
    auto sig = in.is_poly ? kostlan::signature(in.poly) : kostlan::signature(in.exp);
    json out = kostlan::signature_to_json(sig);
    if (!o.emit_curves.empty()) {
      if (sig.n != 2)
        throw std::invalid_argument("--emit-curves requires an S^2 input (n = 2)");
      auto P = in.is_poly ? in.poly : kostlan::to_homogeneous(in.exp);
      out["curves"] = curves_to_csv_rows(kostlan::extract_curves(P), o.emit_curves);
    }
    write_output(o.out, out.dump());
    return 0;
  }

  // experiment
  auto cfg = kostlan::config_from_json(json::parse(read_input(o.config_path)));
  cfg.threads = o.threads > 0 ? o.threads
                              : std::max(1u, std::thread::hardware_concurrency());
  echo_config("experiment", {{"config", o.config_path}, {"threads", cfg.threads},
                             {"format", o.format}, {"out", o.out},
                             {"resolved", kostlan::config_echo(cfg)}});
  const auto t0 = std::chrono::steady_clock::now();
  json rep = kostlan::run_experiment(cfg);
  const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
  std::cerr << "experiment wall time: " << dt.count() << " s\n";
  write_output(o.out, o.format == "csv" ? kostlan::report_to_csv(rep) : rep.dump());
  return rep.at("valid").get<bool>() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const kostlan::degenerate_input_error& e) {
    std::cerr << "numerical failure (degenerate input): " << e.what() << "\n";
    return 2;
  } catch (const kostlan::resolution_error& e) {
    std::cerr << "numerical failure (resolution): " << e.what() << "\n";
    return 2;
  } catch (const kostlan::basepoint_error& e) {
    std::cerr << "numerical failure (basepoint): " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "usage error (malformed JSON): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

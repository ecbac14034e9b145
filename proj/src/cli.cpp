#include "fairalloc/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fairalloc/edges.hpp"
#include "fairalloc/instance.hpp"
#include "fairalloc/localsearch.hpp"
#include "fairalloc/oracle.hpp"
#include "fairalloc/solver.hpp"

namespace fairalloc {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

ScaledInstance load_instance(const std::string& path) {
  try {
    return parse_instance_scaled(read_file(path));
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

/// Rational in file units -> integer in scaled units.
Value scaled_integer(const Rational& r, std::int64_t scale, const char* what) {
  Rational s = r * scale;
  if (s.denominator() != 1) throw UsageError(std::string(what) + " is not integral after scaling values by " +
                                             std::to_string(scale));
  return s.numerator();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restricted max-min fair allocation by alternating-tree local search"};
  app.require_subcommand(1);

  struct {
    int players = 0, resources = 0;
    Value value_max = 0;
    double interest_prob = 0;
    std::uint64_t seed = 0;
    std::string output;
  } gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--players", gen.players)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--resources", gen.resources)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--value-max", gen.value_max)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--interest-prob", gen.interest_prob)->required();
  gen_cmd->add_option("--seed", gen.seed, "overridden by FAIRALLOC_SEED")->required();
  gen_cmd->add_option("-o", gen.output)->required();

  struct {
    std::string file, output, trace, beta, epsilon;
    std::string tau;
    bool check = false;
    int jobs = 1;
  } sol;
  auto* solve_cmd = app.add_subcommand("solve", "Approximate an instance");
  solve_cmd->add_option("FILE", sol.file)->required();
  auto* beta_opt = solve_cmd->add_option("--beta", sol.beta, "approximation target (rational, default 13)");
  solve_cmd->add_option("--epsilon", sol.epsilon, "derive all constants from epsilon in (0, 1]")->excludes(beta_opt);
  solve_cmd->add_option("--tau", sol.tau, "single probe at this value, no binary search");
  solve_cmd->add_option("--trace", sol.trace, "write JSON-lines trace");
  solve_cmd->add_flag("--check-invariants", sol.check, "verify invariants at every step; violations exit 3");
  solve_cmd->add_option("--jobs", sol.jobs, "concurrent probes")->check(CLI::PositiveNumber);
  solve_cmd->add_option("-o", sol.output)->required();

  struct {
    std::string file, alloc, threshold;
  } ver;
  auto* verify_cmd = app.add_subcommand("verify", "Check an allocation against a threshold");
  verify_cmd->add_option("FILE", ver.file)->required();
  verify_cmd->add_option("ALLOC", ver.alloc)->required();
  verify_cmd->add_option("--threshold", ver.threshold, "NUM/DEN")->required();

  std::string opt_file;
  auto* opt_cmd = app.add_subcommand("opt", "Exact optimum by brute force (small instances only)");
  opt_cmd->add_option("FILE", opt_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*gen_cmd) {
      if (const char* env = std::getenv("FAIRALLOC_SEED")) {
        try {
          gen.seed = std::stoull(env);
        } catch (const std::exception&) {
          throw UsageError("FAIRALLOC_SEED is not an unsigned integer");
        }
      }
      Instance inst;
      try {
        inst = generate_random(gen.players, gen.resources, gen.value_max, gen.interest_prob, gen.seed);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      write_file(gen.output, write_instance(inst));
      return kExitOk;
    }

    if (*solve_cmd) {
      const auto loaded = load_instance(sol.file);
      const Instance& inst = loaded.instance;
      Params params;
      try {
        if (!sol.epsilon.empty()) params = Params::from_epsilon(parse_rational(sol.epsilon));
        if (!sol.beta.empty()) params.beta = parse_rational(sol.beta);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto check = validate_params(params);
      if (!check.ok) throw UsageError("parameters rejected: " + check.diagnostic);

      std::ofstream trace_out;
      SolveOptions options;
      options.jobs = sol.jobs;
      options.extend.check_invariants = sol.check;
      options.extend.fatal_invariants = true;
      InvariantMonitor monitor;
      options.extend.monitor = &monitor;
      if (!sol.trace.empty()) {
        trace_out.open(sol.trace, std::ios::binary);
        if (!trace_out) throw UsageError("cannot write " + sol.trace);
        options.trace = [&](const TraceEvent& e) { trace_out << to_json_line(e) << '\n'; };
      }
      if (loaded.scale != 1) out << "values scaled by " << loaded.scale << "\n";

      if (!sol.tau.empty()) {
        Value tau = 0;
        try {
          tau = scaled_integer(parse_rational(sol.tau), loaded.scale, "--tau");
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        if (tau < 0) throw UsageError("--tau must be nonnegative");
        auto probe = solve_for_tau(inst, tau, params, options);
        if (options.trace) {
          for (const auto& e : probe.events) options.trace(e);
        }
        if (!probe.success()) {
          const auto& a = std::get<Abort>(probe.outcome);
          out << "aborted at tau " << tau << " (layer " << a.layer << ", d = " << a.d << " < gamma * "
              << a.tree_players << ")\n";
          return kExitVerificationFailed;
        }
        const auto& alloc = std::get<Allocation>(probe.outcome);
        write_file(sol.output, write_allocation(alloc));
        out << "tau " << tau << " succeeded; guaranteed value " << to_string(Rational(tau) / params.beta)
            << "; min value " << allocation_min_value(inst, alloc) << "\n";
      } else {
        auto report = solve(inst, params, std::nullopt, options);
        write_file(sol.output, write_allocation(report.allocation));
        out << "tau* " << report.tau_star << "\n";
        out << "guaranteed " << to_string(report.guaranteed) << "\n";
        out << "min value " << allocation_min_value(inst, report.allocation) << "\n";
        out << "probes " << report.probes.size() << "\n";
        for (const auto& p : report.probes) {
          out << "  tau " << p.tau << (p.success ? " ok" : " abort") << " iterations " << p.iterations
              << " collapses " << p.collapses << "\n";
        }
      }
      if (sol.check) {
        out << "invariants: " << monitor.boundaries << " boundaries, " << monitor.checks << " checks, "
            << monitor.failures.size() << " failures\n";
      }
      return kExitOk;
    }

    if (*verify_cmd) {
      const auto loaded = load_instance(ver.file);
      Rational threshold;
      try {
        threshold = parse_rational(ver.threshold) * loaded.scale;
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      Allocation alloc;
      try {
        alloc = parse_allocation(read_file(ver.alloc), loaded.instance.num_players());
      } catch (const ParseError& e) {
        throw UsageError(ver.alloc + ": " + e.what());
      }
      try {
        const Value v = allocation_min_value(loaded.instance, alloc);
        const bool ok = at_least(v, threshold);
        out << (ok ? "ok" : "below threshold") << ": min value " << v << ", threshold " << to_string(threshold)
            << "\n";
        return ok ? kExitOk : kExitVerificationFailed;
      } catch (const AllocationError& e) {
        out << "invalid allocation: " << e.what() << "\n";
        return kExitVerificationFailed;
      }
    }

    if (*opt_cmd) {
      const auto loaded = load_instance(opt_file);
      try {
        const Value opt = oracle::brute_force_opt(loaded.instance);
        out << to_string(Rational(opt, loaded.scale)) << "\n";
      } catch (const oracle::SizeGuardExceeded& e) {
        throw UsageError(e.what());
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "internal invariant violation: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace fairalloc

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mevsim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mevsim: dynamic MEV extraction-rate mechanism simulator"};
  app.require_subcommand(1);

  struct SubState {
    std::string config;
    mevsim::cli::Overrides overrides;
    std::vector<std::string> sets;
    bool svg = false;
  };

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "run one orbit and write the trace CSV"},
      {"thresholds", "compute the closed-form bounds for an instance"},
      {"bifurcate", "sweep eta or the tolerance range and record orbits"},
      {"periods", "locate fixed points of iterated maps and classify periods"},
      {"chaos-witness", "construct a period-3 bracket certifying chaos"},
      {"scenario", "regime-change, stress-test, burn or rule-comparison runs"},
  };

  std::map<std::string, SubState> states;
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    SubState& st = states[name];
    sub->add_option("--config", st.config, "path to the run's JSON config")
        ->required();
    sub->add_option("--out", st.overrides.out, "output directory override");
    sub->add_option("--seed", st.overrides.seed, "seed override");
    sub->add_flag("--svg", st.svg, "also render SVG plots");
    sub->add_option("--set", st.sets,
                    "override a dotted config path, e.g. --set eta=0.5");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return mevsim::cli::kConfigError;
  }

  for (const auto& [name, desc] : commands) {
    (void)desc;
    if (!app.get_subcommand(name)->parsed()) continue;
    SubState& st = states[name];
    if (st.svg) st.overrides.svg = true;
    for (const std::string& assignment : st.sets) {
      const std::size_t eq = assignment.find('=');
      if (eq == std::string::npos || eq == 0) {
        std::fprintf(stderr, "config error: --set expects path=value, got '%s'\n",
                     assignment.c_str());
        return mevsim::cli::kConfigError;
      }
      st.overrides.sets.emplace_back(assignment.substr(0, eq),
                                     assignment.substr(eq + 1));
    }
    return mevsim::cli::run_command(name, st.config, st.overrides);
  }
  return mevsim::cli::kConfigError;
}

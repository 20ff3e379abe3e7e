#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bf/driver.hpp"
#include "bf/lockcore.hpp"

int main(int argc, char** argv) {
  CLI::App app{"busy-forbidden lock workbench: model exploration, equivalence checking, "
               "requirement checking, and a concurrent stress harness"};
  app.require_subcommand(0, 1);

  bf::RunConfig config;
  std::string mutation, export_path;
  app.add_option("--threads", config.threads, "number of threads in the models")
      ->capture_default_str();
  app.add_option("--check", config.check,
                 "check to run: invariants, bisim, branching, conesfoci, all")
      ->capture_default_str();
  app.add_option("--mutate", mutation, "apply a named model mutation");
  app.add_option("--hide", config.hide_profile,
                 "hide profile: standard, none, or a comma-separated label list")
      ->capture_default_str();
  app.add_option("--limit", config.state_limit, "state limit for exploration")
      ->capture_default_str();
  app.add_option("--export-aut", export_path, "write the implementation LTS in .aut format");
  app.add_option("--seed", config.seed, "seed for randomized components")
      ->capture_default_str();

  auto* stress = app.add_subcommand("stress", "run the concurrent lock stress harness");
  std::size_t slots = 8, readers = 6, writers = 2;
  std::uint64_t ops = 10000, stress_seed = 42;
  bool kv = false;
  stress->add_option("--slots", slots, "lock slots")->capture_default_str();
  stress->add_option("--readers", readers, "reader workers")->capture_default_str();
  stress->add_option("--writers", writers, "writer workers")->capture_default_str();
  stress->add_option("--ops", ops, "operations per worker")->capture_default_str();
  stress->add_option("--seed", stress_seed, "chaos seed")->capture_default_str();
  stress->add_flag("--kv", kv, "also print machine-readable key=value lines");

  CLI11_PARSE(app, argc, argv);

  if (stress->parsed()) {
    try {
      bf::StressReport report = bf::run_stress(slots, readers, writers, ops, stress_seed);
      std::uint64_t total = 0;
      for (auto c : report.ops_per_slot) total += c;
      std::cout << "slots:                            " << slots << "\n"
                << "readers:                          " << readers << "\n"
                << "writers:                          " << writers << "\n"
                << "ops per worker:                   " << ops << "\n"
                << "seed:                             " << stress_seed << "\n"
                << "operations completed:             " << total << "\n"
                << "max concurrent readers:           " << report.max_concurrent_readers << "\n"
                << "writer overlap violations:        " << report.writer_overlap_violations
                << "\n"
                << "reader/writer overlap violations: "
                << report.reader_writer_overlap_violations << "\n"
                << "result:                           " << (report.clean() ? "pass" : "FAIL")
                << "\n";
      if (kv) {
        std::cout << "slots=" << slots << "\nreaders=" << readers << "\nwriters=" << writers
                  << "\nops=" << ops << "\nseed=" << stress_seed << "\ncompleted=" << total
                  << "\nmax_concurrent_readers=" << report.max_concurrent_readers
                  << "\nwriter_overlap_violations=" << report.writer_overlap_violations
                  << "\nreader_writer_overlap_violations="
                  << report.reader_writer_overlap_violations << "\n";
      }
      return report.clean() ? 0 : 1;
    } catch (const std::exception& e) {
      std::cout << "error: " << e.what() << "\n";
      return 2;
    }
  }

  if (!mutation.empty()) config.mutation = mutation;
  if (!export_path.empty()) config.export_aut_path = export_path;
  return bf::run(config, std::cout);
}

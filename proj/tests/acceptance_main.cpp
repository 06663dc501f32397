// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
#include <iostream>

#include "CLI11.hpp"

#include "h2ion/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"h2ion acceptance suite"};
  h2ion::acceptance::Options opts;
  bool quick = false;
  std::string workdir;
  app.add_flag("--quick", quick, "Run the quick subset only");
  app.add_option("--workdir", workdir, "Scratch directory for figure outputs");
  CLI11_PARSE(app, argc, argv);
  if (quick) opts.mode = h2ion::acceptance::Mode::quick;
  if (!workdir.empty()) opts.workdir = workdir;

  const auto results = h2ion::acceptance::run(opts);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << h2ion::acceptance::format_line(r) << "\n";
    failed += r.status == h2ion::acceptance::Status::fail;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed")
            << "\n";
  return failed ? 1 : 0;
}

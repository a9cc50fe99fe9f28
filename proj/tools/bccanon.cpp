#include <iostream>

#include "bccanon/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const bccanon::CommandOutcome out = bccanon::run_command(args);
  if (out.exit_code == bccanon::kExitOk || out.exit_code == bccanon::kExitCriterion) {
    if (out.report.command.empty()) {
      std::cout << out.message;
    } else {
      std::cout << bccanon::format_report(out.report, out.format);
      if (out.format == bccanon::ReportFormat::Json) std::cout << '\n';
    }
  } else {
    std::cerr << out.message << '\n';
  }
  return out.exit_code;
}

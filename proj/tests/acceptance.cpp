#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "grushin/verify/acceptance.hpp"

int main() {
  using namespace grushin::verify;
  int failures = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    const auto r = run_criterion(id);
    std::printf("%s\n", format_line(r).c_str());
    std::fflush(stdout);
    failures += r.passed ? 0 : 1;
  }
  const std::string cmd = std::string("\"") + GRUSHIN_CLI + "\" selftest --config \"" + GRUSHIN_CONFIG + "\" --output \"" +
                          GRUSHIN_SCRATCH + "\" > \"" + GRUSHIN_SCRATCH + "/selftest.log\" 2>&1";
  std::filesystem::create_directories(GRUSHIN_SCRATCH);
  const int status = std::system(cmd.c_str());
  const bool ok = status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
  std::printf("[%s] 13 end-to-end selftest | grushin selftest exit status %d\n", ok ? "PASS" : "FAIL",
              status == -1 || !WIFEXITED(status) ? -1 : WEXITSTATUS(status));
  failures += ok ? 0 : 1;
  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

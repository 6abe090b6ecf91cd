// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <string>

#include "padic_riesz/acceptance.hpp"

using namespace padic_riesz;
using Clock = std::chrono::steady_clock;

namespace {

// Wall-clock limits in seconds; 0 means none.
double time_limit(int id) {
  switch (id) {
    case 1: return 5.0;
    case 8: return 60.0;
    default: return 0.0;
  }
}

std::string summary(const acceptance::json& r) {
  const auto& d = r["details"];
  switch (r["id"].get<int>()) {
    case 1: return "max |G - I| = " + std::to_string(d["max_abs_error"].get<double>());
    case 2: return std::to_string(d["cases"].size()) + " sets x depths 1..3";
    case 3: return std::to_string(d["cases"].size()) + " rank checks";
    case 4:
      return std::to_string(d["samples"].get<int>()) + " samples, " + std::to_string(d["violations"].get<int>()) +
             " violations";
    case 5: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "max error %.3g", d["max_abs_error"].get<double>());
      return buf;
    }
    case 6: {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%d exact zeros, Riemann max error %.3g", d["exact_zero_cases"].get<int>(),
                    d["max_abs_error"].get<double>());
      return buf;
    }
    case 7:
      return std::to_string(d["cases"].size()) + " instances, " + std::to_string(d["mismatches"].get<int>()) +
             " mismatches";
    case 8: {
      std::string s = "N =";
      for (const auto& b : d["coset_bounds"]) s += " " + std::to_string(b["N"].get<Int>());
      return s;
    }
    default: return "";
  }
}

}  // namespace

int main() {
  bool all = true;
  auto last = Clock::now();
  auto report = [&](const acceptance::json& r) {
    const auto now = Clock::now();
    const double seconds = std::chrono::duration<double>(now - last).count();
    const int id = r["id"].get<int>();
    const double limit = time_limit(id);
    const bool ok = r["pass"].get<bool>() && (limit == 0 || seconds < limit);
    all = all && ok;
    std::printf("%s [%d] %s: %s (%.2fs%s)\n", ok ? "PASS" : "FAIL", id, r["name"].get<std::string>().c_str(),
                summary(r).c_str(), seconds, limit > 0 ? (" < " + std::to_string(static_cast<int>(limit)) + "s").c_str() : "");
    if (!r["pass"].get<bool>()) std::printf("  details: %s\n", r["details"].dump().c_str());
    std::fflush(stdout);
    last = Clock::now();
  };
  const std::string first = acceptance::run_selftest(acceptance::kDefaultSeed, report).dump();
  const std::string second = acceptance::run_selftest(acceptance::kDefaultSeed).dump();
  const bool identical = first == second;
  all = all && identical;
  std::printf("%s [9] selftest determinism: %zu-byte report, %s\n", identical ? "PASS" : "FAIL", first.size(),
              identical ? "identical across runs" : "reports differ");
  return all ? 0 : 1;
}

// padic-riesz: command-line front end.
//
// Exit codes: 0 ok, 1 usage, 2 malformed input or I/O, 3 overlapping balls,
// 4 non-prime p, 5 domain, 6 precision, 7 budget, 8 internal, 9 selftest failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "padic_riesz/acceptance.hpp"
#include "padic_riesz/io.hpp"

using namespace padic_riesz;
using io::json;

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kFormat = 2,
  kOverlap = 3,
  kPrime = 4,
  kDomain = 5,
  kPrecision = 6,
  kBudget = 7,
  kInternal = 8,
  kSelftestFailed = 9,
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string input;
  std::string out;
  std::optional<Int> p;
  Int depth = 1;
  std::string strategy = "greedy";
  Int subgroup = 0;
  double K = 1.5;
  std::vector<Int> exponents;
  std::optional<Int> n_max;
  std::string mode = "exact";
  std::uint64_t seed = acceptance::kDefaultSeed;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const Config& cfg, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write '" + cfg.out + "'");
  out << text;
  if (!out) throw io_error("write to '" + cfg.out + "' failed");
}

CompactOpenSet load_set(const Config& cfg) {
  CompactOpenSet s = io::set_from_json(io::parse_document(read_input(cfg.input)));
  if (cfg.p && *cfg.p != s.p())
    throw usage_error("--p " + std::to_string(*cfg.p) + " does not match p = " + std::to_string(s.p()) + " in the input");
  if (s.empty()) throw usage_error("input set is empty");
  return s;
}

void check_depth(Int depth) {
  if (depth < 0) throw usage_error("--depth must be non-negative");
}

int cmd_canonicalize(const Config& cfg) {
  CompactOpenSet s = load_set(cfg);
  AffineNormalization norm = affine_normalize(s);
  write_output(cfg, io::decomposition_to_json(canonical_decomposition(norm.set), norm.shift, norm.dilation));
  return kOk;
}

int cmd_spectrum(const Config& cfg) {
  check_depth(cfg.depth);
  CompactOpenSet s = load_set(cfg);
  write_output(cfg, io::spectrum_to_json(build_spectrum(s, cfg.depth, parse_strategy(cfg.strategy))));
  return kOk;
}

// Bounds refer to the input set: the normalised bounds times p^e.
RieszReport bounds_for_input(const SpectrumSpec& spec) {
  RieszReport r = riesz_bounds(spec);
  const double jacobian = std::pow(static_cast<double>(spec.p), static_cast<double>(spec.dilation));
  r.A *= jacobian;
  r.B *= jacobian;
  r.K = std::max(r.B, 1.0 / r.A);
  return r;
}

int cmd_bounds(const Config& cfg) {
  check_depth(cfg.depth);
  CompactOpenSet s = load_set(cfg);
  const SelectionStrategy strategy = parse_strategy(cfg.strategy);
  std::vector<RieszReport> rows;
  for (Int d = 0; d <= cfg.depth; ++d) rows.push_back(bounds_for_input(build_spectrum(s, d, strategy)));
  const RieszReport& r = rows.back();

  std::FILE* table = cfg.out.empty() ? stderr : stdout;
  std::fprintf(table, "%5s %10s %14s %14s %14s %8s %6s\n", "depth", "dimension", "A", "B", "K", "rank", "full");
  for (const auto& row : rows)
    std::fprintf(table, "%5lld %10zu %14.10g %14.10g %14.10g %8s %6s\n", static_cast<long long>(row.depth), row.dimension,
                 row.A, row.B, row.K, row.rank_ok ? "ok" : "FAIL", row.full_checked ? "yes" : "no");
  std::fflush(table);

  json doc = io::report_to_json(r);
  json depths = json::array();
  for (const auto& row : rows) depths.push_back(row.depth);
  doc["depths_tested"] = depths;
  write_output(cfg, doc);
  return kOk;
}

int cmd_transnum(const Config& cfg) {
  CompactOpenSet s = load_set(cfg);
  TranslationCertificate cert = translation_number(s, cfg.subgroup, parse_packing_mode(cfg.mode));
  if (!verify_translation_set(s, cert.subgroup_exp, cert.translations))
    throw internal_error("translation set failed verification");
  write_output(cfg, io::certificate_to_json(cert));
  return kOk;
}

CounterexampleSpec counterexample_from(const Config& cfg) {
  if (!cfg.p) throw usage_error("--p is required");
  if (cfg.exponents.empty()) throw usage_error("--exponents is required");
  const Int n_max = cfg.n_max.value_or(static_cast<Int>(cfg.exponents.size()));
  return build_counterexample(*cfg.p, cfg.exponents, n_max);
}

int cmd_counterexample(const Config& cfg) {
  write_output(cfg, io::counterexample_to_json(counterexample_from(cfg)));
  return kOk;
}

int cmd_certify(const Config& cfg) {
  CounterexampleSpec spec = counterexample_from(cfg);
  write_output(cfg, io::nonexistence_to_json(certify_nonexistence(spec, cfg.K)));
  return kOk;
}

int cmd_selftest(const Config& cfg) {
  json doc = acceptance::run_selftest(cfg.seed, [](const json& r) {
    std::fprintf(stderr, "%s [%d] %s\n", r["pass"].get<bool>() ? "PASS" : "FAIL", r["id"].get<int>(),
                 r["name"].get<std::string>().c_str());
  });
  write_output(cfg, doc);
  return doc["pass"].get<bool>() ? kOk : kSelftestFailed;
}

int fail(int code, const std::string& what) {
  std::fprintf(stderr, "padic-riesz: %s\n", what.c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential Riesz bases on compact open subsets of Q_p"};
  app.require_subcommand(1);
  Config cfg;

  auto add_p = [&](CLI::App* sub) { sub->add_option("--p", cfg.p, "Prime p"); };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "Write JSON here instead of stdout"); };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "Set JSON file, or - for stdin")->required();
  };
  auto add_depth = [&](CLI::App* sub) { sub->add_option("--depth", cfg.depth, "Enumeration depth M"); };
  auto add_strategy = [&](CLI::App* sub) {
    sub->add_option("--strategy", cfg.strategy, "D selection")->check(CLI::IsMember({"greedy", "exhaustive"}));
  };
  auto add_family = [&](CLI::App* sub) {
    sub->add_option("--exponents", cfg.exponents, "Strictly increasing m_1,m_2,...")->delimiter(',');
    sub->add_option("--n-max", cfg.n_max, "Number of balls (default: all exponents)");
  };

  auto* canon = app.add_subcommand("canonicalize", "Affine-normalise a set and print (gamma, C)");
  add_input(canon); add_p(canon); add_out(canon);

  auto* spectrum = app.add_subcommand("spectrum", "Build Lambda = D + L_gamma to a depth");
  add_input(spectrum); add_p(spectrum); add_out(spectrum); add_depth(spectrum); add_strategy(spectrum);

  auto* bounds = app.add_subcommand("bounds", "Riesz bounds of the constructed spectrum");
  add_input(bounds); add_p(bounds); add_out(bounds); add_depth(bounds); add_strategy(bounds);

  auto* transnum = app.add_subcommand("transnum", "Translation number for B = p^m Z_p");
  add_input(transnum); add_p(transnum); add_out(transnum);
  transnum->add_option("--subgroup", cfg.subgroup, "Subgroup exponent m");
  transnum->add_option("--mode", cfg.mode, "exact, greedy or coset")
      ->check(CLI::IsMember({"exact", "greedy", "coset", "coset-bound"}));

  auto* counter = app.add_subcommand("counterexample", "Union of p^(m_n - 1) + p^(m_n) Z_p");
  add_p(counter); add_out(counter); add_family(counter);

  auto* certify = app.add_subcommand("certify", "Certify that no Riesz basis with constant <= K exists");
  add_p(certify); add_out(certify); add_family(certify);
  certify->add_option("--K", cfg.K, "Riesz constant to refute");

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance checks");
  add_out(selftest);
  selftest->add_option("--seed", cfg.seed, "Seed for randomised checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (cfg.p) require_prime(*cfg.p);
    if (*canon) return cmd_canonicalize(cfg);
    if (*spectrum) return cmd_spectrum(cfg);
    if (*bounds) return cmd_bounds(cfg);
    if (*transnum) return cmd_transnum(cfg);
    if (*counter) return cmd_counterexample(cfg);
    if (*certify) return cmd_certify(cfg);
    if (*selftest) return cmd_selftest(cfg);
    return fail(kUsage, "no command");
  } catch (const io::format_error& e) {
    return fail(kFormat, e.what());
  } catch (const io_error& e) {
    return fail(kFormat, e.what());
  } catch (const overlap_error& e) {
    return fail(kOverlap, e.what());
  } catch (const prime_error& e) {
    return fail(kPrime, e.what());
  } catch (const usage_error& e) {
    return fail(kUsage, e.what());
  } catch (const domain_error& e) {
    return fail(kDomain, e.what());
  } catch (const precision_error& e) {
    return fail(kPrecision, e.what());
  } catch (const budget_error& e) {
    return fail(kBudget, e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, e.what());
  }
}

// powers-cert: certified norm brackets and averaging certificates over
// concrete group backends.
//
// Subcommands: norm, search, verify, dixmier, bench. Every run emits a
// self-contained JSON report (schema powers-report/1) whose config echo
// and seeds suffice to reproduce the payload byte for byte; only
// wall_time_ms varies between runs.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "powers/bench_suites.hpp"
#include "powers/errors.hpp"
#include "powers/json_io.hpp"
#include "powers/powers_engine.hpp"
#include "powers/version.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;  // search: not found; verify: invalid; dixmier: not reached; bench: failures
constexpr int kExitUsage = 2;     // parse/schema/precondition errors
constexpr int kExitBudget = 3;    // partial results only

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

json make_report(const std::string& command, json config, json results, const std::string& input_text,
                 Clock::time_point start) {
  double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return json{{"schema", powers::kReportSchema},
              {"version", powers::kVersion},
              {"command", command},
              {"config", std::move(config)},
              {"input_hash", "fnv1a:" + fnv1a_hex(input_text)},
              {"results", std::move(results)},
              {"wall_time_ms", ms}};
}

void emit(const json& report, const std::string& out_path) {
  std::string text = report.dump(2);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << text << "\n";
  }
  std::cout << text << "\n";
}

struct BoundFlags {
  powers::BoundConfig cfg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--radius", cfg.radius, "ball truncation radius for power iteration");
    cmd->add_option("--iters", cfg.max_iterations, "power iteration steps");
    cmd->add_option("--moments", cfg.moment_depth, "trace moment depth");
    cmd->add_option("--powers", cfg.power_depth, "l1-of-powers squaring depth");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--tol", cfg.tolerance, "float lower-bound slack");
    cmd->add_option("--support-cap", cfg.support_cap, "convolution support cap");
  }
};

// Splits on commas outside parentheses, so abelian tuples survive.
std::vector<std::string> split_word_list(const std::string& text) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

powers::AlgebraElement load_element(const std::string& group_text, const std::string& inline_text,
                                    const std::string& file_path) {
  if (!file_path.empty()) {
    std::ifstream f(file_path);
    if (!f) throw powers::ParseError("cannot open element file: " + file_path);
    json j = json::parse(f, nullptr, true);
    return powers::element_from_json(j);
  }
  if (group_text.empty()) throw powers::ParseError("--group is required with an inline element");
  powers::GroupDescriptor desc = powers::GroupDescriptor::parse(group_text);
  return powers::parse_element(inline_text, desc);
}

int cmd_norm(const std::string& group_text, const std::string& element_text, const std::string& element_file,
             const powers::BoundConfig& bounds, const std::string& out_path) {
  auto start = Clock::now();
  powers::AlgebraElement a = load_element(group_text, element_text, element_file);
  powers::NormEstimate est = powers::estimate(a, bounds);

  json config{{"group", powers::descriptor_to_json(a.descriptor())},
              {"element", powers::element_to_json(a)},
              {"bounds", powers::bound_config_to_json(bounds)}};
  json report = make_report("norm", config, json{{"estimate", powers::estimate_to_json(est)}},
                            config.dump(), start);
  emit(report, out_path);
  return est.degraded.empty() ? kExitOk : kExitBudget;
}

int cmd_search(const std::string& group_text, const std::string& targets_text, powers::SearchConfig cfg,
               const std::string& out_path, const std::string& cert_out_path) {
  auto start = Clock::now();
  powers::GroupDescriptor desc = powers::GroupDescriptor::parse(group_text);
  std::vector<powers::Word> targets;
  for (const std::string& t : split_word_list(targets_text))
    targets.push_back(powers::parse_word(t, desc));

  powers::SearchOutcome outcome = powers::search_certificate(targets, cfg);

  json config{{"group", powers::descriptor_to_json(desc)},
              {"targets", targets_text},
              {"search", powers::search_config_to_json(cfg)}};
  json results{{"found", outcome.certificate.has_value()}, {"best_value", outcome.best_value}};
  if (outcome.certificate) {
    json cert = powers::certificate_to_json(*outcome.certificate);
    if (!cert_out_path.empty()) {
      std::ofstream f(cert_out_path);
      f << cert.dump(2) << "\n";
    }
    results["certificate"] = std::move(cert);
  }
  json report = make_report("search", config, std::move(results), config.dump(), start);
  emit(report, out_path);
  return outcome.certificate ? kExitOk : kExitNegative;
}

int cmd_verify(const std::string& cert_path, const std::string& out_path) {
  auto start = Clock::now();
  std::ifstream f(cert_path);
  if (!f) throw powers::ParseError("cannot open certificate file: " + cert_path);
  json j = json::parse(f, nullptr, true);
  powers::Certificate cert = powers::certificate_from_json(j);
  bool valid = powers::verify_certificate(cert);

  json config{{"certificate_file", cert_path}};
  json report = make_report("verify", config,
                            json{{"valid", valid}, {"certificate", powers::certificate_to_json(cert)}},
                            j.dump(), start);
  emit(report, out_path);
  return valid ? kExitOk : kExitNegative;
}

int cmd_dixmier(const std::string& group_text, const std::string& element_text,
                const std::string& element_file, powers::SearchConfig cfg, const std::string& out_path) {
  auto start = Clock::now();
  powers::AlgebraElement a = load_element(group_text, element_text, element_file);
  powers::DixmierReport report = powers::dixmier_average(a, cfg);

  json config{{"group", powers::descriptor_to_json(a.descriptor())},
              {"element", powers::element_to_json(a)},
              {"search", powers::search_config_to_json(cfg)}};
  json out = make_report("dixmier", config, powers::dixmier_report_to_json(report), config.dump(), start);
  emit(out, out_path);
  return report.success ? kExitOk : kExitNegative;
}

int cmd_bench(const std::string& suite, const std::string& out_path) {
  auto start = Clock::now();
  std::vector<powers::SuiteResult> results = powers::run_suites(suite);
  json rows = json::array();
  bool all_pass = true;
  for (const powers::SuiteResult& r : results) {
    rows.push_back(json{{"suite", r.suite}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    all_pass = all_pass && r.pass;
    std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.suite << " (" << r.seconds << " s) " << r.detail
              << "\n";
  }
  json report = make_report("bench", json{{"suite", suite}},
                            json{{"all_pass", all_pass}, {"suites", std::move(rows)}}, suite, start);
  emit(report, out_path);
  return all_pass ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified reduced-C* norm brackets and averaging certificates"};
  app.require_subcommand(1);

  std::string group_text, element_text, element_file, targets_text, epsilon_text = "19/20";
  std::string cert_path, out_path, cert_out_path, pool_text = "geometric", suite = "all";

  BoundFlags norm_bounds;
  auto* norm = app.add_subcommand("norm", "certified two-sided norm bracket of an element");
  norm->add_option("--group", group_text, "group shorthand, e.g. F2, Z, F2xZ");
  norm->add_option("--element,-e", element_text, "inline element, e.g. \"(1/4)(a+A+b+B)\"");
  norm->add_option("--element-file", element_file, "element JSON file");
  norm->add_option("--out", out_path, "also write the report here");
  norm_bounds.attach(norm);

  powers::SearchConfig search_cfg;
  BoundFlags search_bounds;
  auto* search = app.add_subcommand("search", "search for an averaged-conjugate certificate");
  search->add_option("--group", group_text)->required();
  search->add_option("--targets", targets_text, "comma-separated target words")->required();
  search->add_option("--epsilon", epsilon_text, "target bound (rational or decimal)");
  search->add_option("--pool", pool_text, "geometric | random-words | exhaustive");
  search->add_option("--max-n", search_cfg.max_conjugators, "max conjugators per pool");
  search->add_option("--max-len", search_cfg.max_candidate_length, "max candidate word length");
  search->add_option("--fw-iters", search_cfg.fw_iterations, "Frank-Wolfe refinement iterations");
  search->add_option("--out", out_path, "also write the report here");
  search->add_option("--cert-out", cert_out_path, "write the bare certificate JSON here");
  search_bounds.attach(search);

  auto* verify = app.add_subcommand("verify", "re-derive a certificate's bounds from scratch");
  verify->add_option("certificate", cert_path, "certificate JSON file")->required();
  verify->add_option("--out", out_path, "also write the report here");

  powers::SearchConfig dixmier_cfg;
  BoundFlags dixmier_bounds;
  auto* dixmier = app.add_subcommand("dixmier", "greedy averaging toward the canonical trace");
  dixmier->add_option("--group", group_text);
  dixmier->add_option("--element,-e", element_text);
  dixmier->add_option("--element-file", element_file);
  dixmier->add_option("--epsilon", epsilon_text, "stop once the certified distance drops below this");
  dixmier->add_option("--max-steps", dixmier_cfg.max_conjugators, "averaging step budget");
  dixmier->add_option("--out", out_path, "also write the report here");
  dixmier_bounds.attach(dixmier);

  auto* bench = app.add_subcommand("bench", "run the built-in verification suites");
  bench->add_option("suite", suite,
                    "'all' or one of: kesten, two-generator, powers-decay, multi-target, "
                    "central-obstruction, cone-symmetrization, dixmier, soundness");
  bench->add_option("--out", out_path, "also write the report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (norm->parsed()) return cmd_norm(group_text, element_text, element_file, norm_bounds.cfg, out_path);
    if (search->parsed()) {
      search_cfg.strategy = powers::pool_strategy_from_string(pool_text);
      search_cfg.epsilon = powers::parse_rational(epsilon_text);
      search_cfg.seed = search_bounds.cfg.seed;
      search_cfg.bounds = search_bounds.cfg;
      return cmd_search(group_text, targets_text, search_cfg, out_path, cert_out_path);
    }
    if (verify->parsed()) return cmd_verify(cert_path, out_path);
    if (dixmier->parsed()) {
      dixmier_cfg.epsilon = powers::parse_rational(epsilon_text);
      dixmier_cfg.seed = dixmier_bounds.cfg.seed;
      dixmier_cfg.bounds = dixmier_bounds.cfg;
      return cmd_dixmier(group_text, element_text, element_file, dixmier_cfg, out_path);
    }
    if (bench->parsed()) return cmd_bench(suite, out_path);
  } catch (const powers::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const powers::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "json error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

// End-to-end coverage of every CLI exit-code path plus report
// determinism. The binary path comes in via POWERS_CERT_BIN.

#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_shell(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

RunResult run(const std::string& args) {
  return run_shell(std::string(POWERS_CERT_BIN) + " " + args + " 2>/dev/null");
}

nlohmann::json payload(const RunResult& r) { return nlohmann::json::parse(r.output); }

const char* kQuickBounds = " --radius 4 --iters 40 --moments 2 --powers 1";

}  // namespace

TEST_CASE("norm: success, parse failure, budget failure") {
  RunResult ok = run(std::string("norm --group F2 --element a") + kQuickBounds);
  CHECK(ok.exit_code == 0);
  nlohmann::json j = payload(ok);
  CHECK(j.at("schema") == "powers-report/1");
  CHECK(j.at("command") == "norm");
  double lower = j.at("results").at("estimate").at("lower").get<double>();
  double upper = j.at("results").at("estimate").at("upper").get<double>();
  CHECK(lower >= 1.0 - 2e-9);
  CHECK(upper == 1.0);

  CHECK(run("norm --group F2 --element \"a+*b\"").exit_code == 2);
  CHECK(run("norm --group Q7 --element a").exit_code == 2);

  // A radius the ball budget cannot honor degrades power iteration and
  // exits 3 with the partial report still emitted.
  RunResult budget = run("norm --group F2 --element a --radius 40");
  CHECK(budget.exit_code == 3);
  CHECK(payload(budget).at("results").at("estimate").at("degraded").size() > 0);
}

TEST_CASE("norm accepts element files") {
  RunResult made = run(std::string("norm --group F2 --element \"(1/4)(a+A+b+B)\"") + kQuickBounds);
  nlohmann::json element = payload(made).at("config").at("element");
  {
    std::ofstream f("/tmp/powers_cert_test_element.json");
    f << element.dump();
  }
  RunResult fromfile = run(std::string("norm --element-file /tmp/powers_cert_test_element.json") + kQuickBounds);
  CHECK(fromfile.exit_code == 0);
  CHECK(payload(fromfile).at("config").at("element") == element);
}

TEST_CASE("search: found, not found, identity target") {
  RunResult found =
      run(std::string("search --group F2 --targets a --epsilon 0.95 --max-n 4"
                      " --cert-out /tmp/powers_cert_test_cert.json") + kQuickBounds);
  CHECK(found.exit_code == 0);
  nlohmann::json j = payload(found);
  CHECK(j.at("results").at("found") == true);
  CHECK(j.at("results").at("certificate").at("schema") == "powers-cert/1");

  RunResult notfound =
      run(std::string("search --group F2xZ --targets \"e|(1)\" --epsilon 0.99 --max-n 3") + kQuickBounds);
  CHECK(notfound.exit_code == 1);
  CHECK(payload(notfound).at("results").at("best_value") == 1.0);

  CHECK(run("search --group F2 --targets e --epsilon 0.95").exit_code == 2);
}

TEST_CASE("verify: valid, tampered, malformed") {
  REQUIRE(run(std::string("search --group F2 --targets a --epsilon 0.95 --max-n 4"
                          " --cert-out /tmp/powers_cert_test_cert.json") + kQuickBounds)
              .exit_code == 0);
  CHECK(run("verify /tmp/powers_cert_test_cert.json").exit_code == 0);

  {
    std::ifstream f("/tmp/powers_cert_test_cert.json");
    nlohmann::json cert = nlohmann::json::parse(f);
    cert["epsilon"] = "1/2";
    std::ofstream o("/tmp/powers_cert_test_tampered.json");
    o << cert.dump();
  }
  CHECK(run("verify /tmp/powers_cert_test_tampered.json").exit_code == 1);

  {
    std::ifstream f("/tmp/powers_cert_test_cert.json");
    nlohmann::json cert = nlohmann::json::parse(f);
    cert["weights"] = {"1/2", "1/3", "1/12"};
    std::ofstream o("/tmp/powers_cert_test_malformed.json");
    o << cert.dump();
  }
  CHECK(run("verify /tmp/powers_cert_test_malformed.json").exit_code == 2);

  {
    std::ofstream o("/tmp/powers_cert_test_schema.json");
    o << "{\"schema\": \"powers-cert/999\"}";
  }
  CHECK(run("verify /tmp/powers_cert_test_schema.json").exit_code == 2);
  CHECK(run("verify /tmp/powers_cert_test_missing.json").exit_code == 2);
}

TEST_CASE("dixmier: success and stall") {
  RunResult ok = run(std::string("dixmier --group F2 --element a+A --epsilon 0.5 --max-steps 16") +
                     kQuickBounds);
  CHECK(ok.exit_code == 0);
  nlohmann::json j = payload(ok);
  CHECK(j.at("results").at("success") == true);
  CHECK(j.at("results").at("steps").size() >= 2);

  RunResult stall = run(std::string("dixmier --group F2xZ --element \"e|(1)\" --epsilon 0.5 --max-steps 3") +
                        kQuickBounds);
  CHECK(stall.exit_code == 1);
  CHECK(payload(stall).at("results").at("success") == false);

  CHECK(run("dixmier --group F2 --element \"++\" --epsilon 0.5").exit_code == 2);
}

TEST_CASE("bench runs a single suite") {
  RunResult r = run("bench central-obstruction");
  CHECK(r.exit_code == 0);
  nlohmann::json j = payload(r);
  CHECK(j.at("results").at("all_pass") == true);
  CHECK(j.at("results").at("suites").size() == 1);
  CHECK(run("bench no-such-suite").exit_code == 2);
}

TEST_CASE("reports are byte-identical for identical command and seed") {
  std::string cmd = std::string("search --group F2 --targets a --epsilon 0.95 --max-n 4 --seed 7") +
                    kQuickBounds;
  nlohmann::json a = payload(run(cmd));
  nlohmann::json b = payload(run(cmd));
  a.erase("wall_time_ms");
  b.erase("wall_time_ms");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("payloads are independent of the thread cap") {
  std::string cmd = std::string(POWERS_CERT_BIN) +
                    " norm --group F2 --element \"(1/4)(a+A+b+B)\" --radius 6 --iters 80 --moments 2"
                    " 2>/dev/null";
  nlohmann::json one = payload(run_shell("POWERS_CERT_THREADS=1 " + cmd));
  nlohmann::json four = payload(run_shell("POWERS_CERT_THREADS=4 " + cmd));
  one.erase("wall_time_ms");
  four.erase("wall_time_ms");
  CHECK(one.dump() == four.dump());
}

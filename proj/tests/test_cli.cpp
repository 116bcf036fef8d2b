#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include <json.hpp>

#include "helpers.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

std::string tmp_path(const std::string& name) {
  return std::string("cli_tmp_") + name;
}

RunResult run_cli(const std::string& args) {
  std::string out_file = tmp_path("capture.txt");
  std::string cmd = std::string(HHC_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult r;
#ifdef _WIN32
  r.exit_code = rc;
#else
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
#endif
  std::ifstream in(out_file, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string dataset_path() { return std::string(HHC_DATA_DIR) + "/pb560.json"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string strip_timestamp_lines(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("timestamp") == std::string::npos) out << line << '\n';
  return out.str();
}

}  // namespace

TEST_CASE("validate: bundled dataset summary and exit 0") {
  RunResult r = run_cli("validate " + dataset_path());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("20 tasks, total 803 s") != std::string::npos);
  CHECK(r.output.find("takt 161 s") != std::string::npos);
}

TEST_CASE("validate: missing file exits 2") {
  RunResult r = run_cli("validate does_not_exist.json");
  CHECK(r.exit_code == 2);
}

TEST_CASE("validate: malformed input exits 2") {
  std::string p = tmp_path("garbage.json");
  write_text(p, "this is not json");
  CHECK(run_cli("validate " + p).exit_code == 2);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("no-such-subcommand").exit_code == 2);
  CHECK(run_cli("validate").exit_code == 2);  // missing dataset argument
  CHECK(run_cli("").exit_code == 2);          // subcommand required
}

TEST_CASE("allocate: CSV artifact with the expected header and 20 rows") {
  std::string out = tmp_path("alloc.csv");
  RunResult r = run_cli("allocate " + dataset_path() + " --csv --out " + out);
  CHECK(r.exit_code == 0);
  std::string text = testutil::read_file(out);
  CHECK(text.rfind("task_id,assignment,failed_criteria\n", 0) == 0);
  int lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 21);  // header + 20 tasks
}

TEST_CASE("balance: five stations on the bundled dataset") {
  RunResult r = run_cli("balance " + dataset_path());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("stations=5") != std::string::npos);
  CHECK(r.output.find("idle_total=2") != std::string::npos);
}

TEST_CASE("balance --verify: oracle agrees on the bundled dataset") {
  RunResult r = run_cli("balance " + dataset_path() + " --verify");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("oracle_min_stations=5") != std::string::npos);
}

TEST_CASE("balance: oversized task exits 3 and names the task") {
  auto j = nlohmann::json::parse(testutil::pb560_text());
  j["product"]["tasks"][0]["duration_s"] = 5000.0;
  std::string p = tmp_path("oversized.json");
  write_text(p, j.dump(2));
  RunResult r = run_cli("balance " + p);
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("task 1") != std::string::npos);
}

TEST_CASE("simulate: deterministic run reports 163 completed units") {
  RunResult r = run_cli("simulate " + dataset_path());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("completed_units mean=163") != std::string::npos);
}

TEST_CASE("simulate --trace: event trace CSV header and content") {
  std::string trace = tmp_path("trace.csv");
  RunResult r = run_cli("simulate " + dataset_path() + " --trace " + trace);
  CHECK(r.exit_code == 0);
  std::string text = testutil::read_file(trace);
  CHECK(text.rfind("t_s,station,event,unit_id\n", 0) == 0);
  CHECK(text.find(",exit,") != std::string::npos);
}

TEST_CASE("simulate: bad --model value exits 2") {
  CHECK(run_cli("simulate " + dataset_path() + " --model bogus").exit_code == 2);
}

TEST_CASE("scenarios: 5 variants produce a 6-line CSV") {
  std::string out = tmp_path("scenarios.csv");
  RunResult r = run_cli("scenarios " + dataset_path() + " --n 5 --seed 42 --out " + out);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("5 variants") != std::string::npos);
  std::string text = testutil::read_file(out);
  CHECK(text.rfind("variant,robot_task_share,time_share,stations,feasible,throughput,"
                   "takt_compliance\n",
                   0) == 0);
  int lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 6);
}

TEST_CASE("report: same seed twice is byte-identical apart from the timestamp") {
  std::string a = tmp_path("report_a.json"), b = tmp_path("report_b.json");
  CHECK(run_cli("report " + dataset_path() + " --seed 7 --out " + a).exit_code == 0);
  CHECK(run_cli("report " + dataset_path() + " --seed 7 --out " + b).exit_code == 0);
  std::string ta = testutil::read_file(a), tb = testutil::read_file(b);
  CHECK(strip_timestamp_lines(ta) == strip_timestamp_lines(tb));
  auto j = nlohmann::json::parse(ta);
  CHECK(j["takt_s"] == 161.0);
  CHECK(j["min_stations"] == 5);
  CHECK(j["takt_compliance"] == false);
  CHECK(j["manifest"]["seed"] == 7);
  CHECK(j["simulation"]["completed_units"]["mean"] == 163.0);
}

TEST_CASE("report --verify attaches the oracle count") {
  std::string out = tmp_path("report_v.json");
  CHECK(run_cli("report " + dataset_path() + " --verify --out " + out).exit_code == 0);
  auto j = nlohmann::json::parse(testutil::read_file(out));
  CHECK(j["oracle_min_stations"] == 5);
}

TEST_CASE("safety-speed: far and open means full speed, close means stop") {
  RunResult far = run_cli("safety-speed --distance-mm 10000 --zone open");
  CHECK(far.exit_code == 0);
  CHECK(far.output.find("2222") != std::string::npos);
  RunResult close = run_cli("safety-speed --distance-mm 100");
  CHECK(close.exit_code == 0);
  CHECK(close.output.rfind("0\n") != std::string::npos);
  CHECK(run_cli("safety-speed --distance-mm 100 --zone sideways").exit_code == 2);
}

namespace {

// subset JSON Schema validator: type, required, properties, items, enum and
// local $ref, which is all report.schema.json uses
bool type_matches(const nlohmann::json& type, const nlohmann::json& value) {
  if (type.is_array()) {
    for (const auto& t : type)
      if (type_matches(t, value)) return true;
    return false;
  }
  const std::string t = type.get<std::string>();
  if (t == "object") return value.is_object();
  if (t == "array") return value.is_array();
  if (t == "string") return value.is_string();
  if (t == "boolean") return value.is_boolean();
  if (t == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (t == "number") return value.is_number();
  if (t == "null") return value.is_null();
  return false;
}

bool conforms(const nlohmann::json& schema, const nlohmann::json& value,
              const nlohmann::json& root) {
  if (schema.contains("$ref")) {
    std::string ref = schema["$ref"].get<std::string>();
    REQUIRE(ref.rfind("#/definitions/", 0) == 0);
    return conforms(root["definitions"][ref.substr(14)], value, root);
  }
  if (schema.contains("type") && !type_matches(schema["type"], value)) return false;
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == value;
    if (!found) return false;
  }
  if (schema.contains("required"))
    for (const auto& key : schema["required"])
      if (!value.contains(key.get<std::string>())) return false;
  if (schema.contains("properties") && value.is_object())
    for (const auto& [key, sub] : schema["properties"].items())
      if (value.contains(key) && !conforms(sub, value[key], root)) return false;
  if (schema.contains("items") && value.is_array())
    for (const auto& element : value)
      if (!conforms(schema["items"], element, root)) return false;
  return true;
}

}  // namespace

TEST_CASE("report output validates against the published schema") {
  auto schema = nlohmann::json::parse(
      testutil::read_file(std::string(HHC_DOCS_DIR) + "/report.schema.json"));
  std::string out = tmp_path("report_schema.json");
  CHECK(run_cli("report " + dataset_path() + " --out " + out).exit_code == 0);
  auto doc = nlohmann::json::parse(testutil::read_file(out));
  CHECK(conforms(schema, doc, schema));
  // stochastic multi-rep variant exercises the non-null stat branches
  CHECK(run_cli("report " + dataset_path() +
                " --model normal --reps 5 --seed 3 --verify --out " + out)
            .exit_code == 0);
  auto doc2 = nlohmann::json::parse(testutil::read_file(out));
  CHECK(conforms(schema, doc2, schema));
  // the validator is not vacuous
  auto broken = doc;
  broken.erase("takt_s");
  CHECK_FALSE(conforms(schema, broken, schema));
  broken = doc;
  broken["min_stations"] = "five";
  CHECK_FALSE(conforms(schema, broken, schema));
}

TEST_CASE("safety-speed: collaborative zone caps at 250") {
  RunResult r = run_cli("safety-speed --distance-mm 10000 --zone collaborative");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("250\n") != std::string::npos);
}

// End-to-end checks of the splitkit binary: subcommands, file outputs,
// and exit codes.
#include "splitkit/dataset.hpp"
#include "splitkit/serialize.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string work_dir() {
  const auto dir = fs::temp_directory_path() / "splitkit_cli_test";
  fs::create_directories(dir);
  return dir.string();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SPLITKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string make_mixed_csv() {
  const std::string path = work_dir() + "/mixed.csv";
  std::ofstream out(path);
  out << "x1,x2,grp\n";
  splitkit::Rng rng(404);
  for (int i = 0; i < 60; ++i)
    out << rng.next_normal() << ',' << rng.next_normal() << ','
        << (i % 5 == 0 ? "a" : (i % 5 == 1 ? "b" : "c")) << '\n';
  return path;
}

}  // namespace

TEST_CASE("split subcommand writes csv and json outputs") {
  const std::string dir = work_dir();
  const std::string data = make_mixed_csv();
  const std::string args = "split --data " + data + " --ratio 0.2 --test-out " + dir +
                           "/test.csv --train-out " + dir + "/train.csv --json " + dir +
                           "/split.json --seed 5 --max-iter 80 --tol 1e-6";
  REQUIRE(run_cli(args) == 0);

  const splitkit::Dataset test = splitkit::load_csv(dir + "/test.csv");
  const splitkit::Dataset train = splitkit::load_csv(dir + "/train.csv");
  CHECK(test.rows() == 12);
  CHECK(test.rows() + train.rows() == 60);

  const auto j = splitkit::read_json_file(dir + "/split.json");
  const splitkit::SplitResult r = splitkit::split_from_json(j);
  CHECK(r.method == "split");
  CHECK(r.test_indices.size() == 12);
  CHECK(r.train_indices.size() == 48);
}

TEST_CASE("every baseline method runs") {
  const std::string dir = work_dir();
  const std::string data = make_mixed_csv();
  for (const std::string method : {"random", "stratified", "cadex", "duplex"}) {
    const std::string args = "split --data " + data + " --ratio 0.25 --method " + method +
                             " --test-out " + dir + "/t.csv --train-out " + dir +
                             "/n.csv --seed 2";
    CAPTURE(method);
    REQUIRE(run_cli(args) == 0);
    const splitkit::Dataset test = splitkit::load_csv(dir + "/t.csv");
    CHECK(test.rows() == 15);
  }
}

TEST_CASE("validate and kfold consume the split json") {
  const std::string dir = work_dir();
  const std::string data = make_mixed_csv();
  REQUIRE(run_cli("split --data " + data + " --ratio 0.2 --test-out " + dir +
                  "/test.csv --train-out " + dir + "/train.csv --json " + dir +
                  "/split.json --seed 5 --max-iter 60 --tol 1e-5") == 0);

  REQUIRE(run_cli("validate --data " + data + " --split " + dir + "/split.json --n-valid 10 " +
                  "--json " + dir + "/valid.json --valid-out " + dir + "/valid.csv " +
                  "--train-out " + dir + "/rest.csv --max-iter 60 --tol 1e-5") == 0);
  const splitkit::SplitResult v =
      splitkit::split_from_json(splitkit::read_json_file(dir + "/valid.json"));
  CHECK(v.method == "validation");
  CHECK(v.test_indices.size() == 10);
  CHECK(v.train_indices.size() == 38);
  const splitkit::Dataset valid_rows = splitkit::load_csv(dir + "/valid.csv");
  CHECK(valid_rows.rows() == 10);

  REQUIRE(run_cli("kfold --data " + data + " --split " + dir + "/split.json --k 4 --json " + dir +
                  "/folds.json --max-iter 40 --tol 1e-5") == 0);
  const splitkit::FoldAssignment folds =
      splitkit::folds_from_json(splitkit::read_json_file(dir + "/folds.json"));
  REQUIRE(folds.folds.size() == 4);
  std::size_t covered = 0;
  for (const auto& f : folds.folds) covered += f.size();
  CHECK(covered == 48);
}

TEST_CASE("bench coding writes csv plus json sidecar") {
  const std::string dir = work_dir();
  REQUIRE(run_cli("bench coding --m-max 3 --seed 3 --out " + dir + "/coding.csv") == 0);
  const splitkit::StudyReport report = splitkit::read_report_csv(dir + "/coding.csv");
  CHECK(report.rows.size() == 8);
  const auto sidecar = splitkit::read_json_file(dir + "/coding.csv.json");
  CHECK(sidecar.at("study").get<std::string>() == "coding");
}

TEST_CASE("input errors exit with status 2") {
  const std::string dir = work_dir();
  CHECK(run_cli("split --data " + dir + "/nope.csv --ratio 0.2 --test-out " + dir +
                "/a.csv --train-out " + dir + "/b.csv") == 2);
  const std::string data = make_mixed_csv();
  CHECK(run_cli("split --data " + data + " --ratio 0.001 --test-out " + dir +
                "/a.csv --train-out " + dir + "/b.csv") == 2);
  CHECK(run_cli("split --data " + data + " --ratio 0.2") == 2);  // missing outputs
  CHECK(run_cli("nonsense") == 2);
}

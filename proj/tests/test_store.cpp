#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <bblab/store.hpp>

using namespace bblab;

namespace {

std::string fresh_path(const std::string& tag) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path();
  return (dir / ("bblab_store_" + tag + "_" + std::to_string(++counter) +
                 "_" + std::to_string(::getpid()) + ".tsv"))
      .string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

void scrub(const std::string& path) {
  std::remove(path.c_str());
  std::remove((path + ".campaign").c_str());
  std::remove((path + ".campaign.tmp").c_str());
}

StoreRecord halt_record() {
  return {",0,2", "1RB1LB_1LA---", StoreRecord::Status::Halt, 6, "sim", "-"};
}

StoreRecord nonhalt_record() {
  return {",0,2", "1RB0LA_1LA0RB", StoreRecord::Status::NonHalt, 0, "cycler",
          "cycler:period=2;start=4"};
}

StoreRecord unknown_record() {
  return {"1,0,1", "0RA---", StoreRecord::Status::Unknown, 0, "none", "-"};
}

}  // namespace

TEST_CASE("query keys name input, order, and states") {
  CHECK(query_key("", 0, 2) == ",0,2");
  CHECK(query_key("1", 0, 1) == "1,0,1");
  CHECK(query_key("10", 1, 3) == "10,1,3");
}

TEST_CASE("record lines round-trip through their text form") {
  CHECK(format_record(halt_record()) ==
        ",0,2\t1RB1LB_1LA---\tHALT\t6\tsim\t-");
  CHECK(format_record(nonhalt_record()) ==
        ",0,2\t1RB0LA_1LA0RB\tNONHALT\t0\tcycler\tcycler:period=2;start=4");
  CHECK(format_record(unknown_record()) == "1,0,1\t0RA---\tUNKNOWN\t0\tnone\t-");

  for (const StoreRecord& r :
       {halt_record(), nonhalt_record(), unknown_record(),
        StoreRecord{",1,1", "0R1RB?1>A-----------", StoreRecord::Status::Unresolved,
                    0, "none", "oracle=1;query=0"}}) {
    CHECK(parse_record(format_record(r)) == r);
  }
}

TEST_CASE("malformed record lines are refused") {
  const std::string good = format_record(halt_record());
  CHECK_NOTHROW(parse_record(good));
  const std::vector<std::string> bad = {
      "",
      "just text",
      ",0,2\t1RB1LB_1LA---\tHALT\t6\tsim",            // five fields
      good + "\textra",                                // seven fields
      ",0,2\t1RB1LB_1LA---\tHALTED\t6\tsim\t-",        // unknown status
      ",0,2\t1RB1LB_1LA---\tHALT\tsix\tsim\t-",        // non-numeric steps
      ",0,2\t1RB1LB_1LA---\tHALT\t\tsim\t-",           // empty steps
      ",0,2\t1RB1LB_1LA---\tHALT\t-6\tsim\t-",         // signed steps
      ",0,2\t1RB1LB_1LA---\tHALT\t12345678901234567890\tsim\t-",  // too wide
      "\t1RB1LB_1LA---\tHALT\t6\tsim\t-",              // empty key
      ",0,2\t\tHALT\t6\tsim\t-",                       // empty machine
      ",0,2\t1RB1LB_1LA---\tHALT\t6\t\t-",             // empty stage
      ",0,2\t1RB1LB_1LA---\tHALT\t6\tsim\t",           // empty blob
  };
  for (const std::string& line : bad)
    CHECK_THROWS_AS(parse_record(line), std::runtime_error);
}

TEST_CASE("a fresh store starts empty and appends survive reload") {
  const std::string path = fresh_path("append");
  scrub(path);
  {
    ResultsStore store(path);
    CHECK(store.records().empty());
    CHECK(store.count_for(",0,2") == 0);
    store.append(halt_record());
    store.append(nonhalt_record());
    store.append(unknown_record());
    CHECK(store.records().size() == 3);
    CHECK(store.count_for(",0,2") == 2);
    CHECK(store.count_for("1,0,1") == 1);
    CHECK(store.count_for("missing") == 0);
  }
  ResultsStore reopened(path);
  REQUIRE(reopened.records().size() == 3);
  CHECK(reopened.records()[0] == halt_record());
  CHECK(reopened.records()[1] == nonhalt_record());
  CHECK(reopened.records()[2] == unknown_record());
  CHECK(slurp(path) == format_record(halt_record()) + "\n" +
                           format_record(nonhalt_record()) + "\n" +
                           format_record(unknown_record()) + "\n");
  scrub(path);
}

TEST_CASE("a torn final line is dropped and truncated away") {
  const std::string path = fresh_path("torn");
  scrub(path);
  const std::string healthy = format_record(halt_record()) + "\n";

  SUBCASE("after a healthy record") {
    spill(path, healthy + ",0,2\t1RB0LA_1L");  // append cut off mid-machine
    ResultsStore store(path);
    REQUIRE(store.records().size() == 1);
    CHECK(store.records()[0] == halt_record());
    CHECK(slurp(path) == healthy);
    store.append(unknown_record());
    ResultsStore reopened(path);
    CHECK(reopened.records().size() == 2);
  }

  SUBCASE("as the only content") {
    spill(path, ",0,2\t1RB");
    ResultsStore store(path);
    CHECK(store.records().empty());
    CHECK(slurp(path).empty());
  }

  SUBCASE("even when the torn prefix happens to parse") {
    // A record whose blob lost its trailing characters still parses field-
    // wise; without its newline it must be treated as torn all the same.
    spill(path, healthy + format_record(nonhalt_record()));
    ResultsStore store(path);
    REQUIRE(store.records().size() == 1);
    CHECK(slurp(path) == healthy);
  }
  scrub(path);
}

TEST_CASE("interior corruption is refused with its line number") {
  const std::string path = fresh_path("corrupt");
  scrub(path);
  const std::string good = format_record(halt_record()) + "\n";

  SUBCASE("in the middle") {
    spill(path, good + "this is not a record\n" + good);
    try {
      ResultsStore store(path);
      FAIL("corrupt store was accepted");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  SUBCASE("as a terminated final line") {
    spill(path, good + ",0,2\t1RB1LB_1LA---\tHALT\tsix\tsim\t-\n");
    try {
      ResultsStore store(path);
      FAIL("corrupt store was accepted");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  scrub(path);
}

TEST_CASE("checkpoints round-trip through the sidecar") {
  const std::string path = fresh_path("campaign");
  scrub(path);
  {
    ResultsStore store(path);
    CHECK(!store.campaign(",0,2").has_value());
    store.checkpoint({",0,2", 3000, 6, "1RB1LB_1LA---"});
    store.checkpoint({"1,0,1", 25, 2, "---0RA"});
    store.checkpoint({",0,2", 6561, 6, "1RB1LB_1LA---"});  // overwrite
  }
  ResultsStore reopened(path);
  auto a = reopened.campaign(",0,2");
  REQUIRE(a.has_value());
  CHECK(*a == Campaign{",0,2", 6561, 6, "1RB1LB_1LA---"});
  auto b = reopened.campaign("1,0,1");
  REQUIRE(b.has_value());
  CHECK(b->cursor == 25);
  CHECK(!reopened.campaign("2,0,2").has_value());
  CHECK(std::filesystem::exists(path + ".campaign"));
  CHECK(!std::filesystem::exists(path + ".campaign.tmp"));
  scrub(path);
}

TEST_CASE("a corrupt sidecar is refused") {
  const std::string path = fresh_path("badcamp");
  scrub(path);
  spill(path + ".campaign", "half a\tline\n");
  CHECK_THROWS_AS(ResultsStore{path}, std::runtime_error);
  scrub(path);
}

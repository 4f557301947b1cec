#include "doctest.h"

#include "support/error_code.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "workauth/batch.hpp"
#include "workauth/tei.hpp"

using namespace workauth;
using namespace workauth::testing;
namespace fs = std::filesystem;

namespace {

void check_same(const std::vector<FileOutcome>& a, const std::vector<FileOutcome>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CAPTURE(a[i].path.string());
    CHECK(a[i].path == b[i].path);
    CHECK(a[i].record == b[i].record);
    CHECK(a[i].report == b[i].report);
    CHECK(a[i].io_error == b[i].io_error);
  }
}

}  // namespace

TEST_CASE("input expansion") {
  auto files = expand_inputs({fixture_path("invalid"), fixture_path("valid/work-0.xml")});
  REQUIRE(files.size() == 6);
  CHECK(files[0].filename() == "dup-headword.xml");
  CHECK(files[4].filename() == "two-work-bibl.xml");
  CHECK(files[5].filename() == "work-0.xml");
  CHECK(error_code([] { expand_inputs({fixture_path("does-not-exist")}); }) == "IO_ERROR");
}

TEST_CASE("fixture outcomes") {
  auto files = expand_inputs({fixture_path("valid"), fixture_path("invalid"), fixture_path("warn")});
  auto outcomes = load_records(files);
  std::map<std::string, const FileOutcome*> by_name;
  for (const auto& o : outcomes) by_name[o.path.filename().string()] = &o;
  CHECK(by_name.at("work-270.xml")->report.valid());
  CHECK(by_name.at("work-270.xml")->record);
  CHECK(by_name.at("dup-headword.xml")->report.has_code("HEADWORD_DUP"));
  CHECK(by_name.at("no-uri.xml")->report.has_code("MODEL_NO_URI"));
  CHECK_FALSE(by_name.at("no-uri.xml")->record);
  CHECK(by_name.at("malformed.xml")->report.has_code("PARSE_ERROR"));
  CHECK(by_name.at("reversed-range.xml")->report.has_code("RANGE_REVERSED"));
  CHECK(by_name.at("two-work-bibl.xml")->report.has_code("MODEL_CARDINALITY"));
  CHECK(by_name.at("syc.xml")->report.valid());
  CHECK(by_name.at("syc.xml")->report.has_code("LANG_SYC"));
  check_same(outcomes, load_records_serial(files));
}

TEST_CASE("unreadable file") {
  auto outcomes = load_records({fixture_path("nowhere.xml")});
  REQUIRE(outcomes.size() == 1);
  CHECK(outcomes[0].io_error);
  CHECK_FALSE(outcomes[0].report.valid());
}

TEST_CASE("parallel loading equals the serial reference") {
  auto dir = scratch_dir("batch");
  Rng rng(11);
  for (std::uint64_t id = 1; id <= 120; ++id) {
    auto text = serialize_work_record(random_record(rng, id));
    if (id % 17 == 0) text = text.substr(0, text.size() / 2);
    std::ofstream(dir / (std::to_string(id) + ".xml")) << text;
  }
  auto files = expand_inputs({dir});
  REQUIRE(files.size() == 120);
  auto parallel = load_records(files);
  check_same(parallel, load_records_serial(files));
  auto broken = std::count_if(parallel.begin(), parallel.end(), [](const auto& o) { return !o.record; });
  CHECK(broken == 7);
}

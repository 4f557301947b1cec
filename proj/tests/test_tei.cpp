#include "doctest.h"

#include "support/error_code.hpp"
#include "support/fixtures.hpp"
#include "workauth/tei.hpp"
#include "workauth/validate.hpp"

using namespace workauth;
using workauth::testing::error_code;
using workauth::testing::read_fixture;

namespace {

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

TitleEntry title(std::string id, std::string lang, std::string text, bool headword, std::string source) {
  TitleEntry t;
  t.local_id = std::move(id);
  t.lang = std::move(lang);
  t.text = InlineText::plain(std::move(text));
  t.sources = {LocalPointer{std::move(source)}};
  if (headword) t.tags = {std::string(kHeadwordTag)};
  return t;
}

}  // namespace

TEST_CASE("work/270 idno block") {
  auto r = parse_work_record(read_fixture("valid/work-270.xml"));
  CHECK(r.uri == EntityUri::parse("http://syriaca.org/work/270"));
  CHECK(r.idnos == std::vector<IdnoEntry>{{"URI", "http://syriaca.org/work/270"}, {"BHS", "49"}, {"BHO", "772"}});
}

TEST_CASE("Bedjan edition witness") {
  auto r = parse_work_record(read_fixture("valid/work-270.xml"));
  const auto* w = r.find_witness("bib270-4");
  REQUIRE(w);
  CHECK(w->witness_class == "lawd:Edition");
  CHECK(w->record_ptr == EntityUri::parse("http://syriaca.org/bibl/10001"));
  CHECK(w->cited_ranges == std::vector<CitedRange>{{"volume", "2", "2", "2"}, {"pp", "260", "275", "260-275"}});
  REQUIRE(w->title);
  CHECK(w->title->text == "Acta Martyrum et Sanctorum");
  REQUIRE(w->creators.size() == 1);
  CHECK(w->creators[0].name.size() == 2);
  CHECK(w->creators[0].name[1].text == "Bedjan");
  CHECK_FALSE(w->is_manuscript());
}

TEST_CASE("Berlin manuscript witness") {
  auto r = parse_work_record(read_fixture("valid/work-270.xml"));
  const auto* w = r.find_witness("bib270-6");
  REQUIRE(w);
  CHECK(w->witness_class == "lawd:WrittenWork");
  CHECK(w->is_manuscript());
  const auto& ms = *w->ms_identifier;
  CHECK(ms.uri == EntityUri::parse("http://syriaca.org/manuscript/20001"));
  CHECK(ms.collection == "Königliche Bibliothek");
  CHECK(ms.collection_lang == std::optional<std::string>("de"));
  CHECK(ms.settlement == "Berlin");
  CHECK(ms.alt_idnos == std::vector<IdnoEntry>{{"KB-Shelfmark", "or. oct. 1257"}});
  REQUIRE(w->locus);
  CHECK(w->locus->from == "1");
  CHECK(w->locus->to == "23");
  CHECK(w->locus->part_uri == EntityUri::parse("http://syriaca.org/manuscript/20001#a1"));
}

TEST_CASE("work/270 header and relations") {
  auto r = parse_work_record(read_fixture("valid/work-270.xml"));
  CHECK(r.editors == std::vector<std::string>{"A. Editor"});
  REQUIRE(r.change_log.size() == 1);
  CHECK(r.change_log[0].who == "#editor1");
  CHECK(r.change_log[0].when == "2016-03-01");
  REQUIRE(r.relations.size() == 6);
  CHECK(r.relations[0].subjects == std::vector<Reference>{{"#bib270-4"}, {"#bib270-5"}});
  CHECK(r.relations[0].predicate == "lawd:embodies");
  CHECK(r.relations[2].subjects.size() == 2);
  CHECK(r.relations[5].objects.size() == 3);
  CHECK(r.relations[5].rel_type == std::nullopt);
  CHECK(r.relations[5].sources == std::vector<LocalPointer>{{"bib270-1"}});
  CHECK(validate_record(r).valid());
}

TEST_CASE("Narsai record titles") {
  auto r = parse_work_record(read_fixture("valid/work-0.xml"));
  CHECK(r.uri == EntityUri::parse("http://syriaca.org/work/0"));
  REQUIRE(r.titles.size() == 10);
  CHECK(r.titles[1].text.str() == "Sogitha on the Angel & Mary");
  CHECK(r.titles[1].tags == std::vector<std::string>{"#syriaca-headword", "#syriaca-anglicized"});
  CHECK(r.titles[7].lang == "syr-Syrn");
  const auto& mixed = r.titles[8].text.spans;
  REQUIRE(mixed.size() == 2);
  CHECK(mixed[0].lang == std::optional<std::string>("syr"));
  CHECK(mixed[1].lang == std::nullopt);
  CHECK(r.titles[8].sources.size() == 4);
  REQUIRE(r.authors.size() == 1);
  CHECK(r.authors[0].person == EntityUri::parse("http://syriaca.org/person/650"));
  CHECK(r.authors[0].display_name() == "Narsai");
  REQUIRE(r.text_lang);
  CHECK(r.text_lang->main == "syr");
  REQUIRE(r.notes.size() == 2);
  CHECK(r.notes[1].type == NoteType::incipit);
  CHECK(r.notes[1].quoted);
  CHECK(r.notes[1].segments.size() == 2);
  CHECK(r.subjects == std::vector<std::string>{"2.b"});
  CHECK(validate_record(r).valid());
}

TEST_CASE("canonical_headword") {
  auto r = parse_work_record(read_fixture("valid/work-0.xml"));
  auto en = canonical_headword(r, "en");
  REQUIRE(en);
  CHECK(en->text.str() == "Sogitha on the Angel & Mary");
  auto syr = canonical_headword(r, "syr");
  REQUIRE(syr);
  CHECK(syr->local_id == "name000-1");
  CHECK(syr->is_headword());
  CHECK_FALSE(canonical_headword(r, "de"));
  CHECK_FALSE(canonical_headword(r, "syr-Syrn"));
}

TEST_CASE("structural parse errors") {
  CHECK(error_code([] { parse_work_record(read_fixture("invalid/two-work-bibl.xml")); }) == "MODEL_CARDINALITY");
  CHECK(error_code([] { parse_work_record(read_fixture("invalid/no-uri.xml")); }) == "MODEL_NO_URI");
  try {
    parse_work_record(read_fixture("invalid/malformed.xml"));
    FAIL("expected a parse error");
  } catch (const xml::ParseError& e) {
    CHECK(e.code() == "PARSE_ERROR");
    CHECK(e.line() == 6);
    CHECK(e.column() == 7);
  }
  auto mismatch = replace_all(read_fixture("valid/work-270.xml"), "xml:id=\"work-270\"", "xml:id=\"work-271\"");
  CHECK(error_code([&] { parse_work_record(mismatch); }) == "MODEL_ID_MISMATCH");
  auto bad_ptr = replace_all(read_fixture("valid/work-270.xml"), "source=\"#bib270-1\"", "source=\"bib270-1\"");
  CHECK(error_code([&] { parse_work_record(bad_ptr); }) == "MODEL_INVALID");
}

TEST_CASE("fixture round trip") {
  for (const char* name : {"valid/work-270.xml", "valid/work-0.xml", "warn/syc.xml"}) {
    CAPTURE(std::string(name));
    auto r = parse_work_record(read_fixture(name));
    auto text = serialize_work_record(r);
    CHECK(parse_work_record(text) == r);
    CHECK(serialize_work_record(parse_work_record(text)) == text);
  }
}

TEST_CASE("serialization preserves title order") {
  auto r = parse_work_record(read_fixture("valid/work-270.xml"));
  r.titles = {title("name270-1", "syr", "ܬܫܥܝܬܐ", true, "bib270-1"), title("name270-2", "en", "Acts", true, "bib270-1")};
  auto text = serialize_work_record(r);
  CHECK(text.find("ܬܫܥܝܬܐ") < text.find("Acts"));
  auto back = parse_work_record(text);
  REQUIRE(back.titles.size() == 2);
  CHECK(back.titles[0].lang == "syr");
  CHECK(back.titles[1].lang == "en");
}

TEST_CASE("permuted attributes serialize byte-identically") {
  auto original = read_fixture("valid/work-270.xml");
  auto permuted = replace_all(original, R"(<citedRange unit="pp" from="260" to="275">)",
                              R"(<citedRange to="275"   from="260" unit="pp">)");
  permuted = replace_all(permuted, R"(<bibl type="lawd:Edition" xml:id="bib270-5">)",
                         R"(<bibl xml:id="bib270-5" type="lawd:Edition">)");
  permuted = replace_all(permuted, R"(<relation type="mssWitnesses" active="#bib270-4" ref="dct:source")",
                         R"(<relation ref="dct:source" active="#bib270-4"
                         type="mssWitnesses")");
  permuted = replace_all(permuted, R"(<locus from="1" to="23">)", R"(<locus to='23' from='1'>)");
  REQUIRE(permuted != original);
  auto a = parse_work_record(original);
  auto b = parse_work_record(permuted);
  CHECK(a == b);
  CHECK(serialize_work_record(a) == serialize_work_record(b));
}

TEST_CASE("unknown elements survive a round trip") {
  auto text = replace_all(read_fixture("valid/work-270.xml"), "<listRelation>",
                          "<listBibl><head>Further reading</head></listBibl>\n<listRelation>");
  auto r = parse_work_record(text);
  REQUIRE(r.extensions.size() == 1);
  auto out = serialize_work_record(r);
  CHECK(out.find("<head>Further reading</head>") != std::string::npos);
  CHECK(parse_work_record(out) == r);
}

TEST_CASE("serializer refuses invalid records") {
  auto r = parse_work_record(read_fixture("invalid/dup-headword.xml"));
  try {
    serialize_work_record(r);
    FAIL("expected RecordRejected");
  } catch (const RecordRejected& e) {
    CHECK(e.report().has_code("HEADWORD_DUP"));
  }
}

TEST_CASE("resolve_pointer") {
  auto base = EntityUri::parse("http://syriaca.org/work/270");
  CHECK(resolve_pointer(base, "#bib270-4") == "http://syriaca.org/work/270#bib270-4");
  CHECK(resolve_pointer(base, LocalPointer{"bib270-6"}) == "http://syriaca.org/work/270#bib270-6");
  CHECK(error_code([&] { resolve_pointer(base, "#"); }) == "POINTER_INVALID");
  CHECK(error_code([] { resolve_pointer(EntityUri::parse("http://syriaca.org/work/270#x"), "#a"); }) ==
        "POINTER_BASE");
  CHECK(error_code([] { resolve_pointer(EntityUri::parse("http://syriaca.org/person/1"), "#a"); }) == "POINTER_BASE");
  CHECK(error_code([] { LocalPointer::parse("bib1"); }) == "POINTER_INVALID");
}

TEST_CASE("validate_record rules") {
  auto base = parse_work_record(read_fixture("valid/work-270.xml"));

  SUBCASE("idnos with one en headword are valid") {
    auto r = base;
    r.titles = {title("name270-1", "en", "Acts of Sharbel", true, "bib270-1")};
    auto report = validate_record(r);
    CHECK(report.valid());
    CHECK(report.error_count() == 0);
  }
  SUBCASE("two en headwords") {
    auto r = base;
    r.titles = {title("name270-1", "en", "Acts of Sharbel", true, "bib270-1"),
                title("name270-2", "en", "Martyrdom of Sharbel", true, "bib270-4")};
    auto report = validate_record(r);
    REQUIRE(report.error_count() == 1);
    CHECK(report.items[0].code == "HEADWORD_DUP");
    CHECK(report.items[0].path == "titles");
  }
  SUBCASE("headwords count per exact lang tag") {
    auto r = base;
    r.titles = {title("name270-1", "syr", "a", true, "bib270-1"), title("name270-2", "syr-Syrn", "b", true, "bib270-1")};
    CHECK(validate_record(r).valid());
  }
  SUBCASE("zero headwords") {
    auto r = base;
    r.titles = {title("name270-1", "en", "Acts of Sharbel", false, "bib270-1")};
    CHECK(validate_record(r).valid());
  }
  SUBCASE("syc text language") {
    auto r = base;
    r.text_lang = TextLang{"syc", "Classical Syriac", {}};
    auto report = validate_record(r);
    CHECK(report.valid());
    REQUIRE(report.items.size() == 1);
    CHECK(report.items[0].severity == Severity::warning);
    CHECK(report.items[0].code == "LANG_SYC");
    report.promote_warnings();
    CHECK_FALSE(report.valid());
  }
  SUBCASE("unresolved pointers") {
    auto r = base;
    r.relations[3].subjects[0] = Reference{"#bib270-99"};
    r.relations[4].sources = {LocalPointer{"nowhere"}};
    auto report = validate_record(r);
    CHECK(report.error_count() == 2);
    CHECK(report.has_code("PTR_UNRESOLVED"));
  }
  SUBCASE("reversed ranges") {
    auto r = base;
    r.witnesses[1].cited_ranges[1] = {"pp", "275", "260", "275-260"};
    CHECK(validate_record(r).has_code("RANGE_REVERSED"));
    r = base;
    r.witnesses[3].locus->from = "23v";
    r.witnesses[3].locus->to = "1";
    CHECK(validate_record(r).valid());
  }
  SUBCASE("missing URI idno") {
    auto r = base;
    r.idnos.erase(r.idnos.begin());
    CHECK(validate_record(r).has_code("MODEL_NO_URI"));
  }
  SUBCASE("unbound predicate prefix") {
    auto r = base;
    r.relations[0].predicate = "xyz:embodies";
    CHECK(validate_record(r).has_code("PREFIX_UNBOUND"));
  }
  SUBCASE("unknown tags warn") {
    auto r = base;
    r.titles = {title("name270-1", "en", "Acts", false, "bib270-1")};
    r.titles[0].tags = {"#syriaca-simplified"};
    auto report = validate_record(r);
    CHECK(report.valid());
    CHECK(report.has_code("TAG_UNKNOWN"));
  }
  SUBCASE("report is deterministic") {
    auto r = base;
    r.titles = {title("a", "syc", "x", true, "zz"), title("b", "syc", "y", true, "yy")};
    auto first = validate_record(r);
    CHECK(first == validate_record(r));
    CHECK(std::is_sorted(first.items.begin(), first.items.end(), [](const auto& x, const auto& y) {
      return std::tie(x.path, x.code) < std::tie(y.path, y.code);
    }));
  }
}

TEST_CASE("invalid fixtures report their fault") {
  CHECK(validate_record(parse_work_record(read_fixture("invalid/dup-headword.xml"))).has_code("HEADWORD_DUP"));
  auto reversed = validate_record(parse_work_record(read_fixture("invalid/reversed-range.xml")));
  CHECK(reversed.has_code("RANGE_REVERSED"));
  CHECK(reversed.error_count() == 1);
  auto syc = validate_record(parse_work_record(read_fixture("warn/syc.xml")));
  CHECK(syc.valid());
  CHECK(syc.has_code("LANG_SYC"));
}

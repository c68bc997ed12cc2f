#include <doctest.h>

#include "litnet/error.hpp"
#include "litnet/pdf.hpp"
#include "litnet/util.hpp"
#include "pdf_writer.hpp"
#include "tempdir.hpp"

using namespace litnet;

namespace {

const std::filesystem::path kFixtures = LITNET_FIXTURES;

// Non-blank lines with trailing blanks removed. The reference extractor pads
// page ends with blank lines where this extractor joins pages with one newline.
std::vector<std::string> text_lines(const std::string& s) {
  std::vector<std::string> out;
  for (auto& l : split(s, '\n')) {
    while (!l.empty() && (l.back() == ' ' || l.back() == '\t' || l.back() == '\r')) l.pop_back();
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

}  // namespace

TEST_SUITE("pdf") {
  TEST_CASE("one-page hello world") {
    CHECK(pdf::extract_pdf_text(kFixtures / "hello.pdf") == "Hello world");
  }

  TEST_CASE("two-column fixture matches the reference extractor") {
    const auto golden = read_file(kFixtures / "two_col.golden.txt");
    CHECK(text_lines(pdf::extract_pdf_text(kFixtures / "two_col.pdf")) == text_lines(golden));
  }

  TEST_CASE("compressed streams give the same text") {
    CHECK(pdf::extract_pdf_text(kFixtures / "two_col_flate.pdf") == pdf::extract_pdf_text(kFixtures / "two_col.pdf"));
  }

  TEST_CASE("embedded TrueType font with ToUnicode map") {
    const auto golden = read_file(kFixtures / "unicode_font.golden.txt");
    CHECK(text_lines(pdf::extract_pdf_text(kFixtures / "unicode_font.pdf")) == text_lines(golden));
  }

  TEST_CASE("title from the information dictionary") {
    const auto r = pdf::extract(read_file(kFixtures / "two_col.pdf"));
    CHECK(r.title == "Climate Adaptation Among Farmers");
    CHECK(r.page_count == 2);
  }

  TEST_CASE("blocks are separated by a blank line") {
    const auto text = pdf::extract_pdf_text(kFixtures / "two_col.pdf");
    CHECK(text.find("Results\n\nInformation increases awareness.") != std::string::npos);
  }

  TEST_CASE("unreadable inputs") {
    testing::TempDir dir;
    write_file_atomic(dir / "empty.pdf", "");
    write_file_atomic(dir / "junk.pdf", "this is not a pdf at all");
    for (const char* name : {"empty.pdf", "junk.pdf"}) {
      try {
        pdf::extract_pdf_text(dir / name);
        FAIL("expected UnreadablePdf");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnreadablePdf);
      }
    }
    try {
      pdf::extract_pdf_text(kFixtures / "encrypted.pdf");
      FAIL("expected UnreadablePdf");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnreadablePdf);
    }
  }

  TEST_CASE("page without text is an empty document") {
    testing::TempDir dir;
    testing::PdfWriter w;
    w.save(dir / "blank.pdf");
    try {
      pdf::extract_pdf_text(dir / "blank.pdf");
      FAIL("expected EmptyDocument");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyDocument);
    }
  }

  TEST_CASE("deterministic on the same bytes") {
    const auto bytes = read_file(kFixtures / "two_col.pdf");
    CHECK(pdf::extract(bytes).text == pdf::extract(bytes).text);
  }

  TEST_CASE("test writer output round-trips") {
    testing::PdfWriter w("A title");
    w.paragraph("Results");
    w.paragraph("Information increases awareness (strongly).");
    const auto r = pdf::extract(w.bytes());
    CHECK(r.title == "A title");
    CHECK(r.text == "Results\n\nInformation increases awareness (strongly).");
  }
}

#pragma once

// Minimal single-column PDF writer for test corpora. Helvetica, ASCII only,
// uncompressed content streams. Paragraphs are separated by a wide vertical
// gap so the extractor sees them as blocks.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace litnet::testing {

class PdfWriter {
 public:
  explicit PdfWriter(std::string title = {}) : title_(std::move(title)) {}

  /// Wrapped at `width` characters.
  void paragraph(const std::string& text, std::size_t width = 90) {
    std::istringstream in(text);
    std::string word, line;
    std::vector<std::string> lines;
    while (in >> word) {
      if (!line.empty() && line.size() + 1 + word.size() > width) {
        lines.push_back(line);
        line.clear();
      }
      line += (line.empty() ? "" : " ") + word;
    }
    if (!line.empty()) lines.push_back(line);
    paragraphs_.push_back(std::move(lines));
  }

  std::string bytes() const {
    std::vector<std::string> pages;
    std::string cur;
    double y = kTop;
    auto flush = [&] {
      pages.push_back(cur);
      cur.clear();
      y = kTop;
    };
    for (const auto& para : paragraphs_) {
      if (y - kLeading * static_cast<double>(para.size()) < kBottom && !cur.empty()) flush();
      for (const auto& l : para) {
        if (y < kBottom) flush();
        cur += "BT /F1 11 Tf 72 " + std::to_string(static_cast<int>(y)) + " Td (" + escape(l) + ") Tj ET\n";
        y -= kLeading;
      }
      y -= kParaGap;
    }
    if (!cur.empty() || pages.empty()) pages.push_back(cur);

    std::vector<std::string> objs;
    objs.push_back("<< /Type /Catalog /Pages 2 0 R >>");
    std::string kids;
    for (std::size_t i = 0; i < pages.size(); ++i) kids += std::to_string(4 + 2 * i) + " 0 R ";
    objs.push_back("<< /Type /Pages /Kids [" + kids + "] /Count " + std::to_string(pages.size()) + " >>");
    objs.push_back("<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica /Encoding /WinAnsiEncoding >>");
    for (std::size_t i = 0; i < pages.size(); ++i) {
      objs.push_back("<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Resources << /Font << /F1 3 0 R >> >> "
                     "/Contents " + std::to_string(5 + 2 * i) + " 0 R >>");
      objs.push_back("<< /Length " + std::to_string(pages[i].size()) + " >>\nstream\n" + pages[i] + "endstream");
    }
    std::size_t info = 0;
    if (!title_.empty()) {
      objs.push_back("<< /Title (" + escape(title_) + ") >>");
      info = objs.size();
    }

    std::string out = "%PDF-1.4\n";
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      offsets.push_back(out.size());
      out += std::to_string(i + 1) + " 0 obj\n" + objs[i] + "\nendobj\n";
    }
    const std::size_t xref = out.size();
    out += "xref\n0 " + std::to_string(objs.size() + 1) + "\n0000000000 65535 f \n";
    for (auto off : offsets) {
      char buf[24];
      std::snprintf(buf, sizeof buf, "%010zu 00000 n \n", off);
      out += buf;
    }
    out += "trailer\n<< /Size " + std::to_string(objs.size() + 1) + " /Root 1 0 R";
    if (info) out += " /Info " + std::to_string(info) + " 0 R";
    out += " >>\nstartxref\n" + std::to_string(xref) + "\n%%EOF\n";
    return out;
  }

  void save(const std::filesystem::path& path) const {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << bytes();
  }

 private:
  static constexpr double kTop = 740, kBottom = 60, kLeading = 14, kParaGap = 16;

  static std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '(' || c == ')' || c == '\\') o += '\\';
      o += c;
    }
    return o;
  }

  std::string title_;
  std::vector<std::vector<std::string>> paragraphs_;
};

}  // namespace litnet::testing

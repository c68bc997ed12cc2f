#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace litnet::pdf {

struct PdfText {
  std::string text;
  std::string title;  // document information dictionary /Title, if any
  std::size_t page_count = 0;
};

/// Extracts page text in reading order. Lines are separated by '\n', blocks by
/// a blank line, and consecutive pages by a single '\n'.
///
/// Throws Error(UnreadablePdf) for corrupt, encrypted, or non-PDF input and
/// Error(EmptyDocument) when no characters can be extracted.
PdfText extract(std::string_view bytes);

std::string extract_pdf_text(const std::filesystem::path& pdf_path);

}  // namespace litnet::pdf

#pragma once

// Twelve synthetic IMRAD articles with templated finding sentences, plus the
// graph they are built to produce.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pdf_writer.hpp"

namespace litnet::testing {

struct PlantedEdge {
  std::string source;
  std::string target;
  std::string sign;       // positive | negative | neutral
  std::string sentence;   // finding sentence that states it
};

struct PlantedCorpus {
  std::vector<std::string> doc_ids;
  std::map<std::pair<std::string, std::string>, std::string> edges;  // (source, target) -> sign
  std::map<std::string, int> degrees;                                // word -> articles
  std::set<std::string> nodes;
};

inline const std::vector<PlantedEdge>& planted_edges() {
  static const std::vector<PlantedEdge> e = {
      {"information", "awareness", "positive", "Information increases awareness."},
      {"education", "adaptation", "positive", "Education has a positive correlation with adaptation."},
      {"credit", "vulnerability", "negative", "Credit reduces vulnerability."},
      {"drought", "income", "negative", "Drought constrains income."},
      {"market access", "household income", "positive", "Market access improves household income."},
      {"social capital", "collective action", "neutral", "Social capital is associated with collective action."},
      {"temperature", "productivity", "negative", "Temperature reduces productivity."},
      {"irrigation", "productivity", "positive", "Irrigation increases productivity."},
      {"insurance", "resilience", "positive", "Insurance enhances resilience."},
      {"awareness", "adaptation", "positive", "Awareness improves adaptation."},
      {"migration", "poverty", "neutral", "Migration is linked to poverty."},
      {"drought", "migration", "positive", "Drought increases migration."},
  };
  return e;
}

/// Edge indices stated by article k.
inline std::vector<std::size_t> planted_article_edges(std::size_t k) {
  const std::size_t n = planted_edges().size();
  std::set<std::size_t> s{k % n, (k + 1) % n, (k * 5 + 3) % n};
  return {s.begin(), s.end()};
}

/// Writes <corpus_dir>/pdfs/article-NN.pdf and returns the expected graph.
inline PlantedCorpus write_planted_corpus(const std::filesystem::path& corpus_dir) {
  PlantedCorpus out;
  const auto& edges = planted_edges();
  for (std::size_t k = 0; k < 12; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "article-%02zu", k + 1);
    PdfWriter w("Synthetic study " + std::to_string(k + 1));
    w.paragraph("Synthetic study " + std::to_string(k + 1) + " of rural livelihoods");
    w.paragraph("Introduction");
    w.paragraph("Earlier work suggests that poverty reduces education. Rainfall shows strong variability in the region.");
    w.paragraph("Methods");
    w.paragraph("We surveyed households in three districts. Credit improves the response rate of the survey.");
    w.paragraph("Results");
    std::string results = "Table 2 summarizes the estimates.";
    const auto idx = planted_article_edges(k);
    for (std::size_t i : idx) results += " " + edges[i].sentence;
    if (k == 4) results += " Households adopt terraces.";
    w.paragraph(results);
    w.paragraph("Discussion");
    w.paragraph("These estimates are robust across districts.");
    w.paragraph("Conclusions");
    w.paragraph("Further surveys are needed in more regions.");
    w.paragraph("References");
    w.paragraph("Smith J. Tenure increases investment. Journal of Rural Studies.");
    w.save(corpus_dir / "pdfs" / (std::string(name) + ".pdf"));

    out.doc_ids.push_back(name);
    std::set<std::string> words;
    for (std::size_t i : idx) {
      out.edges[{edges[i].source, edges[i].target}] = edges[i].sign;
      words.insert(edges[i].source);
      words.insert(edges[i].target);
    }
    for (const auto& wd : words) {
      ++out.degrees[wd];
      out.nodes.insert(wd);
    }
  }
  return out;
}

}  // namespace litnet::testing

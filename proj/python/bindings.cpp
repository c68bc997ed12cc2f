// Python bindings. Structured results cross the boundary as JSON text and are
// decoded by the litnet package.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "litnet/error.hpp"
#include "litnet/export.hpp"
#include "litnet/findnet.hpp"
#include "litnet/nlp.hpp"
#include "litnet/pdf.hpp"
#include "litnet/pipeline.hpp"
#include "litnet/relex.hpp"
#include "litnet/textprep.hpp"
#include "litnet/verblex.hpp"

namespace py = pybind11;
using json = nlohmann::json;
using namespace litnet;

namespace {

verblex::VerbDictionary dictionary_from(const std::optional<std::string>& verbs_tsv) {
  return verbs_tsv ? verblex::VerbDictionary::parse(*verbs_tsv) : verblex::VerbDictionary::seed();
}

std::string tag_json(const std::string& text) {
  nlp::BuiltinTagger tagger;
  return json(nlp::tag_section("", textprep::Section::results, text, tagger)).dump();
}

std::string extract_json(const std::string& text, const std::optional<std::string>& verbs_tsv,
                         const std::string& doc_id) {
  nlp::BuiltinTagger tagger;
  const auto dict = dictionary_from(verbs_tsv);
  std::vector<relex::RelationTriple> out;
  for (const auto& s : nlp::tag_section(doc_id, textprep::Section::results, text, tagger)) {
    auto t = relex::extract_relations(s, dict);
    out.insert(out.end(), t.begin(), t.end());
  }
  return json(relex::dedup_relations(out)).dump();
}

std::string graph_json(const std::string& triples_json, int rings, const std::string& sign_basis) {
  std::vector<relex::RelationTriple> triples;
  try {
    triples = json::parse(triples_json).get<std::vector<relex::RelationTriple>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  findnet::BuildOptions opts{rings, 0, findnet::sign_basis_from_string(sign_basis)};
  return findnet::export_json(findnet::build_graph(triples, opts));
}

std::string svg_from_triples(const std::string& triples_json, const std::string& mode,
                             const std::optional<std::string>& ego) {
  const auto triples = json::parse(triples_json).get<std::vector<relex::RelationTriple>>();
  return findnet::render_svg(findnet::build_graph(triples), findnet::render_mode_from_string(mode), ego);
}

std::vector<std::string> run_stages(const std::string& config_json, const std::string& base_dir,
                                    const std::vector<std::string>& stages, bool force) {
  auto config = pipeline::PipelineConfig::from_json(json::parse(config_json), base_dir);
  pipeline::Pipeline p(config);
  std::vector<std::string> report;
  std::vector<pipeline::Stage> todo;
  if (stages.empty()) {
    todo = pipeline::all_stages();
  } else {
    for (const auto& s : stages) {
      auto st = pipeline::stage_from_string(s);
      if (!st) throw Error(ErrorCode::ConfigError, "unknown stage '" + s + "'");
      todo.push_back(*st);
    }
  }
  for (auto st : todo) {
    const auto r = p.run(st, force);
    report.push_back(std::string(pipeline::to_string(st)) + (r.skipped ? ":skipped" : ":done") + ":" +
                     std::to_string(r.failures.size()));
  }
  return report;
}

}  // namespace

PYBIND11_MODULE(_litnet, m) {
  m.doc() = "litnet core bindings";

  static py::exception<Error> exc(m, "LitnetError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    }
  });

  m.attr("__version__") = std::string(pipeline::kToolVersion.substr(pipeline::kToolVersion.rfind(' ') + 1));
  m.def("extract_pdf_text", [](const std::filesystem::path& p) { return pdf::extract_pdf_text(p); });
  m.def("normalize_text", [](const std::string& s) { return textprep::normalize_text(s); });
  m.def("fold_to_ascii", &textprep::fold_to_ascii);
  m.def("detect_imrad", [](const std::string& text) {
    std::map<std::string, std::string> out;
    for (const auto& [sec, body] : textprep::detect_imrad(text).sections) out[std::string(textprep::to_string(sec))] = body;
    return out;
  });
  m.def("split_sentences", [](const std::string& s) { return nlp::split_sentences(s); });
  m.def("tokenize", [](const std::string& s) {
    std::vector<std::string> out;
    for (const auto& t : nlp::tokenize(s)) out.push_back(t.surface);
    return out;
  });
  m.def("lemmatize", [](const std::string& w, const std::string& upos) {
    auto u = nlp::upos_from_string(upos);
    if (!u) throw Error(ErrorCode::ParseError, "unknown POS '" + upos + "'");
    return nlp::lemmatize(w, *u);
  });
  m.def("_tag_json", &tag_json);
  m.def("_extract_json", &extract_json, py::arg("text"), py::arg("verbs_tsv") = py::none(), py::arg("doc_id") = "doc");
  m.def("_graph_json", &graph_json, py::arg("triples_json"), py::arg("rings") = 4, py::arg("sign_basis") = "eq3");
  m.def("_svg", &svg_from_triples, py::arg("triples_json"), py::arg("mode") = "cluster", py::arg("ego") = py::none());
  m.def("seed_verbs_tsv", [] { return verblex::VerbDictionary::seed().serialize(); });
  m.def("_run_stages", &run_stages, py::arg("config_json"), py::arg("base_dir"), py::arg("stages"),
        py::arg("force") = false);
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "litnet/nlp.hpp"

namespace litnet::verblex {

enum class Category { positive, negative, neutral, depend, none, unclassified };
enum class Sign { positive, negative, neutral };

std::string_view to_string(Category c);
std::string_view to_string(Sign s);
/// Throws Error(InvalidCategory).
Category category_from_string(std::string_view s);
/// Throws Error(ParseError).
Sign sign_from_string(std::string_view s);
/// "+", "-", "+/-".
std::string_view sign_glyph(Sign s);

struct VerbEntry {
  std::string lemma;
  Category category = Category::unclassified;
  std::string annotator;
  std::string timestamp;
  std::string note;

  bool operator==(const VerbEntry&) const = default;
};

/// One entry per lemma, ordered by lemma.
class VerbDictionary {
 public:
  /// The verbs listed as examples for each category, annotator "seed".
  static VerbDictionary seed();

  /// Tab-separated with a header row: lemma, category, annotator, timestamp, note.
  static VerbDictionary parse(std::string_view tsv);
  std::string serialize() const;
  static VerbDictionary load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  const VerbEntry* find(std::string_view lemma) const;
  bool contains(std::string_view lemma) const { return find(lemma) != nullptr; }
  /// unclassified when absent.
  Category category(std::string_view lemma) const;

  /// Adds an unclassified entry unless the lemma is already known. Returns
  /// true when added.
  bool add_unclassified(const std::string& lemma, const std::string& timestamp);

  /// Replaces the entry for `lemma`. Throws Error(UnknownVerb) for a lemma not
  /// in the dictionary and Error(InvalidCategory) for `unclassified`.
  const VerbEntry& classify(const std::string& lemma, Category category, const std::string& annotator,
                            const std::string& timestamp, const std::string& note = {});

  const std::map<std::string, VerbEntry, std::less<>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const VerbDictionary&) const = default;

 private:
  std::map<std::string, VerbEntry, std::less<>> entries_;
};

/// A dictionary file guarded for concurrent readers and one writer at a time.
/// Every classification is written through atomically.
class VerbStore {
 public:
  /// Loads `path`, or starts from the seed dictionary when it does not exist.
  explicit VerbStore(std::filesystem::path path);

  VerbDictionary snapshot() const;
  VerbEntry classify(const std::string& lemma, Category category, const std::string& annotator,
                     const std::string& note = {});
  /// Adds unclassified entries for `lemmas`, persisting if anything changed.
  std::size_t add_unclassified(const std::vector<std::string>& lemmas);
  void reload();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::shared_mutex mu_;
  VerbDictionary dict_;
};

using Frequency = std::pair<std::string, std::size_t>;

/// Lemmas of VERB tokens with their counts, descending by count then
/// alphabetical. AUX tokens are not verbs here.
std::vector<Frequency> harvest_verbs(const std::vector<nlp::SentenceRecord>& sentences);

/// Uniform sample without replacement of min(n, available) sentences that use
/// `lemma` as a VERB, in corpus order. Throws Error(UnknownVerb) when no
/// sentence does.
std::vector<nlp::SentenceRecord> sample_sentences(std::string_view lemma,
                                                  const std::vector<nlp::SentenceRecord>& sentences, std::size_t n,
                                                  std::uint64_t seed);

struct CueLexicon {
  std::set<std::string, std::less<>> positive_cues{"positive", "positively"};
  std::set<std::string, std::less<>> negative_cues{"negative", "negatively"};
  std::size_t window = 6;
  /// Also inspect the single token before the verb ("positively influences").
  bool check_preceding = true;

  /// Throws Error(ConfigError) when the cue sets overlap or window is 0.
  void validate() const;
  std::optional<Sign> cue_sign(std::string_view lemma) const;
};

/// The first cue for the verb at `verb_index`: the preceding token (when
/// enabled), then up to `window` following tokens. The forward scan stops at
/// another dictionary verb. nullopt when no cue is found.
std::optional<Sign> find_cue(std::size_t verb_index, const std::vector<nlp::Token>& tokens, const CueLexicon& cues,
                             const VerbDictionary* dictionary = nullptr);

/// find_cue with neutral as the fallback.
Sign resolve_depend(std::size_t verb_index, const std::vector<nlp::Token>& tokens, const CueLexicon& cues,
                    const VerbDictionary* dictionary = nullptr);

}  // namespace litnet::verblex

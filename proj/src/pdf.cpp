#include "litnet/pdf.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "litnet/error.hpp"
#include "litnet/util.hpp"

namespace litnet::pdf {
namespace {

// ---------------------------------------------------------------------------
// Object model

struct Object;
using Array = std::vector<Object>;
using Dict = std::vector<std::pair<std::string, Object>>;

struct Null {};
struct Name {
  std::string value;
};
struct String {
  std::string bytes;
};
struct Ref {
  int num = 0;
  int gen = 0;
};
struct Keyword {
  std::string value;
};

struct Object {
  std::variant<Null, bool, double, String, Name, Array, Dict, Ref, Keyword> v;

  bool is_null() const { return std::holds_alternative<Null>(v); }
  const double* number() const { return std::get_if<double>(&v); }
  const Name* name() const { return std::get_if<Name>(&v); }
  const String* string() const { return std::get_if<String>(&v); }
  const Array* array() const { return std::get_if<Array>(&v); }
  const Dict* dict() const { return std::get_if<Dict>(&v); }
  const Ref* ref() const { return std::get_if<Ref>(&v); }
  const Keyword* keyword() const { return std::get_if<Keyword>(&v); }
};

const Object* dict_get(const Dict& d, std::string_view key) {
  for (const auto& [k, val] : d)
    if (k == key) return &val;
  return nullptr;
}

struct StreamObject {
  Dict dict;
  std::string raw;
};

struct IndirectObject {
  Object value;
  std::optional<StreamObject> stream;
};

[[noreturn]] void unreadable(const std::string& why) { throw Error(ErrorCode::UnreadablePdf, why); }

// ---------------------------------------------------------------------------
// Lexer / parser

bool is_ws(unsigned char c) { return c == 0 || c == 9 || c == 10 || c == 12 || c == 13 || c == 32; }
bool is_delim(unsigned char c) {
  return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' || c == '{' ||
         c == '}' || c == '/' || c == '%';
}

int hex_value(unsigned char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

class Parser {
 public:
  explicit Parser(std::string_view data, std::size_t pos = 0) : d_(data), p_(pos) {}

  std::size_t pos() const { return p_; }
  void seek(std::size_t p) { p_ = p; }
  bool at_end() {
    skip_ws();
    return p_ >= d_.size();
  }

  void skip_ws() {
    while (p_ < d_.size()) {
      auto c = static_cast<unsigned char>(d_[p_]);
      if (is_ws(c)) {
        ++p_;
      } else if (c == '%') {
        while (p_ < d_.size() && d_[p_] != '\n' && d_[p_] != '\r') ++p_;
      } else {
        break;
      }
    }
  }

  // Parses one object; `int int R` is folded into a Ref.
  Object parse() {
    Object o = parse_simple();
    if (const double* n = o.number()) {
      auto save = p_;
      Object second = try_integer();
      if (second.number()) {
        skip_ws();
        if (p_ < d_.size() && d_[p_] == 'R' &&
            (p_ + 1 >= d_.size() || is_ws(static_cast<unsigned char>(d_[p_ + 1])) ||
             is_delim(static_cast<unsigned char>(d_[p_ + 1])))) {
          ++p_;
          return Object{Ref{static_cast<int>(*n), static_cast<int>(*second.number())}};
        }
      }
      p_ = save;
    }
    return o;
  }

  Object parse_simple() {
    skip_ws();
    if (p_ >= d_.size()) return Object{Keyword{""}};
    char c = d_[p_];
    if (c == '/') return Object{parse_name()};
    if (c == '(') return Object{parse_literal()};
    if (c == '<') {
      if (p_ + 1 < d_.size() && d_[p_ + 1] == '<') {
        p_ += 2;
        return Object{parse_dict_body()};
      }
      return Object{parse_hex()};
    }
    if (c == '[') {
      ++p_;
      Array arr;
      for (;;) {
        skip_ws();
        if (p_ >= d_.size()) unreadable("unterminated array");
        if (d_[p_] == ']') {
          ++p_;
          break;
        }
        arr.push_back(parse());
      }
      return Object{std::move(arr)};
    }
    if (c == '>' && p_ + 1 < d_.size() && d_[p_ + 1] == '>') {
      p_ += 2;
      return Object{Keyword{">>"}};
    }
    if (c == ']' || c == ')' || c == '>' || c == '{' || c == '}') {
      ++p_;
      return Object{Keyword{std::string(1, c)}};
    }
    if (c == '+' || c == '-' || c == '.' || (c >= '0' && c <= '9')) return parse_number();
    std::size_t start = p_;
    while (p_ < d_.size() && !is_ws(static_cast<unsigned char>(d_[p_])) &&
           !is_delim(static_cast<unsigned char>(d_[p_])))
      ++p_;
    std::string word(d_.substr(start, p_ - start));
    if (word == "true") return Object{true};
    if (word == "false") return Object{false};
    if (word == "null") return Object{Null{}};
    return Object{Keyword{std::move(word)}};
  }

 private:
  Object try_integer() {
    skip_ws();
    std::size_t start = p_;
    while (p_ < d_.size() && d_[p_] >= '0' && d_[p_] <= '9') ++p_;
    if (p_ == start || (p_ < d_.size() && d_[p_] == '.')) return Object{Null{}};
    double v = 0;
    for (std::size_t i = start; i < p_; ++i) v = v * 10 + (d_[i] - '0');
    return Object{v};
  }

  Object parse_number() {
    std::size_t start = p_;
    if (d_[p_] == '+' || d_[p_] == '-') ++p_;
    while (p_ < d_.size() && ((d_[p_] >= '0' && d_[p_] <= '9') || d_[p_] == '.')) ++p_;
    std::string text(d_.substr(start, p_ - start));
    // Tolerate malformed numbers such as "--5" or "1.2.3".
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    return Object{v};
  }

  Name parse_name() {
    ++p_;
    std::string out;
    while (p_ < d_.size() && !is_ws(static_cast<unsigned char>(d_[p_])) &&
           !is_delim(static_cast<unsigned char>(d_[p_]))) {
      if (d_[p_] == '#' && p_ + 2 < d_.size() && hex_value(d_[p_ + 1]) >= 0 &&
          hex_value(d_[p_ + 2]) >= 0) {
        out.push_back(static_cast<char>(hex_value(d_[p_ + 1]) * 16 + hex_value(d_[p_ + 2])));
        p_ += 3;
      } else {
        out.push_back(d_[p_++]);
      }
    }
    return Name{std::move(out)};
  }

  String parse_literal() {
    ++p_;
    std::string out;
    int depth = 1;
    while (p_ < d_.size()) {
      char c = d_[p_++];
      if (c == '\\') {
        if (p_ >= d_.size()) break;
        char e = d_[p_++];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 't': out.push_back('\t'); break;
          case 'b': out.push_back('\b'); break;
          case 'f': out.push_back('\f'); break;
          case '\r':
            if (p_ < d_.size() && d_[p_] == '\n') ++p_;
            break;
          case '\n': break;
          default:
            if (e >= '0' && e <= '7') {
              int v = e - '0';
              for (int k = 0; k < 2 && p_ < d_.size() && d_[p_] >= '0' && d_[p_] <= '7'; ++k)
                v = v * 8 + (d_[p_++] - '0');
              out.push_back(static_cast<char>(v & 0xff));
            } else {
              out.push_back(e);
            }
        }
      } else if (c == '(') {
        ++depth;
        out.push_back(c);
      } else if (c == ')') {
        if (--depth == 0) break;
        out.push_back(c);
      } else {
        out.push_back(c);
      }
    }
    return String{std::move(out)};
  }

  String parse_hex() {
    ++p_;
    std::string out;
    int hi = -1;
    while (p_ < d_.size() && d_[p_] != '>') {
      int h = hex_value(static_cast<unsigned char>(d_[p_++]));
      if (h < 0) continue;
      if (hi < 0) {
        hi = h;
      } else {
        out.push_back(static_cast<char>(hi * 16 + h));
        hi = -1;
      }
    }
    if (hi >= 0) out.push_back(static_cast<char>(hi * 16));
    if (p_ < d_.size()) ++p_;
    return String{std::move(out)};
  }

  Dict parse_dict_body() {
    Dict d;
    for (;;) {
      skip_ws();
      if (p_ >= d_.size()) unreadable("unterminated dictionary");
      if (d_[p_] == '>' && p_ + 1 < d_.size() && d_[p_ + 1] == '>') {
        p_ += 2;
        break;
      }
      Object key = parse_simple();
      const Name* n = key.name();
      if (!n) {
        if (key.keyword() && key.keyword()->value.empty()) unreadable("unterminated dictionary");
        continue;
      }
      Object val = parse();
      if (const Keyword* k = val.keyword(); k && k->value == ">>") {
        d.emplace_back(n->value, Object{Null{}});
        break;
      }
      d.emplace_back(n->value, std::move(val));
    }
    return d;
  }

  std::string_view d_;
  std::size_t p_;
};

// ---------------------------------------------------------------------------
// Stream filters

std::string inflate(std::string_view in) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) return {};
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  std::string out;
  std::array<char, 16384> buf{};
  int rc = Z_OK;
  while (rc == Z_OK) {
    zs.next_out = reinterpret_cast<Bytef*>(buf.data());
    zs.avail_out = static_cast<uInt>(buf.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    out.append(buf.data(), buf.size() - zs.avail_out);
    if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
  }
  inflateEnd(&zs);
  // Truncated streams keep whatever was decoded.
  return out;
}

std::string ascii85(std::string_view in) {
  std::string out;
  std::uint32_t tuple = 0;
  int count = 0;
  std::size_t i = 0;
  if (in.substr(0, 2) == "<~") i = 2;
  for (; i < in.size(); ++i) {
    char c = in[i];
    if (c == '~') break;
    if (is_ws(static_cast<unsigned char>(c))) continue;
    if (c == 'z' && count == 0) {
      out.append(4, '\0');
      continue;
    }
    if (c < '!' || c > 'u') continue;
    tuple = tuple * 85 + static_cast<std::uint32_t>(c - '!');
    if (++count == 5) {
      for (int k = 3; k >= 0; --k) out.push_back(static_cast<char>((tuple >> (8 * k)) & 0xff));
      tuple = 0;
      count = 0;
    }
  }
  if (count > 1) {
    for (int k = count; k < 5; ++k) tuple = tuple * 85 + 84;
    for (int k = 0; k < count - 1; ++k) out.push_back(static_cast<char>((tuple >> (8 * (3 - k))) & 0xff));
  }
  return out;
}

std::string ascii_hex(std::string_view in) {
  std::string out;
  int hi = -1;
  for (char c : in) {
    if (c == '>') break;
    int h = hex_value(static_cast<unsigned char>(c));
    if (h < 0) continue;
    if (hi < 0) {
      hi = h;
    } else {
      out.push_back(static_cast<char>(hi * 16 + h));
      hi = -1;
    }
  }
  if (hi >= 0) out.push_back(static_cast<char>(hi * 16));
  return out;
}

// ---------------------------------------------------------------------------
// Document

class Document {
 public:
  explicit Document(std::string_view bytes) : data_(bytes) {
    if (data_.empty()) unreadable("empty file");
    auto header = data_.find("%PDF-");
    if (header == std::string_view::npos || header > 1024) unreadable("missing %PDF header");
    scan_objects();
    if (objects_.empty()) unreadable("no objects found");
    load_object_streams();
    find_trailer();
  }

  const Object& resolve(const Object& o, int depth = 0) const {
    static const Object null_object{Null{}};
    if (const Ref* r = o.ref()) {
      if (depth > 32) return null_object;
      auto it = objects_.find(r->num);
      if (it == objects_.end()) return null_object;
      return resolve(it->second.value, depth + 1);
    }
    return o;
  }

  const StreamObject* stream(const Object& o) const {
    if (const Ref* r = o.ref()) {
      auto it = objects_.find(r->num);
      if (it != objects_.end() && it->second.stream) return &*it->second.stream;
    }
    return nullptr;
  }

  std::string decode(const StreamObject& s) const {
    std::string data = s.raw;
    std::vector<std::string> filters;
    if (const Object* f = dict_get(s.dict, "Filter")) {
      const Object& fr = resolve(*f);
      if (const Name* n = fr.name()) filters.push_back(n->value);
      if (const Array* a = fr.array())
        for (const auto& e : *a)
          if (const Name* n = resolve(e).name()) filters.push_back(n->value);
    }
    for (const auto& f : filters) {
      if (f == "FlateDecode" || f == "Fl") {
        data = inflate(data);
      } else if (f == "ASCII85Decode" || f == "A85") {
        data = ascii85(data);
      } else if (f == "ASCIIHexDecode" || f == "AHx") {
        data = ascii_hex(data);
      } else {
        return {};  // image codecs etc. carry no text
      }
    }
    return data;
  }

  const Dict& trailer() const { return trailer_; }

  const Dict* dict_of(const Object& o) const {
    const Object& r = resolve(o);
    if (const Dict* d = r.dict()) return d;
    return nullptr;
  }

  std::optional<double> number_of(const Dict& d, std::string_view key) const {
    if (const Object* o = dict_get(d, key))
      if (const double* n = resolve(*o).number()) return *n;
    return std::nullopt;
  }

 private:
  void scan_objects() {
    std::size_t p = 0;
    while (p < data_.size()) {
      auto hit = data_.find("obj", p);
      if (hit == std::string_view::npos) break;
      p = hit + 3;
      if (p < data_.size() && !is_ws(static_cast<unsigned char>(data_[p])) &&
          !is_delim(static_cast<unsigned char>(data_[p])))
        continue;
      // Walk back over "<num> <gen> ".
      std::size_t q = hit;
      auto back_ws = [&] {
        while (q > 0 && is_ws(static_cast<unsigned char>(data_[q - 1]))) --q;
      };
      auto back_digits = [&]() -> std::optional<int> {
        std::size_t end = q;
        while (q > 0 && data_[q - 1] >= '0' && data_[q - 1] <= '9') --q;
        if (q == end) return std::nullopt;
        int v = 0;
        std::from_chars(data_.data() + q, data_.data() + end, v);
        return v;
      };
      if (hit == 0 || !is_ws(static_cast<unsigned char>(data_[hit - 1]))) continue;
      back_ws();
      auto gen = back_digits();
      if (!gen || q == 0 || !is_ws(static_cast<unsigned char>(data_[q - 1]))) continue;
      back_ws();
      auto num = back_digits();
      if (!num) continue;
      try {
        Parser parser(data_, p);
        IndirectObject obj{parser.parse(), std::nullopt};
        parser.skip_ws();
        std::size_t after = parser.pos();
        if (obj.value.dict() && data_.substr(after, 6) == "stream") {
          std::size_t s = after + 6;
          if (s < data_.size() && data_[s] == '\r') ++s;
          if (s < data_.size() && data_[s] == '\n') ++s;
          std::size_t len = 0;
          bool have_len = false;
          if (const Object* l = dict_get(*obj.value.dict(), "Length")) {
            if (const double* n = l->number()) {
              len = static_cast<std::size_t>(*n);
              have_len = s + len <= data_.size() &&
                         data_.substr(s + len, 40).find("endstream") != std::string_view::npos;
            }
          }
          if (!have_len) {
            auto e = data_.find("endstream", s);
            if (e == std::string_view::npos) e = data_.size();
            len = e - s;
            while (len > 0 && (data_[s + len - 1] == '\n' || data_[s + len - 1] == '\r')) --len;
          }
          obj.stream = StreamObject{*obj.value.dict(), std::string(data_.substr(s, len))};
          auto e = data_.find("endstream", s + len);
          p = e == std::string_view::npos ? data_.size() : e + 9;
        } else {
          p = after;
        }
        objects_[*num] = std::move(obj);  // later revisions win
      } catch (const Error&) {
        // skip malformed object
      }
    }
  }

  void load_object_streams() {
    std::vector<std::pair<int, IndirectObject>> extra;
    for (const auto& [num, obj] : objects_) {
      if (!obj.stream) continue;
      const Object* type = dict_get(obj.stream->dict, "Type");
      if (!type || !type->name() || type->name()->value != "ObjStm") continue;
      auto n = number_of(obj.stream->dict, "N");
      auto first = number_of(obj.stream->dict, "First");
      if (!n || !first) continue;
      std::string body = decode(*obj.stream);
      Parser header(body);
      std::vector<std::pair<int, std::size_t>> entries;
      for (int i = 0; i < static_cast<int>(*n); ++i) {
        Object a = header.parse_simple();
        Object b = header.parse_simple();
        if (!a.number() || !b.number()) break;
        entries.emplace_back(static_cast<int>(*a.number()), static_cast<std::size_t>(*b.number()));
      }
      for (const auto& [objnum, off] : entries) {
        std::size_t at = static_cast<std::size_t>(*first) + off;
        if (at >= body.size()) continue;
        try {
          Parser p(body, at);
          extra.emplace_back(objnum, IndirectObject{p.parse(), std::nullopt});
        } catch (const Error&) {
        }
      }
    }
    for (auto& [num, obj] : extra) objects_.try_emplace(num, std::move(obj));
  }

  void find_trailer() {
    // Classic trailers; the last one in the file is the newest.
    std::size_t p = 0;
    for (;;) {
      auto hit = data_.find("trailer", p);
      if (hit == std::string_view::npos) break;
      p = hit + 7;
      try {
        Parser parser(data_, p);
        Object t = parser.parse_simple();
        if (const Dict* d = t.dict()) merge_trailer(*d);
      } catch (const Error&) {
      }
    }
    // Cross-reference streams carry the trailer keys in their dictionary.
    for (const auto& [num, obj] : objects_) {
      if (!obj.stream) continue;
      const Object* type = dict_get(obj.stream->dict, "Type");
      if (type && type->name() && type->name()->value == "XRef") merge_trailer(obj.stream->dict);
    }
    if (!dict_get(trailer_, "Root")) {
      for (const auto& [num, obj] : objects_) {
        if (const Dict* d = obj.value.dict()) {
          const Object* type = dict_get(*d, "Type");
          if (type && type->name() && type->name()->value == "Catalog") {
            trailer_.emplace_back("Root", Object{Ref{num, 0}});
            break;
          }
        }
      }
    }
  }

  void merge_trailer(const Dict& d) {
    for (const auto& [k, v] : d) {
      auto it = std::find_if(trailer_.begin(), trailer_.end(), [&](const auto& e) { return e.first == k; });
      if (it == trailer_.end()) {
        trailer_.emplace_back(k, v);
      } else {
        it->second = v;
      }
    }
  }

  std::string_view data_;
  std::map<int, IndirectObject> objects_;
  Dict trailer_;
};

// ---------------------------------------------------------------------------
// Encodings and fonts

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string utf16be_to_utf8(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
    std::uint32_t u = (static_cast<unsigned char>(s[i]) << 8) | static_cast<unsigned char>(s[i + 1]);
    if (u >= 0xD800 && u < 0xDC00 && i + 3 < s.size()) {
      std::uint32_t lo = (static_cast<unsigned char>(s[i + 2]) << 8) | static_cast<unsigned char>(s[i + 3]);
      u = 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00);
      i += 2;
    }
    append_utf8(out, u);
  }
  return out;
}

// cp1252 code points for 0x80..0x9F; 0 = undefined.
constexpr std::array<std::uint16_t, 32> kWinAnsiHigh = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, 0,      0x017D, 0,      0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

std::uint32_t win_ansi(unsigned char c) {
  if (c >= 0x80 && c < 0xA0) return kWinAnsiHigh[c - 0x80];
  return c;
}

std::uint32_t standard_encoding(unsigned char c) {
  if (c == 0x27) return 0x2019;
  if (c == 0x60) return 0x2018;
  if (c < 0x80) return c;
  switch (c) {
    case 0xAE: return 0xFB01;
    case 0xAF: return 0xFB02;
    case 0xB1: return 0x2013;
    case 0xD0: return 0x2014;
    case 0xB7: return 0x2022;
    case 0xAA: return 0x201C;
    case 0xBA: return 0x201D;
    case 0xA9: return 0x0027;
    case 0xBC: return 0x2026;
    default: return 0;
  }
}

std::uint32_t glyph_name_to_unicode(std::string_view name) {
  if (name.size() == 1 && std::isalnum(static_cast<unsigned char>(name[0]))) return static_cast<unsigned char>(name[0]);
  if (name.size() == 7 && name.substr(0, 3) == "uni") {
    std::uint32_t v = 0;
    auto r = std::from_chars(name.data() + 3, name.data() + 7, v, 16);
    if (r.ec == std::errc{}) return v;
  }
  static const std::unordered_map<std::string_view, std::uint32_t> table = {
      {"space", ' '}, {"exclam", '!'}, {"quotedbl", '"'}, {"numbersign", '#'}, {"dollar", '$'},
      {"percent", '%'}, {"ampersand", '&'}, {"quotesingle", '\''}, {"quoteright", 0x2019},
      {"quoteleft", 0x2018}, {"parenleft", '('}, {"parenright", ')'}, {"asterisk", '*'},
      {"plus", '+'}, {"comma", ','}, {"hyphen", '-'}, {"period", '.'}, {"slash", '/'},
      {"zero", '0'}, {"one", '1'}, {"two", '2'}, {"three", '3'}, {"four", '4'}, {"five", '5'},
      {"six", '6'}, {"seven", '7'}, {"eight", '8'}, {"nine", '9'}, {"colon", ':'},
      {"semicolon", ';'}, {"less", '<'}, {"equal", '='}, {"greater", '>'}, {"question", '?'},
      {"at", '@'}, {"bracketleft", '['}, {"backslash", '\\'}, {"bracketright", ']'},
      {"underscore", '_'}, {"braceleft", '{'}, {"bar", '|'}, {"braceright", '}'},
      {"asciitilde", '~'}, {"endash", 0x2013}, {"emdash", 0x2014}, {"bullet", 0x2022},
      {"quotedblleft", 0x201C}, {"quotedblright", 0x201D}, {"ellipsis", 0x2026},
      {"fi", 0xFB01}, {"fl", 0xFB02}, {"ff", 0xFB00}, {"ffi", 0xFB03}, {"ffl", 0xFB04},
      {"minus", 0x2212}, {"degree", 0x00B0}, {"copyright", 0x00A9}, {"registered", 0x00AE},
      {"eacute", 0xE9}, {"egrave", 0xE8}, {"ecircumflex", 0xEA}, {"edieresis", 0xEB},
      {"aacute", 0xE1}, {"agrave", 0xE0}, {"acircumflex", 0xE2}, {"adieresis", 0xE4},
      {"atilde", 0xE3}, {"aring", 0xE5}, {"ccedilla", 0xE7}, {"iacute", 0xED},
      {"igrave", 0xEC}, {"icircumflex", 0xEE}, {"idieresis", 0xEF}, {"ntilde", 0xF1},
      {"oacute", 0xF3}, {"ograve", 0xF2}, {"ocircumflex", 0xF4}, {"odieresis", 0xF6},
      {"otilde", 0xF5}, {"uacute", 0xFA}, {"ugrave", 0xF9}, {"ucircumflex", 0xFB},
      {"udieresis", 0xFC}, {"Eacute", 0xC9}, {"Aacute", 0xC1}, {"Oacute", 0xD3},
      {"Udieresis", 0xDC}, {"Odieresis", 0xD6}, {"Adieresis", 0xC4}, {"germandbls", 0xDF},
  };
  auto it = table.find(name);
  return it == table.end() ? 0 : it->second;
}

// Helvetica advance widths (1/1000 em) for codes 32..126; used when a simple
// font omits /Widths (the standard 14 fonts usually do).
constexpr std::array<std::uint16_t, 95> kHelveticaWidths = {
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278,
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 278, 278, 584, 584, 584, 556,
    1015, 667, 667, 722, 722, 667, 611, 778, 722, 278, 500, 667, 556, 833, 722, 778,
    667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611, 278, 278, 278, 469, 556,
    333, 556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500, 222, 833, 556, 556,
    556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584};

struct Font {
  int code_bytes = 1;
  std::unordered_map<std::uint32_t, std::string> to_unicode;
  std::array<std::uint32_t, 256> simple_map{};
  bool has_simple_map = false;
  std::unordered_map<std::uint32_t, double> widths;  // glyph space / 1000
  double default_width = 0.5;

  std::string decode(std::uint32_t code) const {
    if (auto it = to_unicode.find(code); it != to_unicode.end()) return it->second;
    std::string out;
    if (code_bytes == 1 && has_simple_map && code < 256) {
      if (simple_map[code]) append_utf8(out, simple_map[code]);
    }
    return out;
  }

  double width(std::uint32_t code) const {
    if (auto it = widths.find(code); it != widths.end()) return it->second;
    return default_width;
  }
};

void parse_to_unicode(std::string_view cmap, Font& font) {
  Parser p(cmap);
  std::vector<Object> operands;
  auto code_of = [](const std::string& bytes) {
    std::uint32_t v = 0;
    for (unsigned char c : bytes) v = (v << 8) | c;
    return v;
  };
  while (!p.at_end()) {
    Object o = p.parse_simple();
    const Keyword* kw = o.keyword();
    if (!kw) {
      operands.push_back(std::move(o));
      continue;
    }
    const std::string& k = kw->value;
    if (k == "endcodespacerange") {
      if (!operands.empty())
        if (const String* s = operands.front().string()) font.code_bytes = static_cast<int>(std::max<std::size_t>(1, s->bytes.size()));
    } else if (k == "endbfchar") {
      for (std::size_t i = 0; i + 1 < operands.size(); i += 2) {
        const String* src = operands[i].string();
        const String* dst = operands[i + 1].string();
        if (src && dst) font.to_unicode[code_of(src->bytes)] = utf16be_to_utf8(dst->bytes);
      }
    } else if (k == "endbfrange") {
      for (std::size_t i = 0; i + 2 < operands.size(); i += 3) {
        const String* lo = operands[i].string();
        const String* hi = operands[i + 1].string();
        if (!lo || !hi) continue;
        std::uint32_t a = code_of(lo->bytes), b = code_of(hi->bytes);
        if (b < a || b - a > 0xFFFF) continue;
        if (const String* dst = operands[i + 2].string()) {
          std::string base = dst->bytes;
          for (std::uint32_t c = a; c <= b; ++c) {
            font.to_unicode[c] = utf16be_to_utf8(base);
            if (!base.empty()) {
              // increment last code unit
              auto idx = base.size() - 1;
              auto last = static_cast<unsigned char>(base[idx]);
              base[idx] = static_cast<char>(last + 1);
              if (last == 0xFF && idx > 0) base[idx - 1] = static_cast<char>(static_cast<unsigned char>(base[idx - 1]) + 1);
            }
          }
        } else if (const Array* arr = operands[i + 2].array()) {
          for (std::uint32_t c = a; c <= b && c - a < arr->size(); ++c)
            if (const String* s = (*arr)[c - a].string()) font.to_unicode[c] = utf16be_to_utf8(s->bytes);
        }
      }
    }
    if (k.rfind("begin", 0) == 0 || k.rfind("end", 0) == 0 || k == "def" || k == "findresource" ||
        k == "pop" || k == "dict" || k == "usecmap" || k == "defineresource" || k == "begin") {
      operands.clear();
    }
  }
}

Font load_font(const Document& doc, const Dict& fd) {
  Font font;
  std::string subtype;
  if (const Object* s = dict_get(fd, "Subtype"))
    if (const Name* n = doc.resolve(*s).name()) subtype = n->value;

  if (subtype == "Type0") {
    font.code_bytes = 2;
    font.default_width = 1.0;
    if (const Object* df = dict_get(fd, "DescendantFonts")) {
      if (const Array* arr = doc.resolve(*df).array(); arr && !arr->empty()) {
        if (const Dict* cid = doc.dict_of((*arr)[0])) {
          if (auto dw = doc.number_of(*cid, "DW")) font.default_width = *dw / 1000.0;
          if (const Object* w = dict_get(*cid, "W")) {
            if (const Array* wa = doc.resolve(*w).array()) {
              for (std::size_t i = 0; i < wa->size();) {
                const double* c0 = doc.resolve((*wa)[i]).number();
                if (!c0 || i + 1 >= wa->size()) break;
                const Object& next = doc.resolve((*wa)[i + 1]);
                if (const Array* list = next.array()) {
                  for (std::size_t k = 0; k < list->size(); ++k)
                    if (const double* wv = doc.resolve((*list)[k]).number())
                      font.widths[static_cast<std::uint32_t>(*c0) + static_cast<std::uint32_t>(k)] = *wv / 1000.0;
                  i += 2;
                } else if (i + 2 < wa->size()) {
                  const double* c1 = next.number();
                  const double* wv = doc.resolve((*wa)[i + 2]).number();
                  if (c1 && wv)
                    for (auto c = static_cast<std::uint32_t>(*c0); c <= static_cast<std::uint32_t>(*c1) && c - static_cast<std::uint32_t>(*c0) < 0x10000; ++c)
                      font.widths[c] = *wv / 1000.0;
                  i += 3;
                } else {
                  break;
                }
              }
            }
          }
        }
      }
    }
  } else {
    font.has_simple_map = true;
    std::string base_encoding = (subtype == "TrueType") ? "WinAnsiEncoding" : "StandardEncoding";
    const Dict* differences_dict = nullptr;
    if (const Object* e = dict_get(fd, "Encoding")) {
      const Object& er = doc.resolve(*e);
      if (const Name* n = er.name()) base_encoding = n->value;
      if (const Dict* d = er.dict()) {
        differences_dict = d;
        if (const Object* be = dict_get(*d, "BaseEncoding"))
          if (const Name* n = doc.resolve(*be).name()) base_encoding = n->value;
      }
    }
    for (unsigned c = 0; c < 256; ++c) {
      auto uc = static_cast<unsigned char>(c);
      font.simple_map[c] = base_encoding == "StandardEncoding" ? standard_encoding(uc) : win_ansi(uc);
    }
    if (differences_dict) {
      if (const Object* diff = dict_get(*differences_dict, "Differences")) {
        if (const Array* arr = doc.resolve(*diff).array()) {
          unsigned code = 0;
          for (const auto& item : *arr) {
            const Object& it = doc.resolve(item);
            if (const double* n = it.number()) {
              code = static_cast<unsigned>(*n);
            } else if (const Name* gn = it.name()) {
              if (code < 256) font.simple_map[code] = glyph_name_to_unicode(gn->value);
              ++code;
            }
          }
        }
      }
    }
    auto first = doc.number_of(fd, "FirstChar");
    if (!dict_get(fd, "Widths")) {
      std::string base;
      if (const Object* b = dict_get(fd, "BaseFont"))
        if (const Name* n = doc.resolve(*b).name()) base = n->value;
      if (base.find("Courier") != std::string::npos) {
        font.default_width = 0.6;
      } else {
        for (std::uint32_t c = 32; c < 127; ++c) font.widths[c] = kHelveticaWidths[c - 32] / 1000.0;
      }
    }
    if (const Object* w = dict_get(fd, "Widths"); w && first) {
      if (const Array* wa = doc.resolve(*w).array())
        for (std::size_t k = 0; k < wa->size(); ++k)
          if (const double* wv = doc.resolve((*wa)[k]).number())
            font.widths[static_cast<std::uint32_t>(*first) + static_cast<std::uint32_t>(k)] = *wv / 1000.0;
    }
  }

  if (const Object* tu = dict_get(fd, "ToUnicode")) {
    if (const StreamObject* s = doc.stream(*tu)) parse_to_unicode(doc.decode(*s), font);
  }
  return font;
}

// ---------------------------------------------------------------------------
// Content stream interpretation

struct Matrix {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  Matrix operator*(const Matrix& m) const {
    return {a * m.a + b * m.c,       a * m.b + b * m.d,       c * m.a + d * m.c,
            c * m.b + d * m.d,       e * m.a + f * m.c + m.e, e * m.b + f * m.d + m.f};
  }
};

struct Glyph {
  std::string text;
  double x = 0, y = 0, width = 0, size = 0;
};

struct GraphicsState {
  Matrix ctm;
};

class Interpreter {
 public:
  Interpreter(const Document& doc, std::vector<Glyph>& out) : doc_(doc), out_(out) {}

  void run(std::string_view content, const Dict* resources, int depth = 0) {
    if (depth > 8) return;
    Parser p(content);
    std::vector<Object> ops;
    while (!p.at_end()) {
      Object o;
      try {
        o = p.parse();
      } catch (const Error&) {
        return;
      }
      const Keyword* kw = o.keyword();
      if (!kw) {
        ops.push_back(std::move(o));
        continue;
      }
      if (kw->value.empty()) break;
      if (kw->value == "BI") {
        skip_inline_image(p, content);
        ops.clear();
        continue;
      }
      execute(kw->value, ops, resources, depth);
      ops.clear();
    }
  }

 private:
  static double num(const std::vector<Object>& ops, std::size_t i) {
    if (i < ops.size())
      if (const double* n = ops[i].number()) return *n;
    return 0.0;
  }

  void skip_inline_image(Parser& p, std::string_view content) {
    auto at = content.find("EI", p.pos());
    while (at != std::string_view::npos) {
      bool before = at == 0 || is_ws(static_cast<unsigned char>(content[at - 1]));
      bool after = at + 2 >= content.size() || is_ws(static_cast<unsigned char>(content[at + 2]));
      if (before && after) break;
      at = content.find("EI", at + 2);
    }
    p.seek(at == std::string_view::npos ? content.size() : at + 2);
  }

  void execute(const std::string& op, const std::vector<Object>& ops, const Dict* resources, int depth) {
    if (op == "q") {
      stack_.push_back(gs_);
    } else if (op == "Q") {
      if (!stack_.empty()) {
        gs_ = stack_.back();
        stack_.pop_back();
      }
    } else if (op == "cm" && ops.size() >= 6) {
      gs_.ctm = Matrix{num(ops, 0), num(ops, 1), num(ops, 2), num(ops, 3), num(ops, 4), num(ops, 5)} * gs_.ctm;
    } else if (op == "BT") {
      tm_ = tlm_ = Matrix{};
    } else if (op == "Tf" && ops.size() >= 2) {
      font_size_ = num(ops, 1);
      font_ = nullptr;
      if (const Name* n = ops[0].name()) font_ = font_for(n->value, resources);
    } else if (op == "Tc") {
      char_space_ = num(ops, 0);
    } else if (op == "Tw") {
      word_space_ = num(ops, 0);
    } else if (op == "Tz") {
      h_scale_ = num(ops, 0) / 100.0;
    } else if (op == "TL") {
      leading_ = num(ops, 0);
    } else if (op == "Ts") {
      rise_ = num(ops, 0);
    } else if (op == "Td") {
      move_line(num(ops, 0), num(ops, 1));
    } else if (op == "TD") {
      leading_ = -num(ops, 1);
      move_line(num(ops, 0), num(ops, 1));
    } else if (op == "Tm" && ops.size() >= 6) {
      tm_ = tlm_ = Matrix{num(ops, 0), num(ops, 1), num(ops, 2), num(ops, 3), num(ops, 4), num(ops, 5)};
    } else if (op == "T*") {
      move_line(0, -leading_);
    } else if (op == "Tj") {
      if (!ops.empty())
        if (const String* s = ops[0].string()) show(s->bytes);
    } else if (op == "'") {
      move_line(0, -leading_);
      if (!ops.empty())
        if (const String* s = ops.back().string()) show(s->bytes);
    } else if (op == "\"") {
      word_space_ = num(ops, 0);
      char_space_ = num(ops, 1);
      move_line(0, -leading_);
      if (!ops.empty())
        if (const String* s = ops.back().string()) show(s->bytes);
    } else if (op == "TJ") {
      if (!ops.empty())
        if (const Array* arr = ops[0].array()) {
          for (const auto& e : *arr) {
            if (const String* s = e.string()) {
              show(s->bytes);
            } else if (const double* n = e.number()) {
              double tx = -*n / 1000.0 * font_size_ * h_scale_;
              tm_ = Matrix{1, 0, 0, 1, tx, 0} * tm_;
            }
          }
        }
    } else if (op == "Do" && !ops.empty()) {
      if (const Name* n = ops[0].name()) draw_form(n->value, resources, depth);
    }
  }

  void move_line(double tx, double ty) {
    tlm_ = Matrix{1, 0, 0, 1, tx, ty} * tlm_;
    tm_ = tlm_;
  }

  const Font* font_for(const std::string& name, const Dict* resources) {
    if (!resources) return nullptr;
    const Object* fonts = dict_get(*resources, "Font");
    if (!fonts) return nullptr;
    const Dict* fd = doc_.dict_of(*fonts);
    if (!fd) return nullptr;
    const Object* entry = dict_get(*fd, name);
    if (!entry) return nullptr;
    const Dict* font_dict = doc_.dict_of(*entry);
    if (!font_dict) return nullptr;
    auto key = reinterpret_cast<std::uintptr_t>(font_dict);
    auto it = fonts_.find(key);
    if (it == fonts_.end()) it = fonts_.emplace(key, std::make_unique<Font>(load_font(doc_, *font_dict))).first;
    return it->second.get();
  }

  void draw_form(const std::string& name, const Dict* resources, int depth) {
    if (!resources) return;
    const Object* xo = dict_get(*resources, "XObject");
    if (!xo) return;
    const Dict* xd = doc_.dict_of(*xo);
    if (!xd) return;
    const Object* entry = dict_get(*xd, name);
    if (!entry) return;
    const StreamObject* s = doc_.stream(*entry);
    if (!s) return;
    const Object* st = dict_get(s->dict, "Subtype");
    if (!st || !doc_.resolve(*st).name() || doc_.resolve(*st).name()->value != "Form") return;
    const Dict* form_resources = resources;
    if (const Object* r = dict_get(s->dict, "Resources"))
      if (const Dict* rd = doc_.dict_of(*r)) form_resources = rd;
    auto saved_gs = gs_;
    auto saved_tm = tm_;
    auto saved_tlm = tlm_;
    if (const Object* m = dict_get(s->dict, "Matrix")) {
      if (const Array* a = doc_.resolve(*m).array(); a && a->size() == 6) {
        std::array<double, 6> v{};
        for (std::size_t i = 0; i < 6; ++i)
          if (const double* n = doc_.resolve((*a)[i]).number()) v[i] = *n;
        gs_.ctm = Matrix{v[0], v[1], v[2], v[3], v[4], v[5]} * gs_.ctm;
      }
    }
    run(doc_.decode(*s), form_resources, depth + 1);
    gs_ = saved_gs;
    tm_ = saved_tm;
    tlm_ = saved_tlm;
  }

  void show(const std::string& bytes) {
    if (!font_) {
      static const Font fallback = [] {
        Font f;
        f.has_simple_map = true;
        for (unsigned c = 0; c < 256; ++c) f.simple_map[c] = win_ansi(static_cast<unsigned char>(c));
        return f;
      }();
      font_ = &fallback;
    }
    const int nb = font_->code_bytes;
    for (std::size_t i = 0; i + static_cast<std::size_t>(nb) <= bytes.size(); i += static_cast<std::size_t>(nb)) {
      std::uint32_t code = 0;
      for (int k = 0; k < nb; ++k) code = (code << 8) | static_cast<unsigned char>(bytes[i + static_cast<std::size_t>(k)]);
      double w0 = font_->width(code);
      Matrix trm = Matrix{font_size_ * h_scale_, 0, 0, font_size_, 0, rise_} * tm_ * gs_.ctm;
      double scale = std::hypot(trm.c, trm.d);
      Glyph g;
      g.text = font_->decode(code);
      g.x = trm.e;
      g.y = trm.f;
      g.size = scale;
      double tx = (w0 * font_size_ + char_space_ + ((nb == 1 && code == 32) ? word_space_ : 0.0)) * h_scale_;
      g.width = w0 * std::hypot(trm.a, trm.b);
      if (!g.text.empty()) out_.push_back(std::move(g));
      tm_ = Matrix{1, 0, 0, 1, tx, 0} * tm_;
    }
  }

  const Document& doc_;
  std::vector<Glyph>& out_;
  GraphicsState gs_;
  std::vector<GraphicsState> stack_;
  Matrix tm_, tlm_;
  const Font* font_ = nullptr;
  double font_size_ = 1, char_space_ = 0, word_space_ = 0, h_scale_ = 1, leading_ = 0, rise_ = 0;
  std::unordered_map<std::uintptr_t, std::unique_ptr<Font>> fonts_;
};

// ---------------------------------------------------------------------------
// Layout: glyphs -> lines -> reading order

struct Line {
  std::string text;
  double x0 = 0, x1 = 0, baseline = 0, size = 0;
  double top() const { return baseline + 0.8 * size; }
  double bottom() const { return baseline - 0.25 * size; }
};

std::vector<Line> build_lines(const std::vector<Glyph>& glyphs) {
  std::vector<Line> lines;
  const Glyph* prev = nullptr;
  for (const auto& g : glyphs) {
    bool is_space = g.text == " ";
    bool new_line = true;
    if (prev && !lines.empty()) {
      double size = std::max(prev->size, g.size);
      double dy = std::abs(g.y - prev->y);
      double gap = g.x - (prev->x + prev->width);
      new_line = dy > 0.3 * size || gap > 1.5 * size || gap < -0.5 * size;
    }
    if (new_line) {
      if (is_space) {
        prev = nullptr;
        continue;
      }
      lines.push_back(Line{g.text, g.x, g.x + g.width, g.y, g.size});
    } else {
      Line& l = lines.back();
      double gap = g.x - (prev->x + prev->width);
      if (!is_space && gap > 0.15 * std::max(prev->size, g.size) && !l.text.empty() && l.text.back() != ' ')
        l.text.push_back(' ');
      if (!(is_space && !l.text.empty() && l.text.back() == ' ')) l.text += g.text;
      l.x1 = std::max(l.x1, g.x + g.width);
      l.size = std::max(l.size, g.size);
    }
    prev = &g;
  }
  for (auto& l : lines) {
    while (!l.text.empty() && l.text.back() == ' ') l.text.pop_back();
  }
  std::erase_if(lines, [](const Line& l) { return l.text.empty(); });
  return lines;
}

// Recursive XY-cut: split at the widest whitespace gap, horizontal bands top to
// bottom, vertical bands left to right.
void xy_cut(std::vector<Line> lines, std::vector<Line>& out) {
  if (lines.size() <= 1) {
    out.insert(out.end(), lines.begin(), lines.end());
    return;
  }
  struct Gap {
    double width = -1;
    double at = 0;
  };
  auto widest = [](std::vector<std::pair<double, double>> iv) {
    std::sort(iv.begin(), iv.end());
    Gap best;
    double reach = iv.front().second;
    for (std::size_t i = 1; i < iv.size(); ++i) {
      double g = iv[i].first - reach;
      if (g > 0 && g > best.width) best = Gap{g, (reach + iv[i].first) / 2};
      reach = std::max(reach, iv[i].second);
    }
    return best;
  };
  std::vector<std::pair<double, double>> xs, ys;
  for (const auto& l : lines) {
    xs.emplace_back(l.x0, l.x1);
    ys.emplace_back(l.bottom(), l.top());
  }
  Gap vx = widest(xs);
  Gap hy = widest(ys);
  if (vx.width < 0 && hy.width < 0) {
    std::stable_sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
      if (std::abs(a.baseline - b.baseline) > 0.3 * std::max(a.size, b.size)) return a.baseline > b.baseline;
      return a.x0 < b.x0;
    });
    out.insert(out.end(), lines.begin(), lines.end());
    return;
  }
  std::vector<Line> first, second;
  if (vx.width > hy.width) {
    for (auto& l : lines) (l.x1 <= vx.at ? first : second).push_back(std::move(l));
  } else {
    for (auto& l : lines) (l.bottom() >= hy.at ? first : second).push_back(std::move(l));
  }
  xy_cut(std::move(first), out);
  xy_cut(std::move(second), out);
}

std::string layout_page(const std::vector<Glyph>& glyphs) {
  std::vector<Line> ordered;
  xy_cut(build_lines(glyphs), ordered);
  std::string text;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i) {
      const Line& a = ordered[i - 1];
      const Line& b = ordered[i];
      double size = std::max(a.size, b.size);
      bool jump_up = b.top() > a.top() + 0.1 * size;
      bool big_gap = a.bottom() - b.top() > 0.6 * size;
      bool new_column = b.x0 > a.x1;
      text += (jump_up || big_gap || new_column) ? "\n\n" : "\n";
    }
    text += ordered[i].text;
  }
  return text;
}

void collect_pages(const Document& doc, const Object& node, const Dict* inherited_resources,
                   std::vector<std::pair<const Dict*, const Dict*>>& pages,
                   std::unordered_set<const Dict*>& seen) {
  const Dict* d = doc.dict_of(node);
  if (!d || !seen.insert(d).second) return;
  const Dict* resources = inherited_resources;
  if (const Object* r = dict_get(*d, "Resources"))
    if (const Dict* rd = doc.dict_of(*r)) resources = rd;
  if (const Object* kids = dict_get(*d, "Kids")) {
    if (const Array* arr = doc.resolve(*kids).array())
      for (const auto& k : *arr) collect_pages(doc, k, resources, pages, seen);
    return;
  }
  pages.emplace_back(d, resources);
}

std::string decode_text_string(const std::string& s) {
  if (s.size() >= 2 && static_cast<unsigned char>(s[0]) == 0xFE && static_cast<unsigned char>(s[1]) == 0xFF)
    return utf16be_to_utf8(std::string_view(s).substr(2));
  std::string out;
  for (unsigned char c : s) append_utf8(out, win_ansi(c));
  return out;
}

}  // namespace

PdfText extract(std::string_view bytes) {
  Document doc(bytes);
  if (dict_get(doc.trailer(), "Encrypt")) unreadable("encrypted document");
  const Object* root = dict_get(doc.trailer(), "Root");
  if (!root) unreadable("no document catalog");
  const Dict* catalog = doc.dict_of(*root);
  if (!catalog) unreadable("document catalog is not a dictionary");
  const Object* pages_root = dict_get(*catalog, "Pages");
  if (!pages_root) unreadable("no page tree");

  std::vector<std::pair<const Dict*, const Dict*>> pages;
  std::unordered_set<const Dict*> seen;
  collect_pages(doc, *pages_root, nullptr, pages, seen);

  PdfText result;
  result.page_count = pages.size();
  std::vector<std::string> page_texts;
  for (const auto& [page, resources] : pages) {
    std::string content;
    if (const Object* c = dict_get(*page, "Contents")) {
      auto append_stream = [&](const Object& o) {
        if (const StreamObject* s = doc.stream(o)) {
          content += doc.decode(*s);
          content += '\n';
        }
      };
      if (const Array* arr = doc.resolve(*c).array()) {
        for (const auto& e : *arr) append_stream(e);
      } else {
        append_stream(*c);
      }
    }
    std::vector<Glyph> glyphs;
    Interpreter(doc, glyphs).run(content, resources);
    std::string t = layout_page(glyphs);
    if (!t.empty()) page_texts.push_back(std::move(t));
  }
  result.text = join(page_texts, "\n");

  if (const Object* info = dict_get(doc.trailer(), "Info"))
    if (const Dict* id = doc.dict_of(*info))
      if (const Object* t = dict_get(*id, "Title"))
        if (const String* s = doc.resolve(*t).string()) result.title = trim(decode_text_string(s->bytes));

  if (trim(result.text).empty()) throw Error(ErrorCode::EmptyDocument, "no extractable text");
  return result;
}

std::string extract_pdf_text(const std::filesystem::path& pdf_path) {
  std::string bytes;
  try {
    bytes = read_file(pdf_path);
  } catch (const Error&) {
    throw Error(ErrorCode::UnreadablePdf, "cannot read " + pdf_path.string());
  }
  return extract(bytes).text;
}

}  // namespace litnet::pdf

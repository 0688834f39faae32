// Copyright 2026 The FacetForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "facetforge/store.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "facetforge/error.hpp"

namespace facetforge::store {

namespace {

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  });
}

const char* kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::kIri: return "IRI";
    case TermKind::kLiteral: return "literal";
    case TermKind::kVariable: return "variable";
  }
  return "term";
}

void check_text(const Term& t, const char* position) {
  if (is_blank(t.text)) {
    throw Error(ErrorCode::kMalformedTerm,
                std::string("blank ") + kind_name(t.kind) + " in " + position);
  }
}

// Tries to extend `binding` so that `pattern` equals `fact`.
bool unify(const Term& pattern, const Term& fact, Binding& binding,
           std::vector<std::string>& newly_bound) {
  if (!pattern.is_variable()) return pattern == fact;
  auto it = binding.find(pattern.text);
  if (it != binding.end()) return it->second == fact;
  binding.emplace(pattern.text, fact);
  newly_bound.push_back(pattern.text);
  return true;
}

void join(const std::set<Triple>& facts, std::span<const Pattern> patterns,
          std::size_t depth, Binding& binding, std::set<Binding>& out) {
  if (depth == patterns.size()) {
    out.insert(binding);
    return;
  }
  const Pattern& p = patterns[depth];
  for (const Triple& fact : facts) {
    std::vector<std::string> bound;
    if (unify(p.subject, fact.subject, binding, bound) &&
        unify(p.predicate, fact.predicate, binding, bound) &&
        unify(p.object, fact.object, binding, bound)) {
      join(facts, patterns, depth + 1, binding, out);
    }
    for (const auto& name : bound) binding.erase(name);
  }
}

// ---- N-Triples escaping ----

bool iri_needs_escape(unsigned char c) {
  if (c <= 0x20) return true;
  switch (c) {
    case '<': case '>': case '"': case '{': case '}':
    case '|': case '^': case '`': case '\\':
      return true;
    default:
      return false;
  }
}

void append_uchar(std::string& out, unsigned char c) {
  static const char* kHex = "0123456789ABCDEF";
  out += "\\u00";
  out += kHex[c >> 4];
  out += kHex[c & 0xF];
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  Triple parse() {
    Triple t;
    t.subject = parse_iri("subject");
    require_space();
    t.predicate = parse_iri("predicate");
    require_space();
    skip_space();
    if (peek() == '<') {
      t.object = parse_iri("object");
    } else if (peek() == '"') {
      t.object = parse_literal();
    } else {
      fail("expected IRI or literal object");
    }
    skip_space();
    if (peek() != '.') fail("expected '.' terminator");
    ++pos_;
    skip_space();
    if (pos_ != line_.size()) fail("trailing characters after '.'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(line_no_, why);
  }

  char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t'))
      ++pos_;
  }

  void require_space() {
    if (peek() != ' ' && peek() != '\t') fail("expected whitespace");
    skip_space();
  }

  char32_t parse_hex(std::size_t digits) {
    if (pos_ + digits > line_.size()) fail("truncated \\u escape");
    char32_t value = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = line_[pos_++];
      value <<= 4;
      if (c >= '0' && c <= '9') value |= static_cast<char32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') value |= static_cast<char32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') value |= static_cast<char32_t>(c - 'A' + 10);
      else fail("bad hex digit in escape");
    }
    if (value > 0x10FFFF) fail("escape outside Unicode range");
    return value;
  }

  Term parse_iri(const char* position) {
    skip_space();
    if (peek() != '<') fail(std::string("expected '<' for ") + position);
    ++pos_;
    std::string text;
    for (;;) {
      if (pos_ >= line_.size()) fail("unterminated IRI");
      char c = line_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        char kind = peek();
        ++pos_;
        if (kind == 'u') append_utf8(text, parse_hex(4));
        else if (kind == 'U') append_utf8(text, parse_hex(8));
        else fail("bad escape in IRI");
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"')
        fail("illegal character in IRI");
      text += c;
    }
    if (is_blank(text)) fail(std::string("blank IRI for ") + position);
    return Term::iri(std::move(text));
  }

  Term parse_literal() {
    ++pos_;  // opening quote
    std::string text;
    for (;;) {
      if (pos_ >= line_.size()) fail("unterminated literal");
      char c = line_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        text += c;
        continue;
      }
      char kind = peek();
      ++pos_;
      switch (kind) {
        case 'n': text += '\n'; break;
        case 'r': text += '\r'; break;
        case 't': text += '\t'; break;
        case 'b': text += '\b'; break;
        case 'f': text += '\f'; break;
        case '"': text += '"'; break;
        case '\'': text += '\''; break;
        case '\\': text += '\\'; break;
        case 'u': append_utf8(text, parse_hex(4)); break;
        case 'U': append_utf8(text, parse_hex(8)); break;
        default: fail("bad escape in literal");
      }
    }
    if (peek() == '@' || peek() == '^') fail("typed or tagged literals unsupported");
    if (is_blank(text)) fail("blank literal");
    return Term::literal(std::move(text));
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

Triple make_triple(std::string subject, std::string predicate, Term object) {
  return {Term::iri(std::move(subject)), Term::iri(std::move(predicate)),
          std::move(object)};
}

Triple make_triple(std::string subject, std::string predicate,
                   std::string object_iri) {
  return make_triple(std::move(subject), std::move(predicate),
                     Term::iri(std::move(object_iri)));
}

void validate_triple(const Triple& t) {
  if (t.subject.kind != TermKind::kIri)
    throw Error(ErrorCode::kMalformedTerm, "subject must be an IRI");
  if (t.predicate.kind != TermKind::kIri)
    throw Error(ErrorCode::kMalformedTerm, "predicate must be an IRI");
  if (t.object.is_variable())
    throw Error(ErrorCode::kMalformedTerm, "object must not be a variable");
  check_text(t.subject, "subject");
  check_text(t.predicate, "predicate");
  check_text(t.object, "object");
}

bool TripleStore::insert(const Triple& t) {
  validate_triple(t);
  if (!triples_.insert(t).second) return false;
  ++revision_;
  return true;
}

bool TripleStore::erase(const Triple& t) {
  if (triples_.erase(t) == 0) return false;
  ++revision_;
  return true;
}

BindingSet TripleStore::query(std::span<const Pattern> patterns) const {
  if (patterns.empty())
    throw Error(ErrorCode::kEmptyQuery, "query needs at least one pattern");
  for (const auto& p : patterns) {
    check_text(p.subject, "pattern subject");
    check_text(p.predicate, "pattern predicate");
    check_text(p.object, "pattern object");
  }

  std::set<Binding> solutions;
  Binding scratch;
  join(triples_, patterns, 0, scratch, solutions);

  BindingSet out(solutions.begin(), solutions.end());
  // std::map already orders keys by variable name, so comparing the
  // (text, kind) sequence gives the documented ordering.
  std::sort(out.begin(), out.end(), [](const Binding& a, const Binding& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [](const auto& x, const auto& y) {
          if (x.second.text != y.second.text) return x.second.text < y.second.text;
          return x.second.kind < y.second.kind;
        });
  });
  return out;
}

std::vector<Term> TripleStore::objects(const std::string& subject,
                                       const std::string& predicate) const {
  std::vector<Term> out;
  for (const auto& b :
       query({Pattern{Term::iri(subject), Term::iri(predicate), Term::variable("o")}})) {
    out.push_back(b.at("o"));
  }
  return out;
}

std::vector<std::string> TripleStore::subjects_with(
    const std::string& predicate) const {
  std::set<std::string> seen;
  for (const auto& t : triples_) {
    if (t.predicate.text == predicate) seen.insert(t.subject.text);
  }
  return {seen.begin(), seen.end()};
}

std::string format_term(const Term& term) {
  std::string out;
  switch (term.kind) {
    case TermKind::kIri:
      out += '<';
      for (unsigned char c : term.text) {
        if (iri_needs_escape(c)) append_uchar(out, c);
        else out += static_cast<char>(c);
      }
      out += '>';
      break;
    case TermKind::kLiteral:
      out += '"';
      for (char c : term.text) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\r': out += "\\r"; break;
          case '\t': out += "\\t"; break;
          default: out += c;
        }
      }
      out += '"';
      break;
    case TermKind::kVariable:
      out += '?';
      out += term.text;
      break;
  }
  return out;
}

std::string format_triple(const Triple& t) {
  return format_term(t.subject) + ' ' + format_term(t.predicate) + ' ' +
         format_term(t.object) + " .";
}

void write_ntriples(const TripleStore& store, std::ostream& out) {
  for (const auto& t : store) out << format_triple(t) << '\n';
}

TripleStore read_ntriples(std::istream& in) {
  TripleStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    store.insert(LineParser(line, line_no).parse());
  }
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read failed");
  return store;
}

void persist(const TripleStore& store, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + tmp.string());
    write_ntriples(store, out);
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIoFailure,
                "cannot replace " + path.string() + ": " + ec.message());
  }
}

TripleStore restore(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  return read_ntriples(in);
}

}  // namespace facetforge::store

#ifndef SYMBREAK_SMODELS_HPP
#define SYMBREAK_SMODELS_HPP

// Reader and writer for the smodels intermediate format, plus a small
// human-readable rule syntax (see README for its grammar).

#include <cctype>
#include <charconv>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "symbreak/error.hpp"
#include "symbreak/program.hpp"

namespace symbreak {

namespace detail {

class LineTokens {
public:
  LineTokens(std::string_view line, std::size_t lineno) : line_(line), lineno_(lineno) {}

  bool at_end() {
    skip_ws();
    return pos_ == line_.size();
  }

  std::string_view word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError(lineno_, "unexpected end of line");
    return line_.substr(start, pos_ - start);
  }

  std::uint32_t number() {
    std::string_view w = word();
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || p != w.data() + w.size())
      throw ParseError(lineno_, "expected a 32-bit unsigned integer, got '" + std::string(w) + "'");
    return v;
  }

  AtomId atom() {
    std::uint32_t v = number();
    if (v == 0) throw ParseError(lineno_, "atom id 0 is not allowed");
    return v;
  }

  std::string rest() {
    skip_ws();
    std::string_view r = line_.substr(pos_);
    while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.remove_suffix(1);
    pos_ = line_.size();
    return std::string(r);
  }

  void expect_end() {
    if (!at_end()) throw ParseError(lineno_, "trailing tokens on line");
  }

private:
  void skip_ws() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }

  std::string_view line_;
  std::size_t lineno_;
  std::size_t pos_ = 0;
};

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

inline std::string slurp(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct RawRule {
  std::uint32_t type;
  Rule rule;
};

// Recognises the atom lparse-style writers use as the head of integrity
// constraints: listed in B-, unnamed, heads some basic/cardinality rule and
// no other kind, never used in a body. Picks the largest such atom.
inline std::optional<AtomId> detect_falsity(const std::vector<RawRule>& raw, const Program& p) {
  std::set<AtomId> in_body, bad_head, good_head;
  for (const RawRule& r : raw) {
    in_body.insert(r.rule.body_pos.begin(), r.rule.body_pos.end());
    in_body.insert(r.rule.body_neg.begin(), r.rule.body_neg.end());
    for (AtomId h : r.rule.head) (r.type == 1 || r.type == 2 ? good_head : bad_head).insert(h);
  }
  std::optional<AtomId> best;
  for (AtomId a : p.compute_false) {
    if (p.symbols.contains(a) || in_body.contains(a) || bad_head.contains(a) ||
        !good_head.contains(a))
      continue;
    if (std::count(p.compute_false.begin(), p.compute_false.end(), a) != 1) continue;
    if (std::find(p.compute_true.begin(), p.compute_true.end(), a) != p.compute_true.end())
      continue;
    if (!best || a > *best) best = a;
  }
  return best;
}

}  // namespace detail

/// Parses a complete smodels-format program. Integrity constraints written
/// with a falsity head come back headless; the falsity atom is dropped
/// entirely when it is the largest atom id, otherwise kept in
/// `Program::falsity` (and in compute_false) so writing reproduces it.
inline Program read_smodels(const std::string& text) {
  auto lines = detail::split_lines(text);
  std::size_t li = 0;
  auto next_line = [&](const char* what) -> std::size_t {
    while (li < lines.size()) {
      auto& l = lines[li];
      if (l.find_first_not_of(" \t") != std::string::npos) return li++;
      ++li;
    }
    throw ParseError(lines.size() + 1, std::string("unexpected end of input, expected ") + what);
  };

  Program p;
  std::vector<detail::RawRule> raw;
  AtomId max_atom = 0;
  auto note = [&](AtomId a) { max_atom = std::max(max_atom, a); };

  while (true) {
    std::size_t ln = next_line("rule or 0");
    detail::LineTokens t(lines[ln], ln + 1);
    std::uint32_t type = t.number();
    if (type == 0) {
      t.expect_end();
      break;
    }
    detail::RawRule rr{type, {}};
    Rule& r = rr.rule;
    auto read_body = [&](std::uint32_t n, std::uint32_t m) {
      if (m > n) throw ParseError(ln + 1, "negative literal count exceeds literal count");
      for (std::uint32_t i = 0; i < m; ++i) r.body_neg.push_back(t.atom());
      for (std::uint32_t i = m; i < n; ++i) r.body_pos.push_back(t.atom());
    };
    switch (type) {
      case 1: {
        r.kind = RuleKind::Disjunctive;
        r.head.push_back(t.atom());
        std::uint32_t n = t.number(), m = t.number();
        read_body(n, m);
        break;
      }
      case 2: {
        r.kind = RuleKind::Cardinality;
        r.head.push_back(t.atom());
        std::uint32_t n = t.number(), m = t.number();
        r.bound = t.number();
        read_body(n, m);
        break;
      }
      case 3:
      case 8: {
        r.kind = type == 3 ? RuleKind::Choice : RuleKind::Disjunctive;
        std::uint32_t heads = t.number();
        if (heads == 0) throw ParseError(ln + 1, "rule needs at least one head atom");
        for (std::uint32_t i = 0; i < heads; ++i) r.head.push_back(t.atom());
        std::uint32_t n = t.number(), m = t.number();
        read_body(n, m);
        break;
      }
      case 5:
      case 6:
        throw Error(ErrorKind::UnsupportedRuleType,
                    "line " + std::to_string(ln + 1) + ": " +
                        (type == 5 ? "weight rules" : "minimize statements") +
                        " are not supported");
      default:
        throw Error(ErrorKind::UnsupportedRuleType,
                    "line " + std::to_string(ln + 1) + ": unknown rule type " +
                        std::to_string(type));
    }
    t.expect_end();
    for (AtomId a : r.head) note(a);
    for (AtomId a : r.body_pos) note(a);
    for (AtomId a : r.body_neg) note(a);
    raw.push_back(std::move(rr));
  }

  std::set<std::string> names;
  while (true) {
    std::size_t ln = next_line("symbol or 0");
    detail::LineTokens t(lines[ln], ln + 1);
    AtomId id = t.number();
    if (id == 0) {
      t.expect_end();
      break;
    }
    std::string name = t.rest();
    if (name.empty()) throw ParseError(ln + 1, "symbol without a name");
    if (!names.insert(name).second) throw ParseError(ln + 1, "duplicate symbol '" + name + "'");
    if (!p.symbols.emplace(id, name).second)
      throw ParseError(ln + 1, "atom " + std::to_string(id) + " named twice");
    note(id);
  }

  auto read_section = [&](const char* tag, std::vector<AtomId>& out) {
    std::size_t ln = next_line(tag);
    detail::LineTokens t(lines[ln], ln + 1);
    if (t.word() != tag) throw ParseError(ln + 1, std::string("expected '") + tag + "'");
    t.expect_end();
    while (true) {
      ln = next_line("atom id or 0");
      detail::LineTokens a(lines[ln], ln + 1);
      AtomId id = a.number();
      a.expect_end();
      if (id == 0) break;
      out.push_back(id);
      note(id);
    }
  };
  read_section("B+", p.compute_true);
  read_section("B-", p.compute_false);

  {
    std::size_t ln = next_line("model count");
    detail::LineTokens t(lines[ln], ln + 1);
    p.models_requested = t.number();
    t.expect_end();
  }
  while (li < lines.size()) {
    if (lines[li].find_first_not_of(" \t") != std::string::npos)
      throw ParseError(li + 1, "trailing data after model count");
    ++li;
  }

  p.atom_count = max_atom;
  auto falsity = detail::detect_falsity(raw, p);
  for (auto& rr : raw) {
    if (falsity && !rr.rule.head.empty() && rr.rule.head.front() == *falsity) rr.rule.head.clear();
    p.rules.push_back(std::move(rr.rule));
  }
  if (falsity) {
    if (*falsity == p.atom_count) {
      std::erase(p.compute_false, *falsity);
      auto used = p.atoms();
      --p.atom_count;
      while (p.atom_count > 0 && !used.contains(p.atom_count) &&
             !p.symbols.contains(p.atom_count))
        --p.atom_count;
    } else {
      p.falsity = falsity;
    }
  }
  return p;
}

inline Program read_smodels(std::istream& in) { return read_smodels(detail::slurp(in)); }

/// Writes `p` in smodels format. Integrity constraints get the falsity atom
/// as head: `p.falsity` if set, else a fresh atom appended to B-.
inline void write_smodels(const Program& p, std::ostream& out) {
  bool has_integrity = std::any_of(p.rules.begin(), p.rules.end(), [](const Rule& r) {
    return r.head.empty() && r.kind != RuleKind::Choice;
  });
  AtomId falsity = 0;
  std::vector<AtomId> compute_false = p.compute_false;
  if (has_integrity) {
    if (p.falsity) {
      falsity = *p.falsity;
      if (std::find(compute_false.begin(), compute_false.end(), falsity) == compute_false.end())
        compute_false.push_back(falsity);
    } else {
      falsity = p.atom_count + 1;
      compute_false.push_back(falsity);
    }
  }

  auto body = [&out](const Rule& r) {
    out << r.body_size() << ' ' << r.body_neg.size();
    if (r.kind == RuleKind::Cardinality) out << ' ' << r.bound;
    for (AtomId a : r.body_neg) out << ' ' << a;
    for (AtomId a : r.body_pos) out << ' ' << a;
    out << '\n';
  };
  for (const Rule& r : p.rules) {
    switch (r.kind) {
      case RuleKind::Disjunctive:
        if (r.head.size() <= 1) {
          out << "1 " << (r.head.empty() ? falsity : r.head.front()) << ' ';
        } else {
          out << "8 " << r.head.size();
          for (AtomId h : r.head) out << ' ' << h;
          out << ' ';
        }
        break;
      case RuleKind::Choice:
        out << "3 " << r.head.size();
        for (AtomId h : r.head) out << ' ' << h;
        out << ' ';
        break;
      case RuleKind::Cardinality:
        out << "2 " << (r.head.empty() ? falsity : r.head.front()) << ' ';
        break;
    }
    body(r);
  }
  out << "0\n";
  for (const auto& [id, name] : p.symbols) out << id << ' ' << name << '\n';
  out << "0\nB+\n";
  for (AtomId a : p.compute_true) out << a << '\n';
  out << "0\nB-\n";
  for (AtomId a : compute_false) out << a << '\n';
  out << "0\n" << p.models_requested << '\n';
}

inline std::string to_smodels(const Program& p) {
  std::ostringstream s;
  write_smodels(p, s);
  return s.str();
}

// ---------------------------------------------------------------------------
// Text format

namespace detail {

class TextParser {
public:
  TextParser(const std::string& text) : text_(text) {}

  Program parse() {
    while (true) {
      skip();
      if (pos_ == text_.size()) break;
      statement();
    }
    p_.atom_count = std::max(p_.atom_count, next_id_ - 1);
    return std::move(p_);
  }

private:
  void fail(const std::string& why) { throw ParseError(line_, why); }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek(std::string_view s) {
    skip();
    return text_.compare(pos_, s.size(), s) == 0;
  }

  bool accept(std::string_view s) {
    if (!peek(s)) return false;
    pos_ += s.size();
    return true;
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  bool at_keyword_not() {
    skip();
    return text_.compare(pos_, 3, "not") == 0 &&
           (pos_ + 3 >= text_.size() || !ident_char(text_[pos_ + 3]));
  }

  std::string term() {
    skip();
    std::size_t start = pos_;
    if (pos_ >= text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                  text_[pos_] == '_'))
      fail("expected an atom");
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '(') {
      int depth = 0;
      while (pos_ < text_.size()) {
        char c = text_[pos_];
        if (c == '\n') fail("unterminated argument list");
        if (c == '(') ++depth;
        if (c == ')' && --depth == 0) {
          ++pos_;
          break;
        }
        ++pos_;
      }
      if (depth != 0) fail("unterminated argument list");
    }
    std::string t = text_.substr(start, pos_ - start);
    std::erase_if(t, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    return t;
  }

  static bool hidden_name(const std::string& n) {
    return n.size() >= 2 && n[0] == '_' &&
           std::all_of(n.begin() + 1, n.end(), [](char c) { return std::isdigit(c); });
  }

  AtomId atom() {
    std::string n = term();
    if (n == "not") fail("'not' cannot be used as an atom");
    auto it = ids_.find(n);
    if (it != ids_.end()) return it->second;
    AtomId id = next_id_++;
    ids_.emplace(n, id);
    if (!hidden_name(n)) p_.symbols.emplace(id, n);
    return id;
  }

  void literal(Rule& r) {
    if (at_keyword_not()) {
      pos_ += 3;
      r.body_neg.push_back(atom());
    } else {
      r.body_pos.push_back(atom());
    }
  }

  std::uint32_t number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || start == pos_) fail("expected a number");
    return v;
  }

  bool at_digit() {
    skip();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) &&
           !looks_like_atom_from_digit();
  }

  // "2 {" starts a cardinality body; "2x" or "2(" is an atom.
  bool looks_like_atom_from_digit() {
    std::size_t q = pos_;
    while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) ++q;
    return q < text_.size() && (ident_char(text_[q]) || text_[q] == '(');
  }

  void body(Rule& r) {
    if (at_digit()) {
      r.kind = RuleKind::Cardinality;
      r.bound = number();
      expect("{");
      if (!accept("}")) {
        do literal(r);
        while (accept(","));
        expect("}");
      }
      return;
    }
    if (peek(".")) return;
    do literal(r);
    while (accept(","));
  }

  void directive() {
    std::string kw = term();
    if (kw == "compute") {
      if (!peek(".")) {
        do {
          if (at_keyword_not()) {
            pos_ += 3;
            p_.compute_false.push_back(atom());
          } else {
            p_.compute_true.push_back(atom());
          }
        } while (accept(","));
      }
    } else if (kw == "models") {
      p_.models_requested = number();
    } else {
      fail("unknown directive '#" + kw + "'");
    }
    expect(".");
  }

  void statement() {
    if (accept("#")) return directive();
    Rule r;
    if (accept("{")) {
      r.kind = RuleKind::Choice;
      if (!accept("}")) {
        do r.head.push_back(atom());
        while (accept(","));
        expect("}");
      }
      if (accept(":-")) body(r);
      if (r.kind != RuleKind::Choice) fail("choice rule with a cardinality body");
    } else if (accept(":-")) {
      body(r);
    } else {
      do r.head.push_back(atom());
      while (accept(";") || accept("|"));
      if (accept(":-")) body(r);
      if (r.kind == RuleKind::Cardinality && r.head.size() > 1)
        fail("cardinality rule with more than one head atom");
    }
    expect(".");
    p_.rules.push_back(std::move(r));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  Program p_;
  std::unordered_map<std::string, AtomId> ids_;
  AtomId next_id_ = 1;
};

}  // namespace detail

/// Parses the text syntax. Atoms get ids in order of first occurrence;
/// atoms spelled `_N` are hidden.
inline Program read_text(const std::string& text) { return detail::TextParser(text).parse(); }
inline Program read_text(std::istream& in) { return read_text(detail::slurp(in)); }

inline void write_text(const Program& p, std::ostream& out) {
  auto lits = [&](const Rule& r) {
    bool first = true;
    for (AtomId a : r.body_pos) {
      out << (first ? "" : ", ") << p.name(a);
      first = false;
    }
    for (AtomId a : r.body_neg) {
      out << (first ? "" : ", ") << "not " << p.name(a);
      first = false;
    }
  };
  for (const Rule& r : p.rules) {
    switch (r.kind) {
      case RuleKind::Disjunctive:
        for (std::size_t i = 0; i < r.head.size(); ++i) out << (i ? " ; " : "") << p.name(r.head[i]);
        if (r.body_size() > 0 || r.head.empty()) {
          out << (r.head.empty() ? ":- " : " :- ");
          lits(r);
        }
        break;
      case RuleKind::Choice:
        out << '{';
        for (std::size_t i = 0; i < r.head.size(); ++i) out << (i ? ", " : "") << p.name(r.head[i]);
        out << '}';
        if (r.body_size() > 0) {
          out << " :- ";
          lits(r);
        }
        break;
      case RuleKind::Cardinality:
        if (!r.head.empty()) out << p.name(r.head.front()) << ' ';
        out << ":- " << r.bound << " {";
        lits(r);
        out << '}';
        break;
    }
    out << ".\n";
  }
  if (!p.compute_true.empty() || !p.compute_false.empty()) {
    out << "#compute ";
    bool first = true;
    for (AtomId a : p.compute_true) {
      out << (first ? "" : ", ") << p.name(a);
      first = false;
    }
    for (AtomId a : p.compute_false) {
      out << (first ? "" : ", ") << "not " << p.name(a);
      first = false;
    }
    out << ".\n";
  }
  if (p.models_requested != 1) out << "#models " << p.models_requested << ".\n";
}

inline std::string to_text(const Program& p) {
  std::ostringstream s;
  write_text(p, s);
  return s.str();
}

/// smodels if the first non-blank character is a digit, text otherwise.
inline Program read_program(const std::string& data) {
  auto i = data.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && std::isdigit(static_cast<unsigned char>(data[i])))
    return read_smodels(data);
  return read_text(data);
}

}  // namespace symbreak

#endif

#pragma once

// Concrete syntax for UDRS databases, finite models and fully specified
// DRSs. Every parser reports failures with the source position and the set
// of tokens it would have accepted there.

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "udrs/drs.hpp"
#include "udrs/error.hpp"
#include "udrs/model.hpp"
#include "udrs/types.hpp"

namespace udrs {

struct SourceSpan {
  std::size_t line = 1, column = 1, offset = 0, length = 0;

  std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
};

/// A failure located in the input text.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorCode code, SourceSpan span, const std::string& msg, std::set<std::string> expected = {})
      : Error(code, span.str() + ": " + msg + render(expected)), span_(span), expected_(std::move(expected)) {}

  const SourceSpan& span() const { return span_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  static std::string render(const std::set<std::string>& e) {
    if (e.empty()) return "";
    std::string s = " (expected";
    for (const auto& x : e) s += " '" + x + "'";
    return s + ")";
  }
  SourceSpan span_;
  std::set<std::string> expected_;
};

/// Where each label was defined in the parsed text.
using SourceMap = std::map<Label, SourceSpan>;

namespace detail {

struct Token {
  enum Kind { Ident, Punct, End } kind = End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { run(); }
  const std::vector<Token>& tokens() const { return toks_; }

 private:
  void run() {
    std::size_t i = 0, line = 1, col = 1;
    auto adv = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k, ++i) {
        if (src_[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < src_.size()) {
      char ch = src_[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        adv(1);
        continue;
      }
      if (ch == '#') {
        while (i < src_.size() && src_[i] != '\n') adv(1);
        continue;
      }
      SourceSpan sp{line, col, i, 0};
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t j = i;
        while (j < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_' || src_[j] == '\''))
          ++j;
        sp.length = j - i;
        toks_.push_back({Token::Ident, std::string(src_.substr(i, j - i)), sp});
        adv(j - i);
        continue;
      }
      static const char* two[] = {"<=", "->", "=>"};
      bool matched = false;
      for (const char* t : two)
        if (src_.substr(i, 2) == t) {
          sp.length = 2;
          toks_.push_back({Token::Punct, t, sp});
          adv(2);
          matched = true;
          break;
        }
      if (matched) continue;
      if (std::string_view("{}[](),:=~<>|.?;").find(ch) != std::string_view::npos) {
        sp.length = 1;
        toks_.push_back({Token::Punct, std::string(1, ch), sp});
        adv(1);
        continue;
      }
      sp.length = 1;
      throw SyntaxError(ErrorCode::ParseError, sp, std::string("unexpected character '") + ch + "'");
    }
    toks_.push_back({Token::End, "", SourceSpan{line, col, src_.size(), 0}});
  }

  std::string_view src_;
  std::vector<Token> toks_;
};

class ParserBase {
 public:
  explicit ParserBase(std::string_view text) : toks_(Lexer(text).tokens()) {}

 protected:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::End; }
  bool is(const std::string& s, std::size_t k = 0) const {
    const auto& t = peek(k);
    return t.kind != Token::End && t.text == s;
  }
  bool is_ident(std::size_t k = 0) const { return peek(k).kind == Token::Ident; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept(const std::string& s) {
    if (!is(s)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(std::set<std::string> expected) const {
    const auto& t = peek();
    std::string found = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(ErrorCode::ParseError, t.span, "unexpected " + found, std::move(expected));
  }
  const Token& expect(const std::string& s) {
    if (!is(s)) fail({s});
    return next();
  }
  std::string ident(const std::string& what = "identifier") {
    if (!is_ident()) fail({what});
    return next().text;
  }

  /// PRED, PRED.SENSE, and the slot-term heads all share this shape.
  Term term() {
    if (accept("?")) return Term(Referent("?", Sort::Neutral));
    std::string head = ident("term");
    if (accept("(")) {
      std::string arg = is("?") ? (next(), std::string("?")) : ident("referent");
      expect(")");
      return Term(head, arg == "?" ? Referent("?", Sort::Neutral) : Referent(arg));
    }
    return Term(Referent(head));
  }

  std::vector<Term> term_list() {
    std::vector<Term> out;
    expect("(");
    if (accept(")")) return out;
    do out.push_back(term());
    while (accept(","));
    expect(")");
    return out;
  }

  /// `[not] P[.s](..) [senses [..]]` or `t = t` or `t = Sigma z : l`, with
  /// the atom spelling chosen by the caller (box formats differ slightly).
  Condition standard_condition(std::vector<std::pair<Label, SourceSpan>>* label_refs) {
    bool negated = accept("not");
    if (!is_ident() && !is("?")) fail({"condition"});
    // t = ... starts either with a referent or a slot term followed by '='
    bool slot_eq = is_ident() && is("(", 1) && (is_ident(2) || is("?", 2)) && is(")", 3) && is("=", 4);
    bool plain_eq = (is_ident() || is("?")) && is("=", 1);
    if (!negated && (slot_eq || plain_eq)) {
      Term lhs = term();
      if (accept("=")) {
        if (is("Sigma")) {
          next();
          Referent var(ident("referent"));
          expect(":");
          const auto& lt = peek();
          Label lic = ident("label");
          if (label_refs) label_refs->push_back({lic, lt.span});
          if (lhs.is_slot()) throw SyntaxError(ErrorCode::ParseError, lt.span, "sum target must be a referent");
          return Sum{lhs.ref, var, lic};
        }
        return Eq{lhs, term()};
      }
      fail({"="});
    }
    Atom a;
    a.pred = ident("predicate");
    if (accept(".")) a.senses.push_back(ident("sense"));
    a.args = term_list();
    if (accept("senses")) {
      if (!a.senses.empty()) fail({"("});
      expect("[");
      while (!is("]")) {
        a.senses.push_back(ident("sense"));
        accept(",");
      }
      expect("]");
      if (a.senses.empty()) fail({"sense"});
    }
    a.negated = negated;
    return a;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline std::optional<PluralKind> plural_kind_from(const std::string& s) {
  if (s == "c") return PluralKind::Collective;
  if (s == "d") return PluralKind::Distributive;
  if (s == "gen") return PluralKind::Generic;
  if (s == "cum") return PluralKind::Cumulative;
  return std::nullopt;
}

class UdrsParser : public ParserBase {
 public:
  UdrsParser(std::string_view text, SourceMap* spans) : ParserBase(text), spans_(spans) {}

  UdrsDatabase parse() {
    UdrsDatabase db;
    while (!at_end()) {
      if (accept("lexicon")) {
        lexicon(db);
      } else if (accept("goal")) {
        if (db.goal) throw SyntaxError(ErrorCode::ParseError, peek().span, "a database has at most one goal");
        expect("udrs");
        db.goal = udrs();
      } else if (accept("udrs")) {
        db.sentences.push_back(udrs());
      } else {
        fail({"udrs", "goal", "lexicon"});
      }
    }
    resolve_cross_refs(db);
    return db;
  }

 private:
  void define(const Label& l, const SourceSpan& sp, bool allow_clause_alias = false) {
    auto [it, fresh] = defined_.emplace(l, sp);
    if (!fresh && !allow_clause_alias)
      throw SyntaxError(ErrorCode::DuplicateLabel, sp, "label " + l + " is already defined at " + it->second.str());
    if (spans_ && fresh) (*spans_)[l] = sp;
  }

  void lexicon(UdrsDatabase& db) {
    expect("{");
    while (!accept("}")) {
      LexEntry e;
      e.pred = ident("predicate");
      expect(".");
      e.sense = ident("sense");
      expect("(");
      if (!accept(")")) {
        do e.params.push_back(ident("parameter"));
        while (accept(","));
        expect(")");
      }
      expect("=>");
      expect("[");
      while (!accept("]")) {
        e.conds.push_back(standard_condition(nullptr));
        accept(",");
      }
      db.lexicon.push_back(std::move(e));
    }
  }

  struct Pending {
    Label label;
    SourceSpan span;
  };

  Udrs udrs() {
    Udrs u;
    const Token& lt = peek();
    u.top = ident("label");
    std::optional<std::string> index;
    if (accept("index")) index = ident("index");
    define(u.top, lt.span);
    expect("{");
    local_refs_.clear();
    bool first_clause = true;
    while (!is("ord")) {
      if (accept("clause")) {
        u.clauses.push_back(clause(u, first_clause ? u.top : Label{}));
        first_clause = false;
      } else if (accept("box")) {
        box(u);
      } else {
        fail({"clause", "box", "ord"});
      }
    }
    if (u.clauses.empty()) fail({"clause"});
    if (index && !u.clauses.front().coindex) u.clauses.front().coindex = index;
    expect("ord");
    expect(":");
    expect("[");
    std::vector<std::tuple<Label, std::string, Label, SourceSpan>> raw;
    if (!is("]")) {
      do {
        const Token& at = peek();
        Label a = ident("label");
        expect("<=");
        std::string fn;
        Label b;
        if ((is("scope") || is("res")) && is("(", 1)) {
          fn = next().text;
          expect("(");
          b = ident("label");
          expect(")");
        } else {
          b = ident("label");
        }
        raw.emplace_back(a, fn, b, at.span);
      } while (accept(","));
    }
    expect("]");
    expect("}");
    for (const auto& p : local_refs_)
      if (!u.has_label(p.label)) unresolved_.push_back(p);
    for (auto& [a, fn, b, sp] : raw) {
      for (const auto& x : {a, b})
        if (!u.has_label(x)) throw SyntaxError(ErrorCode::UnresolvedLabel, sp, "unknown label " + x);
      Label target = b;
      if (!fn.empty()) {
        const UdrsComponent* c = u.find(b);
        std::optional<Label> r = c ? (fn == "scope" ? scope_of(*c) : res_of(*c)) : std::optional<Label>(b);
        if (!r) throw SyntaxError(ErrorCode::ParseError, sp, fn + "(" + b + ") is undefined");
        target = *r;
      }
      u.ord.pairs.emplace(a, target);
    }
    return u;
  }

  UdrsClause clause(Udrs& u, const Label& fixed) {
    UdrsClause cl;
    const Token& lt = peek();
    cl.label = ident("label");
    define(cl.label, lt.span, cl.label == fixed);
    if (accept("index")) cl.coindex = ident("index");
    expect("{");
    while (!accept("}")) {
      expect("node");
      UdrsComponent c = component(true);
      cl.components.push_back(c.label);
      u.components.emplace(c.label, std::move(c));
    }
    if (cl.components.empty()) throw SyntaxError(ErrorCode::ParseError, lt.span, "clause needs a lower bound");
    return cl;
  }

  void box(Udrs& u) {
    UdrsComponent c = component(false);
    u.components.emplace(c.label, std::move(c));
  }

  Label label_ref() {
    const Token& t = peek();
    Label l = ident("label");
    local_refs_.push_back({l, t.span});
    return l;
  }

  UdrsComponent component(bool node) {
    UdrsComponent c;
    const Token& lt = peek();
    c.label = ident("label");
    define(c.label, lt.span);
    while (node && !is("{")) {
      if (accept("dep")) {
        expect("(");
        const Token& dt = peek();
        Dependency d;
        d.target = ident("label");
        cross_.push_back({d.target, dt.span});
        expect(",");
        expect("{");
        if (!is("}")) {
          do {
            Term a = term();
            expect("->");
            d.pi.emplace_back(a, term());
          } while (accept(","));
        }
        expect("}");
        expect(")");
        c.dep = std::move(d);
      } else if (accept("potential")) {
        c.plural.potential = true;
        if (accept("(")) {
          while (!accept(")")) {
            const Token& kt = peek();
            auto k = plural_kind_from(ident("plural kind"));
            if (!k) throw SyntaxError(ErrorCode::ParseError, kt.span, "unknown plural kind " + kt.text);
            c.plural.options.insert(*k);
          }
        }
        if (c.plural.options.empty())
          c.plural.options = {PluralKind::Collective, PluralKind::Distributive};
      } else if (accept("plural")) {
        expect("(");
        const Token& kt = peek();
        auto k = plural_kind_from(ident("plural kind"));
        if (!k) throw SyntaxError(ErrorCode::ParseError, kt.span, "unknown plural kind " + kt.text);
        c.plural.status = k;
        if (accept(",")) c.plural.cum_partner = label_ref();
        expect(")");
      } else {
        fail({"{", "dep", "potential", "plural"});
      }
    }
    expect("{");
    expect("universe");
    expect(":");
    expect("[");
    while (!accept("]")) {
      c.universe.emplace_back(ident("referent"));
      accept(",");
    }
    expect("conds");
    expect(":");
    expect("[");
    while (!accept("]")) {
      c.conds.push_back(condition());
      accept(",");
    }
    if (accept("dist")) {
      expect(":");
      c.distinguished = distinguished();
    }
    expect("}");
    return c;
  }

  Condition condition() {
    if (is("sub") && is("(", 1)) {
      next();
      expect("(");
      Label k = label_ref();
      expect(")");
      return Subclause{k};
    }
    std::vector<std::pair<Label, SourceSpan>> refs;
    Condition c = standard_condition(&refs);
    for (auto& [l, sp] : refs) cross_.push_back({l, sp});
    return c;
  }

  Distinguished distinguished() {
    const Token& t = peek();
    std::string kind = ident("impl, quant, neg or cum");
    expect("(");
    Distinguished d;
    if (kind == "impl") {
      Impl i;
      i.res = label_ref();
      expect(",");
      i.scope = label_ref();
      d = i;
    } else if (kind == "neg") {
      d = Neg{label_ref()};
    } else if (kind == "quant") {
      Quant q;
      q.q = ident("quantifier");
      if (accept("(")) {
        q.q += "(" + ident("number") + ")";
        expect(")");
      }
      expect(",");
      q.var = Referent(ident("referent"));
      expect(",");
      q.res = label_ref();
      expect(",");
      q.scope = label_ref();
      d = q;
    } else if (kind == "cum") {
      CumDuplex cd;
      expect("(");
      cd.res1 = label_ref();
      expect(",");
      cd.res2 = label_ref();
      expect(")");
      expect(",");
      expect("(");
      cd.var1 = Referent(ident("referent"));
      expect(",");
      cd.var2 = Referent(ident("referent"));
      expect(")");
      expect(",");
      cd.scope = label_ref();
      d = cd;
    } else {
      throw SyntaxError(ErrorCode::ParseError, t.span, "unknown distinguished condition " + kind,
                        {"impl", "quant", "neg", "cum"});
    }
    expect(")");
    return d;
  }

  void resolve_cross_refs(const UdrsDatabase& db) {
    for (const auto& p : unresolved_)
      throw SyntaxError(ErrorCode::UnresolvedLabel, p.span, "unknown label " + p.label);
    for (const auto& p : cross_)
      if (!db.owner(p.label)) throw SyntaxError(ErrorCode::UnresolvedLabel, p.span, "unknown label " + p.label);
  }

  SourceMap* spans_;
  std::map<Label, SourceSpan> defined_;
  std::vector<Pending> local_refs_, unresolved_, cross_;
};

// -- printing ---------------------------------------------------------------

inline std::string print_term(const Term& t) { return t.str(); }

inline std::string print_condition(const Condition& c) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Atom>) {
          std::string s = x.negated ? "not " : "";
          s += x.pred;
          if (x.senses.size() == 1) s += "." + x.senses.front();
          s += "(";
          for (std::size_t i = 0; i < x.args.size(); ++i) s += (i ? ", " : "") + x.args[i].str();
          s += ")";
          if (x.senses.size() > 1) {
            s += " senses [";
            for (std::size_t i = 0; i < x.senses.size(); ++i) s += (i ? " " : "") + x.senses[i];
            s += "]";
          }
          return s;
        } else if constexpr (std::is_same_v<T, Eq>) {
          return x.lhs.str() + " = " + x.rhs.str();
        } else if constexpr (std::is_same_v<T, Sum>) {
          return x.target.name + " = Sigma " + x.var.name + " : " + x.licensing;
        } else {
          return "sub(" + x.clause + ")";
        }
      },
      c);
}

inline std::string print_distinguished(const Distinguished& d) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Neg>) return "neg(" + x.inner + ")";
        else if constexpr (std::is_same_v<T, Impl>) return "impl(" + x.res + ", " + x.scope + ")";
        else if constexpr (std::is_same_v<T, Quant>)
          return "quant(" + x.q + ", " + x.var.name + ", " + x.res + ", " + x.scope + ")";
        else
          return "cum((" + x.res1 + ", " + x.res2 + "), (" + x.var1.name + ", " + x.var2.name + "), " +
                 x.scope + ")";
      },
      d);
}

inline void print_body(std::ostringstream& os, const UdrsComponent& c, const std::string& ind) {
  os << ind << "  universe: [";
  for (std::size_t i = 0; i < c.universe.size(); ++i) os << (i ? " " : "") << c.universe[i].name;
  os << "]\n" << ind << "  conds: [";
  for (std::size_t i = 0; i < c.conds.size(); ++i) os << (i ? ", " : "") << print_condition(c.conds[i]);
  os << "]\n";
  if (c.distinguished) os << ind << "  dist: " << print_distinguished(*c.distinguished) << "\n";
}

inline void print_component(std::ostringstream& os, const UdrsComponent& c, const std::string& ind,
                            bool node) {
  os << ind << (node ? "node " : "box ") << c.label;
  if (c.dep) {
    os << " dep(" << c.dep->target << ", {";
    for (std::size_t i = 0; i < c.dep->pi.size(); ++i)
      os << (i ? ", " : "") << c.dep->pi[i].first.str() << " -> " << c.dep->pi[i].second.str();
    os << "})";
  }
  if (c.plural.potential) {
    os << " potential(";
    bool first = true;
    for (auto k : c.plural.options) {
      os << (first ? "" : " ") << plural_name(k);
      first = false;
    }
    os << ")";
  }
  if (c.plural.status) {
    os << " plural(" << plural_name(*c.plural.status);
    if (c.plural.cum_partner) os << ", " << *c.plural.cum_partner;
    os << ")";
  }
  os << " {\n";
  print_body(os, c, ind);
  os << ind << "}\n";
}

}  // namespace detail

/// Parses the `.udrs` format. Labels are resolved but validate() is not run.
inline UdrsDatabase parse_udrs(std::string_view text, SourceMap* spans = nullptr) {
  return detail::UdrsParser(text, spans).parse();
}

inline std::string print_udrs(const Udrs& u, bool goal = false) {
  std::ostringstream os;
  os << (goal ? "goal udrs " : "udrs ") << u.top << " {\n";
  std::set<Label> members;
  for (const auto& cl : u.clauses) {
    os << "  clause " << cl.label;
    if (cl.coindex) os << " index " << *cl.coindex;
    os << " {\n";
    for (const auto& l : cl.components) {
      members.insert(l);
      if (auto* c = u.find(l)) detail::print_component(os, *c, "    ", true);
    }
    os << "  }\n";
  }
  for (const auto& [l, c] : u.components)
    if (!members.count(l)) detail::print_component(os, c, "  ", false);
  os << "  ord: [";
  bool first = true;
  for (const auto& [a, b] : u.ord.pairs) {
    os << (first ? "" : ", ") << a << " <= " << b;
    first = false;
  }
  os << "]\n}\n";
  return os.str();
}

/// Canonical text: lexicon, sentences in order, then the goal.
inline std::string print_udrs(const UdrsDatabase& db) {
  std::ostringstream os;
  if (!db.lexicon.empty()) {
    os << "lexicon {\n";
    for (const auto& e : db.lexicon) {
      os << "  " << e.pred << "." << e.sense << "(";
      for (std::size_t i = 0; i < e.params.size(); ++i) os << (i ? ", " : "") << e.params[i];
      os << ") => [";
      for (std::size_t i = 0; i < e.conds.size(); ++i) os << (i ? ", " : "") << detail::print_condition(e.conds[i]);
      os << "]\n";
    }
    os << "}\n";
  }
  for (std::size_t i = 0; i < db.sentences.size(); ++i) os << (i || !db.lexicon.empty() ? "\n" : "") << print_udrs(db.sentences[i]);
  if (db.goal) os << "\n" << print_udrs(*db.goal, true);
  return os.str();
}

// ---------------------------------------------------------------------------
// Models

namespace detail {

class ModelParser : public ParserBase {
 public:
  using ParserBase::ParserBase;

  Model parse() {
    Model m;
    const Token& first = peek();
    expect("atoms");
    expect(":");
    expect("[");
    std::set<std::string> seen;
    while (!accept("]")) {
      const Token& t = peek();
      std::string a = ident("atom");
      if (!seen.insert(a).second) throw SyntaxError(ErrorCode::ParseError, t.span, "duplicate atom " + a);
      m.atoms.push_back(a);
      accept(",");
    }
    if (m.atoms.empty()) throw SyntaxError(ErrorCode::ParseError, first.span, "a model needs at least one atom");
    if (m.atoms.size() > kMaxAtoms) throw SyntaxError(ErrorCode::ParseError, first.span, "too many atoms");
    while (!at_end()) {
      std::string pred = ident("predicate");
      std::string sense;
      if (accept(".")) sense = ident("sense");
      expect(":");
      expect("[");
      auto& set = m.ext[{pred, sense}];
      std::optional<std::size_t> arity;
      while (!accept("]")) {
        const Token& t = peek();
        std::vector<Entity> tuple;
        if (accept("(")) {
          if (!is(")")) {
            do tuple.push_back(entity(m));
            while (accept(","));
          }
          expect(")");
        } else {
          tuple.push_back(entity(m));
        }
        if (arity && *arity != tuple.size())
          throw SyntaxError(ErrorCode::ParseError, t.span, "tuple arity differs within " + pred);
        arity = tuple.size();
        set.insert(std::move(tuple));
        accept(",");
      }
    }
    return m;
  }

 private:
  Entity entity(const Model& m) {
    auto one = [&]() {
      const Token& t = peek();
      std::string a = ident("atom");
      try {
        return m.atom(a);
      } catch (const Error&) {
        throw SyntaxError(ErrorCode::UnknownSort, t.span, "unknown atom " + a);
      }
    };
    if (accept("{")) {
      Entity e = 0;
      do e |= one();
      while (accept(","));
      expect("}");
      return e;
    }
    return one();
  }
};

}  // namespace detail

inline Model parse_model(std::string_view text) { return detail::ModelParser(text).parse(); }

inline std::string print_model(const Model& m) {
  std::ostringstream os;
  os << "atoms: [";
  for (std::size_t i = 0; i < m.atoms.size(); ++i) os << (i ? " " : "") << m.atoms[i];
  os << "]\n";
  for (const auto& [key, tuples] : m.ext) {
    os << key.first;
    if (!key.second.empty()) os << "." << key.second;
    os << ": [";
    bool first = true;
    for (const auto& t : tuples) {
      os << (first ? "" : " ") << "(";
      for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << m.name(t[i]);
      os << ")";
      first = false;
    }
    os << "]\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Linear box notation for DRSs:
//   [x y | human(x), ~[ | pay(x)], [x | h(x)] => [ | ...], [x | ..] <most x> [ | ..],
//    cum([x | ..], [y | ..], x, y, [ | ..]), Z = Sigma z : [ .. ]]

namespace detail {

class DrsParser : public ParserBase {
 public:
  using ParserBase::ParserBase;

  Drs parse_all() {
    Drs d = drs();
    if (!at_end()) fail({"end of input"});
    return d;
  }

 private:
  Drs drs() {
    Drs d;
    expect("[");
    while (!is("|")) {
      d.universe.emplace_back(ident("referent"));
      accept(",");
    }
    expect("|");
    if (!is("]")) {
      do d.conds.push_back(cond());
      while (accept(","));
    }
    expect("]");
    return d;
  }

  DCond cond() {
    if (accept("~")) return DNeg{Box(drs())};
    if (is("cum") && is("(", 1)) {
      next();
      expect("(");
      DCum c;
      c.res1 = Box(drs());
      expect(",");
      c.res2 = Box(drs());
      expect(",");
      c.var1 = Referent(ident("referent"));
      expect(",");
      c.var2 = Referent(ident("referent"));
      expect(",");
      c.scope = Box(drs());
      expect(")");
      return c;
    }
    if (is("[")) {
      Drs res = drs();
      if (accept("=>")) return DImpl{Box(std::move(res)), Box(drs())};
      expect("<");
      DQuant q;
      q.q = ident("quantifier");
      if (accept("(")) {
        q.q += "(" + ident("number") + ")";
        expect(")");
      }
      q.var = Referent(ident("referent"));
      expect(">");
      q.res = Box(std::move(res));
      q.scope = Box(drs());
      return q;
    }
    if (is_ident() && is("=", 1) && is("Sigma", 2)) {
      Referent target(next().text);
      next();
      next();
      Referent var(ident("referent"));
      expect(":");
      return DSum{target, var, Box(drs())};
    }
    Condition c = standard_condition(nullptr);
    if (auto* a = std::get_if<Atom>(&c)) {
      if (a->senses.size() > 1) throw SyntaxError(ErrorCode::ParseError, peek().span, "DRS atoms carry one sense");
      return *a;
    }
    if (auto* e = std::get_if<Eq>(&c)) return *e;
    fail({"condition"});
  }
};

inline void print_drs_to(std::ostringstream& os, const Drs& d);

inline void print_dcond(std::ostringstream& os, const DCond& c) {
  if (auto* a = std::get_if<Atom>(&c)) {
    os << print_condition(*a);
  } else if (auto* e = std::get_if<Eq>(&c)) {
    os << print_condition(*e);
  } else if (auto* n = std::get_if<DNeg>(&c)) {
    os << "~";
    print_drs_to(os, *n->inner);
  } else if (auto* i = std::get_if<DImpl>(&c)) {
    print_drs_to(os, *i->res);
    os << " => ";
    print_drs_to(os, *i->scope);
  } else if (auto* q = std::get_if<DQuant>(&c)) {
    print_drs_to(os, *q->res);
    os << " <" << q->q << " " << q->var.name << "> ";
    print_drs_to(os, *q->scope);
  } else if (auto* cd = std::get_if<DCum>(&c)) {
    os << "cum(";
    print_drs_to(os, *cd->res1);
    os << ", ";
    print_drs_to(os, *cd->res2);
    os << ", " << cd->var1.name << ", " << cd->var2.name << ", ";
    print_drs_to(os, *cd->scope);
    os << ")";
  } else if (auto* s = std::get_if<DSum>(&c)) {
    os << s->target.name << " = Sigma " << s->var.name << " : ";
    print_drs_to(os, *s->body);
  }
}

inline void print_drs_to(std::ostringstream& os, const Drs& d) {
  os << "[";
  for (std::size_t i = 0; i < d.universe.size(); ++i) os << (i ? " " : "") << d.universe[i].name;
  os << (d.universe.empty() ? "| " : " | ");
  for (std::size_t i = 0; i < d.conds.size(); ++i) {
    if (i) os << ", ";
    print_dcond(os, d.conds[i]);
  }
  os << "]";
}

inline void logic_to(std::ostringstream& os, const Drs& d);

inline void logic_box_body(std::ostringstream& os, const Drs& d) {
  if (d.conds.empty()) {
    os << "true";
    return;
  }
  for (std::size_t i = 0; i < d.conds.size(); ++i) {
    if (i) os << " & ";
    const auto& c = d.conds[i];
    if (auto* a = std::get_if<Atom>(&c)) {
      os << print_condition(*a);
    } else if (auto* e = std::get_if<Eq>(&c)) {
      os << print_condition(*e);
    } else if (auto* n = std::get_if<DNeg>(&c)) {
      os << "~";
      logic_to(os, *n->inner);
    } else if (auto* im = std::get_if<DImpl>(&c)) {
      os << "forall";
      for (const auto& r : im->res->universe) os << " " << r.name;
      os << " (";
      logic_box_body(os, *im->res);
      os << " -> ";
      logic_to(os, *im->scope);
      os << ")";
    } else if (auto* q = std::get_if<DQuant>(&c)) {
      os << q->q << " " << q->var.name << " (";
      logic_to(os, *q->res);
      os << ") (";
      logic_to(os, *q->scope);
      os << ")";
    } else if (auto* cd = std::get_if<DCum>(&c)) {
      os << "cum " << cd->var1.name << " " << cd->var2.name << " (";
      logic_to(os, *cd->res1);
      os << ", ";
      logic_to(os, *cd->res2);
      os << ") (";
      logic_to(os, *cd->scope);
      os << ")";
    } else if (auto* s = std::get_if<DSum>(&c)) {
      os << s->target.name << " = sum " << s->var.name << " (";
      logic_to(os, *s->body);
      os << ")";
    }
  }
}

inline void logic_to(std::ostringstream& os, const Drs& d) {
  if (d.universe.empty()) {
    if (d.conds.size() > 1) os << "(";
    logic_box_body(os, d);
    if (d.conds.size() > 1) os << ")";
    return;
  }
  os << "exists";
  for (const auto& r : d.universe) os << " " << r.name;
  os << " (";
  logic_box_body(os, d);
  os << ")";
}

}  // namespace detail

inline Drs parse_drs(std::string_view text) { return detail::DrsParser(text).parse_all(); }

inline std::string print_drs(const Drs& d) {
  std::ostringstream os;
  detail::print_drs_to(os, d);
  return os.str();
}

/// One-line first-order notation: exists X (lawyer(X) & forall x (in(x, X) -> ...)).
inline std::string to_logic(const Drs& d) {
  std::ostringstream os;
  detail::logic_to(os, d);
  return os.str();
}

}  // namespace udrs

#include "dinat/textio.hpp"

#include <cctype>
#include <set>

namespace dinat {

namespace {

struct Token {
  enum Kind { Ident, Number, Sym, Eof } kind;
  std::string text;
  int line, col;
};

std::string describe(const Token& t) {
  if (t.kind == Token::Eof) return "end of input";
  return "'" + t.text + "'";
}

std::vector<Token> lex(const std::string& s, const std::string& src) {
  static const std::vector<std::string> syms = {":=", "=>", "|-", "->", "^op", "(", ")", "[", "]", "{", "}",
                                                ",",  ":",  ".",  "~",  "&",   "<", ">", "*", "+", "-", "="};
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto adv = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == ';') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      auto word = [&](size_t k) {
        return k < s.size() && (std::isalnum(static_cast<unsigned char>(s[k])) || s[k] == '_');
      };
      // inner hyphens are part of the name: comp-assoc
      while (word(j) || (j < s.size() && s[j] == '-' && word(j + 1))) ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), line, col});
      adv(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Number, s.substr(i, j - i), line, col});
      adv(j - i);
      continue;
    }
    bool found = false;
    for (auto& sym : syms)
      if (s.compare(i, sym.size(), sym) == 0) {
        out.push_back({Token::Sym, sym, line, col});
        adv(sym.size());
        found = true;
        break;
      }
    if (!found) {
      Error e(ErrorKind::Parse, src, std::to_string(line) + ":" + std::to_string(col) + ": unexpected character '" +
                                         std::string(1, c) + "'");
      e.line = line;
      e.col = col;
      throw e;
    }
  }
  out.push_back({Token::Eof, "", line, col});
  return out;
}

const std::set<std::string> kFormKeywords = {"top", "hom", "end", "coend"};

struct Parser {
  std::vector<Token> toks;
  std::string src;
  size_t pos = 0;

  const Token& peek(size_t k = 0) const { return toks[std::min(pos + k, toks.size() - 1)]; }
  bool is(const std::string& sym) const { return peek().kind == Token::Sym && peek().text == sym; }
  bool is_kw(const std::string& kw) const { return peek().kind == Token::Ident && peek().text == kw; }

  [[noreturn]] void fail(const std::vector<std::string>& expected) const {
    const Token& t = peek();
    std::string exp;
    for (size_t i = 0; i < expected.size(); ++i)
      exp += (i == 0 ? "" : i + 1 == expected.size() ? " or " : ", ") + expected[i];
    Error e(ErrorKind::Parse, src,
            std::to_string(t.line) + ":" + std::to_string(t.col) + ": expected " + exp + ", found " + describe(t));
    e.line = t.line;
    e.col = t.col;
    throw e;
  }

  void expect(const std::string& sym) {
    if (!is(sym)) fail({"'" + sym + "'"});
    ++pos;
  }
  void expect_kw(const std::string& kw) {
    if (!is_kw(kw)) fail({"'" + kw + "'"});
    ++pos;
  }
  std::string ident(const std::string& what = "identifier") {
    if (peek().kind != Token::Ident) fail({what});
    return toks[pos++].text;
  }

  // ---- categories ----
  Cat cat() {
    Cat l = cat_postfix();
    if (is("*")) {
      ++pos;
      return cat_prod(l, cat());
    }
    return l;
  }
  Cat cat_postfix() {
    Cat c;
    if (is("(")) {
      ++pos;
      c = cat();
      expect(")");
    } else if (peek().kind == Token::Number && peek().text == "1") {
      ++pos;
      c = cat_unit();
    } else if (peek().kind == Token::Ident) {
      c = cat_base(toks[pos++].text);
    } else {
      fail({"category name", "'1'", "'('"});
    }
    while (is("^op")) {
      ++pos;
      c = cat_op(c);
    }
    return c;
  }

  // ---- terms ----
  Term term() {
    if (is("~")) {
      ++pos;
      return var(ident("variable"), Polarity::Neg);
    }
    if (is("<")) {
      ++pos;
      Term a = term();
      expect(",");
      Term b = term();
      expect(">");
      return pair(a, b);
    }
    if (peek().kind != Token::Ident) fail({"term"});
    std::string n = toks[pos++].text;
    if ((n == "fst" || n == "snd") && is("(")) {
      ++pos;
      Term t = term();
      expect(")");
      return proj(n == "fst" ? 1 : 2, t);
    }
    if (is("(")) {
      ++pos;
      std::vector<Term> args;
      if (!is(")")) {
        args.push_back(term());
        while (is(",")) {
          ++pos;
          args.push_back(term());
        }
      }
      expect(")");
      if (args.empty()) fail({"functor argument"});
      return app(n, args);
    }
    return var(n);
  }

  // ---- formulas ----
  Form form() {
    if (is_kw("end") || is_kw("coend")) {
      bool e = toks[pos++].text == "end";
      std::string x = ident("bound variable");
      expect(":");
      Cat c = cat();
      expect(".");
      Form body = form();
      return e ? end_(x, c, body) : coend(x, c, body);
    }
    Form l = conj_form();
    if (is("=>")) {
      ++pos;
      return imp(l, form());
    }
    return l;
  }
  Form conj_form() {
    Form l = atomic_form();
    if (is("&")) {
      ++pos;
      if (is_kw("end") || is_kw("coend")) return conj(l, form());
      return conj(l, conj_form());
    }
    return l;
  }
  Form atomic_form() {
    if (is("(")) {
      ++pos;
      Form f = form();
      expect(")");
      return f;
    }
    if (is_kw("top")) {
      ++pos;
      return top();
    }
    if (is_kw("hom")) {
      ++pos;
      expect("[");
      Cat c = cat();
      expect("]");
      expect("(");
      Term s = term();
      expect(",");
      Term t = term();
      expect(")");
      return hom(c, s, t);
    }
    if (peek().kind == Token::Ident) {
      std::string n = toks[pos++].text;
      expect("(");
      std::vector<Term> args;
      if (!is(")")) {
        args.push_back(term());
        while (is(",")) {
          ++pos;
          args.push_back(term());
        }
      }
      expect(")");
      return atom(n, args);
    }
    fail({"formula"});
  }

  // ---- sequents ----
  Sequent sequent() {
    Sequent s;
    expect("[");
    if (!is("]")) {
      for (;;) {
        std::string x = ident("context variable");
        expect(":");
        s.ctx.push_back({x, cat()});
        if (!is(",")) break;
        ++pos;
      }
    }
    expect("]");
    if (!is("|-")) {
      for (;;) {
        std::string l = ident("hypothesis label");
        expect(":");
        s.hyps.push_back({l, form()});
        if (!is(",")) break;
        ++pos;
      }
    }
    if (!is("|-")) fail({"','", "'|-'"});
    ++pos;
    s.goal = form();
    return s;
  }

  // ---- derivations ----
  Deriv node() {
    expect("(");
    if (peek().kind != Token::Ident) fail({"rule name"});
    auto r = rule_from_name(peek().text);
    if (!r) fail({"rule name"});
    ++pos;
    std::vector<std::string> names;
    while (peek().kind == Token::Ident) names.push_back(toks[pos++].text);
    Subst sub;
    if (is("{")) {
      ++pos;
      for (;;) {
        std::string v = ident("variable");
        expect(":=");
        sub.push_back({v, term()});
        if (!is(",")) break;
        ++pos;
      }
      expect("}");
    }
    std::vector<Deriv> kids;
    while (is("(")) kids.push_back(node());
    if (!is(":")) fail({"'('", "':'"});
    ++pos;
    Sequent s = sequent();
    expect(")");
    return make_deriv(*r, names, kids, s, sub);
  }

  Slot slot() {
    Polarity p;
    if (is("+"))
      p = Polarity::Pos;
    else if (is("-"))
      p = Polarity::Neg;
    else
      fail({"'+'", "'-'"});
    ++pos;
    return {cat(), p};
  }

  DerivationFile file() {
    DerivationFile f;
    std::set<std::string> names;
    auto fresh = [&](const std::string& n, const Token& at) {
      if (!names.insert(n).second) {
        Error e(ErrorKind::Parse, src,
                std::to_string(at.line) + ":" + std::to_string(at.col) + ": duplicate name " + n);
        e.line = at.line;
        e.col = at.col;
        throw e;
      }
    };
    while (peek().kind != Token::Eof) {
      const Token at = peek();
      if (is_kw("category")) {
        ++pos;
        std::string n = ident("category name");
        fresh("category " + n, at);
        f.sig.categories.push_back(n);
      } else if (is_kw("functor")) {
        ++pos;
        std::string n = ident("functor name");
        fresh("functor " + n, at);
        expect(":");
        Cat d = cat();
        expect("->");
        f.sig.functors[n] = {normalize(d), normalize(cat())};
      } else if (is_kw("atom")) {
        ++pos;
        std::string n = ident("atom name");
        fresh("atom " + n, at);
        expect("(");
        AtomSig a;
        if (!is(")")) {
          a.slots.push_back(slot());
          while (is(",")) {
            ++pos;
            a.slots.push_back(slot());
          }
        }
        expect(")");
        for (auto& s : a.slots) s.cat = normalize(s.cat);
        f.sig.atoms[n] = a;
      } else if (is_kw("deriv")) {
        ++pos;
        std::string n = ident("derivation name");
        fresh(n, at);
        expect("=");
        f.derivs.push_back({n, node()});
      } else if (is_kw("obligation")) {
        ++pos;
        EqJudgement j;
        j.name = ident("obligation name");
        fresh(j.name, at);
        expect(":");
        j.lhs = node();
        expect("=");
        j.rhs = node();
        expect_kw("by");
        if (is_kw("jeq")) {
          ++pos;
          j.strategy = EqStrategy::JEq;
          j.label = ident("hypothesis label");
        } else if (is_kw("direct")) {
          ++pos;
          j.strategy = EqStrategy::Direct;
        } else {
          fail({"'jeq'", "'direct'"});
        }
        f.obligations.push_back(j);
      } else if (is_kw("reject")) {
        ++pos;
        Rejection r;
        r.name = ident("derivation name");
        if (peek().kind != Token::Ident || !kind_from_name(peek().text, r.kind)) fail({"error class"});
        ++pos;
        f.rejects.push_back(r);
      } else if (is_kw("iso")) {
        ++pos;
        IsoPair p;
        p.fwd = ident("derivation name");
        p.inv = ident("derivation name");
        f.isos.push_back(p);
      } else {
        fail({"'category'", "'functor'", "'atom'", "'deriv'", "'obligation'", "'reject'", "'iso'"});
      }
    }
    return f;
  }

  void done() {
    if (peek().kind != Token::Eof) fail({"end of input"});
  }
};

std::string subst_str(const Subst& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + s[i].first + " := " + to_string(s[i].second);
  return out + "}";
}

std::string slot_str(const Slot& s) { return std::string(pol_sign(s.pol)) + to_string(s.cat); }

}  // namespace

Defs DerivationFile::defs() const {
  Defs d;
  for (auto& n : derivs) d[n.name] = n.deriv;
  return d;
}

const Deriv* DerivationFile::find(const std::string& name) const {
  for (auto& n : derivs)
    if (n.name == name) return &n.deriv;
  return nullptr;
}

DerivationFile parse_derivation(const std::string& text, const std::string& source) {
  Parser p{lex(text, source), source};
  return p.file();
}

Sequent parse_sequent(const std::string& text) {
  Parser p{lex(text, ""), ""};
  Sequent s = p.sequent();
  p.done();
  return s;
}

Form parse_formula(const std::string& text) {
  Parser p{lex(text, ""), ""};
  Form f = p.form();
  p.done();
  return f;
}

Cat parse_cat(const std::string& text) {
  Parser p{lex(text, ""), ""};
  Cat c = p.cat();
  p.done();
  return c;
}

std::string print_deriv(const Deriv& d, int indent) {
  std::string s = "(" + std::string(rule_name(d->rule));
  for (auto& n : d->names) s += " " + n;
  if (!d->subst.empty()) s += " " + subst_str(d->subst);
  if (d->kids.empty()) return s + " : " + to_string(d->concl) + ")";
  std::string pad(indent + 2, ' ');
  for (auto& k : d->kids) s += "\n" + pad + print_deriv(k, indent + 2);
  return s + "\n" + pad + ": " + to_string(d->concl) + ")";
}

std::string print_file(const DerivationFile& f) {
  std::string s;
  for (auto& c : f.sig.categories) s += "category " + c + "\n";
  for (auto& [n, fs] : f.sig.functors) s += "functor " + n + " : " + to_string(fs.dom) + " -> " + to_string(fs.cod) + "\n";
  for (auto& [n, a] : f.sig.atoms) {
    s += "atom " + n + "(";
    for (size_t i = 0; i < a.slots.size(); ++i) s += (i ? ", " : "") + slot_str(a.slots[i]);
    s += ")\n";
  }
  for (auto& d : f.derivs) s += "\nderiv " + d.name + " =\n  " + print_deriv(d.deriv, 2) + "\n";
  for (auto& o : f.obligations) {
    s += "\nobligation " + o.name + " :\n  " + print_deriv(o.lhs, 2) + "\n  =\n  " + print_deriv(o.rhs, 2) + "\n  by ";
    s += o.strategy == EqStrategy::JEq ? "jeq " + o.label : std::string("direct");
    s += "\n";
  }
  if (!f.rejects.empty() || !f.isos.empty()) s += "\n";
  for (auto& r : f.rejects) s += "reject " + r.name + " " + kind_name(r.kind) + "\n";
  for (auto& i : f.isos) s += "iso " + i.fwd + " " + i.inv + "\n";
  return s;
}

}  // namespace dinat

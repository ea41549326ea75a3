#include "text.hpp"

#include <cctype>

namespace cidk {

namespace {

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

bool isIdentifier(std::string_view s) {
  if (s.empty() || !identStart(s[0])) return false;
  for (char c : s)
    if (!identChar(c)) return false;
  return true;
}

Reader::Reader(std::string_view text, int line, int column)
    : text_(text), line0_(line), column0_(column) {}

void Reader::skipSpace() {
  while (pos_ < text_.size()) {
    char c = text_[pos_];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos_;
    } else if (c == '#') {
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    } else {
      break;
    }
  }
}

bool Reader::atEnd() {
  skipSpace();
  return pos_ >= text_.size();
}

bool Reader::peek(std::string_view token) {
  skipSpace();
  if (text_.substr(pos_, token.size()) != token) return false;
  // Keyword tokens must not run into an identifier.
  if (identChar(token.back()) && pos_ + token.size() < text_.size() &&
      identChar(text_[pos_ + token.size()]))
    return false;
  return true;
}

bool Reader::accept(std::string_view token) {
  if (!peek(token)) return false;
  pos_ += token.size();
  return true;
}

void Reader::expect(std::string_view token) {
  if (!accept(token)) fail("expected '" + std::string(token) + "'");
}

bool Reader::peekIdent() {
  skipSpace();
  return pos_ < text_.size() && identStart(text_[pos_]);
}

std::string Reader::ident() {
  if (!peekIdent()) fail("expected identifier");
  std::size_t start = pos_;
  while (pos_ < text_.size() && identChar(text_[pos_])) ++pos_;
  return std::string(text_.substr(start, pos_ - start));
}

unsigned Reader::number() {
  skipSpace();
  if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
    fail("expected number");
  unsigned long value = 0;
  while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
    value = value * 10 + static_cast<unsigned>(text_[pos_] - '0');
    if (value > 100000) fail("number too large");
    ++pos_;
  }
  return static_cast<unsigned>(value);
}

std::string Reader::until(std::string_view stops) {
  skipSpace();
  std::size_t start = pos_;
  int depth = 0;
  while (pos_ < text_.size()) {
    char c = text_[pos_];
    if (depth == 0 && stops.find(c) != std::string_view::npos) break;
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') {
      if (depth == 0) break;
      --depth;
    }
    ++pos_;
  }
  std::size_t end = pos_;
  while (end > start && std::isspace(static_cast<unsigned char>(text_[end - 1]))) --end;
  return std::string(text_.substr(start, end - start));
}

void Reader::fail(const std::string& message) const {
  int line = line0_, column = column0_;
  for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
    if (text_[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + message);
}

Term Reader::term() {
  skipSpace();
  if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
    return Term::numeral(number());
  if (accept("+")) {
    expect("(");
    Term a = term();
    expect(",");
    Term b = term();
    expect(")");
    return Term::plus(a, b);
  }
  if (accept("*")) {
    expect("(");
    Term a = term();
    expect(",");
    Term b = term();
    expect(")");
    return Term::times(a, b);
  }
  std::string name = ident();
  if (name == "s" && accept("(")) {
    Term a = term();
    expect(")");
    return Term::succ(a);
  }
  return Term::var(name);
}

Formula Reader::formula(PredEnv& env) {
  if (accept("not")) return negate(formula(env));
  if (accept("or") || accept("and")) {
    bool isOr = text_.substr(pos_ - 2, 2) == "or";
    expect("(");
    std::vector<Formula> parts{formula(env)};
    while (accept(",")) parts.push_back(formula(env));
    expect(")");
    if (parts.size() < 2) fail(std::string(isOr ? "or" : "and") + " needs two operands");
    Formula acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;)
      acc = isOr ? Formula::disj(parts[i], acc) : Formula::conj(parts[i], acc);
    return acc;
  }
  if (accept("ex") || accept("all")) {
    bool isEx = text_[pos_ - 1] == 'x';
    std::string v = ident();
    expect(".");
    Formula body = formula(env);
    return isEx ? Formula::exists(v, body) : Formula::forall(v, body);
  }
  if (accept("(")) {
    Formula f = formula(env);
    expect(")");
    return f;
  }
  return literalOrAtom(env);
}

Formula Reader::literalOrAtom(PredEnv& env) {
  if (accept("=") || accept("<")) {
    bool isEq = text_[pos_ - 1] == '=';
    expect("(");
    Term a = term();
    expect(",");
    Term b = term();
    expect(")");
    return isEq ? Formula::eq(a, b) : Formula::lt(a, b);
  }
  if (accept("ind")) {
    expect("[");
    std::string name = ident();
    expect("]");
    expect("(");
    std::string setVar = ident();
    expect(",");
    std::string indVar = ident();
    expect(",");
    std::size_t bodyPos = pos_;
    Formula body = formula(env);
    expect(")");
    IndPredPtr pred;
    try {
      pred = mkIndPred(body, setVar, indVar, name);
    } catch (const Error& e) {
      pos_ = bodyPos;
      fail(e.what());
    }
    env[name] = pred;
    expect("(");
    Term t = term();
    expect(")");
    return Formula::atom(PredSymbol::ind(pred), t);
  }
  if (!peekIdent()) fail("expected formula");
  std::string name = ident();
  expect("(");
  Term t = term();
  expect(")");
  auto it = env.find(name);
  if (it != env.end()) return Formula::atom(PredSymbol::ind(it->second), t);
  return Formula::atom(PredSymbol::setVar(name), t);
}

Term parseTerm(std::string_view text) {
  Reader r(text);
  Term t = r.term();
  if (!r.atEnd()) r.fail("trailing input");
  return t;
}

Formula parseFormula(std::string_view text, PredEnv& env) {
  Reader r(text);
  Formula f = r.formula(env);
  if (!r.atEnd()) r.fail("trailing input");
  return f;
}

Formula parseFormula(std::string_view text, const PredEnv& env) {
  PredEnv copy = env;
  return parseFormula(text, copy);
}

std::string printTerm(const Term& t) {
  unsigned n = 0;
  const Term* cur = &t;
  while (cur->kind() == TermKind::Succ) {
    ++n;
    cur = &cur->arg(0);
  }
  if (cur->kind() == TermKind::Zero) return std::to_string(n);
  switch (t.kind()) {
    case TermKind::Var: return t.name();
    case TermKind::Zero: return "0";
    case TermKind::Succ: return "s(" + printTerm(t.arg(0)) + ")";
    case TermKind::Plus: return "+(" + printTerm(t.arg(0)) + ", " + printTerm(t.arg(1)) + ")";
    case TermKind::Times: return "*(" + printTerm(t.arg(0)) + ", " + printTerm(t.arg(1)) + ")";
  }
  return {};
}

std::string printIndBody(const IndPred& pred, const PredNames& names) {
  return "(" + pred.setVar() + ", " + pred.indVar() + ", " + printFormula(pred.body(), names) +
         ")";
}

std::string printFormula(const Formula& f, const PredNames& names) {
  std::string neg = f.negated() ? "not " : "";
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const auto& p = f.pred();
      std::string head;
      if (p.isSetVar()) {
        head = p.setVarName();
      } else {
        auto it = names.find(p.indPred()->key());
        head = it != names.end() ? it->second
                                 : "ind[" + p.displayName() + "]" +
                                       printIndBody(*p.indPred(), names);
      }
      return neg + head + "(" + printTerm(f.term(0)) + ")";
    }
    case FormulaKind::Eq:
      return neg + "=(" + printTerm(f.term(0)) + ", " + printTerm(f.term(1)) + ")";
    case FormulaKind::Lt:
      return neg + "<(" + printTerm(f.term(0)) + ", " + printTerm(f.term(1)) + ")";
    case FormulaKind::Or:
      return "or(" + printFormula(f.child(0), names) + ", " + printFormula(f.child(1), names) +
             ")";
    case FormulaKind::And:
      return "and(" + printFormula(f.child(0), names) + ", " +
             printFormula(f.child(1), names) + ")";
    case FormulaKind::Exists:
      return "ex " + f.var() + ". " + printFormula(f.child(0), names);
    case FormulaKind::Forall:
      return "all " + f.var() + ". " + printFormula(f.child(0), names);
  }
  return {};
}

}  // namespace cidk

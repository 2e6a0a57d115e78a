#include "rtb/angle.hpp"

#include <cctype>
#include <sstream>

namespace rtb {

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

struct AngleSpec::Node {
  enum class Op { Num, Pi, Add, Sub, Mul, Div, Neg, Atan, Sqrt } op;
  mpq_class num;                  // for Num (decimals stored exactly)
  bool was_decimal = false;       // source form of a Num
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = AngleSpec::Node;
using NodePtr = std::shared_ptr<const Node>;
using Op = Node::Op;

NodePtr mk(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected character", pos_);
    return e;
  }

 private:
  NodePtr expr() {
    NodePtr l = term();
    for (;;) {
      skip_ws();
      if (peek() == '+') {
        ++pos_;
        l = mk(Op::Add, l, term());
      } else if (peek() == '-') {
        ++pos_;
        l = mk(Op::Sub, l, term());
      } else {
        return l;
      }
    }
  }
  NodePtr term() {
    NodePtr l = factor();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        l = mk(Op::Mul, l, factor());
      } else if (peek() == '/') {
        ++pos_;
        l = mk(Op::Div, l, factor());
      } else {
        return l;
      }
    }
  }
  NodePtr factor() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return mk(Op::Neg, factor());
    }
    return primary();
  }
  NodePtr primary() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             std::isalpha(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "pi") return mk(Op::Pi);
      if (id == "atan" || id == "sqrt") {
        skip_ws();
        if (peek() != '(') throw ParseError("expected '(' after " + id, pos_);
        ++pos_;
        NodePtr e = expr();
        skip_ws();
        if (peek() != ')') throw ParseError("expected ')'", pos_);
        ++pos_;
        return mk(id == "atan" ? Op::Atan : Op::Sqrt, e);
      }
      throw ParseError("unknown identifier '" + id + "'", start);
    }
    throw ParseError(pos_ >= s_.size() ? "unexpected end of input"
                                       : "unexpected character",
                     pos_);
  }
  NodePtr number() {
    size_t start = pos_;
    bool decimal = false;
    while (pos_ < s_.size() &&
           std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      decimal = true;
      ++pos_;
      while (pos_ < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
    }
    std::string t = s_.substr(start, pos_ - start);
    if (t.empty() || t == ".") throw ParseError("malformed number", start);
    auto n = std::make_shared<Node>();
    n->op = Op::Num;
    n->was_decimal = decimal;
    if (!decimal) {
      n->num = mpq_class(t, 10);
    } else {
      size_t dot = t.find('.');
      std::string digits = t.substr(0, dot) + t.substr(dot + 1);
      size_t frac = t.size() - dot - 1;
      mpz_class den = 1;
      for (size_t i = 0; i < frac; ++i) den *= 10;
      if (digits.empty()) digits = "0";
      n->num = mpq_class(mpz_class(digits, 10), den);
      n->num.canonicalize();
    }
    return n;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  const std::string& s_;
  size_t pos_ = 0;
};

// Symbolic value a + b*pi with rational a, b, when representable.
struct Sym {
  bool ok = false;
  mpq_class a = 0, b = 0;
};

Sym symbolic(const NodePtr& n) {
  Sym r;
  switch (n->op) {
    case Op::Num:
      r.ok = true;
      r.a = n->num;
      return r;
    case Op::Pi:
      r.ok = true;
      r.b = 1;
      return r;
    case Op::Neg: {
      Sym x = symbolic(n->a);
      if (x.ok) {
        r.ok = true;
        r.a = -x.a;
        r.b = -x.b;
      }
      return r;
    }
    case Op::Add:
    case Op::Sub: {
      Sym x = symbolic(n->a), y = symbolic(n->b);
      if (x.ok && y.ok) {
        r.ok = true;
        if (n->op == Op::Add) {
          r.a = x.a + y.a;
          r.b = x.b + y.b;
        } else {
          r.a = x.a - y.a;
          r.b = x.b - y.b;
        }
      }
      return r;
    }
    case Op::Mul: {
      Sym x = symbolic(n->a), y = symbolic(n->b);
      if (x.ok && y.ok) {
        if (y.b == 0) {
          r.ok = true;
          r.a = x.a * y.a;
          r.b = x.b * y.a;
        } else if (x.b == 0) {
          r.ok = true;
          r.a = y.a * x.a;
          r.b = y.b * x.a;
        }
      }
      return r;
    }
    case Op::Div: {
      Sym x = symbolic(n->a), y = symbolic(n->b);
      if (x.ok && y.ok && y.b == 0 && y.a != 0) {
        r.ok = true;
        r.a = x.a / y.a;
        r.b = x.b / y.a;
      }
      return r;
    }
    default:
      return r;  // atan / sqrt: not symbolic
  }
}

bool contains_decimal(const NodePtr& n) {
  if (!n) return false;
  if (n->op == Op::Num && n->was_decimal) return true;
  return contains_decimal(n->a) || contains_decimal(n->b);
}

Iv eval_node(const NodePtr& n, mpfr_prec_t prec) {
  switch (n->op) {
    case Op::Num:
      return Iv::from_mpq(n->num, prec);
    case Op::Pi:
      return Iv::pi(prec);
    case Op::Neg:
      return -eval_node(n->a, prec);
    case Op::Add:
      return eval_node(n->a, prec) + eval_node(n->b, prec);
    case Op::Sub:
      return eval_node(n->a, prec) - eval_node(n->b, prec);
    case Op::Mul:
      return eval_node(n->a, prec) * eval_node(n->b, prec);
    case Op::Div:
      return eval_node(n->a, prec) / eval_node(n->b, prec);
    case Op::Atan:
      return atan(eval_node(n->a, prec));
    case Op::Sqrt:
      return sqrt(eval_node(n->a, prec));
  }
  throw std::logic_error("unreachable");
}

std::string strip_spaces(const std::string& s) {
  std::string r;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) r += c;
  return r;
}

// Exact decimal string for rationals with denominator 2^a * 5^b, else "p/q".
std::string rational_canonical(const mpq_class& q) {
  mpz_class den = q.get_den();
  mpz_class d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return q.get_str();  // "p/q"
  int k = std::max(twos, fives);
  mpz_class scale = 1;
  for (int i = 0; i < k; ++i) scale *= 10;
  mpz_class scaled = q.get_num() * (scale / den);
  std::string digits = mpz_class(abs(scaled)).get_str();
  std::string sign = scaled < 0 ? "-" : "";
  if (k == 0) return sign + digits;
  while (static_cast<int>(digits.size()) <= k) digits = "0" + digits;
  std::string out =
      digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return sign + out;
}

std::string ratpi_canonical(const mpq_class& b) {
  // b * pi, b = p/q in lowest terms
  mpz_class p = b.get_num(), q = b.get_den();
  std::string head = (p == 1) ? "pi" : (p == -1 ? "-pi" : p.get_str() + "*pi");
  if (q == 1) return head;
  return head + "/" + q.get_str();
}

}  // namespace

AngleSpec AngleSpec::parse(const std::string& text) {
  if (strip_spaces(text).empty()) throw ParseError("empty angle expression", 0);
  AngleSpec spec;
  spec.source_ = text;
  spec.root_ = Parser(text).parse();
  Sym s = symbolic(spec.root_);
  if (s.ok && s.a == 0 && s.b != 0) {
    spec.kind_ = Kind::RationalPi;
    mpz_class p = s.b.get_num(), q = s.b.get_den();
    if (!p.fits_slong_p() || !q.fits_slong_p())
      throw ParseError("pi-multiple too large", 0);
    spec.ratpi_ = std::make_pair(p.get_si(), q.get_si());
    spec.canonical_ = ratpi_canonical(s.b);
  } else if (s.ok && s.b == 0) {
    spec.kind_ = Kind::Decimal;
    spec.ratval_ = s.a;
    spec.canonical_ = rational_canonical(s.a);
  } else {
    spec.kind_ = Kind::Arithmetic;
    spec.canonical_ = strip_spaces(text);
  }
  (void)contains_decimal;  // kept for potential canonicalization refinements
  return spec;
}

Iv AngleSpec::eval(mpfr_prec_t prec) const { return eval_node(root_, prec); }

TriangleConfig make_triangle(const std::string& alpha_spec,
                             mpfr_prec_t precision_bits,
                             mpfr_prec_t max_precision_bits) {
  TriangleConfig cfg;
  cfg.alpha = AngleSpec::parse(alpha_spec);
  cfg.precision_bits = precision_bits;
  cfg.max_precision_bits = max_precision_bits;

  // Certified range checks against 0, pi/6, pi/4.
  if (auto pq = cfg.alpha.rational_pi()) {
    // exact: alpha / pi = p/q
    mpq_class r(pq->first, pq->second);
    if (r <= 0 || r >= mpq_class(1, 4))
      throw OutOfRange("alpha out of (0, pi/4): " + cfg.alpha.canonical());
    cfg.in_theorem_range = r > mpq_class(1, 6);
    cfg.field = std::make_shared<CycloField>(pq->first, pq->second);
    return cfg;
  }
  for (mpfr_prec_t prec = precision_bits;; prec *= 2) {
    Iv a = cfg.alpha.eval(prec);
    Iv quarter = Iv::pi(prec) * Iv::from_mpq(mpq_class(1, 4), prec);
    Iv sixth = Iv::pi(prec) * Iv::from_mpq(mpq_class(1, 6), prec);
    Iv zero(0L, prec);
    bool in_domain =
        certainly_less(zero, a) && certainly_less(a, quarter);
    bool out_domain =
        certainly_less(a, zero) || certainly_less(quarter, a) ||
        a.is_exact_zero();
    if (out_domain)
      throw OutOfRange("alpha out of (0, pi/4): " + cfg.alpha.canonical());
    if (in_domain) {
      if (certainly_less(sixth, a)) {
        cfg.in_theorem_range = true;
        return cfg;
      }
      if (certainly_less(a, sixth)) {
        cfg.in_theorem_range = false;
        return cfg;
      }
    }
    if (prec >= max_precision_bits)
      throw UndecidableRange(
          "alpha indistinguishable from a range boundary at max precision: " +
          cfg.alpha.canonical());
  }
}

}  // namespace rtb

#include "paramex/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_map>

namespace paramex {

namespace {

bool is_const_value(const ExprPtr& e, double v) {
    return e->kind == Expr::Kind::Constant && e->value.is_degenerate() && e->value.lo() == v;
}

std::string shortest_repr(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

ExprPtr make_constant(const Interval& value, std::string source) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Constant;
    e->value = value;
    e->source = std::move(source);
    return e;
}

ExprPtr make_variable(VarClass cls, int index) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Variable;
    e->var_class = cls;
    e->index = index;
    return e;
}

ExprPtr make_neg(ExprPtr a) {
    if (is_const_value(a, 0.0)) return a;
    if (a->kind == Expr::Kind::Constant && a->value.is_degenerate())
        return make_constant(-a->value);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Neg;
    e->a = std::move(a);
    return e;
}

ExprPtr make_add(ExprPtr a, ExprPtr b) {
    if (is_const_value(a, 0.0)) return b;
    if (is_const_value(b, 0.0)) return a;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Add;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

ExprPtr make_sub(ExprPtr a, ExprPtr b) {
    if (is_const_value(b, 0.0)) return a;
    if (is_const_value(a, 0.0)) return make_neg(std::move(b));
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Sub;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

ExprPtr make_mul(ExprPtr a, ExprPtr b) {
    if (is_const_value(a, 0.0) || is_const_value(b, 0.0)) return make_constant(Interval(0.0), "0");
    if (is_const_value(a, 1.0)) return b;
    if (is_const_value(b, 1.0)) return a;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Mul;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

ExprPtr make_div(ExprPtr a, ExprPtr b) {
    if (is_const_value(a, 0.0)) return a;
    if (is_const_value(b, 1.0)) return a;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Div;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

ExprPtr make_pow(ExprPtr a, int exponent) {
    if (exponent < 0) throw ParseError("power exponent must be nonnegative");
    if (exponent == 0) return make_constant(Interval(1.0), "1");
    if (exponent == 1) return a;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Pow;
    e->exponent = exponent;
    e->a = std::move(a);
    return e;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Semicolon, End };
    Type type = Type::End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_.type = Token::Type::End;
            tok_.text.clear();
            return;
        }
        char c = text_[pos_];
        auto single = [&](Token::Type t) {
            tok_.type = t;
            tok_.text = std::string(1, c);
            ++pos_;
            ++col_;
        };
        switch (c) {
            case '+': single(Token::Type::Plus); return;
            case '-': single(Token::Type::Minus); return;
            case '*': single(Token::Type::Star); return;
            case '/': single(Token::Type::Slash); return;
            case '^': single(Token::Type::Caret); return;
            case '(': single(Token::Type::LParen); return;
            case ')': single(Token::Type::RParen); return;
            case ';': single(Token::Type::Semicolon); return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
                ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                size_t mark = pos_;
                ++pos_;
                if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
                if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                        ++pos_;
                } else {
                    pos_ = mark;  // bare 'e' belongs to the next token
                }
            }
            tok_.type = Token::Type::Number;
            tok_.text = text_.substr(start, pos_ - start);
            col_ += int(pos_ - start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_'))
                ++pos_;
            tok_.type = Token::Type::Ident;
            tok_.text = text_.substr(start, pos_ - start);
            col_ += int(pos_ - start);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// Tight enclosure of a decimal literal.  Plain integers below 2^53 are exact;
// anything else is widened by one ulp around the correctly rounded value.
Interval literal_interval(const std::string& text, int line, int col) {
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError("malformed number '" + text + "'", line, col);
    bool plain_integer = text.find('.') == std::string::npos &&
                         text.find('e') == std::string::npos &&
                         text.find('E') == std::string::npos;
    if (plain_integer && std::fabs(v) < 9007199254740992.0) return Interval(v);
    return Interval(rnd::next_down(v), rnd::next_up(v));
}

std::optional<Interval> try_const_eval(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Constant: return e->value;
        case Expr::Kind::Variable: return std::nullopt;
        case Expr::Kind::Neg: {
            auto a = try_const_eval(e->a);
            if (!a) return std::nullopt;
            return -*a;
        }
        case Expr::Kind::Pow: {
            auto a = try_const_eval(e->a);
            if (!a) return std::nullopt;
            return pow_int(*a, e->exponent);
        }
        default: break;
    }
    auto a = try_const_eval(e->a);
    auto b = try_const_eval(e->b);
    if (!a || !b) return std::nullopt;
    switch (e->kind) {
        case Expr::Kind::Add: return *a + *b;
        case Expr::Kind::Sub: return *a - *b;
        case Expr::Kind::Mul: return *a * *b;
        case Expr::Kind::Div: return *a / *b;
        default: return std::nullopt;
    }
}

class Parser {
  public:
    Parser(const std::string& text, int n, int p) : lex_(text), n_(n), p_(p) {}

    ExprPtr parse_single() {
        ExprPtr e = parse_sum();
        expect(Token::Type::End, "end of expression");
        return e;
    }

    std::vector<ExprPtr> parse_list() {
        std::vector<ExprPtr> out;
        out.push_back(parse_sum());
        while (lex_.peek().type == Token::Type::Semicolon) {
            lex_.take();
            out.push_back(parse_sum());
        }
        expect(Token::Type::End, "end of expression list");
        return out;
    }

  private:
    ExprPtr parse_sum() {
        ExprPtr e = parse_product();
        while (true) {
            auto t = lex_.peek().type;
            if (t == Token::Type::Plus) {
                lex_.take();
                e = make_add(e, parse_product());
            } else if (t == Token::Type::Minus) {
                lex_.take();
                e = make_sub(e, parse_product());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_product() {
        ExprPtr e = parse_unary();
        while (true) {
            auto t = lex_.peek().type;
            if (t == Token::Type::Star) {
                lex_.take();
                e = make_mul(e, parse_unary());
            } else if (t == Token::Type::Slash) {
                lex_.take();
                e = make_div(e, parse_unary());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_unary() {
        if (lex_.peek().type == Token::Type::Minus) {
            lex_.take();
            return make_neg(parse_unary());
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (lex_.peek().type != Token::Type::Caret) return base;
        lex_.take();
        Token t = lex_.take();
        if (t.type != Token::Type::Number || t.text.find('.') != std::string::npos ||
            t.text.find('e') != std::string::npos || t.text.find('E') != std::string::npos)
            throw ParseError("power exponent must be a nonnegative integer literal", t.line, t.col);
        int k = 0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), k);
        if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
            throw ParseError("power exponent out of range", t.line, t.col);
        return make_pow(base, k);
    }

    ExprPtr parse_atom() {
        Token t = lex_.take();
        switch (t.type) {
            case Token::Type::Number:
                return make_constant(literal_interval(t.text, t.line, t.col), t.text);
            case Token::Type::LParen: {
                ExprPtr e = parse_sum();
                expect(Token::Type::RParen, "')'");
                return e;
            }
            case Token::Type::Ident: {
                if (t.text == "sqrt") return parse_sqrt(t);
                return parse_var(t);
            }
            default:
                throw ParseError("expected a number, variable or '('", t.line, t.col);
        }
    }

    ExprPtr parse_sqrt(const Token& name) {
        expect(Token::Type::LParen, "'(' after sqrt");
        ExprPtr inner = parse_sum();
        expect(Token::Type::RParen, "')'");
        auto value = try_const_eval(inner);
        if (!value)
            throw ParseError("sqrt argument must be a constant expression", name.line, name.col);
        if (value->lo() < 0.0)
            throw ParseError("sqrt argument must be nonnegative", name.line, name.col);
        return make_constant(sqrt(*value), "sqrt(" + to_string(inner) + ")");
    }

    ExprPtr parse_var(const Token& t) {
        char head = t.text[0];
        if ((head == 'x' || head == 's') && t.text.size() > 1) {
            int idx = 0;
            auto res = std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), idx);
            if (res.ec == std::errc() && res.ptr == t.text.data() + t.text.size() && idx >= 1) {
                int limit = head == 'x' ? n_ : p_;
                if (idx > limit)
                    throw ParseError("unknown variable '" + t.text + "' (declared " +
                                         (head == 'x' ? "n=" + std::to_string(n_)
                                                      : "p=" + std::to_string(p_)) +
                                         ")",
                                     t.line, t.col);
                return make_variable(head == 'x' ? VarClass::state : VarClass::param, idx - 1);
            }
        }
        throw ParseError("unknown identifier '" + t.text + "'", t.line, t.col);
    }

    void expect(Token::Type type, const char* what) {
        Token t = lex_.take();
        if (t.type != type) throw ParseError(std::string("expected ") + what, t.line, t.col);
    }

    Lexer lex_;
    int n_, p_;
};

}  // namespace

ExprPtr parse_expression(const std::string& text, int n, int p) {
    return Parser(text, n, p).parse_single();
}

std::vector<ExprPtr> parse_equations(const std::string& text, int n, int p) {
    return Parser(text, n, p).parse_list();
}

// ---------------------------------------------------------------------------
// Serialization / equality
// ---------------------------------------------------------------------------

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Constant: return a->value == b->value;
        case Expr::Kind::Variable: return a->var_class == b->var_class && a->index == b->index;
        case Expr::Kind::Neg: return structurally_equal(a->a, b->a);
        case Expr::Kind::Pow:
            return a->exponent == b->exponent && structurally_equal(a->a, b->a);
        default:
            return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
    }
}

std::string to_string(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Constant: {
            if (!e->source.empty()) return e->source;
            if (e->value.is_degenerate()) return shortest_repr(e->value.lo());
            // widened literal without source text: print the midpoint literal
            return shortest_repr(midpoint(e->value));
        }
        case Expr::Kind::Variable:
            return (e->var_class == VarClass::state ? "x" : "s") + std::to_string(e->index + 1);
        case Expr::Kind::Neg: return "-(" + to_string(e->a) + ")";
        case Expr::Kind::Add: return "(" + to_string(e->a) + " + " + to_string(e->b) + ")";
        case Expr::Kind::Sub: return "(" + to_string(e->a) + " - " + to_string(e->b) + ")";
        case Expr::Kind::Mul: return "(" + to_string(e->a) + " * " + to_string(e->b) + ")";
        case Expr::Kind::Div: return "(" + to_string(e->a) + " / " + to_string(e->b) + ")";
        case Expr::Kind::Pow:
            return "(" + to_string(e->a) + ")^" + std::to_string(e->exponent);
    }
    throw Error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

class BoxEvaluator {
  public:
    BoxEvaluator(const Box& x, const Box& s) : x_(x), s_(s) {}

    Interval eval(const ExprPtr& e) {
        auto it = memo_.find(e.get());
        if (it != memo_.end()) return it->second;
        Interval v = compute(e);
        memo_.emplace(e.get(), v);
        return v;
    }

  private:
    Interval compute(const ExprPtr& e) {
        switch (e->kind) {
            case Expr::Kind::Constant: return e->value;
            case Expr::Kind::Variable:
                return e->var_class == VarClass::state ? x_[e->index] : s_[e->index];
            case Expr::Kind::Neg: return -eval(e->a);
            case Expr::Kind::Add: return eval(e->a) + eval(e->b);
            case Expr::Kind::Sub: return eval(e->a) - eval(e->b);
            case Expr::Kind::Mul: return eval(e->a) * eval(e->b);
            case Expr::Kind::Div: return eval(e->a) / eval(e->b);
            case Expr::Kind::Pow: return pow_int(eval(e->a), e->exponent);
        }
        throw Error("unreachable expression kind");
    }

    const Box& x_;
    const Box& s_;
    std::unordered_map<const Expr*, Interval> memo_;
};

}  // namespace

Interval eval_box(const ExprPtr& e, const Box& x, const Box& s) {
    return BoxEvaluator(x, s).eval(e);
}

Interval eval_point(const ExprPtr& e, const RealVector& x, const RealVector& s) {
    return eval_box(e, Box(x), Box(s));
}

double eval_double(const ExprPtr& e, const RealVector& x, const RealVector& s) {
    switch (e->kind) {
        case Expr::Kind::Constant: return midpoint(e->value);
        case Expr::Kind::Variable:
            return e->var_class == VarClass::state ? x[e->index] : s[e->index];
        case Expr::Kind::Neg: return -eval_double(e->a, x, s);
        case Expr::Kind::Add: return eval_double(e->a, x, s) + eval_double(e->b, x, s);
        case Expr::Kind::Sub: return eval_double(e->a, x, s) - eval_double(e->b, x, s);
        case Expr::Kind::Mul: return eval_double(e->a, x, s) * eval_double(e->b, x, s);
        case Expr::Kind::Div: return eval_double(e->a, x, s) / eval_double(e->b, x, s);
        case Expr::Kind::Pow: return std::pow(eval_double(e->a, x, s), e->exponent);
    }
    throw Error("unreachable expression kind");
}

ExprPtr derivative(const ExprPtr& e, VarClass cls, int index) {
    switch (e->kind) {
        case Expr::Kind::Constant: return make_constant(Interval(0.0), "0");
        case Expr::Kind::Variable:
            return make_constant(
                Interval(e->var_class == cls && e->index == index ? 1.0 : 0.0));
        case Expr::Kind::Neg: return make_neg(derivative(e->a, cls, index));
        case Expr::Kind::Add:
            return make_add(derivative(e->a, cls, index), derivative(e->b, cls, index));
        case Expr::Kind::Sub:
            return make_sub(derivative(e->a, cls, index), derivative(e->b, cls, index));
        case Expr::Kind::Mul:
            return make_add(make_mul(derivative(e->a, cls, index), e->b),
                            make_mul(e->a, derivative(e->b, cls, index)));
        case Expr::Kind::Div:
            return make_div(make_sub(make_mul(derivative(e->a, cls, index), e->b),
                                     make_mul(e->a, derivative(e->b, cls, index))),
                            make_mul(e->b, e->b));
        case Expr::Kind::Pow: {
            ExprPtr du = derivative(e->a, cls, index);
            ExprPtr factor = make_mul(make_constant(Interval(double(e->exponent))),
                                      make_pow(e->a, e->exponent - 1));
            return make_mul(factor, du);
        }
    }
    throw Error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// System
// ---------------------------------------------------------------------------

System make_system(int n, int p, std::vector<ExprPtr> equations, Box X, Box S) {
    if (n <= 0) throw ShapeError("system requires n >= 1");
    if (p < 0) throw ShapeError("system requires p >= 0");
    if (int(equations.size()) != n)
        throw ShapeError("declared n=" + std::to_string(n) + " but got " +
                         std::to_string(equations.size()) + " equations");
    if (X.dim() != n) throw ShapeError("domain X must have dimension n");
    if (S.dim() != p) throw ShapeError("domain S must have dimension p");
    if (is_empty(X) && n > 0) throw ShapeError("domain X must be nonempty");
    if (p > 0 && is_empty(S)) throw ShapeError("domain S must be nonempty");

    System sys;
    sys.n = n;
    sys.p = p;
    sys.equations = std::move(equations);
    sys.X = std::move(X);
    sys.S = std::move(S);
    sys.jac_x.resize(n);
    for (int i = 0; i < n; ++i) {
        sys.jac_x[i].resize(n);
        for (int j = 0; j < n; ++j)
            sys.jac_x[i][j] = derivative(sys.equations[i], VarClass::state, j);
    }
    return sys;
}

Box eval_system_box(const System& sys, const Box& x, const Box& s) {
    Box r(sys.n);
    for (int i = 0; i < sys.n; ++i) r[i] = eval_box(sys.equations[i], x, s);
    return r;
}

Box eval_system_point(const System& sys, const RealVector& x, const RealVector& s) {
    return eval_system_box(sys, Box(x), Box(s));
}

RealVector eval_system_double(const System& sys, const RealVector& x, const RealVector& s) {
    RealVector r(sys.n);
    for (int i = 0; i < sys.n; ++i) r[i] = eval_double(sys.equations[i], x, s);
    return r;
}

RealMatrix eval_jacobian_x_double(const System& sys, const RealVector& x, const RealVector& s) {
    RealMatrix j(sys.n, sys.n);
    for (int i = 0; i < sys.n; ++i)
        for (int k = 0; k < sys.n; ++k) j.at(i, k) = eval_double(sys.jac_x[i][k], x, s);
    return j;
}

}  // namespace paramex

#include "hko/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace hko {

namespace {

struct Token {
    enum class Type { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Type type{};
    double num = 0.0;
    std::string text;
    std::size_t offset = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.offset = pos_;
        if (pos_ >= s_.size()) {
            tok_.type = Token::Type::End;
            return;
        }
        char c = s_[pos_];
        switch (c) {
            case '+': tok_.type = Token::Type::Plus; ++pos_; return;
            case '-': tok_.type = Token::Type::Minus; ++pos_; return;
            case '*': tok_.type = Token::Type::Star; ++pos_; return;
            case '/': tok_.type = Token::Type::Slash; ++pos_; return;
            case '^': tok_.type = Token::Type::Caret; ++pos_; return;
            case '(': tok_.type = Token::Type::LParen; ++pos_; return;
            case ')': tok_.type = Token::Type::RParen; ++pos_; return;
            case ',': tok_.type = Token::Type::Comma; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '.') {
                ++pos_;
                if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    throw ParseError("digit expected after decimal point", pos_);
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
            if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
                ++pos_;
                if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
                if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    throw ParseError("digit expected in exponent", pos_);
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
            tok_.type = Token::Type::Num;
            tok_.text = s_.substr(start, pos_ - start);
            tok_.num = std::strtod(tok_.text.c_str(), nullptr);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            tok_.type = Token::Type::Ident;
            tok_.text = s_.substr(start, pos_ - start);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    Token tok_;
};

bool is_unary_fn(const std::string& n) {
    return n == "sin" || n == "cos" || n == "exp" || n == "log" || n == "abs";
}
bool is_binary_fn(const std::string& n) { return n == "min" || n == "max"; }

class Parser {
  public:
    Parser(const std::string& text, int dim) : lex_(text), dim_(dim) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        const Token& t = lex_.peek();
        if (t.type != Token::Type::End)
            throw ParseError("unexpected trailing input", t.offset);
        return e;
    }

  private:
    static ExprPtr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

    static ExprPtr binary(ExprNode::Kind k, ExprPtr a, ExprPtr b) {
        ExprNode n;
        n.kind = k;
        n.kids = {std::move(a), std::move(b)};
        return node(std::move(n));
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        for (;;) {
            auto t = lex_.peek().type;
            if (t == Token::Type::Plus || t == Token::Type::Minus) {
                lex_.take();
                lhs = binary(t == Token::Type::Plus ? ExprNode::Kind::Add : ExprNode::Kind::Sub,
                             std::move(lhs), term());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        for (;;) {
            auto t = lex_.peek().type;
            if (t == Token::Type::Star || t == Token::Type::Slash) {
                lex_.take();
                lhs = binary(t == Token::Type::Star ? ExprNode::Kind::Mul : ExprNode::Kind::Div,
                             std::move(lhs), factor());
            } else {
                return lhs;
            }
        }
    }

    ExprPtr factor() {
        ExprPtr base = unary();
        if (lex_.peek().type == Token::Type::Caret) {
            lex_.take();
            return binary(ExprNode::Kind::Pow, std::move(base), factor());
        }
        return base;
    }

    ExprPtr unary() {
        if (lex_.peek().type == Token::Type::Minus) {
            lex_.take();
            ExprNode n;
            n.kind = ExprNode::Kind::Neg;
            n.kids = {unary()};
            return node(std::move(n));
        }
        return atom();
    }

    ExprPtr atom() {
        Token t = lex_.take();
        switch (t.type) {
            case Token::Type::Num: {
                ExprNode n;
                n.kind = ExprNode::Kind::Number;
                n.number = t.num;
                return node(std::move(n));
            }
            case Token::Type::LParen: {
                ExprPtr e = expr();
                Token close = lex_.take();
                if (close.type != Token::Type::RParen)
                    throw ParseError("expected ')'", close.offset);
                return e;
            }
            case Token::Type::Ident:
                return ident_atom(t);
            default:
                throw ParseError("expected a number, variable, function call, or '('", t.offset);
        }
    }

    ExprPtr ident_atom(const Token& t) {
        const std::string& name = t.text;
        if (name.size() >= 2 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            long idx = std::strtol(name.c_str() + 1, nullptr, 10);
            if (idx < 1) throw ParseError("variable index must be at least 1", t.offset);
            if (idx > dim_)
                throw ParseError("variable " + name + " exceeds dimension " + std::to_string(dim_),
                                 t.offset);
            ExprNode n;
            n.kind = ExprNode::Kind::Var;
            n.var = static_cast<int>(idx - 1);
            return node(std::move(n));
        }
        if (!is_unary_fn(name) && !is_binary_fn(name))
            throw ParseError("unknown identifier '" + name + "'", t.offset);
        Token open = lex_.take();
        if (open.type != Token::Type::LParen)
            throw ParseError("expected '(' after function name '" + name + "'", open.offset);
        std::vector<ExprPtr> args;
        args.push_back(expr());
        while (lex_.peek().type == Token::Type::Comma) {
            lex_.take();
            args.push_back(expr());
        }
        Token close = lex_.take();
        if (close.type != Token::Type::RParen) throw ParseError("expected ')'", close.offset);
        std::size_t want = is_unary_fn(name) ? 1 : 2;
        if (args.size() != want)
            throw ParseError("function '" + name + "' takes " + std::to_string(want) +
                                 " argument(s), got " + std::to_string(args.size()),
                             t.offset);
        ExprNode n;
        n.kind = ExprNode::Kind::Call;
        n.call = name;
        n.kids = std::move(args);
        return node(std::move(n));
    }

    Lexer lex_;
    int dim_;
};

int precedence(const ExprNode& e) {
    switch (e.kind) {
        case ExprNode::Kind::Add:
        case ExprNode::Kind::Sub: return 1;
        case ExprNode::Kind::Mul:
        case ExprNode::Kind::Div: return 2;
        case ExprNode::Kind::Neg: return 3;
        case ExprNode::Kind::Pow: return 4;
        case ExprNode::Kind::Number: return e.number < 0 ? 3 : 5;
        default: return 5;
    }
}

void print_rec(const ExprNode& e, std::string& out);

void print_child(const ExprNode& c, int min_prec, bool force_paren, std::string& out) {
    bool paren = force_paren || precedence(c) < min_prec;
    if (paren) out += '(';
    print_rec(c, out);
    if (paren) out += ')';
}

void print_rec(const ExprNode& e, std::string& out) {
    switch (e.kind) {
        case ExprNode::Kind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", e.number);
            out += buf;
            return;
        }
        case ExprNode::Kind::Var:
            out += 'x';
            out += std::to_string(e.var + 1);
            return;
        case ExprNode::Kind::Neg:
            // "-a^b" re-parses as (-a)^b because '-' binds tighter than a
            // '^' base, so a Pow child must keep its parentheses.
            out += '-';
            print_child(*e.kids[0], 3, e.kids[0]->kind == ExprNode::Kind::Pow, out);
            return;
        case ExprNode::Kind::Add:
            print_child(*e.kids[0], 1, false, out);
            out += '+';
            print_child(*e.kids[1], 2, false, out);
            return;
        case ExprNode::Kind::Sub:
            print_child(*e.kids[0], 1, false, out);
            out += '-';
            print_child(*e.kids[1], 2, false, out);
            return;
        case ExprNode::Kind::Mul:
            print_child(*e.kids[0], 2, false, out);
            out += '*';
            print_child(*e.kids[1], 3, false, out);
            return;
        case ExprNode::Kind::Div:
            print_child(*e.kids[0], 2, false, out);
            out += '/';
            print_child(*e.kids[1], 3, false, out);
            return;
        case ExprNode::Kind::Pow:
            print_child(*e.kids[0], 3, e.kids[0]->kind == ExprNode::Kind::Pow, out);
            out += '^';
            print_child(*e.kids[1], 3, false, out);
            return;
        case ExprNode::Kind::Call: {
            out += e.call;
            out += '(';
            for (std::size_t i = 0; i < e.kids.size(); ++i) {
                if (i) out += ',';
                print_rec(*e.kids[i], out);
            }
            out += ')';
            return;
        }
    }
}

double finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite value in '") + what + "'");
    return v;
}

} // namespace

ExprPtr parse_expr(const std::string& text, int dim) {
    if (dim < 1) throw SpecError("expression dimension must be positive");
    return Parser(text, dim).parse();
}

std::string print_expr(const ExprPtr& e) {
    if (!e) throw SpecError("cannot print a null expression");
    std::string out;
    print_rec(*e, out);
    return out;
}

double eval_expr(const ExprNode& e, std::span<const double> x) {
    switch (e.kind) {
        case ExprNode::Kind::Number: return e.number;
        case ExprNode::Kind::Var:
            if (e.var < 0 || static_cast<std::size_t>(e.var) >= x.size())
                throw EvalError("point dimension does not match expression");
            return x[static_cast<std::size_t>(e.var)];
        case ExprNode::Kind::Neg: return -eval_expr(*e.kids[0], x);
        case ExprNode::Kind::Add:
            return finite_or_throw(eval_expr(*e.kids[0], x) + eval_expr(*e.kids[1], x), "+");
        case ExprNode::Kind::Sub:
            return finite_or_throw(eval_expr(*e.kids[0], x) - eval_expr(*e.kids[1], x), "-");
        case ExprNode::Kind::Mul:
            return finite_or_throw(eval_expr(*e.kids[0], x) * eval_expr(*e.kids[1], x), "*");
        case ExprNode::Kind::Div: {
            double a = eval_expr(*e.kids[0], x);
            double b = eval_expr(*e.kids[1], x);
            if (b == 0.0) throw EvalError("division by zero");
            return finite_or_throw(a / b, "/");
        }
        case ExprNode::Kind::Pow: {
            double a = eval_expr(*e.kids[0], x);
            double b = eval_expr(*e.kids[1], x);
            return finite_or_throw(std::pow(a, b), "^");
        }
        case ExprNode::Kind::Call: {
            double a = eval_expr(*e.kids[0], x);
            if (e.call == "sin") return std::sin(a);
            if (e.call == "cos") return std::cos(a);
            if (e.call == "exp") return finite_or_throw(std::exp(a), "exp");
            if (e.call == "log") {
                if (a <= 0.0) throw EvalError("log of a nonpositive value");
                return std::log(a);
            }
            if (e.call == "abs") return std::fabs(a);
            double b = eval_expr(*e.kids[1], x);
            if (e.call == "min") return std::fmin(a, b);
            if (e.call == "max") return std::fmax(a, b);
            throw EvalError("unknown function '" + e.call + "'");
        }
    }
    throw EvalError("corrupt expression node");
}

} // namespace hko

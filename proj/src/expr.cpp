#include "algrest/expr.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace algrest {

namespace {

enum class TokKind { Number, Ident, Op, End };

struct Token {
    TokKind kind;
    std::string text;
    size_t pos;
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
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        size_t start = i_;
        if (i_ >= s_.size()) {
            tok_ = {TokKind::End, "", start};
            return;
        }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            tok_ = {TokKind::Number, s_.substr(start, i_ - start), start};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            tok_ = {TokKind::Ident, s_.substr(start, i_ - start), start};
            return;
        }
        if (std::string("+-*^()/,").find(c) != std::string::npos) {
            ++i_;
            tok_ = {TokKind::Op, std::string(1, c), start};
            return;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "' at position " +
                         std::to_string(start));
    }

    const std::string& s_;
    size_t i_ = 0;
    Token tok_{TokKind::End, "", 0};
};

// A parsed value: either a differential form (degree 0 = polynomial) or a
// vector field (only when the field context is enabled).
struct Value {
    bool is_field = false;
    DiffForm form;
    VectorField field;
};

class Parser {
  public:
    Parser(const std::string& text, const std::vector<std::string>& vars,
           const WeightSystem* euler_weights)
        : lex_(text), vars_(vars), euler_(euler_weights) {
        nvars_ = static_cast<int>(vars.size());
    }

    Value parse() {
        Value v = expr();
        if (lex_.peek().kind != TokKind::End)
            throw ParseError("trailing input at position " + std::to_string(lex_.peek().pos) +
                             ": '" + lex_.peek().text + "'");
        return v;
    }

  private:
    Value expr() {
        bool neg = false;
        while (lex_.peek().kind == TokKind::Op &&
               (lex_.peek().text == "-" || lex_.peek().text == "+")) {
            if (lex_.take().text == "-") neg = !neg;
        }
        Value acc = term();
        if (neg) acc = negate(acc);
        while (lex_.peek().kind == TokKind::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            bool minus = lex_.take().text == "-";
            Value rhs = term();
            if (minus) rhs = negate(rhs);
            acc = add(acc, rhs);
        }
        return acc;
    }

    Value term() {
        Value acc = power();
        while (lex_.peek().kind == TokKind::Op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            std::string op = lex_.take().text;
            Value rhs = power();
            acc = op == "*" ? multiply(acc, rhs) : divide(acc, rhs);
        }
        return acc;
    }

    // '^' (scalar power / wedge) binds tighter than '*' and '/'
    Value power() {
        Value acc = factor();
        while (lex_.peek().kind == TokKind::Op && lex_.peek().text == "^") {
            lex_.take();
            acc = caret(acc, factor());
        }
        return acc;
    }

    Value factor() {
        const Token& t = lex_.peek();
        if (t.kind == TokKind::Op && t.text == "-") {
            lex_.take();
            return negate(factor());
        }
        if (t.kind == TokKind::Op && t.text == "(") {
            lex_.take();
            Value v = expr();
            if (!(lex_.peek().kind == TokKind::Op && lex_.peek().text == ")"))
                throw ParseError("expected ')' at position " + std::to_string(lex_.peek().pos));
            lex_.take();
            return v;
        }
        if (t.kind == TokKind::Number) return number();
        if (t.kind == TokKind::Ident) return identifier();
        throw ParseError("unexpected token '" + t.text + "' at position " + std::to_string(t.pos));
    }

    Value number() {
        Token n = lex_.take();
        std::string text = n.text;
        if (lex_.peek().kind == TokKind::Op && lex_.peek().text == "/") {
            lex_.take();
            if (lex_.peek().kind != TokKind::Number)
                throw ParseError("expected denominator at position " +
                                 std::to_string(lex_.peek().pos));
            text += "/" + lex_.take().text;
        }
        Value v;
        v.form = DiffForm::from_polynomial(Polynomial::constant(nvars_, rat_from_string(text)));
        return v;
    }

    Value identifier() {
        Token id = lex_.take();
        for (int i = 0; i < nvars_; ++i) {
            if (vars_[i] == id.text) {
                Value v;
                v.form = DiffForm::from_polynomial(Polynomial::variable(nvars_, i));
                return v;
            }
        }
        if (id.text.size() > 1 && id.text[0] == 'd') {
            std::string base = id.text.substr(1);
            for (int i = 0; i < nvars_; ++i) {
                if (vars_[i] == base) {
                    Value v;
                    v.form = DiffForm::dx(nvars_, i);
                    return v;
                }
            }
        }
        if (euler_ != nullptr && id.text == "E") {
            Value v;
            v.is_field = true;
            v.field = euler_field(*euler_);
            return v;
        }
        throw ParseError("unknown name '" + id.text + "' at position " + std::to_string(id.pos));
    }

    static Value negate(Value v) {
        if (v.is_field) {
            for (auto& c : v.field.components) c = c.scaled(rat(-1));
        } else {
            v.form = v.form.scaled(rat(-1));
        }
        return v;
    }

    static Value add(Value a, Value b) {
        if (a.is_field != b.is_field) throw ParseError("cannot add a field and a form");
        if (a.is_field) {
            if (a.field.dim() != b.field.dim()) throw ParseError("field dimension mismatch");
            for (int i = 0; i < a.field.dim(); ++i)
                a.field.components[i] = a.field.components[i] + b.field.components[i];
            return a;
        }
        if (a.form.degree != b.form.degree)
            throw ParseError("cannot add forms of different degree");
        a.form = a.form + b.form;
        return a;
    }

    static Value multiply(Value a, Value b) {
        if (a.is_field && b.is_field) throw ParseError("cannot multiply two fields");
        if (a.is_field || b.is_field) {
            Value& f = a.is_field ? a : b;
            Value& s = a.is_field ? b : a;
            if (s.form.degree != 0) throw ParseError("fields scale only by scalars");
            Polynomial p = s.form.coefficient({});
            for (auto& c : f.field.components) c = c * p;
            return f;
        }
        if (a.form.degree == 0) {
            Value r;
            r.form = b.form.scaled_by(a.form.coefficient({}));
            return r;
        }
        if (b.form.degree == 0) {
            Value r;
            r.form = a.form.scaled_by(b.form.coefficient({}));
            return r;
        }
        throw ParseError("'*' between two forms of positive degree; use '^' to wedge");
    }

    static Value divide(Value a, Value b) {
        if (b.is_field) throw ParseError("cannot divide by a vector field");
        if (b.form.degree != 0 || b.form.coefficient({}).terms.size() > 1 ||
            (!b.form.is_zero() && !b.form.coefficient({}).terms.begin()->first.is_constant()))
            throw ParseError("division is only defined by a nonzero constant");
        Polynomial denom = b.form.coefficient({});
        if (denom.is_zero()) throw ParseError("division by zero");
        Rat inv = Rat(1) / denom.terms.begin()->second;
        if (a.is_field) {
            for (auto& c : a.field.components) c = c.scaled(inv);
        } else {
            a.form = a.form.scaled(inv);
        }
        return a;
    }

    Value caret(Value a, Value b) {
        if (a.is_field || b.is_field) throw ParseError("'^' does not apply to fields");
        if (a.form.degree == 0) {
            // power of a scalar expression
            std::optional<long> k = constant_integer(b.form);
            if (!k || *k < 0)
                throw ParseError("exponent must be a non-negative integer");
            Value r;
            r.form = DiffForm::from_polynomial(a.form.coefficient({}).pow(static_cast<int>(*k)));
            return r;
        }
        if (b.form.degree == 0) throw ParseError("cannot wedge a form with a scalar; use '*'");
        Value r;
        r.form = wedge(a.form, b.form);
        return r;
    }

    static std::optional<long> constant_integer(const DiffForm& f) {
        if (f.degree != 0) return std::nullopt;
        Polynomial p = f.coefficient({});
        if (p.is_zero()) return 0;
        if (p.terms.size() != 1 || !p.terms.begin()->first.is_constant()) return std::nullopt;
        const Rat& v = p.terms.begin()->second;
        if (v.get_den() != 1) return std::nullopt;
        if (!v.get_num().fits_slong_p()) return std::nullopt;
        return v.get_num().get_si();
    }

    Lexer lex_;
    const std::vector<std::string>& vars_;
    const WeightSystem* euler_;
    int nvars_;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
    Parser p(text, vars, nullptr);
    Value v = p.parse();
    if (v.is_field || v.form.degree != 0)
        throw ParseError("expected a polynomial: '" + text + "'");
    return v.form.coefficient({});
}

DiffForm parse_form(const std::string& text, const std::vector<std::string>& vars,
                    int expected_degree) {
    Parser p(text, vars, nullptr);
    Value v = p.parse();
    if (v.is_field) throw ParseError("expected a form, got a vector field");
    if (expected_degree >= 0 && v.form.degree != expected_degree) {
        // the zero polynomial can stand for the zero form of any degree
        if (v.form.is_zero()) return DiffForm::zero(expected_degree, static_cast<int>(vars.size()));
        throw ParseError("expected a form of degree " + std::to_string(expected_degree) +
                         ", got degree " + std::to_string(v.form.degree));
    }
    return v.form;
}

VectorField parse_vector_field(const std::string& text, const std::vector<std::string>& vars,
                               const WeightSystem& w) {
    Parser p(text, vars, &w);
    Value v = p.parse();
    if (!v.is_field) throw ParseError("expected a vector field (a polynomial multiple of E)");
    return v.field;
}

std::vector<Rat> parse_rat_vector(const std::string& text) {
    std::vector<Rat> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        try {
            out.push_back(rat_from_string(cur));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    if (out.empty()) throw ParseError("empty coordinate vector");
    return out;
}

}  // namespace algrest

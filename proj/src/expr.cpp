#include "es/expr.hpp"

#include <algorithm>
#include <cctype>

namespace es {

namespace {

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
}

i128 add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
    return r;
}

}  // namespace

Rational::Rational(i128 num, i128 den) {
    if (den == 0) throw ExprError("division by zero");
    if (den < 0) {
        num = mul(num, -1);
        den = mul(den, -1);
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    num_ = num;
    den_ = den;
}

Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return Rational(add(a.num_, b.num_));
    i128 g = gcd128(a.den_, b.den_);
    i128 da = a.den_ / g;
    return Rational(add(mul(a.num_, b.den_ / g), mul(b.num_, da)), mul(da, b.den_));
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = mul(num_, -1);
    r.den_ = den_;
    return r;
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return Rational(mul(a.num_, b.num_));
    i128 g1 = gcd128(a.num_, b.den_), g2 = gcd128(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Rational(mul(a.num_ / g1, b.num_ / g2), mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw ExprError("division by zero");
    return a * Rational(b.den_, b.num_);
}

bool operator<(const Rational& a, const Rational& b) { return mul(a.num_, b.den_) < mul(b.num_, a.den_); }

std::string Rational::str() const {
    if (den_ == 1) return to_string(num_);
    return to_string(num_) + "/" + to_string(den_);
}

// recursive descent straight to postfix
class ExprParser {
public:
    ExprParser(std::string_view s, const std::vector<std::string>& vars, Expr& out)
        : s_(s), vars_(vars), out_(out) {}

    void run() {
        sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        if (out_.code_.empty()) fail("empty expression");
    }

private:
    std::string_view s_;
    const std::vector<std::string>& vars_;
    Expr& out_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ExprError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void emit(Expr::Op op, std::size_t idx = 0) { out_.code_.push_back({op, idx}); }

    void sum() {
        product();
        for (;;) {
            if (eat('+')) {
                product();
                emit(Expr::Op::Add);
            } else if (eat('-')) {
                product();
                emit(Expr::Op::Sub);
            } else {
                return;
            }
        }
    }
    void product() {
        unary();
        for (;;) {
            if (eat('*')) {
                unary();
                emit(Expr::Op::Mul);
            } else if (eat('/')) {
                unary();
                emit(Expr::Op::Div);
            } else if (eat('%')) {
                unary();
                emit(Expr::Op::Mod);
            } else {
                return;
            }
        }
    }
    void unary() {
        if (eat('-')) {
            unary();
            emit(Expr::Op::Neg);
            return;
        }
        power();
    }
    void power() {
        primary();
        if (eat('^')) {
            unary();  // right associative
            emit(Expr::Op::Pow);
        }
    }
    void primary() {
        skip();
        if (eat('(')) {
            sum();
            if (!eat(')')) fail("expected ')'");
            return;
        }
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            i128 v = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                v = add(mul(v, 10), s_[pos_++] - '0');
            out_.consts_.emplace_back(v);
            emit(Expr::Op::Const, out_.consts_.size() - 1);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name(s_.substr(start, pos_ - start));
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == name) {
                    emit(Expr::Op::Var, i);
                    return;
                }
            pos_ = start;
            fail("unknown variable '" + name + "'");
        }
        fail("unexpected character");
    }
};

Expr Expr::parse(std::string_view text, const std::vector<std::string>& vars) {
    Expr e;
    e.text_ = std::string(text);
    ExprParser(text, vars, e).run();
    int depth = 0, peak = 0;
    for (const Ins& in : e.code_) {
        if (in.op == Op::Const || in.op == Op::Var) peak = std::max(peak, ++depth);
        else if (in.op != Op::Neg) --depth;
    }
    if (peak > 64) throw ExprError("expression nests too deeply: '" + e.text_ + "'");
    return e;
}

namespace {

Rational rpow(Rational b, i128 e) {
    if (e < 0) {
        if (b.num() == 0) throw ExprError("zero to a negative power");
        b = Rational(b.den(), b.num());
        e = -e;
    }
    if (e > 256) throw std::overflow_error("exponent too large");
    Rational r(1);
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

}  // namespace

Rational Expr::eval(std::span<const i64> values) const {
    Rational stack[64];
    std::size_t sp = 0;
    for (const Ins& in : code_) {
        if (in.op == Op::Const) {
            stack[sp++] = consts_[in.index];
            continue;
        }
        if (in.op == Op::Var) {
            if (in.index >= values.size()) throw ExprError("missing value for variable in '" + text_ + "'");
            stack[sp++] = Rational(values[in.index]);
            continue;
        }
        if (in.op == Op::Neg) {
            stack[sp - 1] = -stack[sp - 1];
            continue;
        }
        const Rational b = stack[--sp];
        Rational& a = stack[sp - 1];
        switch (in.op) {
            case Op::Add: a = a + b; break;
            case Op::Sub: a = a - b; break;
            case Op::Mul: a = a * b; break;
            case Op::Div: a = a / b; break;
            case Op::Mod: {
                if (!a.is_integer() || !b.is_integer() || b.num() == 0)
                    throw ExprError("'%' needs integer operands in '" + text_ + "'");
                i128 m = b.num() < 0 ? -b.num() : b.num();
                i128 r = a.num() % m;
                if (r < 0) r += m;
                a = Rational(r);
                break;
            }
            case Op::Pow:
                if (!b.is_integer()) throw ExprError("non-integer exponent in '" + text_ + "'");
                a = rpow(a, b.num());
                break;
            default: break;
        }
    }
    return stack[0];
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<std::string> split_list(std::string_view field) {
    std::vector<std::string> out;
    while (!field.empty()) {
        auto p = field.find(';');
        auto item = trim(field.substr(0, p));
        if (!item.empty()) out.emplace_back(item);
        if (p == std::string_view::npos) break;
        field.remove_prefix(p + 1);
    }
    return out;
}

Constraint Constraint::parse(std::string_view text, const std::vector<std::string>& vars) {
    Constraint c;
    c.text_ = std::string(trim(text));
    std::string_view s = c.text_;
    struct OpTok {
        const char* tok;
        Kind kind;
    };
    // two-char operators first
    static constexpr OpTok ops[] = {{"==", Kind::Eq}, {"!=", Kind::Ne}, {">=", Kind::Ge}, {"<=", Kind::Le},
                                    {"|", Kind::Divides}, {">", Kind::Gt}, {"<", Kind::Lt}};
    for (const auto& op : ops) {
        auto p = s.find(op.tok);
        if (p == std::string_view::npos) continue;
        c.kind_ = op.kind;
        c.lhs_ = Expr::parse(trim(s.substr(0, p)), vars);
        c.rhs_ = Expr::parse(trim(s.substr(p + std::string_view(op.tok).size())), vars);
        return c;
    }
    throw ExprError("no relation in constraint '" + c.text_ + "'");
}

bool Constraint::holds(std::span<const i64> values) const {
    const Rational a = lhs_.eval(values), b = rhs_.eval(values);
    switch (kind_) {
        case Kind::Divides:
            if (!a.is_integer() || a.num() == 0) throw ExprError("bad divisor in '" + text_ + "'");
            return b.is_integer() && b.num() % a.num() == 0;
        case Kind::Eq: return a == b;
        case Kind::Ne: return !(a == b);
        case Kind::Ge: return a >= b;
        case Kind::Le: return a <= b;
        case Kind::Gt: return a > b;
        case Kind::Lt: return a < b;
    }
    return false;
}

Congruence Congruence::parse(std::string_view text, const std::vector<std::string>& vars) {
    Congruence c;
    c.text_ = std::string(trim(text));
    std::string_view s = c.text_;
    auto p = s.rfind("(mod ");
    if (p == std::string_view::npos || s.back() != ')') throw ExprError("malformed congruence '" + c.text_ + "'");
    c.residue_ = Expr::parse(trim(s.substr(0, p)), vars);
    c.modulus_ = Expr::parse(trim(s.substr(p + 5, s.size() - p - 6)), vars);
    return c;
}

bool Congruence::holds(const Rational& m, std::span<const i64> values) const {
    const Rational q = (m - residue_.eval(values)) / modulus_.eval(values);
    return q.is_integer();
}

}  // namespace es

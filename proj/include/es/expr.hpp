#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "es/exact_arith.hpp"

namespace es {

// Exact rational with 128-bit parts, always normalized (den > 0, gcd 1).
// Arithmetic throws std::overflow_error instead of wrapping.
class Rational {
public:
    Rational() = default;
    Rational(i128 v) : num_(v) {}  // NOLINT: implicit from integers is the point
    Rational(i128 num, i128 den);

    i128 num() const { return num_; }
    i128 den() const { return den_; }
    bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const;

private:
    i128 num_ = 0;
    i128 den_ = 1;
};

struct ExprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integer expression over named variables: + - * / % ^, parentheses, unary minus.
// Division is exact (rational); % requires integers.
class Expr {
public:
    Expr() = default;
    // every identifier must appear in vars; its index is the slot in eval()
    static Expr parse(std::string_view text, const std::vector<std::string>& vars);

    Rational eval(std::span<const i64> values) const;
    const std::string& text() const { return text_; }
    bool empty() const { return code_.empty(); }

private:
    enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Mod, Pow, Neg };
    struct Ins {
        Op op;
        std::size_t index = 0;  // const pool or variable slot
    };
    friend class ExprParser;

    std::string text_;
    std::vector<Ins> code_;  // postfix
    std::vector<Rational> consts_;
};

// "K | expr", "a op b" (op in == != >= <= > <)
class Constraint {
public:
    static Constraint parse(std::string_view text, const std::vector<std::string>& vars);
    // throws ExprError when an operand is undefined (e.g. non-integral % operand)
    bool holds(std::span<const i64> values) const;
    const std::string& text() const { return text_; }

private:
    enum class Kind { Divides, Eq, Ne, Ge, Le, Gt, Lt };
    std::string text_;
    Kind kind_ = Kind::Eq;
    Expr lhs_, rhs_;
};

// "residue (mod modulus)"; holds for m when (m - residue) / modulus is an integer
class Congruence {
public:
    static Congruence parse(std::string_view text, const std::vector<std::string>& vars);
    bool holds(const Rational& m, std::span<const i64> values) const;
    Rational residue(std::span<const i64> values) const { return residue_.eval(values); }
    Rational modulus(std::span<const i64> values) const { return modulus_.eval(values); }
    const std::string& text() const { return text_; }

private:
    std::string text_;
    Expr residue_, modulus_;
};

// splits on ';' and trims; empty field gives empty list
std::vector<std::string> split_list(std::string_view field);

}  // namespace es

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace imhom {

struct ExprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A scalar arithmetic expression in the variables y1..yd, compiled to a flat
// postfix program. Grammar: + - * / unary-, parentheses, sin/cos/exp, numeric
// literals and the constant pi. Evaluation is pure and allocation-free.
class Expr {
  public:
    Expr() = default;

    // Throws ExprError (with position info) on malformed input or on
    // variables beyond y1..y<max_dim>.
    static Expr parse(const std::string& text, int max_dim);

    double eval(std::span<const double> y) const;

    const std::string& text() const { return text_; }
    bool is_zero() const;  // literal "0" (used for trivial-drift shortcuts)

  private:
    enum class Op : uint8_t { push_const, push_var, add, sub, mul, div, neg, sin, cos, exp };
    struct Instr {
        Op op;
        double value = 0.0;  // push_const
        int var = 0;         // push_var: 0-based axis
    };
    std::vector<Instr> code_;
    std::string text_;

    friend class ExprParser;
};

}  // namespace imhom

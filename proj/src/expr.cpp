#include "imhom/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace imhom {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

class ExprParser {
  public:
    ExprParser(const std::string& s, int max_dim) : s_(s), max_dim_(max_dim) {}

    Expr run() {
        Expr e;
        e.text_ = s_;
        parse_sum(e.code_);
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    const std::string& s_;
    int max_dim_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ExprError("expression error at position " + std::to_string(pos_) + " in \"" + s_ +
                        "\": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    void parse_sum(std::vector<Expr::Instr>& out) {
        parse_product(out);
        while (true) {
            if (consume('+')) {
                parse_product(out);
                out.push_back({Expr::Op::add});
            } else if (consume('-')) {
                parse_product(out);
                out.push_back({Expr::Op::sub});
            } else {
                return;
            }
        }
    }

    void parse_product(std::vector<Expr::Instr>& out) {
        parse_unary(out);
        while (true) {
            if (consume('*')) {
                parse_unary(out);
                out.push_back({Expr::Op::mul});
            } else if (consume('/')) {
                parse_unary(out);
                out.push_back({Expr::Op::div});
            } else {
                return;
            }
        }
    }

    void parse_unary(std::vector<Expr::Instr>& out) {
        if (consume('-')) {
            parse_unary(out);
            out.push_back({Expr::Op::neg});
            return;
        }
        (void)consume('+');
        parse_primary(out);
    }

    void parse_primary(std::vector<Expr::Instr>& out) {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            parse_sum(out);
            if (!consume(')')) fail("missing ')'");
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad numeric literal");
            pos_ += static_cast<size_t>(end - begin);
            out.push_back({Expr::Op::push_const, v});
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "pi") {
                out.push_back({Expr::Op::push_const, kPi});
                return;
            }
            if (name == "sin" || name == "cos" || name == "exp") {
                if (!consume('(')) fail("expected '(' after " + name);
                parse_sum(out);
                if (!consume(')')) fail("missing ')' after " + name + " argument");
                if (name == "sin")
                    out.push_back({Expr::Op::sin});
                else if (name == "cos")
                    out.push_back({Expr::Op::cos});
                else
                    out.push_back({Expr::Op::exp});
                return;
            }
            if (name.size() >= 2 && name[0] == 'y') {
                int axis = std::atoi(name.c_str() + 1);
                if (axis >= 1 && axis <= max_dim_) {
                    out.push_back({Expr::Op::push_var, 0.0, axis - 1});
                    return;
                }
                fail("variable " + name + " out of range (dimension " + std::to_string(max_dim_) +
                     ")");
            }
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

Expr Expr::parse(const std::string& text, int max_dim) {
    return ExprParser(text, max_dim).run();
}

double Expr::eval(std::span<const double> y) const {
    double stack[64];
    int top = -1;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::push_const: stack[++top] = in.value; break;
            case Op::push_var: stack[++top] = y[static_cast<size_t>(in.var)]; break;
            case Op::add: --top; stack[top] += stack[top + 1]; break;
            case Op::sub: --top; stack[top] -= stack[top + 1]; break;
            case Op::mul: --top; stack[top] *= stack[top + 1]; break;
            case Op::div: --top; stack[top] /= stack[top + 1]; break;
            case Op::neg: stack[top] = -stack[top]; break;
            case Op::sin: stack[top] = std::sin(stack[top]); break;
            case Op::cos: stack[top] = std::cos(stack[top]); break;
            case Op::exp: stack[top] = std::exp(stack[top]); break;
        }
    }
    return stack[0];
}

bool Expr::is_zero() const {
    return code_.size() == 1 && code_[0].op == Op::push_const && code_[0].value == 0.0;
}

}  // namespace imhom

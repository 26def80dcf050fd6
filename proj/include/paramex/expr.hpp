#pragma once

// Expression DAG for systems H(x,s) over the variable partition
// (x_1..x_n, s_1..s_p): rational operations plus nonnegative integer powers.
// sqrt(...) is allowed for constants only and is folded at parse time.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "paramex/linalg.hpp"

namespace paramex {

enum class VarClass { state, param };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow };

    Kind kind;
    Interval value{0.0};       // Constant payload (tight enclosure of the literal)
    std::string source;        // literal text, kept so serialization round-trips
    VarClass var_class = VarClass::state;
    int index = 0;             // Variable payload, 0-based within its class
    int exponent = 0;          // Pow payload, nonnegative
    ExprPtr a, b;
};

ExprPtr make_constant(const Interval& value, std::string source = "");
ExprPtr make_variable(VarClass cls, int index);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr a, int exponent);

// Parses one expression in the variables x1..xn, s1..sp.
ExprPtr parse_expression(const std::string& text, int n, int p);
// Parses a ';'-separated list of expressions.
std::vector<ExprPtr> parse_equations(const std::string& text, int n, int p);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);
std::string to_string(const ExprPtr& e);

// Natural interval extension over x-box times s-box.
Interval eval_box(const ExprPtr& e, const Box& x, const Box& s);
// Tight enclosure of the value at a point.
Interval eval_point(const ExprPtr& e, const RealVector& x, const RealVector& s);
// Plain binary64 evaluation (midpoints of constants); non-rigorous fast path.
double eval_double(const ExprPtr& e, const RealVector& x, const RealVector& s);

// Partial derivative as a new DAG, with trivial algebraic folding.
ExprPtr derivative(const ExprPtr& e, VarClass cls, int index);

struct System {
    int n = 0;  // state dimension
    int p = 0;  // parameter dimension
    std::vector<ExprPtr> equations;
    Box X;  // state domain
    Box S;  // parameter domain

    // d equations[i] / d x_j, built once at construction
    std::vector<std::vector<ExprPtr>> jac_x;
};

System make_system(int n, int p, std::vector<ExprPtr> equations, Box X, Box S);

Box eval_system_box(const System& sys, const Box& x, const Box& s);
Box eval_system_point(const System& sys, const RealVector& x, const RealVector& s);
RealVector eval_system_double(const System& sys, const RealVector& x, const RealVector& s);
RealMatrix eval_jacobian_x_double(const System& sys, const RealVector& x, const RealVector& s);

}  // namespace paramex

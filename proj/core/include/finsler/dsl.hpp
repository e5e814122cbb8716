#pragma once

#include <memory>
#include <string>

#include "finsler/metric.hpp"

namespace finsler {
namespace dsl {

/// Expression tree over z[i], v[i], rational/decimal literals, conj, re, im,
/// abs2, sqrt, pow(e, rational), sum_i(e), and the builtins norm2z, norm2v,
/// herm.
struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class NodeKind {
    number,
    variable, // z[index] or v[index]
    unary,    // neg, conj, re, im, abs2, sqrt
    binary,   // add, sub, mul, div
    power,    // pow(child, rational)
    sum,      // sum_i(child)
    builtin,  // norm2z, norm2v, herm
};

enum class UnaryOp { neg, conj, re, im, abs2, sqrt_op };
enum class BinaryOp { add, sub, mul, div };
enum class BuiltinOp { norm2z, norm2v, herm };

struct Node {
    NodeKind kind;

    // number
    double value = 0.0;
    std::string lexeme;

    // variable: base ('z' or 'v'), 1-based literal index, or the sum index
    char base = 0;
    int index = 0;       // 0 when bound to the sum index
    bool uses_sum_index = false;

    UnaryOp unary_op = UnaryOp::neg;
    BinaryOp binary_op = BinaryOp::add;
    BuiltinOp builtin_op = BuiltinOp::norm2z;
    Rational exponent;

    NodePtr left;
    NodePtr right;
};

struct MetricAst {
    int n = 0;
    NodePtr root;
};

/// Parses one expression; diagnostics carry line/column. Literal variable
/// indices are checked against 1..n at parse time.
MetricAst parse(const std::string& source, int n);

/// Canonical text form; parse(print(ast)) is structurally equal to ast.
std::string print(const MetricAst& ast);

bool structurally_equal(const MetricAst& a, const MetricAst& b);

/// Wraps the AST in a jet evaluator. The domain predicate accepts every
/// base point; DomainError surfaces at evaluation time.
MetricDefinition compile(const MetricAst& ast, std::string label = "dsl");

/// DSL file: "# n = <dim>" header line, then one expression.
struct DslFile {
    int n = 0;
    std::string source;
};

DslFile load_dsl_file(const std::string& path);
MetricDefinition compile_file(const std::string& path);

} // namespace dsl
} // namespace finsler

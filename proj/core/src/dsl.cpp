#include "finsler/dsl.hpp"

#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

namespace finsler {
namespace dsl {

namespace {

struct Token {
    enum class Kind { number, identifier, symbol, end };
    Kind kind = Kind::end;
    std::string text;
    double number = 0.0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& source) : source_(source) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (true) {
            skip_whitespace();
            Token token;
            token.line = line_;
            token.column = column_;
            if (at_end()) {
                token.kind = Token::Kind::end;
                tokens.push_back(token);
                return tokens;
            }
            const char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                token.kind = Token::Kind::number;
                token.text = read_number();
                token.number = std::stod(token.text);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                token.kind = Token::Kind::identifier;
                token.text = read_identifier();
            } else if (std::string("+-*/()[],").find(c) != std::string::npos) {
                token.kind = Token::Kind::symbol;
                token.text = std::string(1, c);
                advance();
            } else {
                throw SyntaxError("unexpected character '" + std::string(1, c) + "'", line_, column_);
            }
            tokens.push_back(std::move(token));
        }
    }

private:
    bool at_end() const { return pos_ >= source_.size(); }
    char peek() const { return source_[pos_]; }

    void advance() {
        if (source_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_whitespace() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    std::string read_number() {
        std::string text;
        bool seen_dot = false;
        while (!at_end() &&
               (std::isdigit(static_cast<unsigned char>(peek())) || (!seen_dot && peek() == '.'))) {
            seen_dot |= peek() == '.';
            text += peek();
            advance();
        }
        if (text == ".") throw SyntaxError("malformed number", line_, column_);
        return text;
    }

    std::string read_identifier() {
        std::string text;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            text += peek();
            advance();
        }
        return text;
    }

    const std::string& source_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, int n) : tokens_(std::move(tokens)), n_(n) {}

    NodePtr run() {
        NodePtr expr = parse_additive();
        expect_end();
        return expr;
    }

private:
    const Token& current() const { return tokens_[pos_]; }

    [[noreturn]] void fail(const std::string& message, const std::string& expected) const {
        const Token& t = current();
        std::string what = message;
        if (!expected.empty()) what += "; expected " + expected;
        if (t.kind == Token::Kind::end)
            what += " (at end of input)";
        else
            what += " (found '" + t.text + "')";
        throw SyntaxError(what, t.line, t.column);
    }

    bool match_symbol(const char* s) {
        if (current().kind == Token::Kind::symbol && current().text == s) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect_symbol(const char* s, const char* context) {
        if (!match_symbol(s)) fail(std::string("malformed ") + context, std::string("'") + s + "'");
    }

    void expect_end() {
        if (current().kind != Token::Kind::end) fail("trailing input after expression", "end of input");
    }

    NodePtr parse_additive() {
        NodePtr left = parse_multiplicative();
        while (current().kind == Token::Kind::symbol &&
               (current().text == "+" || current().text == "-")) {
            const bool add = current().text == "+";
            ++pos_;
            NodePtr right = parse_multiplicative();
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::binary;
            node->binary_op = add ? BinaryOp::add : BinaryOp::sub;
            node->left = std::move(left);
            node->right = std::move(right);
            left = std::move(node);
        }
        return left;
    }

    NodePtr parse_multiplicative() {
        NodePtr left = parse_unary();
        while (current().kind == Token::Kind::symbol &&
               (current().text == "*" || current().text == "/")) {
            const bool mul = current().text == "*";
            ++pos_;
            NodePtr right = parse_unary();
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::binary;
            node->binary_op = mul ? BinaryOp::mul : BinaryOp::div;
            node->left = std::move(left);
            node->right = std::move(right);
            left = std::move(node);
        }
        return left;
    }

    NodePtr parse_unary() {
        if (match_symbol("-")) {
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::unary;
            node->unary_op = UnaryOp::neg;
            node->left = parse_unary();
            return node;
        }
        if (match_symbol("+")) return parse_unary();
        return parse_primary();
    }

    Rational parse_rational() {
        bool negative = false;
        if (match_symbol("-")) negative = true;
        if (current().kind != Token::Kind::number) fail("malformed exponent", "rational literal");
        const Token t = current();
        ++pos_;
        long long num = 0, den = 1;
        const auto dot = t.text.find('.');
        if (dot == std::string::npos) {
            num = std::stoll(t.text);
        } else {
            const std::string integral = t.text.substr(0, dot);
            const std::string fractional = t.text.substr(dot + 1);
            if (fractional.size() > 15) throw SyntaxError("exponent literal too precise", t.line, t.column);
            num = (integral.empty() ? 0 : std::stoll(integral));
            for (char c : fractional) {
                num = num * 10 + (c - '0');
                den *= 10;
            }
        }
        if (match_symbol("/")) {
            if (current().kind != Token::Kind::number ||
                current().text.find('.') != std::string::npos)
                fail("malformed exponent denominator", "integer literal");
            den *= std::stoll(current().text);
            ++pos_;
            if (den == 0) throw SyntaxError("zero denominator in exponent", t.line, t.column);
        }
        const long long g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        return Rational(negative ? -num : num, den);
    }

    NodePtr parse_variable(char base, const Token& name) {
        expect_symbol("[", "index");
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::variable;
        node->base = base;
        if (current().kind == Token::Kind::identifier && current().text == "i") {
            if (sum_depth_ == 0)
                throw IndexError("sum index 'i' used outside sum_i", current().line, current().column);
            node->uses_sum_index = true;
            ++pos_;
        } else if (current().kind == Token::Kind::number) {
            const Token t = current();
            const int index = static_cast<int>(t.number);
            if (t.text.find('.') != std::string::npos || index < 1 || index > n_)
                throw IndexError("index " + t.text + " outside 1.." + std::to_string(n_), t.line,
                                 t.column);
            node->index = index;
            ++pos_;
        } else {
            fail("malformed index for '" + std::string(1, base) + "'", "integer or 'i'");
        }
        expect_symbol("]", "index");
        (void)name;
        return node;
    }

    NodePtr parse_call(UnaryOp op, const Token& name) {
        expect_symbol("(", name.text.c_str());
        NodePtr arg = parse_additive();
        if (match_symbol(","))
            throw ArityError(name.text + " takes exactly one argument", name.line, name.column);
        expect_symbol(")", name.text.c_str());
        auto node = std::make_shared<Node>();
        node->kind = NodeKind::unary;
        node->unary_op = op;
        node->left = std::move(arg);
        return node;
    }

    NodePtr parse_primary() {
        if (current().kind == Token::Kind::number) {
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::number;
            node->value = current().number;
            node->lexeme = current().text;
            ++pos_;
            return node;
        }
        if (match_symbol("(")) {
            NodePtr inner = parse_additive();
            expect_symbol(")", "parenthesized expression");
            return inner;
        }
        if (current().kind != Token::Kind::identifier) fail("malformed expression", "operand");

        const Token name = current();
        ++pos_;
        if (name.text == "z") return parse_variable('z', name);
        if (name.text == "v") return parse_variable('v', name);
        if (name.text == "conj") return parse_call(UnaryOp::conj, name);
        if (name.text == "re") return parse_call(UnaryOp::re, name);
        if (name.text == "im") return parse_call(UnaryOp::im, name);
        if (name.text == "abs2") return parse_call(UnaryOp::abs2, name);
        if (name.text == "sqrt") return parse_call(UnaryOp::sqrt_op, name);
        if (name.text == "pow") {
            expect_symbol("(", "pow");
            NodePtr arg = parse_additive();
            if (!match_symbol(","))
                throw ArityError("pow takes (expression, rational)", name.line, name.column);
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::power;
            node->left = std::move(arg);
            node->exponent = parse_rational();
            expect_symbol(")", "pow");
            return node;
        }
        if (name.text == "sum_i") {
            expect_symbol("(", "sum_i");
            ++sum_depth_;
            NodePtr body = parse_additive();
            --sum_depth_;
            expect_symbol(")", "sum_i");
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::sum;
            node->left = std::move(body);
            return node;
        }
        if (name.text == "norm2z" || name.text == "norm2v" || name.text == "herm") {
            auto node = std::make_shared<Node>();
            node->kind = NodeKind::builtin;
            node->builtin_op = name.text == "norm2z"
                                   ? BuiltinOp::norm2z
                                   : (name.text == "norm2v" ? BuiltinOp::norm2v : BuiltinOp::herm);
            return node;
        }
        throw SyntaxError("unknown identifier '" + name.text + "'", name.line, name.column);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int n_;
    int sum_depth_ = 0;
};

struct EvalContext {
    std::span<const ComplexJet> z;
    std::span<const ComplexJet> v;
    int sum_index = 0; // 1-based, valid inside sum_i
};

ComplexJet evaluate(const Node& node, const EvalContext& ctx) {
    switch (node.kind) {
    case NodeKind::number: return ComplexJet(node.value);
    case NodeKind::variable: {
        const int index = (node.uses_sum_index ? ctx.sum_index : node.index) - 1;
        return node.base == 'z' ? ctx.z[index] : ctx.v[index];
    }
    case NodeKind::unary: {
        const ComplexJet child = evaluate(*node.left, ctx);
        switch (node.unary_op) {
        case UnaryOp::neg: return -child;
        case UnaryOp::conj: return conj(child);
        case UnaryOp::re: return ComplexJet(child.re);
        case UnaryOp::im: return ComplexJet(child.im);
        case UnaryOp::abs2: return ComplexJet(abs2(child));
        case UnaryOp::sqrt_op: return sqrt(child);
        }
        break;
    }
    case NodeKind::binary: {
        const ComplexJet left = evaluate(*node.left, ctx);
        const ComplexJet right = evaluate(*node.right, ctx);
        switch (node.binary_op) {
        case BinaryOp::add: return left + right;
        case BinaryOp::sub: return left - right;
        case BinaryOp::mul: return left * right;
        case BinaryOp::div: return left / right;
        }
        break;
    }
    case NodeKind::power: return pow(evaluate(*node.left, ctx), node.exponent);
    case NodeKind::sum: {
        ComplexJet acc;
        EvalContext inner = ctx;
        for (int i = 1; i <= static_cast<int>(ctx.z.size()); ++i) {
            inner.sum_index = i;
            acc += evaluate(*node.left, inner);
        }
        return acc;
    }
    case NodeKind::builtin: {
        ComplexJet acc;
        switch (node.builtin_op) {
        case BuiltinOp::norm2z:
            for (const auto& c : ctx.z) acc += ComplexJet(abs2(c));
            return acc;
        case BuiltinOp::norm2v:
            for (const auto& c : ctx.v) acc += ComplexJet(abs2(c));
            return acc;
        case BuiltinOp::herm:
            for (std::size_t a = 0; a < ctx.z.size(); ++a) acc += ctx.z[a] * conj(ctx.v[a]);
            return acc;
        }
        break;
    }
    }
    throw Error("unreachable DSL node");
}

void print_node(const Node& node, std::ostream& out) {
    switch (node.kind) {
    case NodeKind::number: out << (node.lexeme.empty() ? std::to_string(node.value) : node.lexeme); return;
    case NodeKind::variable:
        out << node.base << '[';
        if (node.uses_sum_index)
            out << 'i';
        else
            out << node.index;
        out << ']';
        return;
    case NodeKind::unary: {
        const char* name = nullptr;
        switch (node.unary_op) {
        case UnaryOp::neg: name = nullptr; break;
        case UnaryOp::conj: name = "conj"; break;
        case UnaryOp::re: name = "re"; break;
        case UnaryOp::im: name = "im"; break;
        case UnaryOp::abs2: name = "abs2"; break;
        case UnaryOp::sqrt_op: name = "sqrt"; break;
        }
        if (!name) {
            out << "(-";
            print_node(*node.left, out);
            out << ')';
        } else {
            out << name << '(';
            print_node(*node.left, out);
            out << ')';
        }
        return;
    }
    case NodeKind::binary: {
        out << '(';
        print_node(*node.left, out);
        switch (node.binary_op) {
        case BinaryOp::add: out << " + "; break;
        case BinaryOp::sub: out << " - "; break;
        case BinaryOp::mul: out << " * "; break;
        case BinaryOp::div: out << " / "; break;
        }
        print_node(*node.right, out);
        out << ')';
        return;
    }
    case NodeKind::power:
        out << "pow(";
        print_node(*node.left, out);
        out << ", " << node.exponent.num;
        if (node.exponent.den != 1) out << '/' << node.exponent.den;
        out << ')';
        return;
    case NodeKind::sum:
        out << "sum_i(";
        print_node(*node.left, out);
        out << ')';
        return;
    case NodeKind::builtin:
        switch (node.builtin_op) {
        case BuiltinOp::norm2z: out << "norm2z"; return;
        case BuiltinOp::norm2v: out << "norm2v"; return;
        case BuiltinOp::herm: out << "herm"; return;
        }
        return;
    }
}

bool nodes_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case NodeKind::number: return a.value == b.value;
    case NodeKind::variable:
        return a.base == b.base && a.index == b.index && a.uses_sum_index == b.uses_sum_index;
    case NodeKind::unary: return a.unary_op == b.unary_op && nodes_equal(*a.left, *b.left);
    case NodeKind::binary:
        return a.binary_op == b.binary_op && nodes_equal(*a.left, *b.left) &&
               nodes_equal(*a.right, *b.right);
    case NodeKind::power:
        return a.exponent.num == b.exponent.num && a.exponent.den == b.exponent.den &&
               nodes_equal(*a.left, *b.left);
    case NodeKind::sum: return nodes_equal(*a.left, *b.left);
    case NodeKind::builtin: return a.builtin_op == b.builtin_op;
    }
    return false;
}

} // namespace

MetricAst parse(const std::string& source, int n) {
    if (n < 1) throw ParamError("DSL dimension must be at least 1");
    Lexer lexer(source);
    Parser parser(lexer.run(), n);
    return MetricAst{n, parser.run()};
}

std::string print(const MetricAst& ast) {
    std::ostringstream out;
    print_node(*ast.root, out);
    return out.str();
}

bool structurally_equal(const MetricAst& a, const MetricAst& b) {
    return a.n == b.n && nodes_equal(*a.root, *b.root);
}

MetricDefinition compile(const MetricAst& ast, std::string label) {
    MetricDefinition metric;
    metric.n = ast.n;
    metric.label = std::move(label);
    metric.params = {{"n", static_cast<double>(ast.n)}};
    const NodePtr root = ast.root;
    metric.evaluate = [root](std::span<const ComplexJet> z, std::span<const ComplexJet> v) {
        return evaluate(*root, EvalContext{z, v, 0});
    };
    metric.sample_domain = {SampleDomain::Kind::all, 0.7};
    return metric;
}

DslFile load_dsl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParamError("cannot open DSL file: " + path);
    std::string line;
    DslFile file;
    bool have_n = false;
    std::ostringstream body;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t");
        if (!have_n && first != std::string::npos && line[first] == '#') {
            const auto eq = line.find('=');
            const auto npos = line.find('n');
            if (eq == std::string::npos || npos == std::string::npos || npos > eq)
                throw ParamError("DSL header must be '# n = <dim>': " + line);
            file.n = std::stoi(line.substr(eq + 1));
            have_n = true;
            continue;
        }
        body << line << '\n';
    }
    if (!have_n) throw ParamError("DSL file is missing the '# n = <dim>' header");
    file.source = body.str();
    return file;
}

MetricDefinition compile_file(const std::string& path) {
    const DslFile file = load_dsl_file(path);
    auto metric = compile(parse(file.source, file.n), "dsl:" + path);
    return metric;
}

} // namespace dsl
} // namespace finsler

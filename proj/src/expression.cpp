#include "sympconn/expression.hpp"

#include <cctype>
#include <cmath>

#include "sympconn/errors.hpp"

namespace sympconn {

struct Expression::Node {
    enum class Op { number, variable, neg, add, sub, mul, div, pow };
    Op op;
    Rational value;
    int index = 0;  // variable index or exponent
    int column = 0;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, int column, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->column = column;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& names, const std::string& field)
        : s_(text), names_(names), field_(field) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + (field_.empty() ? "" : " in " + field_), 1, static_cast<int>(pos_) + 1, field_);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int column() {
        skip();
        return static_cast<int>(pos_) + 1;
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            const int c = column();
            if (accept('+')) e = make(Node::Op::add, c, e, term());
            else if (accept('-')) e = make(Node::Op::sub, c, e, term());
            else return e;
        }
    }

    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            const int c = column();
            if (accept('*')) e = make(Node::Op::mul, c, e, unary());
            else if (accept('/')) e = make(Node::Op::div, c, e, unary());
            else return e;
        }
    }

    NodePtr unary() {
        const int c = column();
        if (accept('-')) return make(Node::Op::neg, c, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        const int c = column();
        if (!accept('^')) return base;
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("exponent must be a non-negative integer");
        const std::string digits(s_.substr(start, pos_ - start));
        if (digits.size() > 6) fail("exponent too large");
        auto n = std::make_shared<Node>(*make(Node::Op::pow, c, base));
        n->index = std::stoi(digits);
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') fail("chained exponents need parentheses");
        return n;
    }

    NodePtr primary() {
        skip();
        const int c = static_cast<int>(pos_) + 1;
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char ch = s_[pos_];
        if (ch == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            auto n = std::make_shared<Node>(*make(Node::Op::number, c));
            n->value = Rational(mpz_class(std::string(s_.substr(start, pos_ - start))));
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name(s_.substr(start, pos_ - start));
            for (std::size_t v = 0; v < names_.size(); ++v)
                if (names_[v] == name) {
                    auto n = std::make_shared<Node>(*make(Node::Op::variable, c));
                    n->index = static_cast<int>(v);
                    return n;
                }
            pos_ = start;
            fail("unknown coordinate '" + name + "'");
        }
        fail("unexpected '" + std::string(1, ch) + "'");
    }

    std::string_view s_;
    const std::vector<std::string>& names_;
    const std::string& field_;
    std::size_t pos_ = 0;
};

Jet jet_power(Jet base, int e) {
    Jet result = Jet::constant(base.n_vars(), base.order(), 1);
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

struct JetEvaluator {
    std::span<const Rational> base;
    int order;
    const std::string& field;
    const std::string& text;

    Jet operator()(const Node& n) const {
        const int nv = static_cast<int>(base.size());
        switch (n.op) {
            case Node::Op::number: return Jet::constant(nv, order, n.value);
            case Node::Op::variable:
                return Jet::constant(nv, order, base[n.index]) + Jet::variable(nv, order, n.index);
            case Node::Op::neg: return -(*this)(*n.lhs);
            case Node::Op::add: return (*this)(*n.lhs) + (*this)(*n.rhs);
            case Node::Op::sub: return (*this)(*n.lhs) - (*this)(*n.rhs);
            case Node::Op::mul: return (*this)(*n.lhs) * (*this)(*n.rhs);
            case Node::Op::pow: return jet_power((*this)(*n.lhs), n.index);
            case Node::Op::div: {
                const Jet den = (*this)(*n.rhs);
                if (den.constant_term() == 0)
                    throw SingularityError("denominator at column " + std::to_string(n.column) + " of '" + text + "'" +
                                           (field.empty() ? "" : " in " + field) + " vanishes at the base point");
                return (*this)(*n.lhs) * den.reciprocal();
            }
        }
        throw Error("unreachable expression node");
    }
};

double evaluate_node(const Node& n, std::span<const double> x) {
    switch (n.op) {
        case Node::Op::number: return n.value.get_d();
        case Node::Op::variable: return x[n.index];
        case Node::Op::neg: return -evaluate_node(*n.lhs, x);
        case Node::Op::add: return evaluate_node(*n.lhs, x) + evaluate_node(*n.rhs, x);
        case Node::Op::sub: return evaluate_node(*n.lhs, x) - evaluate_node(*n.rhs, x);
        case Node::Op::mul: return evaluate_node(*n.lhs, x) * evaluate_node(*n.rhs, x);
        case Node::Op::div: return evaluate_node(*n.lhs, x) / evaluate_node(*n.rhs, x);
        case Node::Op::pow: return std::pow(evaluate_node(*n.lhs, x), n.index);
    }
    return 0;
}

}  // namespace

Expression::Expression(std::string text, std::string field, std::shared_ptr<const Node> root)
    : text_(std::move(text)), field_(std::move(field)), root_(std::move(root)) {}

Expression Expression::parse(std::string_view text, const std::vector<std::string>& names, std::string field) {
    NodePtr root = Parser(text, names, field).parse();
    return Expression(std::string(text), std::move(field), std::move(root));
}

Jet Expression::to_jet(std::span<const Rational> base, int order) const {
    if (base.empty()) throw ShapeError("expressions need at least one coordinate");
    return JetEvaluator{base, order, field_, text_}(*root_);
}

double Expression::evaluate(std::span<const double> point) const { return evaluate_node(*root_, point); }

}  // namespace sympconn

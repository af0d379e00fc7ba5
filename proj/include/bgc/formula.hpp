#pragma once

#include <cctype>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bgc/error.hpp"

namespace bgc {

struct VarId {
    std::size_t index = 0;
    std::string name;

    friend bool operator==(const VarId&, const VarId&) = default;
};

enum class FormulaKind { Const, Var, Not, And, Or, Implies, Iff };

// Immutable propositional formula. Nodes are shared, so copies are cheap.
class Formula {
public:
    Formula() : Formula(constant(true)) {}

    static Formula constant(bool value) { return Formula(make(FormulaKind::Const, value, {}, nullptr, nullptr)); }
    static Formula variable(VarId id) {
        return Formula(make(FormulaKind::Var, false, std::move(id), nullptr, nullptr));
    }
    static Formula negation(Formula f) { return Formula(make(FormulaKind::Not, false, {}, f.node_, nullptr)); }
    static Formula conjunction(Formula l, Formula r) { return binary(FormulaKind::And, l, r); }
    static Formula disjunction(Formula l, Formula r) { return binary(FormulaKind::Or, l, r); }
    static Formula implication(Formula l, Formula r) { return binary(FormulaKind::Implies, l, r); }
    static Formula equivalence(Formula l, Formula r) { return binary(FormulaKind::Iff, l, r); }

    FormulaKind kind() const { return node_->kind; }
    bool value() const { return node_->value; }
    const VarId& var() const { return node_->var; }
    // Operand of Not, or left operand of a binary connective.
    Formula lhs() const { return Formula(node_->lhs); }
    Formula rhs() const { return Formula(node_->rhs); }

    bool is_binary() const {
        auto k = kind();
        return k == FormulaKind::And || k == FormulaKind::Or || k == FormulaKind::Implies || k == FormulaKind::Iff;
    }

    friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }

private:
    struct Node {
        FormulaKind kind;
        bool value;
        VarId var;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static std::shared_ptr<const Node> make(FormulaKind kind, bool value, VarId var,
                                            std::shared_ptr<const Node> lhs, std::shared_ptr<const Node> rhs) {
        return std::make_shared<const Node>(Node{kind, value, std::move(var), std::move(lhs), std::move(rhs)});
    }

    static Formula binary(FormulaKind kind, const Formula& l, const Formula& r) {
        return Formula(make(kind, false, {}, l.node_, r.node_));
    }

    static bool equal(const Node* a, const Node* b) {
        if (a == b) {
            return true;
        }
        if (a->kind != b->kind) {
            return false;
        }
        switch (a->kind) {
            case FormulaKind::Const: return a->value == b->value;
            case FormulaKind::Var: return a->var == b->var;
            case FormulaKind::Not: return equal(a->lhs.get(), b->lhs.get());
            default: return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
        }
    }

    std::shared_ptr<const Node> node_;
};

// Evaluates f under an assignment callable as `bool(std::size_t var_index)`.
template <class Assignment>
bool eval(const Formula& f, const Assignment& value_of) {
    switch (f.kind()) {
        case FormulaKind::Const: return f.value();
        case FormulaKind::Var: return static_cast<bool>(value_of(f.var().index));
        case FormulaKind::Not: return !eval(f.lhs(), value_of);
        case FormulaKind::And: return eval(f.lhs(), value_of) && eval(f.rhs(), value_of);
        case FormulaKind::Or: return eval(f.lhs(), value_of) || eval(f.rhs(), value_of);
        case FormulaKind::Implies: return !eval(f.lhs(), value_of) || eval(f.rhs(), value_of);
        case FormulaKind::Iff: return eval(f.lhs(), value_of) == eval(f.rhs(), value_of);
    }
    return false;
}

inline bool is_reserved_word(std::string_view name) {
    return name == "T" || name == "F" || name == "true" || name == "false";
}

inline bool is_identifier(std::string_view name) {
    if (name.empty()) {
        return false;
    }
    auto head = static_cast<unsigned char>(name.front());
    if (!(std::isalpha(head) || head == '_')) {
        return false;
    }
    for (char c : name.substr(1)) {
        auto u = static_cast<unsigned char>(c);
        if (!(std::isalnum(u) || u == '_')) {
            return false;
        }
    }
    return true;
}

namespace detail {

class FormulaParser {
public:
    FormulaParser(std::string_view text, std::span<const std::string> vocabulary)
        : text_(text), vocabulary_(vocabulary) {}

    Formula parse() {
        Formula f = parse_iff();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return f;
    }

private:
    // iff := impl ("<->" impl)*
    Formula parse_iff() {
        Formula f = parse_impl();
        while (accept("<->")) {
            f = Formula::equivalence(f, parse_impl());
        }
        return f;
    }

    // impl := or ("->" impl)?
    Formula parse_impl() {
        Formula f = parse_or();
        if (accept("->")) {
            return Formula::implication(f, parse_impl());
        }
        return f;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (accept("|")) {
            f = Formula::disjunction(f, parse_and());
        }
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (accept("&")) {
            f = Formula::conjunction(f, parse_unary());
        }
        return f;
    }

    Formula parse_unary() {
        if (accept("~") || accept("!")) {
            return Formula::negation(parse_unary());
        }
        return parse_atom();
    }

    Formula parse_atom() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of formula");
        }
        if (accept("(")) {
            Formula f = parse_iff();
            if (!accept(")")) {
                fail("expected ')'");
            }
            return f;
        }
        std::size_t start = pos_;
        auto c = static_cast<unsigned char>(text_[pos_]);
        if (!(std::isalpha(c) || c == '_')) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        while (pos_ < text_.size()) {
            auto u = static_cast<unsigned char>(text_[pos_]);
            if (!(std::isalnum(u) || u == '_')) {
                break;
            }
            ++pos_;
        }
        std::string_view word = text_.substr(start, pos_ - start);
        if (word == "T" || word == "true") {
            return Formula::constant(true);
        }
        if (word == "F" || word == "false") {
            return Formula::constant(false);
        }
        for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
            if (vocabulary_[i] == word) {
                return Formula::variable(VarId{i, vocabulary_[i]});
            }
        }
        throw ParseError("undeclared variable '" + std::string(word) + "'", 0, start + 1);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(std::string_view token) {
        skip_space();
        if (text_.substr(pos_, token.size()) != token) {
            return false;
        }
        pos_ += token.size();
        return true;
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, 0, pos_ + 1); }

    std::string_view text_;
    std::span<const std::string> vocabulary_;
    std::size_t pos_ = 0;
};

inline int precedence(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::Iff: return 1;
        case FormulaKind::Implies: return 2;
        case FormulaKind::Or: return 3;
        case FormulaKind::And: return 4;
        case FormulaKind::Not: return 5;
        default: return 6;
    }
}

inline void print_into(const Formula& f, std::string& out);

inline void print_operand(const Formula& f, bool parenthesize, std::string& out) {
    if (parenthesize) {
        out += '(';
        print_into(f, out);
        out += ')';
    } else {
        print_into(f, out);
    }
}

inline void print_into(const Formula& f, std::string& out) {
    const int p = precedence(f);
    switch (f.kind()) {
        case FormulaKind::Const: out += f.value() ? "T" : "F"; return;
        case FormulaKind::Var: out += f.var().name; return;
        case FormulaKind::Not:
            out += '~';
            print_operand(f.lhs(), precedence(f.lhs()) < p, out);
            return;
        default: break;
    }
    const char* op = f.kind() == FormulaKind::And       ? " & "
                     : f.kind() == FormulaKind::Or      ? " | "
                     : f.kind() == FormulaKind::Implies ? " -> "
                                                        : " <-> ";
    const bool right_assoc = f.kind() == FormulaKind::Implies;
    const int l = precedence(f.lhs());
    const int r = precedence(f.rhs());
    print_operand(f.lhs(), right_assoc ? l <= p : l < p, out);
    out += op;
    print_operand(f.rhs(), right_assoc ? r < p : r <= p, out);
}

}  // namespace detail

// Grammar (tightest first): ~ ! ; & ; | ; -> (right) ; <-> (left).
inline Formula parse_formula(std::string_view text, std::span<const std::string> vocabulary) {
    return detail::FormulaParser(text, vocabulary).parse();
}

inline std::string print_formula(const Formula& f) {
    std::string out;
    detail::print_into(f, out);
    return out;
}

template <class Visitor>
void for_each_variable(const Formula& f, Visitor&& visit) {
    switch (f.kind()) {
        case FormulaKind::Const: return;
        case FormulaKind::Var: visit(f.var()); return;
        case FormulaKind::Not: for_each_variable(f.lhs(), visit); return;
        default:
            for_each_variable(f.lhs(), visit);
            for_each_variable(f.rhs(), visit);
    }
}

}  // namespace bgc

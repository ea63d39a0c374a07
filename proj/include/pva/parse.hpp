#pragma once

// Text syntax for functions, operators, brackets and contact maps.
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' ['-'] int)?
//   base   := int | ident | ident '\''+ | ident '^(' int ')' | '(' expr ')'
//
// `*` composes (it multiplies when no D is involved), `A/g` is A o (1/g) with
// g a single-term function. D is the total derivative and l the formal
// variable of a bracket; a bracket expression is applied to 1 at the end, so
// "(D + 2*l)*u + c*l^3" is the Virasoro bracket.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pva/diffop.hpp"
#include "pva/transform.hpp"

namespace pva {

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t pos);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

struct Node {
    enum class Kind { Num, Ident, Deriv, Add, Sub, Mul, Div, Pow, Neg };
    Kind kind;
    std::size_t pos = 0;
    Rational num;
    std::string name;
    int n = 0; // derivative order or exponent
    std::vector<std::unique_ptr<Node>> kids;
};

std::unique_ptr<Node> parse_ast(std::string_view text);

/// "name[:d=name2][:sq=rational]"
ParamSymbol parse_symbol_spec(const std::string& spec);

using Value = std::variant<DiffPoly, DiffOp, LambdaPoly>;

class Session {
public:
    Session() = default;

    void declare_generator(const std::string& name);
    void declare_symbol(const ParamSymbol& s);
    void declare_symbol(const std::string& spec) { declare_symbol(parse_symbol_spec(spec)); }
    /// Ring of the declarations so far; generator `u` when none were given.
    RingPtr ring() const;

    DiffPoly parse_function(std::string_view text) const;
    DiffOp parse_operator(std::string_view text) const;
    LambdaPoly parse_bracket(std::string_view text) const;
    /// Function of v, v', ..., y over the contact target ring.
    RatDiffFn parse_transform(std::string_view text, const RingPtr& target) const;

    void store(const std::string& name, Value v);
    const Value& get(const std::string& name) const;

private:
    std::vector<std::string> generators_;
    std::vector<ParamSymbol> symbols_;
    mutable RingPtr ring_;
    std::map<std::string, Value> objects_;
};

} // namespace pva

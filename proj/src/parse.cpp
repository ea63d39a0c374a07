#include "pva/parse.hpp"

#include <cctype>

namespace pva {

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : Error(msg + " at position " + std::to_string(pos)), pos_(pos)
{
}

namespace {

using NodePtr = std::unique_ptr<Node>;

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr run()
    {
        NodePtr e = expr();
        skip();
        if (i_ != s_.size())
            throw ParseError(std::string("unexpected '") + s_[i_] + "'", i_);
        return e;
    }

private:
    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }
    bool peek(char c)
    {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }
    bool eat(char c)
    {
        if (!peek(c))
            return false;
        ++i_;
        return true;
    }
    void expect(char c)
    {
        if (!eat(c))
            throw ParseError(std::string("expected '") + c + "'", i_);
    }

    static NodePtr make(Node::Kind k, std::size_t pos)
    {
        auto n = std::make_unique<Node>();
        n->kind = k;
        n->pos = pos;
        return n;
    }
    static NodePtr binary(Node::Kind k, std::size_t pos, NodePtr a, NodePtr b)
    {
        NodePtr n = make(k, pos);
        n->kids.push_back(std::move(a));
        n->kids.push_back(std::move(b));
        return n;
    }

    NodePtr expr()
    {
        skip();
        std::size_t pos = i_;
        NodePtr acc;
        if (eat('-')) {
            acc = make(Node::Kind::Neg, pos);
            acc->kids.push_back(term());
        } else {
            eat('+');
            acc = term();
        }
        for (;;) {
            skip();
            pos = i_;
            if (eat('+'))
                acc = binary(Node::Kind::Add, pos, std::move(acc), term());
            else if (eat('-'))
                acc = binary(Node::Kind::Sub, pos, std::move(acc), term());
            else
                return acc;
        }
    }

    NodePtr term()
    {
        NodePtr acc = factor();
        for (;;) {
            skip();
            std::size_t pos = i_;
            if (eat('*'))
                acc = binary(Node::Kind::Mul, pos, std::move(acc), factor());
            else if (eat('/'))
                acc = binary(Node::Kind::Div, pos, std::move(acc), factor());
            else
                return acc;
        }
    }

    int integer(bool allow_sign)
    {
        skip();
        std::size_t pos = i_;
        bool neg = allow_sign && eat('-');
        skip();
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
            ++i_;
        if (start == i_)
            throw ParseError("expected an integer", pos);
        std::string digits(s_.substr(start, i_ - start));
        if (digits.size() > 9)
            throw ParseError("integer too large", pos);
        int v = std::stoi(digits);
        return neg ? -v : v;
    }

    NodePtr factor()
    {
        NodePtr b = base();
        skip();
        std::size_t pos = i_;
        if (eat('^')) {
            NodePtr p = make(Node::Kind::Pow, pos);
            if (peek('(')) {
                ++i_;
                p->n = integer(true);
                expect(')');
            } else {
                p->n = integer(true);
            }
            p->kids.push_back(std::move(b));
            return p;
        }
        return b;
    }

    NodePtr base()
    {
        skip();
        std::size_t pos = i_;
        if (i_ >= s_.size())
            throw ParseError("unexpected end of input", pos);
        char c = s_[i_];
        if (eat('(')) {
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
                ++i_;
            NodePtr n = make(Node::Kind::Num, pos);
            n->num = Rational::parse(std::string(s_.substr(start, i_ - start)));
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            std::string name(s_.substr(start, i_ - start));
            int primes = 0;
            while (i_ < s_.size() && s_[i_] == '\'') {
                ++primes;
                ++i_;
            }
            if (primes == 0 && i_ + 1 < s_.size() && s_[i_] == '^' && s_[i_ + 1] == '(') {
                i_ += 2;
                primes = integer(false);
                expect(')');
                NodePtr d = make(Node::Kind::Deriv, pos);
                d->name = name;
                d->n = primes;
                return d;
            }
            NodePtr n = make(primes ? Node::Kind::Deriv : Node::Kind::Ident, pos);
            n->name = name;
            n->n = primes;
            return n;
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos);
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

enum class Ctx { Function, Operator, Bracket };

// sum_k c_k D^k with lambda-polynomial coefficients; lambda commutes with D
class LOp {
public:
    explicit LOp(RingPtr r) : ring_(std::move(r)) {}
    LOp(RingPtr r, const LambdaPoly& c, int k = 0) : ring_(std::move(r))
    {
        if (!c.is_zero())
            c_.emplace(k, c);
    }

    const std::map<int, LambdaPoly>& coeffs() const { return c_; }

    void add(int k, const LambdaPoly& p)
    {
        if (p.is_zero())
            return;
        auto [it, fresh] = c_.try_emplace(k, p);
        if (!fresh) {
            it->second += p;
            if (it->second.is_zero())
                c_.erase(it);
        }
    }
    LOp operator+(const LOp& o) const
    {
        LOp r(*this);
        for (const auto& [k, p] : o.c_)
            r.add(k, p);
        return r;
    }
    LOp operator-() const
    {
        LOp r(ring_);
        for (const auto& [k, p] : c_)
            r.add(k, -p);
        return r;
    }
    LOp operator*(const LOp& b) const
    {
        LOp r(ring_);
        int top = c_.empty() ? 0 : c_.rbegin()->first;
        for (const auto& [j, bj] : b.c_) {
            std::vector<LambdaPoly> d{bj};
            for (int s = 1; s <= top; ++s)
                d.push_back(total_derivative(d.back()));
            for (const auto& [i, ai] : c_)
                for (int s = 0; s <= i; ++s)
                    if (!d[s].is_zero())
                        r.add(i - s + j, ai * d[s] * DiffPoly(ring_, binomial(i, s)));
        }
        return r;
    }
    /// The plain function, if this is one.
    std::optional<DiffPoly> function() const
    {
        if (c_.empty())
            return DiffPoly(ring_, Rational(0));
        if (c_.size() != 1 || c_.begin()->first != 0 || c_.begin()->second.has_mu())
            return std::nullopt;
        const LambdaPoly& p = c_.begin()->second;
        if (p.coeffs().size() == 1 && p.coeffs().begin()->first == std::pair<int, int>{0, 0})
            return p.coeffs().begin()->second;
        if (p.is_zero())
            return DiffPoly(ring_, Rational(0));
        return std::nullopt;
    }
    bool has_lambda() const
    {
        for (const auto& [k, p] : c_)
            if (p.degree_lambda() > 0 || p.has_mu())
                return true;
        return false;
    }

private:
    RingPtr ring_;
    std::map<int, LambdaPoly> c_;
};

class Evaluator {
public:
    Evaluator(RingPtr ring, Ctx ctx) : ring_(std::move(ring)), ctx_(ctx) {}

    LOp eval(const Node& n)
    {
        using K = Node::Kind;
        switch (n.kind) {
        case K::Num:
            return fn(DiffPoly(ring_, n.num));
        case K::Ident:
            return ident(n);
        case K::Deriv:
            return fn(derivative(n));
        case K::Neg:
            return -eval(*n.kids[0]);
        case K::Add:
            return eval(*n.kids[0]) + eval(*n.kids[1]);
        case K::Sub:
            return eval(*n.kids[0]) + -eval(*n.kids[1]);
        case K::Mul:
            return eval(*n.kids[0]) * eval(*n.kids[1]);
        case K::Div: {
            LOp a = eval(*n.kids[0]);
            return a * fn(invert(eval(*n.kids[1]), n.kids[1]->pos));
        }
        case K::Pow: {
            LOp b = eval(*n.kids[0]);
            if (n.n < 0)
                return fn(invert(b, n.kids[0]->pos).pow(-n.n));
            LOp r = fn(DiffPoly(ring_, Rational(1)));
            for (int i = 0; i < n.n; ++i)
                r = r * b;
            return r;
        }
        }
        throw ParseError("bad node", n.pos);
    }

private:
    LOp fn(const DiffPoly& f) { return LOp(ring_, LambdaPoly(f)); }

    DiffPoly invert(const LOp& v, std::size_t pos)
    {
        auto f = v.function();
        if (!f || f->size() != 1)
            throw ParseError("division is only allowed by a single-term function", pos);
        return f->pow(-1);
    }

    DiffPoly derivative(const Node& n)
    {
        if (auto g = ring_->generator_index(n.name))
            return DiffPoly::jet(ring_, static_cast<std::uint32_t>(*g), static_cast<std::uint32_t>(n.n));
        if (ring_->symbol_index(n.name))
            return total_derivative(DiffPoly::symbol(ring_, n.name), n.n);
        if (n.name == ring_->x_name())
            return total_derivative(DiffPoly::x(ring_), n.n);
        throw ParseError("undeclared identifier '" + n.name + "'", n.pos);
    }

    LOp ident(const Node& n)
    {
        if (ring_->generator_index(n.name) || ring_->symbol_index(n.name) || n.name == ring_->x_name())
            return fn(derivative(n));
        if (n.name == "D") {
            if (ctx_ == Ctx::Function)
                throw ParseError("D is not allowed in a function", n.pos);
            return LOp(ring_, LambdaPoly(DiffPoly(ring_, Rational(1))), 1);
        }
        if (n.name == "l") {
            if (ctx_ != Ctx::Bracket)
                throw ParseError("l is only allowed in a bracket", n.pos);
            return LOp(ring_, LambdaPoly(DiffPoly(ring_, Rational(1)), 1, 0));
        }
        throw ParseError("undeclared identifier '" + n.name + "'", n.pos);
    }

    RingPtr ring_;
    Ctx ctx_;
};

class RatEvaluator {
public:
    explicit RatEvaluator(RingPtr ring) : ring_(std::move(ring)) {}

    RatDiffFn eval(const Node& n)
    {
        using K = Node::Kind;
        switch (n.kind) {
        case K::Num:
            return RatDiffFn(ring_, n.num);
        case K::Ident:
        case K::Deriv:
            return leaf(n);
        case K::Neg:
            return -eval(*n.kids[0]);
        case K::Add:
            return eval(*n.kids[0]) + eval(*n.kids[1]);
        case K::Sub:
            return eval(*n.kids[0]) - eval(*n.kids[1]);
        case K::Mul:
            return eval(*n.kids[0]) * eval(*n.kids[1]);
        case K::Div: {
            RatDiffFn b = eval(*n.kids[1]);
            if (b.is_zero())
                throw ParseError("division by zero", n.kids[1]->pos);
            return eval(*n.kids[0]) / b;
        }
        case K::Pow: {
            RatDiffFn b = eval(*n.kids[0]);
            if (n.n < 0 && b.is_zero())
                throw ParseError("division by zero", n.pos);
            return b.pow(n.n);
        }
        }
        throw ParseError("bad node", n.pos);
    }

private:
    RatDiffFn leaf(const Node& n)
    {
        if (auto g = ring_->generator_index(n.name))
            return RatDiffFn(DiffPoly::jet(ring_, static_cast<std::uint32_t>(*g), static_cast<std::uint32_t>(n.n)));
        if (ring_->symbol_index(n.name))
            return RatDiffFn(total_derivative(DiffPoly::symbol(ring_, n.name), n.n));
        if (n.name == ring_->x_name())
            return RatDiffFn(total_derivative(DiffPoly::x(ring_), n.n));
        if (n.name == "D" || n.name == "l")
            throw ParseError("'" + n.name + "' is not allowed in a map component", n.pos);
        throw ParseError("undeclared identifier '" + n.name + "'", n.pos);
    }

    RingPtr ring_;
};

LambdaPoly apply_to_one(const LOp& op, const RingPtr& ring)
{
    auto it = op.coeffs().find(0);
    return it == op.coeffs().end() ? LambdaPoly(ring) : it->second;
}

} // namespace

std::unique_ptr<Node> parse_ast(std::string_view text) { return Parser(text).run(); }

ParamSymbol parse_symbol_spec(const std::string& spec)
{
    ParamSymbol s;
    std::size_t p = spec.find(':');
    s.name = spec.substr(0, p);
    if (s.name.empty())
        throw ParseError("empty symbol name", 0);
    for (char c : s.name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            throw ParseError("bad symbol name '" + s.name + "'", 0);
    if (std::isdigit(static_cast<unsigned char>(s.name[0])))
        throw ParseError("bad symbol name '" + s.name + "'", 0);
    while (p != std::string::npos) {
        std::size_t q = spec.find(':', p + 1);
        std::string part = spec.substr(p + 1, q == std::string::npos ? std::string::npos : q - p - 1);
        if (part.rfind("d=", 0) == 0) {
            s.d_image = part.substr(2);
            if (s.d_image == "0")
                s.d_image.clear();
        } else if (part.rfind("sq=", 0) == 0) {
            try {
                s.square_reduction = Rational::parse(part.substr(3));
            } catch (const std::exception&) {
                throw ParseError("bad rational in '" + part + "'", p + 4);
            }
        } else {
            throw ParseError("unknown symbol option '" + part + "'", p + 1);
        }
        p = q;
    }
    return s;
}

void Session::declare_generator(const std::string& name)
{
    generators_.push_back(name);
    ring_.reset();
}

void Session::declare_symbol(const ParamSymbol& s)
{
    symbols_.push_back(s);
    ring_.reset();
}

RingPtr Session::ring() const
{
    if (!ring_)
        ring_ = make_ring(generators_.empty() ? std::vector<std::string>{"u"} : generators_, symbols_);
    return ring_;
}

DiffPoly Session::parse_function(std::string_view text) const
{
    auto ast = parse_ast(text);
    LOp v = Evaluator(ring(), Ctx::Function).eval(*ast);
    auto f = v.function();
    if (!f)
        throw ParseError("expected a function", 0);
    return *f;
}

DiffOp Session::parse_operator(std::string_view text) const
{
    auto ast = parse_ast(text);
    LOp v = Evaluator(ring(), Ctx::Operator).eval(*ast);
    DiffOp r(ring());
    for (const auto& [k, p] : v.coeffs())
        r.add(k, p.coeff(0));
    return r;
}

LambdaPoly Session::parse_bracket(std::string_view text) const
{
    auto ast = parse_ast(text);
    return apply_to_one(Evaluator(ring(), Ctx::Bracket).eval(*ast), ring());
}

RatDiffFn Session::parse_transform(std::string_view text, const RingPtr& target) const
{
    auto ast = parse_ast(text);
    return RatEvaluator(target).eval(*ast);
}

void Session::store(const std::string& name, Value v) { objects_.insert_or_assign(name, std::move(v)); }

const Value& Session::get(const std::string& name) const
{
    auto it = objects_.find(name);
    if (it == objects_.end())
        throw Error("no object named '" + name + "'");
    return it->second;
}

} // namespace pva

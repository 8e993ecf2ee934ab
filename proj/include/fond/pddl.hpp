#ifndef FOND_PDDL_HPP
#define FOND_PDDL_HPP

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fond::pddl {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + msg),
          line(line),
          col(col) {}
    int line;
    int col;
};

// ---------------------------------------------------------------------------
// Lexing: parentheses and symbols, with ; line comments. PDDL is
// case-insensitive, so symbols are lowered on the way in.
// ---------------------------------------------------------------------------

struct Token {
    enum class Kind { LParen, RParen, Symbol, End } kind;
    std::string text;
    int line = 1;
    int col = 1;
};

inline std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](char c) {
        if (c == '\n') {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ';') {
            while (i < text.size() && text[i] != '\n')
                advance(text[i++]);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(c);
            ++i;
            continue;
        }
        if (c == '(' || c == ')') {
            tokens.push_back({c == '(' ? Token::Kind::LParen : Token::Kind::RParen,
                              std::string(1, c), line, col});
            advance(c);
            ++i;
            continue;
        }
        int start_line = line, start_col = col;
        std::string sym;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
               text[i] != '(' && text[i] != ')' && text[i] != ';') {
            sym += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
            advance(text[i++]);
        }
        tokens.push_back({Token::Kind::Symbol, std::move(sym), start_line, start_col});
    }
    tokens.push_back({Token::Kind::End, "", line, col});
    return tokens;
}

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

struct TypedName {
    std::string name;
    std::string type = "object";
    bool operator==(const TypedName&) const = default;
};

// Atom or negated atom; args are object names or ?variables. The equality
// predicate is spelled "=".
struct Literal {
    bool negated = false;
    std::string predicate;
    std::vector<std::string> args;
    bool operator==(const Literal&) const = default;
};

// Effect tree: a literal, a conjunction, or a oneof over alternatives.
// oneof children are literals or plain conjunctions of literals; nesting a
// oneof inside a oneof is rejected at parse time.
struct EffectNode {
    enum class Kind { Lit, And, OneOf } kind = Kind::Lit;
    Literal literal;                  // Lit
    std::vector<EffectNode> children; // And, OneOf
    bool operator==(const EffectNode&) const = default;
};

struct Predicate {
    std::string name;
    std::vector<TypedName> params;
    bool operator==(const Predicate&) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    std::vector<Literal> precondition;  // conjunction
    EffectNode effect;
    bool operator==(const ActionSchema&) const = default;
};

struct DomainAst {
    std::string name;
    std::vector<std::string> requirements;
    std::vector<TypedName> types;      // name + parent type
    std::vector<TypedName> constants;
    std::vector<Predicate> predicates;
    std::vector<ActionSchema> actions;
    bool operator==(const DomainAst&) const = default;
};

struct ProblemAst {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;
    std::vector<Literal> init;  // positive ground atoms
    std::vector<Literal> goal;  // conjunction of ground literals
    bool operator==(const ProblemAst&) const = default;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek() const { return tokens_[std::min(pos_, tokens_.size() - 1)]; }
    const Token& next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw ParseError(msg, t.line, t.col);
    }

    void expect_lparen(const std::string& what) {
        if (peek().kind != Token::Kind::LParen)
            fail("expected '(' to open " + what);
        next();
    }
    void expect_rparen(const std::string& what) {
        if (peek().kind != Token::Kind::RParen)
            fail("expected ')' to close " + what);
        next();
    }
    std::string expect_symbol(const std::string& what) {
        if (peek().kind != Token::Kind::Symbol)
            fail("expected " + what);
        return next().text;
    }
    bool at_symbol(const std::string& text) const {
        return peek().kind == Token::Kind::Symbol && peek().text == text;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// name+ [- type] groups, until ')'.
inline std::vector<TypedName> parse_typed_list(TokenStream& ts) {
    std::vector<TypedName> result;
    std::vector<std::string> pending;
    while (ts.peek().kind == Token::Kind::Symbol) {
        if (ts.at_symbol("-")) {
            ts.next();
            std::string type = ts.expect_symbol("a type name after '-'");
            for (auto& n : pending)
                result.push_back({std::move(n), type});
            pending.clear();
        } else {
            pending.push_back(ts.next().text);
        }
    }
    for (auto& n : pending)
        result.push_back({std::move(n), "object"});
    return result;
}

inline Literal parse_atom(TokenStream& ts) {
    ts.expect_lparen("an atom");
    Literal lit;
    lit.predicate = ts.expect_symbol("a predicate name");
    while (ts.peek().kind == Token::Kind::Symbol)
        lit.args.push_back(ts.next().text);
    ts.expect_rparen("the atom");
    return lit;
}

// Body of a literal whose '(' is already consumed.
inline Literal parse_literal_body(TokenStream& ts) {
    if (ts.at_symbol("not")) {
        ts.next();
        Literal lit = parse_atom(ts);
        lit.negated = true;
        ts.expect_rparen("the negation");
        return lit;
    }
    Literal lit;
    lit.predicate = ts.expect_symbol("a predicate name");
    while (ts.peek().kind == Token::Kind::Symbol)
        lit.args.push_back(ts.next().text);
    ts.expect_rparen("the literal");
    return lit;
}

// Conjunction of literals: (), a single literal, or (and literal*).
inline std::vector<Literal> parse_conjunction(TokenStream& ts) {
    ts.expect_lparen("a formula");
    if (ts.at_symbol("and")) {
        ts.next();
        std::vector<Literal> lits;
        while (ts.peek().kind == Token::Kind::LParen) {
            ts.next();
            lits.push_back(parse_literal_body(ts));
        }
        ts.expect_rparen("the conjunction");
        return lits;
    }
    if (ts.peek().kind == Token::Kind::RParen) {
        ts.next();
        return {};
    }
    return {parse_literal_body(ts)};
}

// Effect grammar, restricted to what normalize_outcomes flattens:
//   top     := literal | (and child*) | oneof
//   child   := literal | oneof
//   oneof   := (oneof alt alt+)
//   alt     := literal | (and literal*)
enum class EffectCtx { Top, InAnd, InOneOf, InOneOfAnd };

inline EffectNode parse_effect(TokenStream& ts, EffectCtx ctx) {
    ts.expect_lparen("an effect");
    if (ts.at_symbol("and")) {
        if (ctx == EffectCtx::InAnd || ctx == EffectCtx::InOneOfAnd)
            ts.fail("nested and in an effect is not supported");
        ts.next();
        EffectNode node;
        node.kind = EffectNode::Kind::And;
        EffectCtx child_ctx = ctx == EffectCtx::InOneOf ? EffectCtx::InOneOfAnd : EffectCtx::InAnd;
        while (ts.peek().kind == Token::Kind::LParen)
            node.children.push_back(parse_effect(ts, child_ctx));
        ts.expect_rparen("the conjunction");
        return node;
    }
    if (ts.at_symbol("oneof")) {
        if (ctx == EffectCtx::InOneOf || ctx == EffectCtx::InOneOfAnd)
            ts.fail("oneof nested inside oneof is not supported");
        ts.next();
        EffectNode node;
        node.kind = EffectNode::Kind::OneOf;
        while (ts.peek().kind == Token::Kind::LParen)
            node.children.push_back(parse_effect(ts, EffectCtx::InOneOf));
        if (node.children.size() < 2)
            ts.fail("oneof needs at least 2 alternatives");
        ts.expect_rparen("the oneof");
        return node;
    }
    if (ts.at_symbol("not")) {
        ts.next();
        EffectNode node;
        node.kind = EffectNode::Kind::Lit;
        node.literal = parse_atom(ts);
        node.literal.negated = true;
        ts.expect_rparen("the negation");
        return node;
    }
    EffectNode node;
    node.kind = EffectNode::Kind::Lit;
    node.literal.predicate = ts.expect_symbol("a predicate name");
    while (ts.peek().kind == Token::Kind::Symbol)
        node.literal.args.push_back(ts.next().text);
    ts.expect_rparen("the effect literal");
    return node;
}

}  // namespace detail

inline const std::set<std::string>& supported_requirements() {
    static const std::set<std::string> reqs = {":strips", ":typing", ":non-deterministic",
                                              ":negative-preconditions", ":equality"};
    return reqs;
}

inline DomainAst parse_domain(const std::string& text) {
    detail::TokenStream ts(tokenize(text));
    DomainAst dom;
    ts.expect_lparen("the domain");
    if (!ts.at_symbol("define"))
        ts.fail("expected 'define'");
    ts.next();
    ts.expect_lparen("(domain name)");
    if (!ts.at_symbol("domain"))
        ts.fail("expected 'domain'");
    ts.next();
    dom.name = ts.expect_symbol("the domain name");
    ts.expect_rparen("(domain name)");

    while (ts.peek().kind == Token::Kind::LParen) {
        ts.next();
        std::string section = ts.expect_symbol("a domain section keyword");
        if (section == ":requirements") {
            while (ts.peek().kind == Token::Kind::Symbol) {
                std::string req = ts.next().text;
                if (!supported_requirements().count(req))
                    ts.fail("unsupported requirement " + req);
                dom.requirements.push_back(std::move(req));
            }
            ts.expect_rparen("the requirements");
        } else if (section == ":types") {
            dom.types = detail::parse_typed_list(ts);
            ts.expect_rparen("the types");
        } else if (section == ":constants") {
            dom.constants = detail::parse_typed_list(ts);
            ts.expect_rparen("the constants");
        } else if (section == ":predicates") {
            while (ts.peek().kind == Token::Kind::LParen) {
                ts.next();
                Predicate pred;
                pred.name = ts.expect_symbol("a predicate name");
                pred.params = detail::parse_typed_list(ts);
                ts.expect_rparen("the predicate");
                dom.predicates.push_back(std::move(pred));
            }
            ts.expect_rparen("the predicates");
        } else if (section == ":action") {
            ActionSchema act;
            act.name = ts.expect_symbol("the action name");
            while (ts.peek().kind == Token::Kind::Symbol) {
                std::string key = ts.next().text;
                if (key == ":parameters") {
                    ts.expect_lparen("the parameter list");
                    act.params = detail::parse_typed_list(ts);
                    ts.expect_rparen("the parameter list");
                } else if (key == ":precondition") {
                    act.precondition = detail::parse_conjunction(ts);
                } else if (key == ":effect") {
                    act.effect = detail::parse_effect(ts, detail::EffectCtx::Top);
                } else {
                    ts.fail("unexpected action keyword " + key);
                }
            }
            ts.expect_rparen("the action");
            dom.actions.push_back(std::move(act));
        } else {
            ts.fail("unexpected domain section " + section);
        }
    }
    ts.expect_rparen("the domain");
    if (ts.peek().kind != Token::Kind::End)
        ts.fail("trailing input after the domain");

    // Bind check: every variable mentioned must be a declared parameter.
    for (const ActionSchema& act : dom.actions) {
        auto bound = [&](const std::string& arg) {
            if (arg.empty() || arg[0] != '?')
                return true;
            for (const TypedName& p : act.params)
                if (p.name == arg)
                    return true;
            return false;
        };
        auto check_lit = [&](const Literal& lit) {
            for (const std::string& arg : lit.args)
                if (!bound(arg))
                    throw ParseError("unbound variable " + arg + " in action " + act.name, 1, 1);
        };
        for (const Literal& lit : act.precondition)
            check_lit(lit);
        std::vector<const EffectNode*> stack{&act.effect};
        while (!stack.empty()) {
            const EffectNode* n = stack.back();
            stack.pop_back();
            if (n->kind == EffectNode::Kind::Lit)
                check_lit(n->literal);
            for (const EffectNode& c : n->children)
                stack.push_back(&c);
        }
    }
    return dom;
}

inline ProblemAst parse_problem(const std::string& text, const DomainAst& dom) {
    detail::TokenStream ts(tokenize(text));
    ProblemAst prob;
    ts.expect_lparen("the problem");
    if (!ts.at_symbol("define"))
        ts.fail("expected 'define'");
    ts.next();
    ts.expect_lparen("(problem name)");
    if (!ts.at_symbol("problem"))
        ts.fail("expected 'problem'");
    ts.next();
    prob.name = ts.expect_symbol("the problem name");
    ts.expect_rparen("(problem name)");

    while (ts.peek().kind == Token::Kind::LParen) {
        ts.next();
        std::string section = ts.expect_symbol("a problem section keyword");
        if (section == ":domain") {
            prob.domain_name = ts.expect_symbol("the domain name");
            if (prob.domain_name != dom.name)
                ts.fail("problem references domain '" + prob.domain_name +
                        "' but the parsed domain is '" + dom.name + "'");
            ts.expect_rparen("the domain reference");
        } else if (section == ":objects") {
            prob.objects = detail::parse_typed_list(ts);
            ts.expect_rparen("the objects");
        } else if (section == ":init") {
            while (ts.peek().kind == Token::Kind::LParen)
                prob.init.push_back(detail::parse_atom(ts));
            ts.expect_rparen("the init");
        } else if (section == ":goal") {
            prob.goal = detail::parse_conjunction(ts);
            ts.expect_rparen("the goal");
        } else {
            ts.fail("unexpected problem section " + section);
        }
    }
    ts.expect_rparen("the problem");
    if (ts.peek().kind != Token::Kind::End)
        ts.fail("trailing input after the problem");

    // Consistency checks against the domain.
    auto known_type = [&](const std::string& t) {
        if (t == "object")
            return true;
        for (const TypedName& ty : dom.types)
            if (ty.name == t)
                return true;
        return false;
    };
    for (const TypedName& obj : prob.objects)
        if (!known_type(obj.type))
            throw ParseError("object " + obj.name + " has undeclared type " + obj.type, 1, 1);
    auto known_object = [&](const std::string& name) {
        for (const TypedName& obj : prob.objects)
            if (obj.name == name)
                return true;
        for (const TypedName& c : dom.constants)
            if (c.name == name)
                return true;
        return false;
    };
    auto check_ground = [&](const Literal& lit, const std::string& where) {
        if (lit.predicate == "=")
            return;  // equality is builtin
        const Predicate* pred = nullptr;
        for (const Predicate& p : dom.predicates)
            if (p.name == lit.predicate)
                pred = &p;
        if (!pred)
            throw ParseError("unknown predicate " + lit.predicate + " in " + where, 1, 1);
        for (const std::string& arg : lit.args)
            if (!known_object(arg))
                throw ParseError("unknown object " + arg + " in " + where, 1, 1);
        if (pred->params.size() != lit.args.size())
            throw ParseError("predicate " + lit.predicate + " expects " +
                                 std::to_string(pred->params.size()) + " arguments in " + where,
                             1, 1);
    };
    for (const Literal& lit : prob.init) {
        if (lit.negated)
            throw ParseError("negated init fact " + lit.predicate, 1, 1);
        check_ground(lit, "init");
    }
    for (const Literal& lit : prob.goal)
        check_ground(lit, "goal");
    return prob;
}

// ---------------------------------------------------------------------------
// Pretty printer. Canonical layout, so parse(print(ast)) = ast.
// ---------------------------------------------------------------------------

namespace detail {

inline void print_typed_list(std::ostream& out, const std::vector<TypedName>& list) {
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i)
            out << " ";
        out << list[i].name << " - " << list[i].type;
    }
}

inline void print_literal(std::ostream& out, const Literal& lit) {
    if (lit.negated)
        out << "(not ";
    out << "(" << lit.predicate;
    for (const std::string& arg : lit.args)
        out << " " << arg;
    out << ")";
    if (lit.negated)
        out << ")";
}

inline void print_effect(std::ostream& out, const EffectNode& node) {
    switch (node.kind) {
    case EffectNode::Kind::Lit:
        print_literal(out, node.literal);
        break;
    case EffectNode::Kind::And:
        out << "(and";
        for (const EffectNode& c : node.children) {
            out << " ";
            print_effect(out, c);
        }
        out << ")";
        break;
    case EffectNode::Kind::OneOf:
        out << "(oneof";
        for (const EffectNode& c : node.children) {
            out << " ";
            print_effect(out, c);
        }
        out << ")";
        break;
    }
}

}  // namespace detail

inline std::string print_domain(const DomainAst& dom) {
    std::ostringstream out;
    out << "(define (domain " << dom.name << ")\n";
    if (!dom.requirements.empty()) {
        out << "  (:requirements";
        for (const std::string& r : dom.requirements)
            out << " " << r;
        out << ")\n";
    }
    if (!dom.types.empty()) {
        out << "  (:types ";
        detail::print_typed_list(out, dom.types);
        out << ")\n";
    }
    if (!dom.constants.empty()) {
        out << "  (:constants ";
        detail::print_typed_list(out, dom.constants);
        out << ")\n";
    }
    if (!dom.predicates.empty()) {
        out << "  (:predicates\n";
        for (const Predicate& p : dom.predicates) {
            out << "    (" << p.name;
            if (!p.params.empty()) {
                out << " ";
                detail::print_typed_list(out, p.params);
            }
            out << ")\n";
        }
        out << "  )\n";
    }
    for (const ActionSchema& act : dom.actions) {
        out << "  (:action " << act.name << "\n";
        out << "    :parameters (";
        detail::print_typed_list(out, act.params);
        out << ")\n";
        out << "    :precondition (and";
        for (const Literal& lit : act.precondition) {
            out << " ";
            detail::print_literal(out, lit);
        }
        out << ")\n";
        out << "    :effect ";
        detail::print_effect(out, act.effect);
        out << "\n  )\n";
    }
    out << ")\n";
    return out.str();
}

inline std::string print_problem(const ProblemAst& prob) {
    std::ostringstream out;
    out << "(define (problem " << prob.name << ")\n";
    out << "  (:domain " << prob.domain_name << ")\n";
    if (!prob.objects.empty()) {
        out << "  (:objects ";
        detail::print_typed_list(out, prob.objects);
        out << ")\n";
    }
    out << "  (:init";
    for (const Literal& lit : prob.init) {
        out << " ";
        detail::print_literal(out, lit);
    }
    out << ")\n";
    out << "  (:goal (and";
    for (const Literal& lit : prob.goal) {
        out << " ";
        detail::print_literal(out, lit);
    }
    out << "))\n";
    out << ")\n";
    return out.str();
}

// Flatten an effect tree into its outcome conjunctions: the cross product of
// oneof groups under the top-level and.
inline std::vector<std::vector<Literal>> normalize_outcomes(const EffectNode& effect) {
    auto leaf_literals = [](const EffectNode& node) {
        std::vector<Literal> lits;
        if (node.kind == EffectNode::Kind::Lit) {
            lits.push_back(node.literal);
        } else {
            for (const EffectNode& c : node.children)
                lits.push_back(c.literal);
        }
        return lits;
    };
    std::vector<std::vector<std::vector<Literal>>> groups;  // alternatives per factor
    if (effect.kind == EffectNode::Kind::And) {
        std::vector<Literal> fixed;
        for (const EffectNode& c : effect.children) {
            if (c.kind == EffectNode::Kind::OneOf) {
                std::vector<std::vector<Literal>> alts;
                for (const EffectNode& alt : c.children)
                    alts.push_back(leaf_literals(alt));
                groups.push_back(std::move(alts));
            } else {
                fixed.push_back(c.literal);
            }
        }
        groups.insert(groups.begin(), {std::move(fixed)});
    } else if (effect.kind == EffectNode::Kind::OneOf) {
        std::vector<std::vector<Literal>> alts;
        for (const EffectNode& alt : effect.children)
            alts.push_back(leaf_literals(alt));
        groups.push_back(std::move(alts));
    } else {
        groups.push_back({{effect.literal}});
    }

    std::vector<std::vector<Literal>> outcomes{{}};
    for (const auto& group : groups) {
        std::vector<std::vector<Literal>> next;
        for (const auto& partial : outcomes)
            for (const auto& alt : group) {
                std::vector<Literal> merged = partial;
                merged.insert(merged.end(), alt.begin(), alt.end());
                next.push_back(std::move(merged));
            }
        outcomes = std::move(next);
    }
    return outcomes;
}

}  // namespace fond::pddl

#endif

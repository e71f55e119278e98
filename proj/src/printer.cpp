#include "azc/parser.hpp"

#include <sstream>

namespace azc {

namespace {

// Printing precedence, low to high. A child below the level its slot
// requires gets parenthesized.
enum Level : int {
    kSeq = 0,
    kStatement = 1,
    kComparison = 2,
    kAdditive = 3,
    kMultiplicative = 4,
    kUnary = 5,
    kPostfix = 6,
};

struct InfixSugar {
    const char* symbol;
    int level;
};

// Desugared builtin calls print back as their infix form; `$` identifiers
// are not lexable.
const InfixSugar* infix_sugar(const std::string& builtin) {
    static const std::map<std::string, InfixSugar> table = {
        {"$add", {"+", kAdditive}},      {"$sub", {"-", kAdditive}},
        {"$mul", {"*", kMultiplicative}}, {"$eq", {"==", kComparison}},
        {"$gt", {">", kComparison}},
    };
    auto it = table.find(builtin);
    return it == table.end() ? nullptr : &it->second;
}

class Printer {
  public:
    std::string print(const TermRef& t) {
        std::ostringstream out;
        emit(out, t, kSeq);
        return out.str();
    }

  private:
    void emit(std::ostringstream& out, const TermRef& t, int min_level) {
        int level = level_of(t);
        bool parens = level < min_level;
        if (parens) out << "(";
        emit_node(out, t);
        if (parens) out << ")";
    }

    int level_of(const TermRef& t) {
        if (term_as<SeqTerm>(t)) return kSeq;
        if (term_as<AssignVarTerm>(t) || term_as<AssignFieldTerm>(t) ||
            term_as<ReturnTerm>(t)) {
            return kStatement;
        }
        if (const auto* c = term_as<CallTerm>(t)) {
            if (const auto* sugar = sugar_of(c)) return sugar->level;
            if (is_not_call(c)) return kUnary;
            return kPostfix;
        }
        if (term_as<FieldAccessTerm>(t)) return kPostfix;
        return kPostfix + 1; // self-delimiting: atoms, vars, let, if, fun, new
    }

    const InfixSugar* sugar_of(const CallTerm* c) {
        const auto* callee = term_as<VarTerm>(c->callee);
        if (!callee) return nullptr;
        const InfixSugar* sugar = infix_sugar(callee->name);
        if (!sugar) return nullptr;
        if (c->args.size() != 2 || c->args[0].name != "lhs" || c->args[1].name != "rhs" ||
            c->args[0].op != AssignOp::Copy || c->args[1].op != AssignOp::Copy) {
            return nullptr;
        }
        return sugar;
    }

    bool is_not_call(const CallTerm* c) {
        const auto* callee = term_as<VarTerm>(c->callee);
        return callee && callee->name == "$not" && c->args.size() == 1 &&
               c->args[0].name == "value" && c->args[0].op == AssignOp::Copy;
    }

    void emit_node(std::ostringstream& out, const TermRef& t) {
        if (const auto* a = term_as<AtomTerm>(t)) {
            out << atom_to_string(a->value);
        } else if (const auto* v = term_as<VarTerm>(t)) {
            out << v->name;
        } else if (const auto* f = term_as<FieldAccessTerm>(t)) {
            emit(out, f->target, kPostfix);
            out << "." << f->field;
        } else if (const auto* n = term_as<NewTerm>(t)) {
            out << "new " << format_type(n->type);
        } else if (const auto* l = term_as<LetTerm>(t)) {
            out << "let " << l->name << ": " << format_type(l->type) << " { ";
            emit(out, l->body, kSeq);
            out << " }";
        } else if (const auto* fn = term_as<LambdaTerm>(t)) {
            const auto* ft = std::get_if<FunctionType>(&fn->type->payload);
            out << "fun(";
            for (size_t i = 0; i < ft->params.size(); ++i) {
                if (i) out << ", ";
                out << ft->params[i].first << ": " << format_type(ft->params[i].second);
            }
            out << ") -> " << format_type(ft->codomain) << " { ";
            emit(out, fn->body, kSeq);
            out << " }";
        } else if (const auto* av = term_as<AssignVarTerm>(t)) {
            emit(out, av->lhs, kPostfix);
            out << " " << assign_op_text(av->op) << " ";
            emit(out, av->value, kStatement);
        } else if (const auto* af = term_as<AssignFieldTerm>(t)) {
            emit(out, af->lhs, kPostfix);
            out << " " << assign_op_text(af->op) << " ";
            emit(out, af->value, kStatement);
        } else if (const auto* c = term_as<CallTerm>(t)) {
            emit_call(out, c);
        } else if (const auto* r = term_as<ReturnTerm>(t)) {
            out << "return " << assign_op_text(r->op) << " ";
            emit(out, r->value, kStatement);
        } else if (const auto* i = term_as<IfTerm>(t)) {
            out << "if ";
            emit(out, i->cond, kComparison);
            out << " { ";
            emit(out, i->then_branch, kSeq);
            out << " } else ";
            if (term_as<IfTerm>(i->else_branch)) {
                emit_node(out, i->else_branch);
            } else {
                out << "{ ";
                emit(out, i->else_branch, kSeq);
                out << " }";
            }
        } else if (const auto* s = term_as<SeqTerm>(t)) {
            emit(out, s->first, kStatement);
            out << "; ";
            emit(out, s->second, kSeq); // right-associated, no parens
        }
    }

    void emit_call(std::ostringstream& out, const CallTerm* c) {
        if (const auto* sugar = sugar_of(c)) {
            emit(out, c->args[0].value, sugar->level);
            out << " " << sugar->symbol << " ";
            emit(out, c->args[1].value, sugar->level + 1);
            return;
        }
        if (is_not_call(c)) {
            out << "not ";
            emit(out, c->args[0].value, kUnary);
            return;
        }
        emit(out, c->callee, kPostfix);
        out << "(";
        for (size_t i = 0; i < c->args.size(); ++i) {
            if (i) out << ", ";
            out << c->args[i].name << " " << assign_op_text(c->args[i].op) << " ";
            emit(out, c->args[i].value, kStatement);
        }
        out << ")";
    }
};

} // namespace

std::string format_term(const TermRef& term) {
    return Printer().print(term);
}

} // namespace azc

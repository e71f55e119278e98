#include "azc/ast.hpp"

#include <map>

namespace azc {

const char* assign_op_text(AssignOp op) {
    switch (op) {
    case AssignOp::Alias: return "&-";
    case AssignOp::Copy: return ":=";
    case AssignOp::Move: return "<-";
    }
    return "?";
}

std::string atom_to_string(const AtomValue& v) {
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    return std::to_string(std::get<int64_t>(v));
}

bool term_equal(const TermRef& a, const TermRef& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;

    if (const auto* x = term_as<AtomTerm>(a)) {
        return x->value == term_as<AtomTerm>(b)->value;
    }
    if (const auto* x = term_as<VarTerm>(a)) {
        return x->name == term_as<VarTerm>(b)->name;
    }
    if (const auto* x = term_as<FieldAccessTerm>(a)) {
        const auto* y = term_as<FieldAccessTerm>(b);
        return x->field == y->field && term_equal(x->target, y->target);
    }
    if (const auto* x = term_as<NewTerm>(a)) {
        return type_equal(x->type, term_as<NewTerm>(b)->type);
    }
    if (const auto* x = term_as<LetTerm>(a)) {
        const auto* y = term_as<LetTerm>(b);
        return x->name == y->name && type_equal(x->type, y->type) &&
               term_equal(x->body, y->body);
    }
    if (const auto* x = term_as<LambdaTerm>(a)) {
        const auto* y = term_as<LambdaTerm>(b);
        return x->params == y->params && type_equal(x->type, y->type) &&
               term_equal(x->body, y->body);
    }
    if (const auto* x = term_as<AssignVarTerm>(a)) {
        const auto* y = term_as<AssignVarTerm>(b);
        return x->op == y->op && term_equal(x->lhs, y->lhs) && term_equal(x->value, y->value);
    }
    if (const auto* x = term_as<AssignFieldTerm>(a)) {
        const auto* y = term_as<AssignFieldTerm>(b);
        return x->op == y->op && term_equal(x->lhs, y->lhs) && term_equal(x->value, y->value);
    }
    if (const auto* x = term_as<CallTerm>(a)) {
        const auto* y = term_as<CallTerm>(b);
        if (x->args.size() != y->args.size()) return false;
        if (!term_equal(x->callee, y->callee)) return false;
        for (size_t i = 0; i < x->args.size(); ++i) {
            if (x->args[i].name != y->args[i].name || x->args[i].op != y->args[i].op ||
                !term_equal(x->args[i].value, y->args[i].value)) {
                return false;
            }
        }
        return true;
    }
    if (const auto* x = term_as<ReturnTerm>(a)) {
        const auto* y = term_as<ReturnTerm>(b);
        return x->op == y->op && term_equal(x->value, y->value);
    }
    if (const auto* x = term_as<IfTerm>(a)) {
        const auto* y = term_as<IfTerm>(b);
        return term_equal(x->cond, y->cond) && term_equal(x->then_branch, y->then_branch) &&
               term_equal(x->else_branch, y->else_branch);
    }
    if (const auto* x = term_as<SeqTerm>(a)) {
        const auto* y = term_as<SeqTerm>(b);
        return term_equal(x->first, y->first) && term_equal(x->second, y->second);
    }
    return false;
}

TermRef rename_identifiers(const TermRef& t, const std::map<std::string, std::string>& subst) {
    if (!t || subst.empty()) return t;

    auto rename = [&subst](const std::string& name) -> const std::string* {
        auto it = subst.find(name);
        return it == subst.end() ? nullptr : &it->second;
    };

    if (const auto* v = term_as<VarTerm>(t)) {
        if (const auto* n = rename(v->name)) return make_term(t->span, VarTerm{*n});
        return t;
    }
    if (const auto* f = term_as<FieldAccessTerm>(t)) {
        TermRef target = rename_identifiers(f->target, subst);
        if (target == f->target) return t;
        return make_term(t->span, FieldAccessTerm{target, f->field});
    }
    if (const auto* a = term_as<AssignVarTerm>(t)) {
        TermRef lhs = rename_identifiers(a->lhs, subst);
        TermRef value = rename_identifiers(a->value, subst);
        if (lhs == a->lhs && value == a->value) return t;
        return make_term(t->span, AssignVarTerm{lhs, a->op, value});
    }
    if (const auto* a = term_as<AssignFieldTerm>(t)) {
        TermRef lhs = rename_identifiers(a->lhs, subst);
        TermRef value = rename_identifiers(a->value, subst);
        if (lhs == a->lhs && value == a->value) return t;
        return make_term(t->span, AssignFieldTerm{lhs, a->op, value});
    }
    if (const auto* l = term_as<LetTerm>(t)) {
        // Locals never collide with the renamed parameters (shadowing is
        // rejected statically), so only the body needs the walk.
        TermRef body = rename_identifiers(l->body, subst);
        if (body == l->body) return t;
        return make_term(t->span, LetTerm{l->name, l->type, body});
    }
    if (term_as<LambdaTerm>(t)) {
        // Lambda bodies reference only their own parameters and locals.
        return t;
    }
    if (const auto* c = term_as<CallTerm>(t)) {
        TermRef callee = rename_identifiers(c->callee, subst);
        bool changed = callee != c->callee;
        std::vector<CallArg> args;
        args.reserve(c->args.size());
        for (const auto& arg : c->args) {
            // Argument names label the callee's own parameters; only the
            // value term lives in this scope.
            TermRef value = rename_identifiers(arg.value, subst);
            changed = changed || value != arg.value;
            args.push_back(CallArg{arg.name, arg.op, value, arg.span});
        }
        if (!changed) return t;
        return make_term(t->span, CallTerm{callee, std::move(args)});
    }
    if (const auto* r = term_as<ReturnTerm>(t)) {
        TermRef value = rename_identifiers(r->value, subst);
        if (value == r->value) return t;
        return make_term(t->span, ReturnTerm{r->op, value});
    }
    if (const auto* i = term_as<IfTerm>(t)) {
        TermRef cond = rename_identifiers(i->cond, subst);
        TermRef th = rename_identifiers(i->then_branch, subst);
        TermRef el = rename_identifiers(i->else_branch, subst);
        if (cond == i->cond && th == i->then_branch && el == i->else_branch) return t;
        return make_term(t->span, IfTerm{cond, th, el});
    }
    if (const auto* s = term_as<SeqTerm>(t)) {
        TermRef first = rename_identifiers(s->first, subst);
        TermRef second = rename_identifiers(s->second, subst);
        if (first == s->first && second == s->second) return t;
        return make_term(t->span, SeqTerm{first, second});
    }
    return t; // atoms, new
}

} // namespace azc

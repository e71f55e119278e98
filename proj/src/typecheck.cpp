#include "azc/typecheck.hpp"

#include <cassert>

namespace azc {

const TypeRef& TypeEnv::of(const Term& t) const {
    auto it = nodes.find(&t);
    assert(it != nodes.end() && "term was not covered by build_type_env");
    return it->second;
}

const TypeRef* TypeEnv::try_of(const Term& t) const {
    auto it = nodes.find(&t);
    return it == nodes.end() ? nullptr : &it->second;
}

namespace {

TypeRef int_type() {
    static const TypeRef t = make_atomic("Int", QualifierSet::own_mut());
    return t;
}

TypeRef bool_type() {
    static const TypeRef t = make_atomic("Bool", QualifierSet::own_mut());
    return t;
}

TypeRef binary_int_fn(const TypeRef& result) {
    return make_function({{"lhs", int_type()}, {"rhs", int_type()}}, result);
}

void validate_type(const TypeRef& t, const SourceSpan& span) {
    if (!well_formed(t->qualifiers)) {
        throw StaticError(make_static_diag(StaticErrorKind::MalformedQualifiers, span,
                                           "qualifier set is not well-formed"));
    }
    if (const auto* fn = std::get_if<FunctionType>(&t->payload)) {
        for (const auto& [_, pt] : fn->params) validate_type(pt, span);
        validate_type(fn->codomain, span);
    } else if (const auto* st = std::get_if<StructureType>(&t->payload)) {
        for (const auto& [_, ft] : st->fields) validate_type(ft, span);
    } else if (const auto* rb = std::get_if<RecBinderType>(&t->payload)) {
        validate_type(rb->body, span);
    }
}

class Checker {
  public:
    Checker(TypeEnv& env, const TypeScope& globals) : env_(env), globals_(globals) {}

    void check_root(const TermRef& t, const TypeScope& roots, const TypeRef& ret_type) {
        scopes_.clear();
        scopes_.push_back(roots);
        visible_from_ = 0;
        ret_type_ = ret_type;
        visit(t);
    }

  private:
    TypeRef store(const TermRef& t, TypeRef type) {
        env_.nodes[t.get()] = type;
        return type;
    }

    TypeRef resolve(const std::string& name, const SourceSpan& span) {
        for (size_t i = scopes_.size(); i > visible_from_; --i) {
            auto found = scopes_[i - 1].find(name);
            if (found != scopes_[i - 1].end()) return found->second;
        }
        auto g = globals_.find(name);
        if (g != globals_.end()) return g->second;
        // Declared, but on the far side of a lambda boundary.
        for (size_t i = visible_from_; i > 0; --i) {
            if (scopes_[i - 1].contains(name)) {
                throw StaticError(make_static_diag(
                    StaticErrorKind::CapturedVariable, span,
                    "`" + name + "` is declared outside this function; functions do not "
                    "capture identifiers"));
            }
        }
        throw StaticError(make_static_diag(StaticErrorKind::UnknownVariable, span,
                                           "`" + name + "` is not declared"));
    }

    TypeRef visit(const TermRef& t) {
        if (const auto* a = term_as<AtomTerm>(t)) {
            bool is_bool = std::holds_alternative<bool>(a->value);
            return store(t, is_bool ? bool_type() : int_type());
        }
        if (const auto* v = term_as<VarTerm>(t)) {
            return store(t, resolve(v->name, t->span));
        }
        if (const auto* f = term_as<FieldAccessTerm>(t)) {
            TypeRef target = visit(f->target);
            TypeRef st = unroll_to_structure(target);
            if (!st) {
                throw StaticError(make_static_diag(StaticErrorKind::UnknownField, t->span,
                                                   "field access on a non-structure type"));
            }
            const auto& fields = std::get<StructureType>(st->payload).fields;
            for (const auto& [name, ft] : fields) {
                if (name == f->field) return store(t, ft);
            }
            throw StaticError(make_static_diag(StaticErrorKind::UnknownField, t->span,
                                               "type has no field `" + f->field + "`"));
        }
        if (const auto* n = term_as<NewTerm>(t)) {
            validate_type(n->type, t->span);
            if (!unroll_to_structure(n->type)) {
                throw StaticError(make_static_diag(StaticErrorKind::NotAStructureType, t->span,
                                                   "new requires a structure type"));
            }
            return store(t, n->type);
        }
        if (const auto* l = term_as<LetTerm>(t)) {
            validate_type(l->type, t->span);
            scopes_.emplace_back();
            scopes_.back()[l->name] = l->type;
            visit(l->body);
            scopes_.pop_back();
            return store(t, l->type);
        }
        if (const auto* fn = term_as<LambdaTerm>(t)) {
            validate_type(fn->type, t->span);
            const auto& ft = std::get<FunctionType>(fn->type->payload);
            // The body sees the prelude and its own declarations only.
            size_t saved_visible = visible_from_;
            TypeRef saved_ret = ret_type_;
            scopes_.emplace_back();
            visible_from_ = scopes_.size() - 1;
            for (const auto& [name, pt] : ft.params) scopes_.back()[name] = pt;
            ret_type_ = ft.codomain;
            visit(fn->body);
            ret_type_ = saved_ret;
            visible_from_ = saved_visible;
            scopes_.pop_back();
            return store(t, fn->type);
        }
        if (const auto* av = term_as<AssignVarTerm>(t)) {
            visit(av->value); // rhs first, mirroring evaluation order
            TypeRef lhs = visit(av->lhs);
            return store(t, lhs);
        }
        if (const auto* af = term_as<AssignFieldTerm>(t)) {
            visit(af->value);
            TypeRef lhs = visit(af->lhs);
            return store(t, lhs);
        }
        if (const auto* c = term_as<CallTerm>(t)) {
            TypeRef callee = visit(c->callee);
            TypeRef fn = unroll_to_function(callee);
            if (!fn) {
                throw StaticError(make_static_diag(StaticErrorKind::NotAFunctionType,
                                                   c->callee->span,
                                                   "callee type has no codomain"));
            }
            for (const auto& arg : c->args) visit(arg.value);
            return store(t, std::get<FunctionType>(fn->payload).codomain);
        }
        if (const auto* r = term_as<ReturnTerm>(t)) {
            visit(r->value);
            if (ret_type_) return store(t, ret_type_);
            // Top-level return: no type; the evaluator reports MissingReturn.
            return nullptr;
        }
        if (const auto* i = term_as<IfTerm>(t)) {
            visit(i->cond);
            TypeRef then_type = visit(i->then_branch);
            visit(i->else_branch);
            if (then_type) return store(t, then_type);
            return nullptr;
        }
        if (const auto* s = term_as<SeqTerm>(t)) {
            visit(s->first);
            TypeRef second = visit(s->second);
            if (second) return store(t, second);
            return nullptr;
        }
        return nullptr;
    }

    TypeEnv& env_;
    const TypeScope& globals_;
    std::vector<TypeScope> scopes_;
    size_t visible_from_ = 0; // scopes below this index sit across a lambda boundary
    TypeRef ret_type_; // null outside a function body
};

void collect_call_diags(const TermRef& t, const TypeEnv& env, std::vector<Diagnostic>& out) {
    if (!t) return;
    if (const auto* c = term_as<CallTerm>(t)) {
        collect_call_diags(c->callee, env, out);
        const TypeRef* callee_type = env.try_of(*c->callee);
        if (callee_type) {
            if (TypeRef fn = unroll_to_function(*callee_type)) {
                const auto& params = std::get<FunctionType>(fn->payload).params;
                for (const auto& [pname, _] : params) {
                    bool found = false;
                    for (const auto& arg : c->args) found = found || arg.name == pname;
                    if (!found) {
                        out.push_back(make_static_diag(
                            StaticErrorKind::MissingArgument, t->span,
                            "call is missing an argument for parameter `" + pname + "`"));
                    }
                }
                for (const auto& arg : c->args) {
                    bool found = false;
                    for (const auto& [pname, _] : params) found = found || pname == arg.name;
                    if (!found) {
                        out.push_back(make_static_diag(
                            StaticErrorKind::UnknownParameterName, arg.span,
                            "callee declares no parameter `" + arg.name + "`"));
                    }
                }
            }
        }
        for (const auto& arg : c->args) collect_call_diags(arg.value, env, out);
        return;
    }
    if (const auto* f = term_as<FieldAccessTerm>(t)) return collect_call_diags(f->target, env, out);
    if (const auto* l = term_as<LetTerm>(t)) return collect_call_diags(l->body, env, out);
    if (const auto* fn = term_as<LambdaTerm>(t)) return collect_call_diags(fn->body, env, out);
    if (const auto* av = term_as<AssignVarTerm>(t)) {
        collect_call_diags(av->lhs, env, out);
        return collect_call_diags(av->value, env, out);
    }
    if (const auto* af = term_as<AssignFieldTerm>(t)) {
        collect_call_diags(af->lhs, env, out);
        return collect_call_diags(af->value, env, out);
    }
    if (const auto* r = term_as<ReturnTerm>(t)) return collect_call_diags(r->value, env, out);
    if (const auto* i = term_as<IfTerm>(t)) {
        collect_call_diags(i->cond, env, out);
        collect_call_diags(i->then_branch, env, out);
        return collect_call_diags(i->else_branch, env, out);
    }
    if (const auto* s = term_as<SeqTerm>(t)) {
        collect_call_diags(s->first, env, out);
        return collect_call_diags(s->second, env, out);
    }
}

} // namespace

const TypeScope& prelude_types() {
    static const TypeScope scope = [] {
        TypeScope s;
        s["$add"] = binary_int_fn(int_type());
        s["$sub"] = binary_int_fn(int_type());
        s["$mul"] = binary_int_fn(int_type());
        s["$eq"] = binary_int_fn(bool_type());
        s["$gt"] = binary_int_fn(bool_type());
        s["$not"] = make_function({{"value", bool_type()}}, bool_type());
        return s;
    }();
    return scope;
}

TypeEnv build_type_env(const TermRef& program, const TypeScope& globals) {
    TypeEnv env;
    // `$`-prefixed names are the prelude and stay visible inside lambda
    // bodies; everything else behaves like an outermost user scope (the
    // harness's root bindings) that lambdas must not capture.
    TypeScope prelude;
    TypeScope roots;
    for (const auto& [name, type] : globals) {
        (name.starts_with("$") ? prelude : roots)[name] = type;
    }
    Checker checker(env, prelude);
    checker.check_root(program, roots, nullptr);
    return env;
}

void extend_type_env(TypeEnv& env, const TermRef& body, const TypeScope& globals,
                     const TypeScope& locals, const TypeRef& ret_type) {
    Checker checker(env, globals);
    checker.check_root(body, locals, ret_type);
}

std::vector<Diagnostic> check_arity_and_names(const TermRef& program, const TypeEnv& env) {
    std::vector<Diagnostic> diags;
    collect_call_diags(program, env, diags);
    return diags;
}

} // namespace azc

#include "azc/evaluator.hpp"

#include <cassert>
#include <sstream>

#include "azc/parser.hpp"

namespace azc {

const std::string kReturnIdent = "$ret";

std::string TraceEvent::to_line() const {
    std::ostringstream out;
    out << "rule=" << rule << " span=" << span.line << ":" << span.column;
    for (const auto& [k, v] : detail) out << " " << k << "=" << v;
    return out.str();
}

Evaluator::Evaluator(EvalOptions options) : options_(options) {
    install_prelude();
}

void Evaluator::install_prelude() {
    for (const auto& [name, type] : prelude_types()) {
        Location l = ctx_.fresh_location();
        ctx_.set_value(l, BuiltinValue{name, type});
        RefId r = ctx_.fresh_ref();
        ctx_.set_location(r, l);
        ctx_.set_caps(r, initial_capabilities(type));
        ctx_.bind_var(name, r);
        roots_[name] = type;
    }
}

RefId Evaluator::declare_root(const std::string& name, const TypeRef& type) {
    RefId r = ctx_.fresh_ref();
    ctx_.bind_var(name, r);
    ctx_.set_location(r, Location{0});
    ctx_.set_caps(r, CapabilitySet{});
    roots_[name] = type;
    return r;
}

RefId Evaluator::eval_program(const TermRef& term) {
    TypeEnv env = build_type_env(term, roots_);
    for (auto& [node, type] : env.nodes) env_.nodes[node] = type;
    auto diags = check_arity_and_names(term, env_);
    if (!diags.empty()) throw StaticError(diags.front());
    return eval(term);
}

void Evaluator::emit(const TermRef& at, std::string rule,
                     std::vector<std::pair<std::string, std::string>> detail) {
    if (!options_.trace) return;
    trace_.push_back(TraceEvent{std::move(rule), at->span, std::move(detail)});
}

std::string Evaluator::subject_of(const TermRef& operand, RefId r) const {
    if (const auto* v = term_as<VarTerm>(operand)) return v->name;
    if (term_as<FieldAccessTerm>(operand)) return format_term(operand);
    return ref_name(r);
}

void Evaluator::require_readable(RefId r, const TermRef& at, const std::string& subject) {
    if (!readable(r, ctx_)) {
        throw RuntimeError(RuntimeErrorKind::NotReadable, at->span, subject,
                           classify_state(r, ctx_));
    }
}

void Evaluator::require_move_source(RefId r, const SourceSpan& span,
                                    const std::string& subject) {
    // The literal unique() predicate does not inspect r's own capabilities,
    // but a borrowed reference does not own its object and the transition
    // matrix forbids moving from it. Both failures report NotUnique.
    if (!unique(r, ctx_) || ctx_.caps_of(r).has_borrow()) {
        throw RuntimeError(RuntimeErrorKind::NotUnique, span, subject,
                           classify_state(r, ctx_));
    }
}

RefId Evaluator::eval(const TermRef& term) {
    if (const auto* n = term_as<AtomTerm>(term)) return eval_atom(term, *n);
    if (const auto* n = term_as<VarTerm>(term)) return eval_var(term, *n);
    if (const auto* n = term_as<FieldAccessTerm>(term)) return eval_field(term, *n);
    if (const auto* n = term_as<NewTerm>(term)) return eval_new(term, *n);
    if (const auto* n = term_as<LetTerm>(term)) return eval_let(term, *n);
    if (const auto* n = term_as<LambdaTerm>(term)) return eval_fun(term, *n);
    if (const auto* n = term_as<AssignVarTerm>(term)) {
        return eval_assign(term, n->lhs, n->op, n->value);
    }
    if (const auto* n = term_as<AssignFieldTerm>(term)) {
        return eval_assign(term, n->lhs, n->op, n->value);
    }
    if (const auto* n = term_as<CallTerm>(term)) return eval_call(term, *n);
    if (const auto* n = term_as<ReturnTerm>(term)) return eval_return(term, *n);
    if (const auto* n = term_as<IfTerm>(term)) return eval_if(term, *n);
    if (const auto* n = term_as<SeqTerm>(term)) return eval_seq(term, *n);
    assert(false && "unhandled term variant");
    return RefId{};
}

// E-Let: a declaration associates the name with a fresh reference bound to
// the null location and no capabilities; the result is the body's result.
// On exit (default mode) the binding is released so any borrow fragment it
// held returns to its owner; a shadowed binding from a re-entered scope is
// put back.
RefId Evaluator::eval_let(const TermRef& t, const LetTerm& node) {
    RefId rx = ctx_.fresh_ref();
    std::optional<RefId> shadowed;
    auto prev = ctx_.vars().find(node.name);
    if (prev != ctx_.vars().end()) shadowed = prev->second;
    ctx_.bind_var(node.name, rx);
    ctx_.set_location(rx, Location{0});
    ctx_.set_caps(rx, CapabilitySet{});

    RefId result = eval(node.body);
    emit(t, "E-Let",
         {{"name", node.name}, {"ref", ref_name(rx)}, {"result", ref_name(result)}});
    if (!options_.strict_rules) release_binding(node.name, ctx_, shadowed);
    return result;
}

RefId Evaluator::eval_var(const TermRef& t, const VarTerm& node) {
    auto it = ctx_.vars().find(node.name);
    if (it == ctx_.vars().end()) {
        throw RuntimeError(RuntimeErrorKind::UndefinedVariable, t->span, node.name);
    }
    emit(t, "E-Var", {{"name", node.name}, {"ref", ref_name(it->second)}});
    return it->second;
}

RefId Evaluator::eval_atom(const TermRef& t, const AtomTerm& node) {
    Location l = ctx_.fresh_location();
    ctx_.set_value(l, node.value);
    RefId r = ctx_.fresh_ref();
    ctx_.set_location(r, l);
    ctx_.set_caps(r, initial_capabilities(env_.of(*t)));
    emit(t, "E-Atom",
         {{"ref", ref_name(r)}, {"loc", loc_name(l)}, {"value", atom_to_string(node.value)}});
    return r;
}

RefId Evaluator::eval_fun(const TermRef& t, const LambdaTerm& node) {
    Location l = ctx_.fresh_location();
    ctx_.set_value(l, FunctionValue{node.type, node.params, node.body});
    RefId r = ctx_.fresh_ref();
    ctx_.set_location(r, l);
    ctx_.set_caps(r, initial_capabilities(node.type));
    emit(t, "E-Fun", {{"ref", ref_name(r)}, {"loc", loc_name(l)}});
    return r;
}

// E-New: one fresh unbound reference per field; the record itself lands at
// a fresh location with ic-derived capabilities.
RefId Evaluator::eval_new(const TermRef& t, const NewTerm& node) {
    TypeRef st = unroll_to_structure(node.type);
    assert(st && "new on a non-structure type escaped the static checks");
    RecordValue record;
    record.type = st;
    for (const auto& [fname, _] : std::get<StructureType>(st->payload).fields) {
        RefId fr = ctx_.fresh_ref();
        ctx_.set_location(fr, Location{0});
        ctx_.set_caps(fr, CapabilitySet{});
        record.fields[fname] = fr;
    }
    Location l = ctx_.fresh_location();
    ctx_.set_value(l, std::move(record));
    RefId r = ctx_.fresh_ref();
    ctx_.set_location(r, l);
    ctx_.set_caps(r, initial_capabilities(node.type));
    emit(t, "E-New", {{"ref", ref_name(r)}, {"loc", loc_name(l)}});
    return r;
}

RefId Evaluator::eval_field(const TermRef& t, const FieldAccessTerm& node) {
    RefId r = eval(node.target);
    require_readable(r, node.target, subject_of(node.target, r));
    const Value* v = ctx_.value_of(r);
    const auto* record = v ? std::get_if<RecordValue>(v) : nullptr;
    if (!record || !record->fields.contains(node.field)) {
        throw RuntimeError(RuntimeErrorKind::UnknownField, t->span, node.field);
    }
    RefId field = record->fields.at(node.field);
    emit(t, "E-Field",
         {{"target", ref_name(r)}, {"field", node.field}, {"ref", ref_name(field)}});
    return field;
}

RefId Evaluator::eval_seq(const TermRef& t, const SeqTerm& node) {
    eval(node.first);
    RefId r = eval(node.second);
    emit(t, "E-Seq", {{"result", ref_name(r)}});
    return r;
}

RefId Evaluator::eval_if(const TermRef& t, const IfTerm& node) {
    RefId cond = eval(node.cond);
    require_readable(cond, node.cond, subject_of(node.cond, cond));
    const Value* v = ctx_.value_of(cond);
    const auto* atom = v ? std::get_if<AtomValue>(v) : nullptr;
    const bool* flag = atom ? std::get_if<bool>(atom) : nullptr;
    if (!flag) {
        throw RuntimeError(RuntimeErrorKind::ConditionNotBoolean, node.cond->span,
                           subject_of(node.cond, cond));
    }
    RefId r = eval(*flag ? node.then_branch : node.else_branch);
    emit(t, *flag ? "E-Cond-True" : "E-Cond-False",
         {{"cond", ref_name(cond)}, {"result", ref_name(r)}});
    return r;
}

TypeRef Evaluator::lhs_type(const TermRef& lhs) { return env_.of(*lhs); }

// Shared core of the six assignment rules (also used for argument binding
// and return statements). Both operands are already evaluated — right
// before left, as the premises order them; this applies the selected
// rule's remaining premises and context updates and emits its event.
RefId Evaluator::apply_assign(const TermRef& at, const SourceSpan& rhs_span, AssignOp op,
                              RefId left, RefId right, const TypeRef& left_ty,
                              const std::string& left_subj, const std::string& right_subj) {
    auto throw_rhs = [&](RuntimeErrorKind kind) {
        throw RuntimeError(kind, rhs_span, right_subj, classify_state(right, ctx_));
    };
    auto states = [this](RefId l, RefId r) {
        return std::vector<std::pair<std::string, std::string>>{
            {"left", ref_name(l)},
            {"right", ref_name(r)},
            {"left_state", ref_state_name(classify_state(l, ctx_))},
            {"right_state", ref_state_name(classify_state(r, ctx_))},
        };
    };
    auto require_target_writeable = [&] {
        if (!writeable(left, ctx_)) {
            throw RuntimeError(RuntimeErrorKind::ImmutableMutation, at->span, left_subj,
                               classify_state(left, ctx_));
        }
    };

    switch (op) {
    case AssignOp::Copy: {
        if (!readable(right, ctx_)) throw_rhs(RuntimeErrorKind::NotReadable);
        Location lr = ctx_.location_of(right);
        Location ll = ctx_.location_of(left);
        const char* rule;
        if (!ll.is_null()) {
            require_target_writeable();
            deep_copy_into(lr, ll, ctx_, at->span);
            rule = "E-Copy-Mutating";
        } else {
            ll = deep_copy(lr, ctx_, at->span);
            ctx_.set_location(left, ll);
            ctx_.set_caps(left, initial_capabilities(left_ty));
            rule = "E-Copy-Unalloc";
        }
        if (options_.trace) {
            auto detail = states(left, right);
            detail.emplace_back("loc", loc_name(ll));
            emit(at, rule, std::move(detail));
        }
        return left;
    }
    case AssignOp::Move: {
        require_move_source(right, rhs_span, right_subj);
        const Value* v = ctx_.value_of(right);
        assert(v && "a unique reference always denotes a value");
        Value moved = *v;
        Location ll = ctx_.location_of(left);
        const char* rule;
        if (!ll.is_null()) {
            require_target_writeable();
            ctx_.set_value(ll, std::move(moved));
            rule = "E-Move-Mutating";
        } else {
            ll = ctx_.fresh_location();
            ctx_.set_value(ll, std::move(moved));
            ctx_.set_location(left, ll);
            ctx_.set_caps(left, initial_capabilities(left_ty));
            rule = "E-Move-Unalloc";
        }
        // The right operand's binding is destroyed.
        ctx_.set_location(right, Location{0});
        ctx_.set_caps(right, CapabilitySet{});
        if (options_.trace) {
            auto detail = states(left, right);
            detail.emplace_back("loc", loc_name(ll));
            emit(at, rule, std::move(detail));
        }
        return left;
    }
    case AssignOp::Alias: {
        // The left operand's mutability qualifier selects the rule.
        bool mut_rule = left_ty->qualifiers.mut;
        if (mut_rule) {
            if (!writeable(right, ctx_)) throw_rhs(RuntimeErrorKind::NotWriteable);
        } else {
            if (!readable(right, ctx_)) throw_rhs(RuntimeErrorKind::NotReadable);
        }
        if (shared(left, ctx_)) {
            throw RuntimeError(RuntimeErrorKind::AliasTargetShared, at->span, left_subj,
                               classify_state(left, ctx_));
        }
        for (RefId s : borrowers(right, ctx_)) {
            // cst aliases tolerate no mutating borrower; mut aliases demand
            // every borrower be mutating.
            if (writeable(s, ctx_) != mut_rule) {
                throw RuntimeError(RuntimeErrorKind::AliasMutabilityMismatch, at->span,
                                   right_subj, classify_state(right, ctx_));
            }
        }
        CapabilitySet old = ctx_.caps_of(left);
        CapabilitySet next;
        next.ro = !mut_rule;
        next.rw = mut_rule;
        next.borrows.insert(right);
        ctx_.set_location(left, ctx_.location_of(right));
        ctx_.set_caps(left, next);
        if (options_.trace) {
            auto detail = states(left, right);
            detail.emplace_back("loc", loc_name(ctx_.location_of(left)));
            if (old.has_borrow()) {
                // Reassigning an alias sends its fragment back; surface the
                // previous owner's recovered state.
                RefId prev = *old.borrows.begin();
                detail.emplace_back("prev_owner", ref_name(prev));
                detail.emplace_back("prev_owner_state",
                                    ref_state_name(classify_state(prev, ctx_)));
            }
            emit(at, mut_rule ? "E-Alias-Mut" : "E-Alias-Cst", std::move(detail));
        }
        return left;
    }
    }
    assert(false);
    return left;
}

RefId Evaluator::eval_assign(const TermRef& t, const TermRef& lhs, AssignOp op,
                             const TermRef& rhs) {
    RefId right = eval(rhs);
    RefId left = eval(lhs);
    return apply_assign(t, rhs->span, op, left, right, lhs_type(lhs),
                        subject_of(lhs, left), subject_of(rhs, right));
}

// E-Ret: exactly an assignment to the virtual return identifier.
RefId Evaluator::eval_return(const TermRef& t, const ReturnTerm& node) {
    RefId right = eval(node.value);
    auto it = ctx_.vars().find(kReturnIdent);
    if (it == ctx_.vars().end()) {
        throw RuntimeError(RuntimeErrorKind::MissingReturn, t->span, "return");
    }
    RefId left = it->second;
    emit(t, "E-Var", {{"name", kReturnIdent}, {"ref", ref_name(left)}});

    const TypeRef* ret_ty = env_.try_of(*t);
    assert(ret_ty && "return inside a call body is always typed");
    RefId result = apply_assign(t, node.value->span, node.op, left, right, *ret_ty,
                                kReturnIdent, subject_of(node.value, right));
    emit(t, "E-Ret", {{"ref", ref_name(result)}});
    return result;
}

Evaluator::Callee Evaluator::resolve_callee(const TermRef& t) {
    RefId r = eval(t);
    require_readable(r, t, subject_of(t, r));
    const Value* v = ctx_.value_of(r);
    if (v) {
        if (const auto* fn = std::get_if<FunctionValue>(v)) {
            emit(t, "E-Callee", {{"ref", ref_name(r)}});
            return Callee{fn->type, fn->params, fn->body, ""};
        }
        if (const auto* b = std::get_if<BuiltinValue>(v)) {
            emit(t, "E-Callee", {{"ref", ref_name(r)}, {"builtin", b->name}});
            TypeRef fn_ty = unroll_to_function(b->type);
            std::vector<std::string> params;
            for (const auto& [name, _] : std::get<FunctionType>(fn_ty->payload).params) {
                params.push_back(name);
            }
            return Callee{b->type, params, nullptr, b->name};
        }
    }
    throw RuntimeError(RuntimeErrorKind::CalleeNotFunction, t->span, subject_of(t, r),
                       classify_state(r, ctx_));
}

RefId Evaluator::apply_builtin(const TermRef& t, const Callee& callee,
                               const std::vector<std::string>& bound_names) {
    auto atom_of = [this, &t](const std::string& name) -> const AtomValue& {
        const Value* v = ctx_.value_of(ctx_.vars().at(name));
        const auto* atom = v ? std::get_if<AtomValue>(v) : nullptr;
        if (!atom) {
            throw RuntimeError(RuntimeErrorKind::PrimOperandMismatch, t->span, name);
        }
        return *atom;
    };
    auto int_of = [&](size_t i) -> int64_t {
        const AtomValue& a = atom_of(bound_names.at(i));
        const auto* n = std::get_if<int64_t>(&a);
        if (!n) {
            throw RuntimeError(RuntimeErrorKind::PrimOperandMismatch, t->span,
                               bound_names.at(i));
        }
        return *n;
    };
    auto bool_of = [&](size_t i) -> bool {
        const AtomValue& a = atom_of(bound_names.at(i));
        const auto* b = std::get_if<bool>(&a);
        if (!b) {
            throw RuntimeError(RuntimeErrorKind::PrimOperandMismatch, t->span,
                               bound_names.at(i));
        }
        return *b;
    };

    // Two's-complement wraparound via unsigned arithmetic.
    auto wrap_add = [](int64_t a, int64_t b) {
        return static_cast<int64_t>(static_cast<uint64_t>(a) + static_cast<uint64_t>(b));
    };
    auto wrap_sub = [](int64_t a, int64_t b) {
        return static_cast<int64_t>(static_cast<uint64_t>(a) - static_cast<uint64_t>(b));
    };
    auto wrap_mul = [](int64_t a, int64_t b) {
        return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b));
    };

    const std::string& op = callee.builtin;
    AtomValue result_value;
    if (op == "$add") result_value = wrap_add(int_of(0), int_of(1));
    else if (op == "$sub") result_value = wrap_sub(int_of(0), int_of(1));
    else if (op == "$mul") result_value = wrap_mul(int_of(0), int_of(1));
    else if (op == "$eq") result_value = int_of(0) == int_of(1);
    else if (op == "$gt") result_value = int_of(0) > int_of(1);
    else result_value = !bool_of(0); // $not

    TypeRef fn_ty = unroll_to_function(callee.type);
    const TypeRef& codomain = std::get<FunctionType>(fn_ty->payload).codomain;
    Location l = ctx_.fresh_location();
    ctx_.set_value(l, result_value);
    RefId r = ctx_.fresh_ref();
    ctx_.set_location(r, l);
    ctx_.set_caps(r, initial_capabilities(codomain));
    return r;
}

// E-Call: resolve the callee, alpha-rename its parameters to fresh machine
// names, bind the arguments as ordinary assignments on freshly declared
// variables, evaluate the renamed body under a fresh return identifier,
// restore any shadowed outer return binding, and (default mode) release
// the parameter bindings. The result reference keeps its capabilities: it
// is the one reference that escapes the call.
RefId Evaluator::eval_call(const TermRef& t, const CallTerm& node) {
    Callee callee = resolve_callee(node.callee);

    std::map<std::string, std::string> sigma;
    for (const std::string& p : callee.params) {
        sigma[p] = p + "$" + std::to_string(ctx_.fresh_rename_suffix());
    }

    TypeRef fn_ty = unroll_to_function(callee.type);
    const auto& fn = std::get<FunctionType>(fn_ty->payload);
    TypeScope locals;
    for (const auto& [pname, ptype] : fn.params) locals[sigma.at(pname)] = ptype;

    // E-Args-N: each argument is `let x: G(x) { x <op> v }` without the
    // scope-exit release — the binding must survive into the body.
    std::vector<std::string> bound;
    for (const CallArg& arg : node.args) {
        auto renamed = sigma.find(arg.name);
        if (renamed == sigma.end()) {
            // The static check validates names against the callee's static
            // type; the dynamic function value may declare different
            // parameters (values are never checked against types).
            throw RuntimeError(RuntimeErrorKind::UndefinedVariable, arg.span, arg.name);
        }
        const std::string& pname = renamed->second;
        RefId pr = ctx_.fresh_ref();
        ctx_.bind_var(pname, pr);
        ctx_.set_location(pr, Location{0});
        ctx_.set_caps(pr, CapabilitySet{});

        RefId right = eval(arg.value);
        apply_assign(arg.value, arg.value->span, arg.op, pr, right, locals.at(pname),
                     arg.name, subject_of(arg.value, right));
        emit(t, "E-Args-N", {{"param", arg.name}, {"renamed", pname}, {"ref", ref_name(pr)}});
        bound.push_back(pname);
    }
    emit(t, "E-Args-0");

    if (!callee.builtin.empty()) {
        RefId result = apply_builtin(t, callee, bound);
        if (!options_.strict_rules) {
            for (const std::string& pname : bound) release_binding(pname, ctx_);
        }
        if (options_.trace) {
            emit(t, "E-Call",
                 {{"result", ref_name(result)},
                  {"builtin", callee.builtin},
                  {"value", render_value(result)}});
        }
        return result;
    }

    TermRef renamed_body = rename_identifiers(callee.body, sigma);
    extend_type_env(env_, renamed_body, prelude_types(), locals, fn.codomain);

    // let R: codomain { body }, remembering any outer return binding for
    // restore.
    std::optional<RefId> outer_ret;
    auto prev = ctx_.vars().find(kReturnIdent);
    if (prev != ctx_.vars().end()) outer_ret = prev->second;
    RefId ret_ref = ctx_.fresh_ref();
    ctx_.bind_var(kReturnIdent, ret_ref);
    ctx_.set_location(ret_ref, Location{0});
    ctx_.set_caps(ret_ref, CapabilitySet{});

    RefId result = eval(renamed_body);

    // restore: an outer return binding is put back; otherwise the inner
    // name is dropped (default mode) while its reference keeps rho/kappa
    // so the caller can consume the result.
    if (outer_ret) {
        ctx_.bind_var(kReturnIdent, *outer_ret);
    } else if (!options_.strict_rules) {
        ctx_.unbind_var(kReturnIdent);
    }
    if (!options_.strict_rules) {
        for (const std::string& pname : bound) release_binding(pname, ctx_);
    }

    if (options_.trace) {
        emit(t, "E-Call",
             {{"result", ref_name(result)},
              {"result_state", ref_state_name(classify_state(result, ctx_))}});
    }
    return result;
}

namespace {

std::string render_value_at(const EvalContext& ctx, Location l, std::set<Location>& seen) {
    const Value* v = ctx.value_at(l);
    if (!v) return "<unbound>";
    if (std::holds_alternative<UndefinedValue>(*v)) return "<undefined>";
    if (const auto* a = std::get_if<AtomValue>(v)) return atom_to_string(*a);
    if (std::holds_alternative<FunctionValue>(*v) || std::holds_alternative<BuiltinValue>(*v)) {
        return "<fun>";
    }
    const auto& record = std::get<RecordValue>(*v);
    if (!seen.insert(l).second) return "<cycle>";
    std::string s = "{";
    bool first = true;
    for (const auto& [name, field] : record.fields) {
        if (!first) s += ", ";
        first = false;
        Location fl = ctx.location_of(field);
        s += name + ": " + (fl.is_null() ? "<unbound>" : render_value_at(ctx, fl, seen));
    }
    seen.erase(l);
    return s + "}";
}

} // namespace

std::string Evaluator::render_value(RefId r) const {
    Location l = ctx_.location_of(r);
    if (l.is_null()) return "<unbound>";
    std::set<Location> seen;
    return render_value_at(ctx_, l, seen);
}

} // namespace azc

#include "azc/type.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace azc {

bool well_formed(const QualifierSet& q) {
    return (q.brw != q.own) && (q.cst != q.mut);
}

TypeRef make_atomic(const std::string& name, QualifierSet q) {
    return std::make_shared<TypeExpr>(TypeExpr{q, AtomicType{name}});
}

TypeRef make_function(std::vector<std::pair<std::string, TypeRef>> params, TypeRef codomain,
                      QualifierSet q) {
    return std::make_shared<TypeExpr>(
        TypeExpr{q, FunctionType{std::move(params), std::move(codomain)}});
}

TypeRef make_structure(std::vector<std::pair<std::string, TypeRef>> fields, QualifierSet q) {
    return std::make_shared<TypeExpr>(TypeExpr{q, StructureType{std::move(fields)}});
}

TypeRef make_rec_binder(const std::string& var, TypeRef body, QualifierSet q) {
    return std::make_shared<TypeExpr>(TypeExpr{q, RecBinderType{var, std::move(body)}});
}

TypeRef make_rec_var(const std::string& var, QualifierSet q) {
    return std::make_shared<TypeExpr>(TypeExpr{q, RecVarType{var}});
}

namespace {

// Substitutes rec variables by `replacement`, keeping each occurrence's own
// qualifier set. Inner binders of the same variable shadow.
TypeRef subst_rec_var(const TypeRef& t, const std::string& var, const TypeRef& replacement) {
    if (const auto* rv = std::get_if<RecVarType>(&t->payload)) {
        if (rv->var == var) {
            return std::make_shared<TypeExpr>(TypeExpr{t->qualifiers, replacement->payload});
        }
        return t;
    }
    if (std::holds_alternative<AtomicType>(t->payload)) return t;
    if (const auto* fn = std::get_if<FunctionType>(&t->payload)) {
        std::vector<std::pair<std::string, TypeRef>> params;
        params.reserve(fn->params.size());
        for (const auto& [name, pt] : fn->params) {
            params.emplace_back(name, subst_rec_var(pt, var, replacement));
        }
        return make_function(std::move(params), subst_rec_var(fn->codomain, var, replacement),
                             t->qualifiers);
    }
    if (const auto* st = std::get_if<StructureType>(&t->payload)) {
        std::vector<std::pair<std::string, TypeRef>> fields;
        fields.reserve(st->fields.size());
        for (const auto& [name, ft] : st->fields) {
            fields.emplace_back(name, subst_rec_var(ft, var, replacement));
        }
        return make_structure(std::move(fields), t->qualifiers);
    }
    if (const auto* rb = std::get_if<RecBinderType>(&t->payload)) {
        if (rb->var == var) return t;
        return make_rec_binder(rb->var, subst_rec_var(rb->body, var, replacement), t->qualifiers);
    }
    return t;
}

} // namespace

TypeRef unroll(const TypeRef& t) {
    TypeRef cur = t;
    // Nested binders unroll until a concrete payload surfaces.
    for (int depth = 0; depth < 16; ++depth) {
        const auto* rb = std::get_if<RecBinderType>(&cur->payload);
        if (!rb) return cur;
        cur = subst_rec_var(rb->body, rb->var, cur);
    }
    return cur;
}

TypeRef unroll_to_function(const TypeRef& t) {
    TypeRef u = unroll(t);
    return std::holds_alternative<FunctionType>(u->payload) ? u : nullptr;
}

TypeRef unroll_to_structure(const TypeRef& t) {
    TypeRef u = unroll(t);
    return std::holds_alternative<StructureType>(u->payload) ? u : nullptr;
}

namespace {

// Unrolling re-wraps binder occurrences, so node pointers are not a stable
// identity. Every copy of a given binder shares its body pointer; that,
// plus the wrapper's qualifiers, identifies the mu-type for the
// assumed-pair set.
using TypeIdent = std::pair<const void*, int>;

TypeIdent ident_of(const TypeRef& t) {
    int quals = (t->qualifiers.brw << 3) | (t->qualifiers.own << 2) |
                (t->qualifiers.cst << 1) | t->qualifiers.mut;
    if (const auto* rb = std::get_if<RecBinderType>(&t->payload)) {
        return {rb->body.get(), quals};
    }
    return {t.get(), quals};
}

bool type_equal_rec(const TypeRef& a, const TypeRef& b,
                    std::set<std::pair<TypeIdent, TypeIdent>>& assumed) {
    if (a.get() == b.get()) return true;
    if (!(a->qualifiers == b->qualifiers)) {
        // A rec binder is transparent up to its body's qualifiers; unroll
        // before giving up.
        if (!std::holds_alternative<RecBinderType>(a->payload) &&
            !std::holds_alternative<RecBinderType>(b->payload)) {
            return false;
        }
    }
    auto key = std::make_pair(ident_of(a), ident_of(b));
    if (assumed.contains(key)) return true;

    if (std::holds_alternative<RecBinderType>(a->payload) ||
        std::holds_alternative<RecBinderType>(b->payload)) {
        assumed.insert(key);
        return type_equal_rec(unroll(a), unroll(b), assumed);
    }

    if (const auto* aa = std::get_if<AtomicType>(&a->payload)) {
        const auto* ba = std::get_if<AtomicType>(&b->payload);
        return ba && aa->name == ba->name;
    }
    if (const auto* af = std::get_if<FunctionType>(&a->payload)) {
        const auto* bf = std::get_if<FunctionType>(&b->payload);
        if (!bf || af->params.size() != bf->params.size()) return false;
        auto sorted = [](const FunctionType& f) {
            auto v = f.params;
            std::sort(v.begin(), v.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            return v;
        };
        auto ap = sorted(*af);
        auto bp = sorted(*bf);
        for (size_t i = 0; i < ap.size(); ++i) {
            if (ap[i].first != bp[i].first) return false;
            if (!type_equal_rec(ap[i].second, bp[i].second, assumed)) return false;
        }
        return type_equal_rec(af->codomain, bf->codomain, assumed);
    }
    if (const auto* as = std::get_if<StructureType>(&a->payload)) {
        const auto* bs = std::get_if<StructureType>(&b->payload);
        if (!bs || as->fields.size() != bs->fields.size()) return false;
        auto sorted = [](const StructureType& s) {
            auto v = s.fields;
            std::sort(v.begin(), v.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            return v;
        };
        auto afs = sorted(*as);
        auto bfs = sorted(*bs);
        for (size_t i = 0; i < afs.size(); ++i) {
            if (afs[i].first != bfs[i].first) return false;
            if (!type_equal_rec(afs[i].second, bfs[i].second, assumed)) return false;
        }
        return true;
    }
    if (const auto* av = std::get_if<RecVarType>(&a->payload)) {
        const auto* bv = std::get_if<RecVarType>(&b->payload);
        return bv && av->var == bv->var;
    }
    return false;
}

std::string format_qualifiers(const QualifierSet& q) {
    std::string s;
    if (q.brw) s += "@brw ";
    s += q.mut ? "@mut " : "@cst ";
    return s;
}

} // namespace

bool type_equal(const TypeRef& a, const TypeRef& b) {
    std::set<std::pair<TypeIdent, TypeIdent>> assumed;
    return type_equal_rec(a, b, assumed);
}

std::string format_type(const TypeRef& t) {
    std::ostringstream out;
    out << format_qualifiers(t->qualifiers);
    if (const auto* a = std::get_if<AtomicType>(&t->payload)) {
        out << a->name;
    } else if (const auto* f = std::get_if<FunctionType>(&t->payload)) {
        out << "(";
        for (size_t i = 0; i < f->params.size(); ++i) {
            if (i) out << ", ";
            out << f->params[i].first << ": " << format_type(f->params[i].second);
        }
        out << ") -> " << format_type(f->codomain);
    } else if (const auto* s = std::get_if<StructureType>(&t->payload)) {
        out << "{";
        for (size_t i = 0; i < s->fields.size(); ++i) {
            if (i) out << ", ";
            out << s->fields[i].first << ": " << format_type(s->fields[i].second);
        }
        out << "}";
    } else if (const auto* rb = std::get_if<RecBinderType>(&t->payload)) {
        return "rec " + rb->var + " . " + format_type(rb->body);
    } else if (const auto* rv = std::get_if<RecVarType>(&t->payload)) {
        out << rv->var;
    }
    return out.str();
}

} // namespace azc

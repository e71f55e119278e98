#ifndef AZC_TYPE_HPP
#define AZC_TYPE_HPP

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace azc {

struct TypeExpr;
using TypeRef = std::shared_ptr<const TypeExpr>;

/// The four type qualifiers: two reference qualifiers (brw/own) and two
/// mutability qualifiers (cst/mut).
enum class Qualifier { Brw, Own, Cst, Mut };

/// A (possibly ill-formed) set of qualifiers. A well-formed set carries
/// exactly one reference qualifier and exactly one mutability qualifier.
struct QualifierSet {
    bool brw = false;
    bool own = false;
    bool cst = false;
    bool mut = false;

    bool operator==(const QualifierSet&) const = default;

    bool contains(Qualifier q) const {
        switch (q) {
        case Qualifier::Brw: return brw;
        case Qualifier::Own: return own;
        case Qualifier::Cst: return cst;
        case Qualifier::Mut: return mut;
        }
        return false;
    }

    static QualifierSet defaults() { return {.brw = false, .own = true, .cst = true, .mut = false}; }
    static QualifierSet own_mut() { return {.brw = false, .own = true, .cst = false, .mut = true}; }
};

/// Exactly one of each qualifier family.
bool well_formed(const QualifierSet& q);

struct AtomicType {
    std::string name;
};

struct FunctionType {
    // Parameter order matters for printing and is preserved from the source;
    // lookups are by name.
    std::vector<std::pair<std::string, TypeRef>> params;
    TypeRef codomain;
};

struct StructureType {
    std::vector<std::pair<std::string, TypeRef>> fields;
};

struct RecBinderType {
    std::string var;
    TypeRef body;
};

struct RecVarType {
    std::string var;
};

/// A qualified flow-insensitive type: atomic, function, structure, or
/// recursive. Every node carries its own qualifier set.
struct TypeExpr {
    QualifierSet qualifiers;
    std::variant<AtomicType, FunctionType, StructureType, RecBinderType, RecVarType> payload;
};

TypeRef make_atomic(const std::string& name, QualifierSet q = QualifierSet::defaults());
TypeRef make_function(std::vector<std::pair<std::string, TypeRef>> params, TypeRef codomain,
                      QualifierSet q = QualifierSet::defaults());
TypeRef make_structure(std::vector<std::pair<std::string, TypeRef>> fields,
                       QualifierSet q = QualifierSet::defaults());
TypeRef make_rec_binder(const std::string& var, TypeRef body, QualifierSet q);
TypeRef make_rec_var(const std::string& var, QualifierSet q = QualifierSet::defaults());

/// One-step unrolling: rec binders are replaced by their body with every
/// occurrence of the bound variable substituted by the whole binder. A
/// substituted occurrence keeps its own qualifier set. Non-recursive types
/// unroll to themselves.
TypeRef unroll(const TypeRef& t);

/// Unrolls and keeps the result only when the payload matches; callers own
/// the returned type.
TypeRef unroll_to_function(const TypeRef& t);
TypeRef unroll_to_structure(const TypeRef& t);

/// Structural equality with equi-recursive unrolling (visited-pair set).
bool type_equal(const TypeRef& a, const TypeRef& b);

/// Deterministic rendering. Prints the mutability qualifier always and the
/// reference qualifier only when it is not the @own default, so that
/// parse(format(t)) == t under the surface defaults.
std::string format_type(const TypeRef& t);

} // namespace azc

#endif

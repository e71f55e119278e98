#ifndef AZC_CONTEXT_HPP
#define AZC_CONTEXT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "azc/ast.hpp"
#include "azc/diagnostics.hpp"
#include "azc/type.hpp"

namespace azc {

/// Reference identifier. Allocated monotonically, never reused.
struct RefId {
    uint64_t id = 0;
    auto operator<=>(const RefId&) const = default;
};

/// Memory location. Address 0 is the reserved null location.
struct Location {
    uint64_t addr = 0;
    auto operator<=>(const Location&) const = default;
    bool is_null() const { return addr == 0; }
};

std::string ref_name(RefId r);    // "r7"
std::string loc_name(Location l); // "l3"

/// Capability set attached to a reference: read-only, read-write, and any
/// number of borrow capabilities b[r].
struct CapabilitySet {
    bool ro = false;
    bool rw = false;
    std::set<RefId> borrows;

    bool empty() const { return !ro && !rw && borrows.empty(); }
    bool has_borrow() const { return !borrows.empty(); }
    std::string to_string() const;
};

/// Initial capabilities for a freshly bound reference: {rw, ro} when the
/// type is mutating, {ro} otherwise.
CapabilitySet initial_capabilities(const TypeRef& t);

struct UndefinedValue {
    bool operator==(const UndefinedValue&) const = default;
};

/// A record value maps field names to the references created for them at
/// instantiation. The (unrolled) structure type rides along so deep copies
/// can derive field capabilities.
struct RecordValue {
    std::map<std::string, RefId> fields;
    TypeRef type;
};

struct FunctionValue {
    TypeRef type;
    std::vector<std::string> params;
    TermRef body;
};

/// Prelude primitive (integer arithmetic / comparison, boolean not).
/// Callable like a function value but with a native implementation.
struct BuiltinValue {
    std::string name;
    TypeRef type;
};

using Value =
    std::variant<UndefinedValue, AtomValue, RecordValue, FunctionValue, BuiltinValue>;

/// The evaluation context: the variable table (nu), the reference table
/// (rho), the memory table (mu) and the capability table (kappa), plus the
/// set of references that were ever bound (bookkeeping that separates
/// "moved" from "never initialized"). Mutation goes through the setters,
/// which maintain the reverse indices the predicates rely on; the tables
/// themselves are exposed read-only.
class EvalContext {
  public:
    const std::map<std::string, RefId>& vars() const { return vars_; }
    const std::map<RefId, Location>& refs() const { return refs_; }
    const std::map<Location, Value>& memory() const { return memory_; }
    const std::map<RefId, CapabilitySet>& caps() const { return caps_; }

    RefId fresh_ref() { return RefId{next_ref_++}; }
    Location fresh_location() { return Location{next_loc_++}; }
    uint64_t fresh_rename_suffix() { return next_rename_++; }

    void bind_var(const std::string& name, RefId r) { vars_[name] = r; }
    void unbind_var(const std::string& name) { vars_.erase(name); }

    /// rho write; nonzero locations mark the reference as ever bound.
    void set_location(RefId r, Location l);

    /// kappa write; keeps the borrower index in step.
    void set_caps(RefId r, CapabilitySet caps);

    /// mu write; keeps the record-location index in step.
    void set_value(Location l, Value v);

    /// rho lookup; unknown references read as the null location.
    Location location_of(RefId r) const;

    const Value* value_at(Location l) const;
    const Value* value_of(RefId r) const;

    CapabilitySet caps_of(RefId r) const;
    bool was_ever_bound(RefId r) const { return ever_bound_.contains(r); }

    /// Every reference s whose capability set holds b[r].
    const std::set<RefId>& borrowers_of(RefId r) const;

    /// Locations currently holding record values, and the references bound
    /// to a given location (the deep-immutability premise walks these).
    const std::set<Location>& record_locations() const { return record_locs_; }
    const std::set<RefId>& refs_at(Location l) const;

    /// Deterministic rendering of the four tables (sorted by key) plus the
    /// typestate of every issued reference. Consumed by `--dump-context`
    /// and the golden tests.
    std::string dump() const;

  private:
    std::map<std::string, RefId> vars_;   // nu
    std::map<RefId, Location> refs_;      // rho
    std::map<Location, Value> memory_;    // mu
    std::map<RefId, CapabilitySet> caps_; // kappa
    std::set<RefId> ever_bound_;

    // Reverse indices; derived from the tables above.
    std::map<RefId, std::set<RefId>> borrower_index_;
    std::map<Location, std::set<RefId>> refs_by_loc_;
    std::set<Location> record_locs_;

    uint64_t next_ref_ = 1;
    uint64_t next_loc_ = 1;
    uint64_t next_rename_ = 1;
};

// The five predicates over a context. All terminate on cyclic record
// graphs (visited sets).

/// s denotes a record (transitively) containing r.
bool contains(RefId s, RefId r, const EvalContext& ctx);
/// kappa(r) grants ro or rw.
bool readable(RefId r, const EvalContext& ctx);
/// kappa(r) grants rw and no reference containing r lacks rw — the deep
/// immutability premise.
bool writeable(RefId r, const EvalContext& ctx);
/// readable and borrowed by someone.
bool shared(RefId r, const EvalContext& ctx);
/// readable and borrowed by no one. Note: this is the literal predicate;
/// it does not ask whether r itself holds a borrow capability.
bool unique(RefId r, const EvalContext& ctx);

/// Every reference s whose capability set holds b[r].
std::set<RefId> borrowers(RefId r, const EvalContext& ctx);

/// Total, deterministic typestate classification.
RefState classify_state(RefId r, const EvalContext& ctx);

/// Scope exit: drops `name` from the variable table (restoring
/// `shadowed`, if given) and empties the named reference's binding and
/// capabilities so any borrow fragment it held returns to its owner.
void release_binding(const std::string& name, EvalContext& ctx,
                     std::optional<RefId> shadowed = std::nullopt);

/// Transitive copy of the value at l into a fresh location. Memoizes
/// source locations so internal sharing and cycles carry over. Copied
/// record fields get fresh references with the initial capabilities of
/// their declared field type.
Location deep_copy(Location l, EvalContext& ctx,
                   SourceSpan span = {}); // throws RuntimeError(CopyOfUndefined)

/// Same, but the top value lands at an existing destination (the
/// mutating-copy rule); cycles back to the source's top map to dst.
void deep_copy_into(Location src, Location dst, EvalContext& ctx, SourceSpan span = {});

/// All locations reachable from r through record fields (including r's own
/// location). Used by the copy-disjointness oracle and the value printer.
std::set<Location> reachable_locations(RefId r, const EvalContext& ctx);

} // namespace azc

#endif

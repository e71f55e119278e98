#include "azc/context.hpp"

#include <algorithm>
#include <sstream>

namespace azc {

std::string ref_name(RefId r) { return "r" + std::to_string(r.id); }
std::string loc_name(Location l) { return "l" + std::to_string(l.addr); }

std::string CapabilitySet::to_string() const {
    std::string s = "{";
    bool first = true;
    auto add = [&s, &first](const std::string& item) {
        if (!first) s += ", ";
        s += item;
        first = false;
    };
    if (ro) add("ro");
    if (rw) add("rw");
    for (const RefId& b : borrows) add("b[" + ref_name(b) + "]");
    return s + "}";
}

CapabilitySet initial_capabilities(const TypeRef& t) {
    CapabilitySet caps;
    caps.ro = true;
    caps.rw = t->qualifiers.mut;
    return caps;
}

void EvalContext::set_location(RefId r, Location l) {
    auto old = refs_.find(r);
    if (old != refs_.end() && !old->second.is_null()) {
        refs_by_loc_[old->second].erase(r);
    }
    refs_[r] = l;
    if (!l.is_null()) {
        refs_by_loc_[l].insert(r);
        ever_bound_.insert(r);
    }
}

void EvalContext::set_caps(RefId r, CapabilitySet caps) {
    auto old = caps_.find(r);
    if (old != caps_.end()) {
        for (const RefId& b : old->second.borrows) borrower_index_[b].erase(r);
    }
    for (const RefId& b : caps.borrows) borrower_index_[b].insert(r);
    caps_[r] = std::move(caps);
}

void EvalContext::set_value(Location l, Value v) {
    bool is_record = std::holds_alternative<RecordValue>(v);
    if (is_record) {
        record_locs_.insert(l);
    } else {
        record_locs_.erase(l);
    }
    memory_[l] = std::move(v);
}

Location EvalContext::location_of(RefId r) const {
    auto it = refs_.find(r);
    return it == refs_.end() ? Location{0} : it->second;
}

const Value* EvalContext::value_at(Location l) const {
    if (l.is_null()) return nullptr;
    auto it = memory_.find(l);
    return it == memory_.end() ? nullptr : &it->second;
}

const Value* EvalContext::value_of(RefId r) const { return value_at(location_of(r)); }

CapabilitySet EvalContext::caps_of(RefId r) const {
    auto it = caps_.find(r);
    return it == caps_.end() ? CapabilitySet{} : it->second;
}

const std::set<RefId>& EvalContext::borrowers_of(RefId r) const {
    static const std::set<RefId> empty;
    auto it = borrower_index_.find(r);
    return it == borrower_index_.end() ? empty : it->second;
}

const std::set<RefId>& EvalContext::refs_at(Location l) const {
    static const std::set<RefId> empty;
    auto it = refs_by_loc_.find(l);
    return it == refs_by_loc_.end() ? empty : it->second;
}

namespace {

std::string value_summary(const Value& v) {
    if (std::holds_alternative<UndefinedValue>(v)) return "undefined";
    if (const auto* a = std::get_if<AtomValue>(&v)) return atom_to_string(*a);
    if (const auto* r = std::get_if<RecordValue>(&v)) {
        std::string s = "{";
        bool first = true;
        for (const auto& [name, ref] : r->fields) {
            if (!first) s += ", ";
            s += name + " -> " + ref_name(ref);
            first = false;
        }
        return s + "}";
    }
    if (std::holds_alternative<FunctionValue>(v)) return "<fun>";
    return "<builtin>";
}

bool contains_rec(RefId s, RefId r, const EvalContext& ctx, std::set<RefId>& visited) {
    if (!visited.insert(s).second) return false;
    const Value* v = ctx.value_of(s);
    if (!v) return false;
    const auto* record = std::get_if<RecordValue>(v);
    if (!record) return false;
    for (const auto& [_, field] : record->fields) {
        if (field == r) return true;
        if (contains_rec(field, r, ctx, visited)) return true;
    }
    return false;
}

// Does the record graph rooted at location l list r as a field, directly
// or transitively?
bool location_contains_ref(Location l, RefId r, const EvalContext& ctx,
                           std::set<Location>& visited) {
    if (l.is_null() || !visited.insert(l).second) return false;
    const Value* v = ctx.value_at(l);
    const auto* record = v ? std::get_if<RecordValue>(v) : nullptr;
    if (!record) return false;
    for (const auto& [_, field] : record->fields) {
        if (field == r) return true;
        if (location_contains_ref(ctx.location_of(field), r, ctx, visited)) return true;
    }
    return false;
}

} // namespace

bool contains(RefId s, RefId r, const EvalContext& ctx) {
    std::set<RefId> visited;
    return contains_rec(s, r, ctx, visited);
}

bool readable(RefId r, const EvalContext& ctx) {
    CapabilitySet c = ctx.caps_of(r);
    return c.ro || c.rw;
}

bool writeable(RefId r, const EvalContext& ctx) {
    // rw on r itself, and rw on every reference that transitively contains
    // r. Quantifying over the transitive container set directly is the
    // terminating form of the recursive definition (containment is
    // transitively closed, so a non-rw ancestor always shows up here).
    // Containers are found by location: only record-holding locations can
    // contain anything.
    if (!ctx.caps_of(r).rw) return false;
    for (Location l : ctx.record_locations()) {
        std::set<Location> visited;
        if (!location_contains_ref(l, r, ctx, visited)) continue;
        for (RefId s : ctx.refs_at(l)) {
            if (s != r && !ctx.caps_of(s).rw) return false;
        }
    }
    return true;
}

bool shared(RefId r, const EvalContext& ctx) {
    return readable(r, ctx) && !ctx.borrowers_of(r).empty();
}

bool unique(RefId r, const EvalContext& ctx) {
    return readable(r, ctx) && ctx.borrowers_of(r).empty();
}

std::set<RefId> borrowers(RefId r, const EvalContext& ctx) {
    return ctx.borrowers_of(r);
}

RefState classify_state(RefId r, const EvalContext& ctx) {
    CapabilitySet c = ctx.caps_of(r);
    if (c.has_borrow()) return RefState::Borrowed;
    if (readable(r, ctx)) {
        return ctx.borrowers_of(r).empty() ? RefState::Unique : RefState::Shared;
    }
    return ctx.was_ever_bound(r) ? RefState::Moved : RefState::Unallocated;
}

void release_binding(const std::string& name, EvalContext& ctx,
                     std::optional<RefId> shadowed) {
    auto it = ctx.vars().find(name);
    if (it == ctx.vars().end()) return;
    RefId r = it->second;
    if (shadowed) {
        ctx.bind_var(name, *shadowed);
    } else {
        ctx.unbind_var(name);
    }
    ctx.set_location(r, Location{0});
    ctx.set_caps(r, CapabilitySet{});
}

namespace {

Location copy_value(Location src, std::optional<Location> dst, EvalContext& ctx,
                    std::map<Location, Location>& memo, SourceSpan span) {
    auto hit = memo.find(src);
    if (hit != memo.end()) return hit->second;

    const Value* v = ctx.value_at(src);
    if (!v || std::holds_alternative<UndefinedValue>(*v)) {
        throw RuntimeError(RuntimeErrorKind::CopyOfUndefined, span, loc_name(src));
    }

    Location target = dst ? *dst : ctx.fresh_location();
    memo[src] = target;

    if (const auto* record = std::get_if<RecordValue>(v)) {
        RecordValue copy;
        copy.type = record->type;
        // Snapshot the field list first: the source value pointer may be
        // rebound under self-copies while we recurse.
        std::vector<std::pair<std::string, RefId>> sources(record->fields.begin(),
                                                           record->fields.end());
        TypeRef structure = record->type;
        for (const auto& [name, src_field] : sources) {
            Location src_field_loc = ctx.location_of(src_field);
            if (src_field_loc.is_null()) {
                throw RuntimeError(RuntimeErrorKind::CopyOfUndefined, span, name);
            }
            Location field_copy = copy_value(src_field_loc, std::nullopt, ctx, memo, span);
            RefId fresh = ctx.fresh_ref();
            ctx.set_location(fresh, field_copy);
            TypeRef field_type;
            if (structure) {
                if (TypeRef st = unroll_to_structure(structure)) {
                    for (const auto& [fname, ftype] :
                         std::get<StructureType>(st->payload).fields) {
                        if (fname == name) field_type = ftype;
                    }
                }
            }
            ctx.set_caps(fresh, field_type ? initial_capabilities(field_type)
                                           : CapabilitySet{true, true, {}});
            copy.fields[name] = fresh;
        }
        ctx.set_value(target, std::move(copy));
    } else {
        // Atoms, functions and builtins copy as-is.
        ctx.set_value(target, *v);
    }
    return target;
}

} // namespace

Location deep_copy(Location l, EvalContext& ctx, SourceSpan span) {
    std::map<Location, Location> memo;
    return copy_value(l, std::nullopt, ctx, memo, span);
}

void deep_copy_into(Location src, Location dst, EvalContext& ctx, SourceSpan span) {
    std::map<Location, Location> memo;
    copy_value(src, dst, ctx, memo, span);
}

std::set<Location> reachable_locations(RefId r, const EvalContext& ctx) {
    std::set<Location> seen;
    std::vector<Location> work;
    Location start = ctx.location_of(r);
    if (start.is_null()) return seen;
    work.push_back(start);
    while (!work.empty()) {
        Location l = work.back();
        work.pop_back();
        if (!seen.insert(l).second) continue;
        const Value* v = ctx.value_at(l);
        if (!v) continue;
        if (const auto* record = std::get_if<RecordValue>(v)) {
            for (const auto& [_, field] : record->fields) {
                Location fl = ctx.location_of(field);
                if (!fl.is_null()) work.push_back(fl);
            }
        }
    }
    return seen;
}

std::string EvalContext::dump() const {
    std::ostringstream out;
    out << "nu:\n";
    for (const auto& [name, r] : vars_) {
        out << "  " << name << " -> " << ref_name(r) << "\n";
    }
    out << "rho:\n";
    for (const auto& [r, l] : refs_) {
        out << "  " << ref_name(r) << " -> " << (l.is_null() ? "0" : loc_name(l)) << "\n";
    }
    out << "mu:\n";
    for (const auto& [l, v] : memory_) {
        out << "  " << loc_name(l) << " -> " << value_summary(v) << "\n";
    }
    out << "kappa:\n";
    for (const auto& [r, c] : caps_) {
        out << "  " << ref_name(r) << " -> " << c.to_string() << "\n";
    }
    out << "states:\n";
    for (const auto& [r, _] : refs_) {
        out << "  " << ref_name(r) << ": " << ref_state_name(classify_state(r, *this)) << "\n";
    }
    return out.str();
}

} // namespace azc

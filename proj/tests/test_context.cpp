#include "doctest.h"

#include "azc/context.hpp"
#include "azc/parser.hpp"

using namespace azc;

namespace {

// Builds a record value at a fresh location with the given field bindings
// (field refs are created bound to the given locations).
RefId make_record(EvalContext& ctx, const std::vector<std::pair<std::string, Location>>& fields,
                  bool mutating = true) {
    RecordValue record;
    std::vector<std::pair<std::string, TypeRef>> field_types;
    for (const auto& [name, loc] : fields) {
        RefId fr = ctx.fresh_ref();
        if (loc.is_null()) {
            ctx.set_location(fr, Location{0});
            ctx.set_caps(fr, CapabilitySet{});
        } else {
            ctx.set_location(fr, loc);
            ctx.set_caps(fr, CapabilitySet{true, true, {}});
        }
        record.fields[name] = fr;
        field_types.emplace_back(name, parse_type_source("@mut Int"));
    }
    record.type = make_structure(std::move(field_types),
                                 mutating ? QualifierSet::own_mut() : QualifierSet::defaults());
    Location l = ctx.fresh_location();
    TypeRef rt = record.type;
    ctx.set_value(l, std::move(record));
    RefId r = ctx.fresh_ref();
    ctx.set_location(r, l);
    ctx.set_caps(r, initial_capabilities(rt));
    return r;
}

RefId make_atom_ref(EvalContext& ctx, int64_t value, bool mutating = true) {
    Location l = ctx.fresh_location();
    ctx.set_value(l, AtomValue{value});
    RefId r = ctx.fresh_ref();
    ctx.set_location(r, l);
    CapabilitySet caps;
    caps.ro = true;
    caps.rw = mutating;
    ctx.set_caps(r, caps);
    return r;
}

} // namespace

TEST_CASE("fresh references and locations are monotone and never reused") {
    EvalContext ctx;
    RefId r1 = ctx.fresh_ref();
    RefId r2 = ctx.fresh_ref();
    CHECK(r1.id == 1);
    CHECK(r2.id == 2);
    CHECK(r1 != r2);
    Location l1 = ctx.fresh_location();
    Location l2 = ctx.fresh_location();
    CHECK_FALSE(l1.is_null());
    CHECK(l1 != l2);
}

TEST_CASE("contains finds direct and nested fields, not atoms") {
    EvalContext ctx;
    RefId inner_atom = make_atom_ref(ctx, 8);
    RefId inner = make_record(ctx, {{"x", ctx.location_of(inner_atom)}});
    RefId outer = make_record(ctx, {{"y", ctx.location_of(inner)}});

    const auto& outer_rec = std::get<RecordValue>(*ctx.value_of(outer));
    RefId y_field = outer_rec.fields.at("y");
    const auto& inner_rec = std::get<RecordValue>(*ctx.value_of(inner));
    RefId x_field = inner_rec.fields.at("x");

    CHECK(contains(outer, y_field, ctx));
    CHECK(contains(outer, x_field, ctx)); // two levels down
    CHECK_FALSE(contains(inner_atom, x_field, ctx));
    CHECK_FALSE(contains(outer, outer, ctx));
}

TEST_CASE("contains terminates on cyclic record graphs") {
    EvalContext ctx;
    RefId rec = make_record(ctx, {{"next", Location{0}}});
    // Tie the knot: the field points back at the record's own location.
    const auto& record = std::get<RecordValue>(*ctx.value_of(rec));
    RefId next = record.fields.at("next");
    ctx.set_location(next, ctx.location_of(rec));
    ctx.set_caps(next, CapabilitySet{true, true, {}});

    CHECK(contains(rec, next, ctx));
    CHECK(contains(next, next, ctx));
    RefId unrelated = make_atom_ref(ctx, 1);
    CHECK_FALSE(contains(rec, unrelated, ctx));
}

TEST_CASE("readable asks for ro or rw") {
    EvalContext ctx;
    RefId ro = make_atom_ref(ctx, 1, false);
    CHECK(readable(ro, ctx));
    RefId none = ctx.fresh_ref();
    ctx.set_location(none, Location{0});
    ctx.set_caps(none, CapabilitySet{});
    CHECK_FALSE(readable(none, ctx));
    RefId rw_only = make_atom_ref(ctx, 2);
    ctx.set_caps(rw_only, CapabilitySet{false, true, {}});
    CHECK(readable(rw_only, ctx));
}

TEST_CASE("writeable requires rw on the reference and on every container") {
    EvalContext ctx;
    RefId atom = make_atom_ref(ctx, 8);
    CHECK(writeable(atom, ctx));

    // Field of a non-mutating record: rw on the field does not help.
    RefId frozen = make_record(ctx, {{"x", ctx.location_of(atom)}}, /*mutating=*/false);
    const auto& rec = std::get<RecordValue>(*ctx.value_of(frozen));
    RefId field = rec.fields.at("x");
    CHECK(ctx.caps_of(field).rw);
    CHECK_FALSE(writeable(field, ctx));

    RefId ro = make_atom_ref(ctx, 3, false);
    CHECK_FALSE(writeable(ro, ctx));
}

TEST_CASE("writeable asserts the literal definition, not folklore") {
    EvalContext ctx;
    RefId r = make_atom_ref(ctx, 1);
    ctx.set_caps(r, CapabilitySet{false, true, {}}); // {rw} alone
    CHECK(writeable(r, ctx));
    CHECK(readable(r, ctx)); // rw counts for readable too
}

TEST_CASE("shared and unique partition readable unborrowed references") {
    EvalContext ctx;
    RefId owner = make_atom_ref(ctx, 10);
    CHECK(unique(owner, ctx));
    CHECK_FALSE(shared(owner, ctx));

    // An alias takes a borrow capability on the owner.
    RefId alias = ctx.fresh_ref();
    ctx.set_location(alias, ctx.location_of(owner));
    ctx.set_caps(alias, CapabilitySet{true, false, {owner}});

    CHECK(shared(owner, ctx));
    CHECK_FALSE(unique(owner, ctx));
    CHECK(borrowers(owner, ctx) == std::set<RefId>{alias});

    // The alias itself is readable, unborrowed, hence unique by the
    // literal predicate, though classified Borrowed.
    CHECK(unique(alias, ctx));
    CHECK(classify_state(alias, ctx) == RefState::Borrowed);
}

TEST_CASE("unreadable references are neither shared nor unique") {
    EvalContext ctx;
    RefId r = ctx.fresh_ref();
    ctx.set_location(r, Location{0});
    ctx.set_caps(r, CapabilitySet{});
    CHECK_FALSE(shared(r, ctx));
    CHECK_FALSE(unique(r, ctx));
}

TEST_CASE("classification covers the five states") {
    EvalContext ctx;

    RefId unalloc = ctx.fresh_ref();
    ctx.set_location(unalloc, Location{0});
    ctx.set_caps(unalloc, CapabilitySet{});
    CHECK(classify_state(unalloc, ctx) == RefState::Unallocated);

    RefId owner = make_atom_ref(ctx, 10);
    CHECK(classify_state(owner, ctx) == RefState::Unique);

    RefId alias = ctx.fresh_ref();
    ctx.set_location(alias, ctx.location_of(owner));
    ctx.set_caps(alias, CapabilitySet{true, false, {owner}});
    CHECK(classify_state(alias, ctx) == RefState::Borrowed);
    CHECK(classify_state(owner, ctx) == RefState::Shared);

    RefId moved = make_atom_ref(ctx, 20);
    ctx.set_location(moved, Location{0});
    ctx.set_caps(moved, CapabilitySet{});
    CHECK(classify_state(moved, ctx) == RefState::Moved);
}

TEST_CASE("release_binding empties the named reference and restores shadowed entries") {
    EvalContext ctx;
    RefId owner = make_atom_ref(ctx, 10);
    ctx.bind_var("a", owner);

    RefId alias = ctx.fresh_ref();
    ctx.set_location(alias, ctx.location_of(owner));
    ctx.set_caps(alias, CapabilitySet{true, false, {owner}});
    ctx.bind_var("c", alias);

    CHECK(shared(owner, ctx));
    release_binding("c", ctx);
    CHECK_FALSE(ctx.vars().contains("c"));
    CHECK(unique(owner, ctx)); // the fragment came back
    CHECK(ctx.caps_of(alias).empty());
    CHECK(ctx.location_of(alias).is_null());

    // Releasing an owner leaves borrowers dangling-by-rule; their kappa
    // still answers readable().
    RefId alias2 = ctx.fresh_ref();
    ctx.set_location(alias2, ctx.location_of(owner));
    ctx.set_caps(alias2, CapabilitySet{true, false, {owner}});
    release_binding("a", ctx);
    CHECK(readable(alias2, ctx));
    CHECK_FALSE(readable(owner, ctx));

    // Shadow restore.
    RefId first = ctx.fresh_ref();
    RefId second = ctx.fresh_ref();
    ctx.set_location(second, Location{0});
    ctx.set_caps(second, CapabilitySet{});
    ctx.bind_var("x", second);
    release_binding("x", ctx, first);
    CHECK(ctx.vars().at("x") == first);
}

TEST_CASE("releasing an unallocated name only drops the variable entry") {
    EvalContext ctx;
    RefId r = ctx.fresh_ref();
    ctx.set_location(r, Location{0});
    ctx.set_caps(r, CapabilitySet{});
    ctx.bind_var("x", r);
    release_binding("x", ctx);
    CHECK_FALSE(ctx.vars().contains("x"));
    CHECK(classify_state(r, ctx) == RefState::Unallocated);
}

TEST_CASE("deep copy of an atom leaves the original untouched") {
    EvalContext ctx;
    RefId atom = make_atom_ref(ctx, 42);
    Location src = ctx.location_of(atom);
    Location copy = deep_copy(src, ctx);
    CHECK(copy != src);
    CHECK(std::get<int64_t>(std::get<AtomValue>(*ctx.value_at(copy))) == 42);
    CHECK(std::get<int64_t>(std::get<AtomValue>(*ctx.value_at(src))) == 42);
}

TEST_CASE("deep copy of a record yields independently mutable fields") {
    EvalContext ctx;
    RefId atom = make_atom_ref(ctx, 8);
    RefId rec = make_record(ctx, {{"x", ctx.location_of(atom)}});
    Location src = ctx.location_of(rec);

    Location copy = deep_copy(src, ctx);
    const auto& copied = std::get<RecordValue>(*ctx.value_at(copy));
    RefId copy_field = copied.fields.at("x");
    CHECK(copy_field != std::get<RecordValue>(*ctx.value_at(src)).fields.at("x"));

    // Mutate the copy's field; the source still reads 8.
    ctx.set_value(ctx.location_of(copy_field), AtomValue{int64_t{99}});
    const auto& orig = std::get<RecordValue>(*ctx.value_at(src));
    Location orig_field_loc = ctx.location_of(orig.fields.at("x"));
    CHECK(std::get<int64_t>(std::get<AtomValue>(*ctx.value_at(orig_field_loc))) == 8);

    // Copied fields carry the initial capabilities of their declared type.
    CHECK(ctx.caps_of(copy_field).rw);
    CHECK(ctx.caps_of(copy_field).ro);
}

TEST_CASE("deep copy preserves cycles and internal sharing") {
    EvalContext ctx;
    RefId rec = make_record(ctx, {{"next", Location{0}}});
    const auto& record = std::get<RecordValue>(*ctx.value_of(rec));
    RefId next = record.fields.at("next");
    ctx.set_location(next, ctx.location_of(rec)); // cycle
    ctx.set_caps(next, CapabilitySet{true, true, {}});

    Location src = ctx.location_of(rec);
    Location copy = deep_copy(src, ctx);
    const auto& copied = std::get<RecordValue>(*ctx.value_at(copy));
    Location copy_next = ctx.location_of(copied.fields.at("next"));
    CHECK(copy_next == copy); // the copy's cycle mirrors the original's shape
    CHECK(copy != src);
}

TEST_CASE("deep copy rejects unbound fields") {
    EvalContext ctx;
    RefId rec = make_record(ctx, {{"x", Location{0}}});
    CHECK_THROWS_AS(deep_copy(ctx.location_of(rec), ctx), RuntimeError);
}

TEST_CASE("copy reachability is disjoint from the source") {
    EvalContext ctx;
    RefId a = make_atom_ref(ctx, 1);
    RefId inner = make_record(ctx, {{"x", ctx.location_of(a)}});
    RefId outer = make_record(ctx, {{"y", ctx.location_of(inner)}});

    Location copy = deep_copy(ctx.location_of(outer), ctx);
    RefId copy_ref = ctx.fresh_ref();
    ctx.set_location(copy_ref, copy);
    ctx.set_caps(copy_ref, CapabilitySet{true, true, {}});

    auto from_src = reachable_locations(outer, ctx);
    auto from_copy = reachable_locations(copy_ref, ctx);
    for (Location l : from_copy) CHECK_FALSE(from_src.contains(l));
}

TEST_CASE("dump renders the four tables deterministically") {
    EvalContext ctx;
    RefId r = make_atom_ref(ctx, 5);
    ctx.bind_var("a", r);
    std::string d1 = ctx.dump();
    std::string d2 = ctx.dump();
    CHECK(d1 == d2);
    CHECK(d1.find("a -> r1") != std::string::npos);
    CHECK(d1.find("r1: unique") != std::string::npos);
}

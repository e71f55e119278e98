#include "azc/driver.hpp"

#include <array>
#include <sstream>

#include "azc/parser.hpp"

namespace azc {

namespace {

// One synthesized micro-program per (state x operator-position) cell. The
// subject `s` is driven into the row state, the column operation is
// applied, and the cell records the subject's resulting state (or x when
// the operation's premises reject it). Recipes are documented in
// docs/matrix.md.

constexpr std::array<const char*, 5> kRowNames = {"unalloc.", "unique", "shared", "borrowed",
                                                  "moved"};
constexpr std::array<const char*, 5> kRowPrep = {
    "",                 // unallocated: just declared
    "s := 1",           // copy-initialized owner
    "s := 1; w &- s",   // cst borrower keeps a fragment of s
    "o := 1; s &- o",   // s holds a mut borrow of o
    "s := 1; p <- s",   // s's value was moved away
};

constexpr std::array<const char*, 6> kColNames = {"\xE2\x80\xA2&-", "\xE2\x80\xA2:=",
                                                  "\xE2\x80\xA2<-", "&-\xE2\x80\xA2",
                                                  ":=\xE2\x80\xA2", "<-\xE2\x80\xA2"};
constexpr std::array<const char*, 6> kColOp = {
    "u := 1; s &- u", // subject as alias target
    "u := 1; s := u", // subject as copy target
    "u := 1; s <- u", // subject as move target
    "v &- s",         // subject aliased (v is @cst)
    "v := s",         // subject copied from
    "v <- s",         // subject moved from
};

std::string cell_state_label(RefState s) {
    switch (s) {
    case RefState::Unallocated: return "unalloc.";
    default: return ref_state_name(s);
    }
}

} // namespace

std::array<std::array<std::string, 6>, 5> matrix_cells() {
    std::array<std::array<std::string, 6>, 5> cells;
    TypeRef mut_int = parse_type_source("@mut Int");
    TypeRef cst_int = parse_type_source("@cst Int");

    for (size_t row = 0; row < 5; ++row) {
        for (size_t col = 0; col < 6; ++col) {
            Evaluator ev;
            RefId subject = ev.declare_root("s", mut_int);
            ev.declare_root("o", mut_int);
            ev.declare_root("p", mut_int);
            ev.declare_root("u", mut_int);
            ev.declare_root("w", cst_int);
            ev.declare_root("v", col == 3 ? cst_int : mut_int);

            const std::string roots[] = {"s", "o", "p", "u", "w", "v"};
            std::vector<std::string> scope(std::begin(roots), std::end(roots));

            if (kRowPrep[row][0] != '\0') {
                ev.eval_program(parse_source(kRowPrep[row], scope));
            }
            try {
                ev.eval_program(parse_source(kColOp[col], scope));
                cells[row][col] = cell_state_label(classify_state(subject, ev.context()));
            } catch (const RuntimeError&) {
                cells[row][col] = "\xC3\x97"; // multiplication sign
            }
        }
    }
    return cells;
}

std::string render_matrix() {
    auto cells = matrix_cells();
    std::ostringstream out;

    auto pad = [](const std::string& s, size_t width) {
        // Column widths count display characters; the bullet and the x are
        // multi-byte.
        size_t display = 0;
        for (char c : s) display += (static_cast<unsigned char>(c) & 0xC0) != 0x80;
        return s + std::string(width > display ? width - display : 0, ' ');
    };

    out << pad("", 10) << "|";
    for (const char* name : kColNames) out << " " << pad(name, 9) << "|";
    out << "\n";
    out << std::string(10, '-') << "+";
    for (int i = 0; i < 6; ++i) out << std::string(10, '-') << "+";
    out << "\n";
    for (size_t row = 0; row < 5; ++row) {
        out << pad(kRowNames[row], 10) << "|";
        for (size_t col = 0; col < 6; ++col) out << " " << pad(cells[row][col], 9) << "|";
        out << "\n";
    }
    return out.str();
}

} // namespace azc

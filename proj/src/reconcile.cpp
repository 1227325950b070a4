#include "es/reconcile.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace es {

const std::vector<WorkedExample>& worked_examples() {
    // printed values, verbatim (including misprints)
    static const std::vector<WorkedExample> ex = {
        {"4.1.1", "F4.1", "s=3,t=2,d=0", 1302, 31249, {7844, 3312394, 4624852}, 0},
        {"4.2.1", "F4.2", "s=1,t=2,d=0", 525, 12601, {3172, 1537322, 655252}, 0},
        {"4.3.1", "F4.3", "s=1,t=0,d=7", 635, 15241, {3822, 2240427, 2273862}, 0},
        {"4.3.2", "F4.3", "s=1,t=7,d=1", 810, 19441, {4914, 3674349, 505466}, 0},
        {"4.3.3", "F4.3", "s=1,t=0,d=9", 817, 19609, {4914, 3706101, 4588506}, 0},
        {"4.4.1", "F4.4", "s=0,t=2,d=6", 1764, 42337, {10600, 44877220, 8457400}, 0},
        {"4.5.1", "F4.5", "s=1,t=0,d=4", 882, 21169, {5304, 3302364, 8636952}, 0},
        {"4.5.2", "F4.5", "s=0,t=2,d=6", 1522, 36529, {10980, 40108842, 6575220}, 0},
        {"4.7.1", "F4.7", "s=0,t=5,d=3", 897, 21529, {5418, 8331723, 904218}, 0},
        {"4.7.2", "F4.7", "s=1,t=0,d=26", 1480, 35521, {8892, 8311914, 35094748}, 0},
        {"4.8.1", "F4.8", "s=0,t=0,d=6", 792, 19009, {4760, 6463060, 5322520}, 0},
        {"4.8.2", "F4.8", "s=0,t=3,d=2", 1657, 39769, {9968, 28315528, 4454128}, 0},
        {"5.1.1", "F5.1a", "s=5,t=0,d=0", 304, 7297, {1848, 160534, 1225896}, 152},
        {"5.1.2", "F5.1a", "s=1,t=0,d=3", 402, 9649, {2420, 1167529, 2122780}, 201},
        {"5.1.3", "F5.1a", "s=1,t=0,d=4", 512, 12289, {3080, 1892506, 3440920}, 256},
        {"5.1.4", "F5.1a", "s=4,t=0,d=2", 994, 23857, {5984, 2099416, 12978208}, 497},
        {"5.1.5", "F5.1a", "s=1,t=0,d=16", 1832, 43969, {11000, 24182950, 43969000}, 916},
        {"5.4.1", "F5.4", "r=0,t=0,d=1", 264, 6337, {1596, 361209, 532308}, 232},
        {"5.4.2", "F5.4", "r=0,t=0,d=2", 530, 12721, {3192, 722418, 1064616}, 265},
        {"5.5.1", "F5.5a", "t=4,c=1", 444, 10657, {2724, 2419139, 127884}, 222},
        {"5.10.1", "F5.10a", "t=1,c=6", 705, 16921, {4248, 5990034, 1218312}, 352},
        {"5.10.2", "F5.10b", "s1=3,t=0,d=7", 1995, 47881, {12012, 3686837, 52286052}, 997},
        {"5.10.3", "F5.10b", "s1=6,t=0,d=1", 537, 12889, {3300, 141779, 3866700}, 268},
        {"5.10.4", "F5.10c", "s=1,t=0,d=4", 717, 17209, {4312, 2650186, 6745928}, 358},
        {"6.1.1", "F6.1", "iota=2,c=0", 314, 7537, {1920, 113955, 964736}, 0},
        {"6.1.2", "F6.1", "iota=2,c=1", 634, 15217, {3840, 456510, 3895552}, 0},
        {"6.1.3", "F6.1", "iota=2,c=3", 1274, 30577, {7680, 1834620, 15655424}, 0},
        {"6.2.1", "F6.2", "r=2,c=0", 248, 5953, {1504, 559582, 190496}, 0},
        {"6.2.2", "F6.2", "r=3,c=0", 498, 11953, {3008, 1123582, 764992}, 0},
        {"6.3.1", "F6.3", "r=2,c=8", 1982, 47569, {11904, 17968668, 18266496}, 0},
        {"6.3.2", "F6.3", "r=3,c=2", 668, 16033, {4032, 2020158, 1026112}, 0},
        {"6.4.1", "F6.4", "r=3,c=1", 1348, 32353, {8128, 8217662, 2070592}, 0},
        {"6.5.1", "F6.5", "r=2,c=21", 1734, 41617, {10416, 27092667, 13983312}, 0},
        {"6.6.1", "F6.6", "r=2,c=6", 1260, 30241, {7584, 14334234, 2903136}, 0},
        {"6.7.1", "F6.7", "r=2,c=3", 1774, 42557, {10704, 28470633, 2042736}, 0},
        {"6.8.1", "F6.8", "r=1,c=2", 754, 18097, {4544, 10279096, 1158208}, 0},
        {"6.9.1", "F6.9", "r=1,c=5", 682, 16369, {4120, 8430035, 654760}, 0},
        {"6.10.1", "F6.10", "r=3,c=1", 1602, 38449, {9696, 11650047, 1230368}, 0},
        {"6.11.1", "F6.11", "r=0,c=20", 1225, 29401, {7360, 13524460, 9408320}, 0},
    };
    return ex;
}

namespace {

using Status = PrintedFormAudit::Status;

// m forced by the construction: 4g - (24m+1) = im1 + im2
Rational construction_m(const FamilyDescriptor& f, const Assignment& a) {
    return (Rational(4) * f.g.eval(a) - f.im1.eval(a) - f.im2.eval(a) - Rational(1)) / Rational(24);
}

PrintedFormAudit audit_printed_m(const FamilyDescriptor& f, const std::string& text, const std::vector<Assignment>& grid) {
    PrintedFormAudit p;
    p.text = text;
    Expr e;
    try {
        e = Expr::parse(text, f.names());
    } catch (const ExprError& err) {
        p.status = Status::Unevaluable;
        p.detail = err.what();
        return p;
    }
    for (const auto& a : grid) {
        const Rational printed = e.eval(a), normative = f.m.eval(a);
        if (printed == normative) continue;
        if (p.mismatches++ == 0) {
            const Rational derived = construction_m(f, a);
            p.detail = fmt::format("at {}: printed form gives {}, construction gives {}{}", f.label(a), printed.str(), derived.str(),
                                   derived == normative ? " (equal to the catalog form)" : " (DIFFERS from the catalog form)");
        }
    }
    p.status = p.mismatches ? Status::Inconsistent : Status::Consistent;
    return p;
}

PrintedFormAudit audit_printed_congruence(const FamilyDescriptor& f, const std::string& text, const std::vector<Assignment>& grid) {
    PrintedFormAudit p;
    p.text = text;
    p.is_congruence = true;
    Congruence c;
    try {
        c = Congruence::parse(text, f.names());
    } catch (const ExprError& err) {
        p.status = Status::Unevaluable;
        p.detail = err.what();
        return p;
    }
    for (const auto& a : grid) {
        const Rational m = f.m.eval(a);
        if (c.holds(m, a)) continue;
        if (p.mismatches++ == 0)
            p.detail = fmt::format("at {}: m = {} but residue {} (mod {})", f.label(a), m.str(), c.residue(a).str(), c.modulus(a).str());
    }
    p.status = p.mismatches ? Status::Inconsistent : Status::Consistent;
    return p;
}

RowAudit audit_row(const FamilyDescriptor& f) {
    RowAudit r;
    r.id = f.id;
    const auto grid = sample_grid(f);
    for (const auto& a : grid) {
        ++r.grid_points;
        try {
            instantiate(f, a);
        } catch (const std::exception& e) {
            if (r.identity_failures++ == 0) r.first_failure = e.what();
            continue;
        }
        const Rational m = f.m.eval(a);
        for (const auto& c : f.congruences)
            if (!c.holds(m, a) && r.congruence_failures++ == 0)
                r.first_failure = fmt::format("{}: m = {} violates {}", f.label(a), m.str(), c.text());
        for (const auto& note : f.case_notes) {
            bool inside = true;
            try {
                inside = note.holds(a);
            } catch (const ExprError&) {
            }
            if (!inside) {
                ++r.outside_case_notes;
                break;
            }
        }
    }
    if (r.identity_failures || r.congruence_failures) {
        // re-derive m from the construction and confirm it lands in the stored congruence classes
        bool ok = true;
        for (const auto& a : grid) {
            const Rational m = construction_m(f, a);
            if (!m.is_integer()) {
                ok = false;
                break;
            }
            for (const auto& c : f.congruences) ok = ok && c.holds(m, a);
        }
        r.rederived = fmt::format("m = (4*({}) - ({}) - ({}) - 1)/24{}", f.g.text(), f.im1.text(), f.im2.text(),
                                  ok ? ", integral and congruence-consistent on the grid" : ", NOT consistent on the grid");
    }
    for (const auto& t : f.printed_m) r.printed.push_back(audit_printed_m(f, t, grid));
    for (const auto& t : f.printed_congruences) r.printed.push_back(audit_printed_congruence(f, t, grid));
    return r;
}

ExampleAudit audit_example(const Catalog& cat, const WorkedExample& ex) {
    ExampleAudit r;
    r.example = &ex;
    const auto& f = cat.find(ex.family);
    const Assignment stated = parse_assignment(f, {ex.stated});
    r.stated_label = f.label(stated);
    std::optional<FamilyInstance> inst;
    try {
        inst = instantiate(f, stated);
        r.reproduces = inst->m == ex.m && inst->n == ex.n && inst->g == ex.printed[0];
        if (inst->m != ex.m) r.stated_error = fmt::format("stated parameters give m = {}, not {}", inst->m, ex.m);
    } catch (const std::exception& e) {
        r.stated_error = e.what();
    }
    if (!inst || inst->m != ex.m) {
        // recover parameters from the printed m, preferring the printed n1
        auto cands = match_m(f, ex.m);
        auto it = std::find_if(cands.begin(), cands.end(), [&](const FamilyInstance& c) { return c.g == ex.printed[0]; });
        if (it == cands.end() && !cands.empty()) it = cands.begin();
        if (it != cands.end()) {
            inst = *it;
            r.corrected_label = it->label();
            r.corrections.push_back({ex.id, "params", ex.stated, it->label().substr(f.id.size() + 1, it->label().size() - f.id.size() - 2)});
        } else {
            inst.reset();
        }
    }
    if (24 * ex.m + 1 != ex.n) r.corrections.push_back({ex.id, "n", std::to_string(ex.n), std::to_string(24 * ex.m + 1)});
    if (ex.printed_m1 && ex.printed_m1 != ex.m / 2)
        r.corrections.push_back({ex.id, "m1", std::to_string(ex.printed_m1), std::to_string(ex.m / 2)});

    r.printed_triple_verifies = verify_decomposition(ex.n, ex.printed[0], ex.printed[1], ex.printed[2]);
    if (!inst) return r;
    r.triple = inst->triple;
    if (r.printed_triple_verifies && ex.n == inst->n) return r;
    // row-role order: n1 = g, then g*n/im1, g*n/im2
    const u64 ref[3] = {inst->g, static_cast<u64>(static_cast<u128>(inst->g) * inst->n / inst->im1),
                        static_cast<u64>(static_cast<u128>(inst->g) * inst->n / inst->im2)};
    auto in_ref = [&](u64 v) { return std::find(ref, ref + 3, v) != ref + 3; };
    auto printed_has = [&](u64 v) { return std::find(ex.printed, ex.printed + 3, v) != ex.printed + 3; };
    for (int i = 0; i < 3; ++i) {
        if (in_ref(ex.printed[i])) continue;
        u64 fix = ref[i];
        if (printed_has(fix))
            for (u64 v : ref)
                if (!printed_has(v)) fix = v;
        r.corrections.push_back({ex.id, "n" + std::to_string(i + 1), std::to_string(ex.printed[i]), std::to_string(fix)});
    }
    return r;
}

const char* status_name(Status s) {
    switch (s) {
        case Status::Consistent: return "consistent";
        case Status::Inconsistent: return "INCONSISTENT";
        case Status::Unevaluable: return "UNEVALUABLE";
    }
    return "?";
}

}  // namespace

ReconciliationReport reconcile(const Catalog& cat) {
    ReconciliationReport rep;
    for (const auto& f : cat.families()) rep.rows.push_back(audit_row(f));
    for (const auto& ex : worked_examples()) rep.examples.push_back(audit_example(cat, ex));
    return rep;
}

bool ReconciliationReport::catalog_clean() const {
    return std::all_of(rows.begin(), rows.end(), [](const RowAudit& r) { return r.identity_failures == 0 && r.congruence_failures == 0; });
}

std::vector<Correction> ReconciliationReport::corrections() const {
    std::vector<Correction> out;
    for (const auto& e : examples) out.insert(out.end(), e.corrections.begin(), e.corrections.end());
    return out;
}

std::string ReconciliationReport::text() const {
    std::string s = "Catalog reconciliation\n======================\n\n";
    u64 pts = 0;
    for (const auto& r : rows) pts += r.grid_points;
    s += fmt::format("Rows: {}   grid points: {}   catalog {}\n\n", rows.size(), pts, catalog_clean() ? "clean" : "HAS DEFECTS");
    for (const auto& r : rows) {
        s += fmt::format("{:<8} {:>5} points  identity failures {}  congruence failures {}", r.id, r.grid_points, r.identity_failures,
                         r.congruence_failures);
        if (r.outside_case_notes) s += fmt::format("  ({} points outside the case notes, all verified)", r.outside_case_notes);
        s += "\n";
        if (!r.first_failure.empty()) s += "         first failure: " + r.first_failure + "\n";
        if (!r.rederived.empty()) s += "         re-derived: " + r.rederived + "\n";
        for (const auto& p : r.printed) {
            s += fmt::format("         printed {} \"{}\": {}", p.is_congruence ? "congruence" : "m form", p.text, status_name(p.status));
            if (p.mismatches) s += fmt::format(" ({} grid mismatches)", p.mismatches);
            s += "\n";
            if (!p.detail.empty()) s += "           " + p.detail + "\n";
        }
    }
    s += "\nWorked examples\n---------------\n\n";
    for (const auto& e : examples) {
        const auto& ex = *e.example;
        s += fmt::format("{:<7} {:<7} stated {:<14} m={} n={}  ", ex.id, ex.family, ex.stated, ex.m, ex.n);
        s += e.reproduces ? "reproduces m, n, n1" : "DOES NOT reproduce m, n, n1";
        s += e.printed_triple_verifies ? "; printed triple verifies\n" : "; printed triple FAILS the identity\n";
        if (!e.stated_error.empty()) s += "        stated parameters: " + e.stated_error + "\n";
        if (!e.corrected_label.empty()) s += "        parameters recovered from m: " + e.corrected_label + "\n";
        if (e.triple) s += fmt::format("        verified triple for n={}: ({}, {}, {})\n", e.triple->n, e.triple->n1, e.triple->n2, e.triple->n3);
        for (const auto& c : e.corrections) s += fmt::format("        {}: printed {} -> corrected {}\n", c.field, c.printed, c.corrected);
    }
    const auto all = corrections();
    s += fmt::format("\nCorrections: {}\n", all.size());
    return s;
}

std::string ReconciliationReport::corrections_tsv() const {
    std::string s = "example_id\tfield\tprinted\tcorrected\n";
    for (const auto& c : corrections()) s += c.example_id + "\t" + c.field + "\t" + c.printed + "\t" + c.corrected + "\n";
    return s;
}

}  // namespace es

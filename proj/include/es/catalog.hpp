#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "es/exact_arith.hpp"
#include "es/expr.hpp"
#include "es/tame.hpp"

namespace es {

struct Param {
    std::string name;
    i64 min = 0;
};

using Assignment = std::vector<i64>;  // aligned with FamilyDescriptor::params

struct FamilyDescriptor {
    std::string id;
    std::vector<Param> params;  // multiplier last
    Expr m, g, im1, im2;
    std::vector<Constraint> conditions;   // enforced
    std::vector<Congruence> congruences;  // must hold for every member
    std::vector<Constraint> case_notes;   // informational only
    std::vector<std::string> printed_m;            // alternative closed forms, audited by reconcile
    std::vector<std::string> printed_congruences;  // likewise
    std::string anchor;

    std::vector<std::string> names() const;
    std::size_t multiplier() const { return params.size() - 1; }
    bool admissible(const Assignment& a) const;  // domain minimums and conditions
    std::string label(const Assignment& a) const;
};

struct FamilyInstance {
    const FamilyDescriptor* family = nullptr;
    Assignment assignment;
    u64 m = 0, n = 0, g = 0, k = 0, im1 = 0, im2 = 0;
    SolutionTriple triple;

    // normalized so im1 >= im2
    TameCertificate certificate() const;
    std::string label() const { return family->label(assignment); }
};

class InstantiationError : public std::runtime_error {
public:
    enum class Kind { Domain, Integrality, Identity };
    InstantiationError(Kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

class Catalog {
public:
    static const Catalog& builtin();
    static Catalog parse(std::string_view text);

    std::string serialize() const;
    const std::vector<FamilyDescriptor>& families() const { return rows_; }
    const FamilyDescriptor& find(std::string_view id) const;  // throws std::out_of_range

private:
    std::string preamble_;  // comment lines ahead of the column header
    std::vector<FamilyDescriptor> rows_;
};

const std::string& builtin_catalog_text();

FamilyInstance instantiate(const FamilyDescriptor& f, const Assignment& a);

// m as an affine function of the multiplier, non-multiplier values fixed
struct AffineM {
    Rational offset;  // m at multiplier 0
    Rational slope;
};
AffineM affine_m(const FamilyDescriptor& f, Assignment a);

// Calls fn(assignment with multiplier slot unset) for every non-multiplier tuple whose
// smallest reachable m (all later params and the multiplier at their minimums) is <= bound.
// Relies on m being nondecreasing in every parameter; the test suite checks that.
template <class Fn>
void for_each_prefix(const FamilyDescriptor& f, i64 bound, Fn&& fn);

std::vector<FamilyInstance> members_up_to(const FamilyDescriptor& f, u64 m_max);
// same, restricted to fixed non-multiplier values (one congruence class)
std::vector<FamilyInstance> class_members(const FamilyDescriptor& f, const Assignment& fixed, u64 m_max);
// "m ≡ R (mod M)" for a class; M spans consecutive admissible multipliers
std::string class_congruence(const FamilyDescriptor& f, const Assignment& fixed);

// sample grid: each non-multiplier value over its first `span` domain values, the
// multiplier over its first `span` admissible values with integral m >= 1
std::vector<Assignment> sample_grid(const FamilyDescriptor& f, int span = 7);

std::vector<FamilyInstance> match_m(const Catalog& cat, u64 m);
std::vector<FamilyInstance> match_m(const FamilyDescriptor& f, u64 m);

// parses "p=v,q=w" (or separate items) against the row's parameter names
Assignment parse_assignment(const FamilyDescriptor& f, const std::vector<std::string>& items);

// ---- implementation of the template ----

namespace detail {
bool lower_bound_ok(const FamilyDescriptor& f, Assignment& a, std::size_t fixed_upto, i64 bound);
}

template <class Fn>
void for_each_prefix(const FamilyDescriptor& f, i64 bound, Fn&& fn) {
    const std::size_t np = f.multiplier();
    Assignment a(f.params.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.params[i].min;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == np) {
            fn(static_cast<const Assignment&>(a));
            return;
        }
        for (i64 v = f.params[i].min;; ++v) {
            a[i] = v;
            for (std::size_t j = i + 1; j < a.size(); ++j) a[j] = f.params[j].min;
            if (!detail::lower_bound_ok(f, a, i, bound)) break;
            self(self, i + 1);
        }
        a[i] = f.params[i].min;
    };
    rec(rec, 0);
}

}  // namespace es

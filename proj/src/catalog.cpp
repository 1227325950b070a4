#include "es/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace es {

namespace {

constexpr const char* kVersionLine = "# erdos-straus family catalog v1";
const std::vector<std::string> kColumns = {"id",        "params",     "m",         "g",
                                           "im1",       "im2",        "conditions", "congruence",
                                           "case_notes", "printed_m", "printed_congruence", "anchor"};

std::vector<std::string> split_tabs(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto p = line.find('\t', start);
        out.emplace_back(line.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

i64 parse_i64(std::string_view s, const std::string& ctx) {
    i64 v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("bad integer '" + std::string(s) + "' in " + ctx);
    return v;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += "; ";
        s += v[i];
    }
    return s;
}

template <class T>
std::vector<std::string> texts(const std::vector<T>& v) {
    std::vector<std::string> out;
    for (const auto& x : v) out.push_back(x.text());
    return out;
}

u64 to_u64(const Rational& r, const char* what) {
    if (!r.is_integer() || r.num() < 0 || r.num() > static_cast<i128>(~u64{0}))
        throw InstantiationError(InstantiationError::Kind::Integrality, std::string(what) + " = " + r.str() + " is not a 64-bit nonnegative integer");
    return static_cast<u64>(r.num());
}

FamilyDescriptor parse_row(const std::vector<std::string>& f) {
    FamilyDescriptor d;
    d.id = f[0];
    std::istringstream ps(f[1]);
    std::string tok;
    while (ps >> tok) {
        auto c = tok.find(':');
        if (c == std::string::npos) throw std::invalid_argument(d.id + ": parameter '" + tok + "' lacks a minimum");
        d.params.push_back({tok.substr(0, c), parse_i64(std::string_view(tok).substr(c + 1), d.id)});
    }
    if (d.params.empty()) throw std::invalid_argument(d.id + ": no parameters");
    const auto names = d.names();
    d.m = Expr::parse(f[2], names);
    d.g = Expr::parse(f[3], names);
    d.im1 = Expr::parse(f[4], names);
    d.im2 = Expr::parse(f[5], names);
    for (const auto& s : split_list(f[6])) d.conditions.push_back(Constraint::parse(s, names));
    for (const auto& s : split_list(f[7])) d.congruences.push_back(Congruence::parse(s, names));
    for (const auto& s : split_list(f[8])) d.case_notes.push_back(Constraint::parse(s, names));
    d.printed_m = split_list(f[9]);  // kept as text: a printed form may not even parse
    d.printed_congruences = split_list(f[10]);
    d.anchor = f[11];
    return d;
}

}  // namespace

std::vector<std::string> FamilyDescriptor::names() const {
    std::vector<std::string> n;
    for (const auto& p : params) n.push_back(p.name);
    return n;
}

bool FamilyDescriptor::admissible(const Assignment& a) const {
    if (a.size() != params.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < params[i].min) return false;
    try {
        for (const auto& c : conditions)
            if (!c.holds(a)) return false;
    } catch (const ExprError&) {
        return false;
    }
    return true;
}

std::string FamilyDescriptor::label(const Assignment& a) const {
    std::string s = id + "{";
    for (std::size_t i = 0; i < params.size() && i < a.size(); ++i) {
        if (i) s += ",";
        s += params[i].name + "=" + std::to_string(a[i]);
    }
    return s + "}";
}

TameCertificate FamilyInstance::certificate() const {
    return {m, k, std::max(im1, im2), std::min(im1, im2)};
}

Catalog Catalog::parse(std::string_view text) {
    Catalog c;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header_seen = false;
    bool versioned = false;
    std::set<std::string> ids;
    while (std::getline(in, line)) {
        if (!header_seen && line.starts_with("#")) {
            if (line == kVersionLine) versioned = true;
            c.preamble_ += line + "\n";
            continue;
        }
        if (line.empty()) continue;
        auto f = split_tabs(line);
        if (!header_seen) {
            if (f != kColumns) throw std::invalid_argument("catalog column header mismatch");
            header_seen = true;
            continue;
        }
        if (f.size() != kColumns.size())
            throw std::invalid_argument("catalog row '" + f[0] + "' has " + std::to_string(f.size()) + " fields");
        c.rows_.push_back(parse_row(f));
        if (!ids.insert(c.rows_.back().id).second) throw std::invalid_argument("duplicate family id " + f[0]);
    }
    if (!versioned) throw std::invalid_argument("catalog lacks the v1 version line");
    if (!header_seen) throw std::invalid_argument("catalog lacks a column header");
    return c;
}

std::string Catalog::serialize() const {
    std::string out = preamble_;
    for (std::size_t i = 0; i < kColumns.size(); ++i) out += (i ? "\t" : "") + kColumns[i];
    out += "\n";
    for (const auto& d : rows_) {
        std::string params;
        for (const auto& p : d.params) params += (params.empty() ? "" : " ") + p.name + ":" + std::to_string(p.min);
        const std::vector<std::string> f = {d.id,
                                            params,
                                            d.m.text(),
                                            d.g.text(),
                                            d.im1.text(),
                                            d.im2.text(),
                                            join(texts(d.conditions)),
                                            join(texts(d.congruences)),
                                            join(texts(d.case_notes)),
                                            join(d.printed_m),
                                            join(d.printed_congruences),
                                            d.anchor};
        for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "\t" : "") + f[i];
        out += "\n";
    }
    return out;
}

const Catalog& Catalog::builtin() {
    static const Catalog c = parse(builtin_catalog_text());
    return c;
}

const FamilyDescriptor& Catalog::find(std::string_view id) const {
    for (const auto& d : rows_)
        if (d.id == id) return d;
    throw std::out_of_range("unknown family id '" + std::string(id) + "'");
}

FamilyInstance instantiate(const FamilyDescriptor& f, const Assignment& a) {
    using K = InstantiationError::Kind;
    if (a.size() != f.params.size())
        throw InstantiationError(K::Domain, f.id + ": expected " + std::to_string(f.params.size()) + " parameter values");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < f.params[i].min)
            throw InstantiationError(K::Domain, f.label(a) + ": " + f.params[i].name + " below its minimum " + std::to_string(f.params[i].min));
    for (const auto& c : f.conditions) {
        bool ok = false;
        try {
            ok = c.holds(a);
        } catch (const ExprError&) {
        }
        if (!ok) throw InstantiationError(K::Integrality, f.label(a) + ": side condition fails: " + c.text());
    }
    const Rational mr = f.m.eval(a);
    if (!mr.is_integer()) throw InstantiationError(K::Integrality, f.label(a) + ": m = " + mr.str() + " is not an integer");
    if (mr.num() < 1) throw InstantiationError(K::Domain, f.label(a) + ": m = " + mr.str() + " is below 1");
    if (mr.num() > static_cast<i128>((~u64{0} - 1) / 24)) throw std::overflow_error(f.label(a) + ": m exceeds 64-bit range");

    FamilyInstance inst;
    inst.family = &f;
    inst.assignment = a;
    inst.m = static_cast<u64>(mr.num());
    inst.n = 24 * inst.m + 1;
    inst.g = to_u64(f.g.eval(a), "g");
    inst.im1 = to_u64(f.im1.eval(a), "im1");
    inst.im2 = to_u64(f.im2.eval(a), "im2");
    if (inst.im1 == 0 || inst.im2 == 0) throw InstantiationError(K::Identity, f.label(a) + ": zero summand");

    const i128 lhs = 4 * static_cast<i128>(inst.g) - (24 * static_cast<i128>(inst.m) + 1);
    if (lhs != static_cast<i128>(inst.im1) + inst.im2)
        throw InstantiationError(K::Identity, f.label(a) + ": split identity fails, 4g-n = " + to_string(lhs) + " but im1+im2 = " +
                                                  std::to_string(inst.im1 + inst.im2));
    if (inst.g % inst.im1 || inst.g % inst.im2)
        throw InstantiationError(K::Identity, f.label(a) + ": a summand does not divide g");
    inst.k = inst.g - 6 * inst.m;
    inst.triple = certificate_to_triple(inst.certificate());
    if (!verify_decomposition(inst.n, inst.triple))
        throw InstantiationError(K::Identity, f.label(a) + ": triple fails the exact identity");
    return inst;
}

AffineM affine_m(const FamilyDescriptor& f, Assignment a) {
    const std::size_t mu = f.multiplier();
    a[mu] = 0;
    const Rational m0 = f.m.eval(a);
    a[mu] = 1;
    const Rational m1 = f.m.eval(a);
    a[mu] = 2;
    const Rational m2 = f.m.eval(a);
    if (!(m2 - m1 == m1 - m0)) throw std::logic_error(f.id + ": m is not affine in the multiplier");
    if (!(m1 - m0 > Rational(0))) throw std::logic_error(f.id + ": m does not increase with the multiplier");
    return {m0, m1 - m0};
}

namespace detail {

bool lower_bound_ok(const FamilyDescriptor& f, Assignment& a, std::size_t fixed_upto, i64 bound) {
    if (a[fixed_upto] - f.params[fixed_upto].min > 10'000'000)
        throw std::logic_error(f.id + ": parameter enumeration did not terminate");
    try {
        return f.m.eval(a) <= Rational(bound);
    } catch (const std::overflow_error&) {
        return false;
    }
}

}  // namespace detail

namespace {

// instances along the multiplier axis with m <= m_max; a holds the fixed prefix
void scan_multiplier(const FamilyDescriptor& f, Assignment a, u64 m_max, std::vector<FamilyInstance>& out) {
    const std::size_t mu = f.multiplier();
    const AffineM am = affine_m(f, a);
    for (i64 c = f.params[mu].min;; ++c) {
        const Rational m = am.offset + am.slope * Rational(c);
        if (m > Rational(static_cast<i128>(m_max))) break;
        if (!m.is_integer() || m.num() < 1) continue;
        a[mu] = c;
        try {
            out.push_back(instantiate(f, a));
        } catch (const InstantiationError& e) {
            if (e.kind() == InstantiationError::Kind::Identity) throw;
        }
    }
}

void sort_dedup(std::vector<FamilyInstance>& v) {
    std::stable_sort(v.begin(), v.end(), [](const FamilyInstance& x, const FamilyInstance& y) {
        if (x.m != y.m) return x.m < y.m;
        return x.assignment < y.assignment;
    });
    std::set<TameCertificate> seen;
    std::erase_if(v, [&](const FamilyInstance& x) { return !seen.insert(x.certificate()).second; });
}

}  // namespace

std::vector<FamilyInstance> members_up_to(const FamilyDescriptor& f, u64 m_max) {
    std::vector<FamilyInstance> out;
    if (m_max < 1) return out;
    for_each_prefix(f, static_cast<i64>(m_max), [&](const Assignment& a) { scan_multiplier(f, a, m_max, out); });
    sort_dedup(out);
    return out;
}

std::vector<FamilyInstance> class_members(const FamilyDescriptor& f, const Assignment& fixed, u64 m_max) {
    std::vector<FamilyInstance> out;
    if (m_max < 1) return out;
    Assignment a(f.params.size());
    for (std::size_t i = 0; i < f.multiplier(); ++i) {
        if (i >= fixed.size()) throw std::invalid_argument(f.id + ": class needs every non-multiplier value");
        a[i] = fixed[i];
    }
    a[f.multiplier()] = f.params.back().min;
    scan_multiplier(f, a, m_max, out);
    sort_dedup(out);
    return out;
}

std::string class_congruence(const FamilyDescriptor& f, const Assignment& fixed) {
    Assignment a(f.params.size());
    for (std::size_t i = 0; i < f.multiplier(); ++i) a[i] = fixed.at(i);
    const std::size_t mu = f.multiplier();
    std::vector<Rational> ms;
    for (i64 c = f.params[mu].min; c < f.params[mu].min + 1000 && ms.size() < 3; ++c) {
        a[mu] = c;
        if (!f.admissible(a)) continue;
        Rational m = f.m.eval(a);
        if (m.is_integer()) ms.push_back(m);
    }
    if (ms.size() < 3) return "none";
    const Rational step = ms[1] - ms[0];
    if (!(ms[2] - ms[1] == step)) return "irregular";
    const i128 mod = step.num();
    i128 res = ms[0].num() % mod;
    if (res < 0) res += mod;
    return "m ≡ " + to_string(res) + " (mod " + to_string(mod) + ")";
}

std::vector<Assignment> sample_grid(const FamilyDescriptor& f, int span) {
    std::vector<Assignment> out;
    const std::size_t mu = f.multiplier();
    Assignment a(f.params.size());
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == mu) {
            int found = 0;
            for (i64 c = f.params[mu].min; found < span && c < f.params[mu].min + 100000; ++c) {
                a[mu] = c;
                if (!f.admissible(a)) continue;
                const Rational m = f.m.eval(a);
                if (!m.is_integer() || m.num() < 1) continue;
                out.push_back(a);
                ++found;
            }
            return;
        }
        for (i64 v = f.params[i].min; v < f.params[i].min + span; ++v) {
            a[i] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<FamilyInstance> match_m(const FamilyDescriptor& f, u64 m) {
    std::vector<FamilyInstance> out;
    if (m < 1) return out;
    const std::size_t mu = f.multiplier();
    for_each_prefix(f, static_cast<i64>(m), [&](const Assignment& pre) {
        Assignment a = pre;
        const AffineM am = affine_m(f, a);
        const Rational q = (Rational(static_cast<i128>(m)) - am.offset) / am.slope;
        if (!q.is_integer() || q.num() < f.params[mu].min) return;
        a[mu] = static_cast<i64>(q.num());
        try {
            out.push_back(instantiate(f, a));
        } catch (const InstantiationError& e) {
            if (e.kind() == InstantiationError::Kind::Identity) throw;
        }
    });
    return out;
}

std::vector<FamilyInstance> match_m(const Catalog& cat, u64 m) {
    std::vector<FamilyInstance> out;
    for (const auto& f : cat.families()) {
        auto v = match_m(f, m);
        out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    }
    return out;
}

Assignment parse_assignment(const FamilyDescriptor& f, const std::vector<std::string>& items) {
    std::map<std::string, i64> given;
    for (const auto& item : items) {
        std::string_view rest = item;
        while (!rest.empty()) {
            auto comma = rest.find(',');
            std::string_view kv = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            if (kv.empty()) continue;
            auto eq = kv.find('=');
            if (eq == std::string_view::npos) throw std::invalid_argument("expected name=value, got '" + std::string(kv) + "'");
            given[std::string(kv.substr(0, eq))] = parse_i64(kv.substr(eq + 1), f.id);
        }
    }
    Assignment a;
    for (const auto& p : f.params) {
        auto it = given.find(p.name);
        if (it == given.end()) throw std::invalid_argument(f.id + ": missing value for " + p.name);
        a.push_back(it->second);
        given.erase(it);
    }
    if (!given.empty()) throw std::invalid_argument(f.id + ": unknown parameter " + given.begin()->first);
    return a;
}

}  // namespace es

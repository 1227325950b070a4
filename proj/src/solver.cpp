#include "es/solver.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "es/tame.hpp"

namespace es {

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Even: return "even";
        case Rule::Mult3: return "mult3";
        case Rule::Mod3Is2: return "mod3is2";
        case Rule::Mod4Is3: return "mod4is3";
        case Rule::Mod24Is13: return "mod24is13";
        case Rule::CompositeScale: return "composite-scale";
        case Rule::Tame: return "tame";
        case Rule::ExhaustiveFallback: return "exhaustive-fallback";
    }
    return "?";
}

SolutionTriple scale_triple(const SolutionTriple& t, u64 p) {
    return make_triple(checked_mul(t.n, p), checked_mul(t.n1, p), checked_mul(t.n2, p), checked_mul(t.n3, p));
}

namespace {

// closed forms keyed by rule; returns the triple for the n the rule implies
SolutionTriple closed_form(Rule r, u64 k) {
    switch (r) {
        case Rule::Even: return make_triple(2 * k, k, k + 1, checked_mul(k, k + 1));
        case Rule::Mult3: return make_triple(3 * k, 3 * k, k + 1, checked_mul(k, k + 1));
        case Rule::Mod3Is2: {
            const u64 n = 3 * k - 1;
            return make_triple(n, n, k, checked_mul(k, n));
        }
        case Rule::Mod4Is3: {
            const u64 x = checked_mul(k, 4 * k - 1);
            return make_triple(4 * k - 1, k, x + 1, checked_mul(x, x + 1));
        }
        case Rule::Mod24Is13: {
            const u64 n = 24 * k - 11;
            return make_triple(n, 6 * k - 2, checked_mul(3 * k - 1, n), checked_mul(6 * k - 2, n));
        }
        default: break;
    }
    throw std::logic_error("not a closed-form rule");
}

u64 smallest_prime_factor(u64 n, const SpfTable* spf) {
    if (spf && spf->covers(n)) return spf->spf[n];
    return factorize_trial(n).front().first;
}

}  // namespace

std::optional<SolutionTriple> exhaustive_fallback(u64 n) {
    if (n < 2) throw std::domain_error("n must be at least 2");
    if (n > (u64{1} << 31)) throw std::overflow_error("fallback search limited to n <= 2^31");
    std::map<u64, unsigned> fn;
    for (auto [p, e] : factorize_trial(n)) fn[p] += e;
    for (u64 n1 = n / 4 + 1; n1 <= 3 * n / 4; ++n1) {
        // 4/n - 1/n1 = (4 n1 - n) / (n n1) = p/q
        const u64 num = 4 * n1 - n, den = n * n1;
        const u64 g = std::gcd(num, den);
        const u64 p = num / g, q = den / g;
        auto fq = fn;
        for (auto [pr, e] : factorize_trial(n1)) fq[pr] += e;
        u64 rest = g;
        for (auto& [pr, e] : fq)
            while (rest % pr == 0) {
                rest /= pr;
                --e;
            }
        // (p n2 - q)(p n3 - q) = q^2; delta = p n2 - q ranges over divisors of q^2 up to q
        Factorization sq;
        for (auto [pr, e] : fq)
            if (e) sq.emplace_back(pr, 2 * e);
        const u128 q2 = static_cast<u128>(q) * q;
        std::vector<u128> ds{1};
        for (auto [pr, e] : sq) {
            const std::size_t base = ds.size();
            u128 pk = 1;
            for (unsigned i = 0; i < e; ++i) {
                pk *= pr;
                if (pk > q) break;
                for (std::size_t j = 0; j < base; ++j)
                    if (ds[j] * pk <= q) ds.push_back(ds[j] * pk);
            }
        }
        std::sort(ds.begin(), ds.end());
        for (u128 d : ds) {
            if ((q + d) % p != 0) continue;
            const u128 other = q + q2 / d;
            if (other % p != 0) continue;
            const u128 n3 = other / p;
            if (n3 > ~u64{0}) throw std::overflow_error("fallback denominator exceeds 64 bits");
            return make_triple(n, n1, static_cast<u64>((q + d) / p), static_cast<u64>(n3));
        }
    }
    return std::nullopt;
}

SolveResult solve(u64 n, const SpfTable* spf) {
    if (n < 3) throw std::domain_error("solve needs n >= 3");
    SolveResult res;
    u64 cur = n;
    std::vector<u64> scales;
    for (;;) {
        std::optional<TraceStep> term;
        if (cur % 2 == 0) term = TraceStep{Rule::Even, {cur / 2}};
        else if (cur % 3 == 0) term = TraceStep{Rule::Mult3, {cur / 3}};
        else if (cur % 3 == 2) term = TraceStep{Rule::Mod3Is2, {(cur + 1) / 3}};
        else if (cur % 4 == 3) term = TraceStep{Rule::Mod4Is3, {(cur + 1) / 4}};
        else if (cur % 24 == 13) term = TraceStep{Rule::Mod24Is13, {(cur + 11) / 24}};
        if (term) {
            res.trace.steps.push_back(*term);
            res.triple = closed_form(term->rule, term->detail[0]);
            break;
        }
        // cur ≡ 1 (mod 24)
        if (!is_prime(cur)) {
            const u64 p = smallest_prime_factor(cur, spf);
            res.trace.steps.push_back({Rule::CompositeScale, {p}});
            scales.push_back(p);
            cur /= p;
            continue;
        }
        const u64 m = (cur - 1) / 24;
        const SpfTable* use = (spf && spf->covers(18 * m)) ? spf : nullptr;
        auto certs = find_tame(m, SearchMode::First, use);
        if (!certs.empty()) {
            const auto& c = certs.front();
            res.trace.steps.push_back({Rule::Tame, {c.m, c.k, c.im1, c.im2}});
            res.triple = certificate_to_triple(c);
            break;
        }
        auto fb = exhaustive_fallback(cur);
        if (!fb) return res;  // unresolved, trace records the reductions so far
        res.trace.steps.push_back({Rule::ExhaustiveFallback, {cur, fb->n1, fb->n2}});
        res.triple = *fb;
        break;
    }
    for (auto it = scales.rbegin(); it != scales.rend(); ++it) res.triple = scale_triple(res.triple, *it);
    if (res.triple.n != n || !verify_decomposition(n, res.triple)) throw std::logic_error("solver produced an unverified triple");
    res.resolved = true;
    return res;
}

SolutionTriple replay(u64 n, const DerivationTrace& trace) {
    if (trace.steps.empty()) throw std::invalid_argument("empty trace");
    u64 cur = n;
    std::vector<u64> scales;
    for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        if (s.rule != Rule::CompositeScale || s.detail.size() != 1 || s.detail[0] < 2 || cur % s.detail[0])
            throw std::invalid_argument("malformed scale step");
        scales.push_back(s.detail[0]);
        cur /= s.detail[0];
    }
    const auto& t = trace.steps.back();
    SolutionTriple base;
    switch (t.rule) {
        case Rule::Even:
        case Rule::Mult3:
        case Rule::Mod3Is2:
        case Rule::Mod4Is3:
        case Rule::Mod24Is13:
            if (t.detail.size() != 1 || t.detail[0] < 1) throw std::invalid_argument("malformed closed-form step");
            base = closed_form(t.rule, t.detail[0]);
            break;
        case Rule::Tame:
            if (t.detail.size() != 4) throw std::invalid_argument("malformed tame step");
            base = certificate_to_triple({t.detail[0], t.detail[1], t.detail[2], t.detail[3]});
            break;
        case Rule::ExhaustiveFallback: {
            if (t.detail.size() != 3) throw std::invalid_argument("malformed fallback step");
            const u64 fn = t.detail[0], a = t.detail[1], b = t.detail[2];
            // 1/n3 = 4/n - 1/a - 1/b = (4ab - nb - na) / (nab)
            const i128 num = 4 * static_cast<i128>(a) * b - static_cast<i128>(fn) * b - static_cast<i128>(fn) * a;
            const u128 den = static_cast<u128>(fn) * a * b;
            if (num <= 0 || den % static_cast<u128>(num)) throw std::invalid_argument("fallback step does not close");
            base = make_triple(fn, a, b, static_cast<u64>(den / static_cast<u128>(num)));
            break;
        }
        case Rule::CompositeScale: throw std::invalid_argument("trace ends in a scale step");
    }
    if (base.n != cur) throw std::invalid_argument("trace terminal rule does not match the reduced n");
    for (auto it = scales.rbegin(); it != scales.rend(); ++it) base = scale_triple(base, *it);
    return base;
}

}  // namespace es

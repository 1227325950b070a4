#include "es/exact_arith.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <stdexcept>

namespace es {

SpfTable sieve_spf(u64 limit) {
    if (limit < 2) throw std::domain_error("sieve limit must be at least 2");
    if (limit > std::numeric_limits<std::uint32_t>::max())
        throw std::domain_error("sieve limit exceeds 32-bit table range");
    SpfTable t;
    t.limit = limit;
    t.spf.assign(limit + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
        if (t.spf[i] != 0) continue;
        t.spf[i] = static_cast<std::uint32_t>(i);
        if (i * i > limit) continue;
        for (u64 j = i * i; j <= limit; j += i)
            if (t.spf[j] == 0) t.spf[j] = static_cast<std::uint32_t>(i);
    }
    return t;
}

namespace {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // first 12 primes are a deterministic witness set below 3.3e24
    for (u64 a : small) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

Factorization factorize(u64 g, const SpfTable& spf) {
    if (g == 0) throw std::domain_error("cannot factor 0");
    if (g > spf.limit) throw std::out_of_range("value exceeds sieve limit");
    Factorization f;
    while (g > 1) {
        u64 p = spf.spf[g];
        unsigned e = 0;
        while (g % p == 0) {
            g /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    return f;
}

Factorization factorize_trial(u64 g) {
    if (g == 0) throw std::domain_error("cannot factor 0");
    Factorization f;
    auto take = [&](u64 p) {
        unsigned e = 0;
        while (g % p == 0) {
            g /= p;
            ++e;
        }
        if (e) f.emplace_back(p, e);
    };
    take(2);
    take(3);
    for (u64 p = 5; p <= g / p; p += 6) {
        take(p);
        take(p + 2);
    }
    if (g > 1) f.emplace_back(g, 1);
    return f;
}

Factorization factorize_any(u64 g, const SpfTable* spf) {
    if (spf && spf->covers(g)) return factorize(g, *spf);
    return factorize_trial(g);
}

std::vector<u64> divisors_from(const Factorization& f) {
    std::vector<u64> d{1};
    for (auto [p, e] : f) {
        const std::size_t base = d.size();
        u64 pk = 1;
        for (unsigned i = 0; i < e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) d.push_back(d[j] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<u64> divisors_of(u64 g, const SpfTable& spf) { return divisors_from(factorize(g, spf)); }

SolutionTriple make_triple(u64 n, u64 a, u64 b, u64 c) {
    u64 v[3] = {a, b, c};
    std::sort(v, v + 3);
    return {n, v[0], v[1], v[2]};
}

namespace {

bool verify_big(u64 n, u64 a, u64 b, u64 c) {
    using boost::multiprecision::cpp_int;
    cpp_int A = a, B = b, C = c, N = n;
    return 4 * A * B * C == N * (A * B + A * C + B * C);
}

}  // namespace

bool verify_decomposition(u64 n, u64 a, u64 b, u64 c) {
    if (n == 0 || a == 0 || b == 0 || c == 0) throw std::domain_error("zero denominator");
    u128 ab = static_cast<u128>(a) * b;  // < 2^128 always
    u128 lhs, rhs, ac, bc, sum;
    bool over = __builtin_mul_overflow(ab, static_cast<u128>(c), &lhs);
    over = over || __builtin_mul_overflow(lhs, static_cast<u128>(4), &lhs);
    ac = static_cast<u128>(a) * c;
    bc = static_cast<u128>(b) * c;
    over = over || __builtin_add_overflow(ab, ac, &sum);
    over = over || __builtin_add_overflow(sum, bc, &sum);
    over = over || __builtin_mul_overflow(sum, static_cast<u128>(n), &rhs);
    if (over) return verify_big(n, a, b, c);
    return lhs == rhs;
}

bool verify_decomposition(u64 n, const SolutionTriple& t) { return verify_decomposition(n, t.n1, t.n2, t.n3); }

u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("64-bit product overflow");
    return r;
}

u64 checked_add(u64 a, u64 b) {
    u64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("64-bit sum overflow");
    return r;
}

std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string to_string(i128 v) {
    if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
    return to_string(static_cast<u128>(v));
}

}  // namespace es

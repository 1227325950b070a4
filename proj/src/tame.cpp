#include "es/tame.hpp"

#include <numeric>
#include <stdexcept>

namespace es {

bool certificate_valid(const TameCertificate& c, std::string* why) {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (c.m < 1) return fail("m must be positive");
    if (c.k < 1) return fail("k must be positive");
    if (c.im1 < c.im2 || c.im2 < 1) return fail("summands must satisfy im1 >= im2 >= 1");
    if (c.im1 + c.im2 != 4 * c.k - 1) return fail("im1 + im2 != 4k - 1");
    const u128 gn = static_cast<u128>(c.g()) * c.n();
    if (gn % c.im1 != 0 || gn % c.im2 != 0) return fail("summand does not divide (6m+k)(24m+1)");
    return true;
}

SolutionTriple certificate_to_triple(const TameCertificate& c) {
    std::string why;
    if (!certificate_valid(c, &why)) throw std::invalid_argument("invalid certificate: " + why);
    const u64 g = c.g(), n = c.n();
    const u128 gn = static_cast<u128>(g) * n;
    const u128 a = gn / c.im1, b = gn / c.im2;
    if (b > ~u64{0}) throw std::overflow_error("denominator exceeds 64 bits");
    return make_triple(n, g, static_cast<u64>(a), static_cast<u64>(b));
}

std::vector<TameCertificate> find_tame(u64 m, SearchMode mode, const SpfTable* spf) {
    if (m < 1) throw std::domain_error("m must be positive");
    const u64 n = 24 * m + 1;
    if (!is_prime(n)) throw std::invalid_argument("24m+1 is composite");
    std::vector<TameCertificate> out;
    for (u64 k = 1; k <= 12 * m; ++k) {
        const u64 g = 6 * m + k, d = 4 * k - 1;
        const auto divs = divisors_from(factorize_any(g, spf));
        // d is odd, so d1 < d - d1 covers each unordered pair once; ascending d1 = ascending im2
        for (u64 d1 : divs) {
            if (2 * d1 >= d) break;
            if (g % (d - d1) != 0) continue;
            out.push_back({m, k, d - d1, d1});
            if (mode == SearchMode::First) return out;
        }
    }
    return out;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Composite: return "composite";
        case Verdict::TamePrime: return "tame";
        case Verdict::WildPrime: return "wild";
    }
    return "?";
}

ClassificationRecord classify(u64 m, const SpfTable* spf) {
    if (m < 1) throw std::domain_error("m must be positive");
    ClassificationRecord r;
    r.m = m;
    r.n = 24 * m + 1;
    if (!is_prime(r.n)) return r;
    auto c = find_tame(m, SearchMode::First, spf);
    if (c.empty()) {
        r.verdict = Verdict::WildPrime;
        r.search_k_max = 12 * m;
    } else {
        r.verdict = Verdict::TamePrime;
        r.certificate = c.front();
        r.search_k_max = c.front().k;
    }
    return r;
}

u64 default_sieve_limit(u64 m_max) { return 18 * m_max + 1; }

std::vector<u64> wild_primes(u64 m_max) {
    const SpfTable spf = sieve_spf(default_sieve_limit(m_max));
    std::vector<u64> out;
    for (u64 m = 1; m <= m_max; ++m)
        if (classify(m, &spf).verdict == Verdict::WildPrime) out.push_back(m);
    return out;
}

TameCertificate shift_certificate(const TameCertificate& c, i64 shift) {
    const u64 l = std::lcm(c.im1, c.im2);
    const i128 m2 = static_cast<i128>(c.m) + static_cast<i128>(shift) * l;
    if (m2 < 1) throw std::domain_error("shifted m is not positive");
    if (m2 > static_cast<i128>(~u64{0} / 24)) throw std::overflow_error("shifted m too large");
    TameCertificate r = c;
    r.m = static_cast<u64>(m2);
    return r;
}

}  // namespace es

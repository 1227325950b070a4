#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace es {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// spf[i] = smallest prime factor of i, for 2 <= i <= limit.
struct SpfTable {
    u64 limit = 0;
    std::vector<std::uint32_t> spf;

    bool covers(u64 g) const { return g <= limit; }
};

SpfTable sieve_spf(u64 limit);

bool is_prime(u64 n);

using Factorization = std::vector<std::pair<u64, unsigned>>;

Factorization factorize(u64 g, const SpfTable& spf);
Factorization factorize_trial(u64 g);
// table when it covers g, trial division otherwise
Factorization factorize_any(u64 g, const SpfTable* spf);

std::vector<u64> divisors_from(const Factorization& f);
std::vector<u64> divisors_of(u64 g, const SpfTable& spf);

struct SolutionTriple {
    u64 n = 0;
    u64 n1 = 0, n2 = 0, n3 = 0;

    friend bool operator==(const SolutionTriple&, const SolutionTriple&) = default;
};

// sorts the three denominators ascending
SolutionTriple make_triple(u64 n, u64 a, u64 b, u64 c);

bool verify_decomposition(u64 n, u64 a, u64 b, u64 c);
bool verify_decomposition(u64 n, const SolutionTriple& t);

// overflow-checked helpers; throw std::overflow_error
u64 checked_mul(u64 a, u64 b);
u64 checked_add(u64 a, u64 b);

std::string to_string(i128 v);
std::string to_string(u128 v);

}  // namespace es

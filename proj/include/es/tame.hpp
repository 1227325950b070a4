#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "es/exact_arith.hpp"

namespace es {

// Witness (m, k, im1, im2) for a tame solution of 4/(24m+1); im1 >= im2.
struct TameCertificate {
    u64 m = 0;
    u64 k = 0;
    u64 im1 = 0;
    u64 im2 = 0;

    u64 n() const { return 24 * m + 1; }
    u64 g() const { return 6 * m + k; }

    friend auto operator<=>(const TameCertificate&, const TameCertificate&) = default;
};

// Checks the certificate invariants; on failure writes a reason when given.
bool certificate_valid(const TameCertificate& c, std::string* why = nullptr);

// throws std::invalid_argument when a summand does not divide g*n
SolutionTriple certificate_to_triple(const TameCertificate& c);

enum class SearchMode { First, All };

// spf may be null (trial division) or must cover 18m to take the fast path.
// throws std::invalid_argument when 24m+1 is composite.
std::vector<TameCertificate> find_tame(u64 m, SearchMode mode, const SpfTable* spf = nullptr);

enum class Verdict { Composite, TamePrime, WildPrime };

const char* verdict_name(Verdict v);

struct ClassificationRecord {
    u64 m = 0;
    u64 n = 0;
    Verdict verdict = Verdict::Composite;
    std::optional<TameCertificate> certificate;
    u64 search_k_max = 0;
};

ClassificationRecord classify(u64 m, const SpfTable* spf = nullptr);

u64 default_sieve_limit(u64 m_max);

std::vector<u64> wild_primes(u64 m_max);

// m -> m + c*lcm(im1, im2); throws std::domain_error if the result is not positive
TameCertificate shift_certificate(const TameCertificate& c, i64 shift);

}  // namespace es

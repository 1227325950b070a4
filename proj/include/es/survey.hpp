#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "es/catalog.hpp"
#include "es/tame.hpp"

namespace es {

// m -> labels of every catalog instance landing on m
using MatchIndex = std::map<u64, std::vector<std::string>>;

MatchIndex build_match_index(const Catalog& cat, u64 m_max);

using Progress = std::function<void(u64 done, u64 total)>;

// one record per m in [1, m_max] with 24m+1 prime, ascending m for any worker count
std::vector<ClassificationRecord> classify_range(u64 m_max, unsigned workers, const Progress& progress = {});

std::string record_jsonl(const ClassificationRecord& r, const std::vector<std::string>& family_matches);

struct ParsedRecord {
    u64 m = 0, n = 0;
    std::string verdict;
    u64 k = 0, im1 = 0, im2 = 0, n1 = 0, n2 = 0, n3 = 0;
    std::vector<std::string> family_matches;
};
ParsedRecord parse_record_jsonl(const std::string& line);  // throws on malformed input

struct ClassCount {
    std::string family_id;
    Assignment fixed;  // non-multiplier values
    std::string congruence;
    u64 members = 0;
};

struct CoverageReport {
    u64 m_max = 0;
    u64 prime_count = 0, tame_count = 0, wild_count = 0;
    std::vector<u64> wild_list;
    std::vector<std::pair<std::string, u64>> per_family;  // catalog order
    std::vector<ClassCount> per_class;                    // classes with at least one member
    std::vector<u64> uncovered;                           // tame primes matched by no family
};

CoverageReport coverage_report(const Catalog& cat, u64 m_max, unsigned workers, const Progress& progress = {});

// columns family_id, congruence, member_count, ratio (member_count / prime_count)
std::string coverage_csv(const Catalog& cat, const CoverageReport& r);
std::string coverage_json(const CoverageReport& r);

std::string ratio4(u64 num, u64 den);

}  // namespace es

#include "es/survey.hpp"

#include <atomic>
#include <fmt/format.h>
#include "json.hpp"
#include <set>
#include <thread>

namespace es {

using ojson = nlohmann::ordered_json;

MatchIndex build_match_index(const Catalog& cat, u64 m_max) {
    MatchIndex idx;
    for (const auto& f : cat.families())
        for (const auto& inst : members_up_to(f, m_max)) idx[inst.m].push_back(inst.label());
    return idx;
}

std::vector<ClassificationRecord> classify_range(u64 m_max, unsigned workers, const Progress& progress) {
    if (m_max < 1) throw std::domain_error("m_max must be positive");
    if (workers < 1) throw std::domain_error("workers must be positive");
    const SpfTable spf = sieve_spf(default_sieve_limit(m_max));
    const u64 nchunks = std::min<u64>(workers, m_max);
    std::vector<std::vector<ClassificationRecord>> parts(nchunks);
    std::atomic<u64> done{0};
    auto work = [&](u64 idx) {
        const u64 lo = 1 + m_max * idx / nchunks, hi = m_max * (idx + 1) / nchunks;
        for (u64 m = lo; m <= hi; ++m) {
            auto r = classify(m, &spf);
            if (r.verdict != Verdict::Composite) parts[idx].push_back(r);
            const u64 d = ++done;
            if (progress && idx == 0) progress(d, m_max);
        }
    };
    if (nchunks == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (u64 i = 0; i < nchunks; ++i) pool.emplace_back(work, i);
    }
    std::vector<ClassificationRecord> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    if (progress) progress(m_max, m_max);
    return out;
}

std::string record_jsonl(const ClassificationRecord& r, const std::vector<std::string>& family_matches) {
    ojson j;
    j["m"] = r.m;
    j["n"] = r.n;
    j["verdict"] = verdict_name(r.verdict);
    if (r.certificate) {
        const auto& c = *r.certificate;
        const auto t = certificate_to_triple(c);
        j["k"] = c.k;
        j["im1"] = c.im1;
        j["im2"] = c.im2;
        j["n1"] = t.n1;
        j["n2"] = t.n2;
        j["n3"] = t.n3;
    } else {
        for (const char* key : {"k", "im1", "im2", "n1", "n2", "n3"}) j[key] = nullptr;
    }
    j["family_matches"] = family_matches;
    return j.dump() + "\n";
}

ParsedRecord parse_record_jsonl(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    ParsedRecord p;
    p.m = j.at("m").get<u64>();
    p.n = j.at("n").get<u64>();
    p.verdict = j.at("verdict").get<std::string>();
    if (!j.at("k").is_null()) {
        p.k = j.at("k").get<u64>();
        p.im1 = j.at("im1").get<u64>();
        p.im2 = j.at("im2").get<u64>();
        p.n1 = j.at("n1").get<u64>();
        p.n2 = j.at("n2").get<u64>();
        p.n3 = j.at("n3").get<u64>();
    }
    p.family_matches = j.at("family_matches").get<std::vector<std::string>>();
    return p;
}

CoverageReport coverage_report(const Catalog& cat, u64 m_max, unsigned workers, const Progress& progress) {
    CoverageReport rep;
    rep.m_max = m_max;
    const auto records = classify_range(m_max, workers, progress);
    std::set<u64> tame;
    for (const auto& r : records) {
        ++rep.prime_count;
        if (r.verdict == Verdict::TamePrime) {
            ++rep.tame_count;
            tame.insert(r.m);
        } else {
            ++rep.wild_count;
            rep.wild_list.push_back(r.m);
        }
    }
    std::set<u64> covered;
    for (const auto& f : cat.families()) {
        const auto members = members_up_to(f, m_max);
        std::set<u64> fam;
        std::map<Assignment, std::set<u64>> classes;
        for (const auto& inst : members) {
            if (!tame.count(inst.m)) continue;
            fam.insert(inst.m);
            Assignment key(inst.assignment.begin(), inst.assignment.end() - 1);
            classes[key].insert(inst.m);
        }
        rep.per_family.emplace_back(f.id, fam.size());
        covered.insert(fam.begin(), fam.end());
        for (const auto& [key, ms] : classes) rep.per_class.push_back({f.id, key, class_congruence(f, key), ms.size()});
    }
    for (u64 m : tame)
        if (!covered.count(m)) rep.uncovered.push_back(m);
    return rep;
}

std::string ratio4(u64 num, u64 den) {
    if (den == 0) return "0.0000";
    // exact round-half-up to 4 places
    const u128 scaled = (static_cast<u128>(num) * 20000 / den + 1) / 2;
    return fmt::format("{}.{:04}", static_cast<u64>(scaled / 10000), static_cast<u64>(scaled % 10000));
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string class_id(const Catalog& cat, const ClassCount& c) {
    const auto& f = cat.find(c.family_id);
    std::string s = c.family_id + "{";
    for (std::size_t i = 0; i < c.fixed.size(); ++i) s += (i ? "," : "") + f.params[i].name + "=" + std::to_string(c.fixed[i]);
    return s + "}";
}

}  // namespace

std::string coverage_csv(const Catalog& cat, const CoverageReport& r) {
    std::string out = "family_id,congruence,member_count,ratio\n";
    for (const auto& [id, count] : r.per_family) {
        std::string cong;
        for (const auto& c : cat.find(id).congruences) cong += (cong.empty() ? "m ≡ " : "; m ≡ ") + c.text();
        out += fmt::format("{},{},{},{}\n", csv_field(id), csv_field(cong), count, ratio4(count, r.prime_count));
    }
    for (const auto& c : r.per_class)
        out += fmt::format("{},{},{},{}\n", csv_field(class_id(cat, c)), csv_field(c.congruence), c.members,
                           ratio4(c.members, r.prime_count));
    return out;
}

std::string coverage_json(const CoverageReport& r) {
    ojson j;
    j["m_max"] = r.m_max;
    j["prime_count"] = r.prime_count;
    j["tame_count"] = r.tame_count;
    j["wild_count"] = r.wild_count;
    j["wild_list"] = r.wild_list;
    j["uncovered"] = r.uncovered;
    ojson fams = ojson::object();
    for (const auto& [id, count] : r.per_family) fams[id] = count;
    j["per_family"] = fams;
    return j.dump() + "\n";
}

}  // namespace es

// erdos_straus: command-line front end for the 4/n = 1/n1 + 1/n2 + 1/n3 engine.
// stdout carries data only; progress and diagnostics go to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "es/catalog.hpp"
#include "es/reconcile.hpp"
#include "es/solver.hpp"
#include "es/survey.hpp"

namespace {

using namespace es;
using ojson = nlohmann::ordered_json;

constexpr int kOk = 0, kVerifyFailed = 1, kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Progress stderr_progress(bool quiet) {
    if (quiet) return {};
    return [last = u64{0}](u64 done, u64 total) mutable {
        const u64 pct = total ? done * 100 / total : 100;
        if (pct == last && done != total) return;
        last = pct;
        fmt::print(stderr, "\r  {:3}% ({}/{})", pct, done, total);
        if (done == total) fmt::print(stderr, "\n");
    };
}

ojson triple_json(const SolutionTriple& t) {
    return ojson{{"n", t.n}, {"n1", t.n1}, {"n2", t.n2}, {"n3", t.n3}};
}

int cmd_solve(u64 n, bool json) {
    if (n < 3) throw UsageError("n must be at least 3");
    const auto r = solve(n);
    if (!r.resolved) {
        if (json)
            fmt::print("{}\n", ojson{{"n", n}, {"resolved", false}}.dump());
        else
            fmt::print("{} unresolved\n", n);
        return kVerifyFailed;
    }
    if (json) {
        ojson j = triple_json(r.triple);
        j["resolved"] = true;
        ojson steps = ojson::array();
        for (const auto& s : r.trace.steps) steps.push_back({{"rule", rule_name(s.rule)}, {"detail", s.detail}});
        j["trace"] = steps;
        fmt::print("{}\n", j.dump());
    } else {
        fmt::print("4/{} = 1/{} + 1/{} + 1/{}\n", n, r.triple.n1, r.triple.n2, r.triple.n3);
        for (const auto& s : r.trace.steps) {
            std::string d;
            for (u64 v : s.detail) d += (d.empty() ? "" : " ") + std::to_string(v);
            fmt::print("  {} [{}]\n", rule_name(s.rule), d);
        }
    }
    return kOk;
}

int cmd_classify(u64 m_max, unsigned workers, const std::string& out_path, bool quiet) {
    if (m_max < 1) throw UsageError("--max-m must be positive");
    const auto idx = build_match_index(Catalog::builtin(), m_max);
    const auto recs = classify_range(m_max, workers, stderr_progress(quiet));
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + out_path);
    }
    std::ostream& os = out_path.empty() ? std::cout : file;
    static const std::vector<std::string> none;
    for (const auto& r : recs) {
        auto it = idx.find(r.m);
        os << record_jsonl(r, it == idx.end() ? none : it->second);
    }
    return kOk;
}

int cmd_families_list() {
    for (const auto& f : Catalog::builtin().families()) {
        std::string params;
        for (const auto& p : f.params) params += (params.empty() ? "" : " ") + p.name + ">=" + std::to_string(p.min);
        std::string cong;
        for (const auto& c : f.congruences) cong += (cong.empty() ? "" : "; ") + c.text();
        fmt::print("{}\t{}\tm = {}\tm ≡ {}\t{}\n", f.id, params, f.m.text(), cong, f.anchor);
    }
    return kOk;
}

ojson instance_json(const FamilyInstance& i) {
    ojson j;
    j["family"] = i.label();
    j["m"] = i.m;
    j["n"] = i.n;
    j["k"] = i.k;
    j["im1"] = i.im1;
    j["im2"] = i.im2;
    j["n1"] = i.triple.n1;
    j["n2"] = i.triple.n2;
    j["n3"] = i.triple.n3;
    return j;
}

int cmd_families_gen(const std::string& id, const std::vector<std::string>& sets) {
    const auto& f = Catalog::builtin().find(id);
    const auto a = parse_assignment(f, sets);
    try {
        fmt::print("{}\n", instance_json(instantiate(f, a)).dump());
    } catch (const InstantiationError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return e.kind() == InstantiationError::Kind::Identity ? kVerifyFailed : kUsage;
    }
    return kOk;
}

int cmd_families_members(const std::string& id, u64 m_max) {
    for (const auto& i : members_up_to(Catalog::builtin().find(id), m_max)) fmt::print("{}\n", instance_json(i).dump());
    return kOk;
}

int cmd_families_match(u64 m) {
    for (const auto& i : match_m(Catalog::builtin(), m)) fmt::print("{}\n", instance_json(i).dump());
    return kOk;
}

int cmd_coverage(u64 m_max, unsigned workers, const std::string& csv_path, bool quiet) {
    if (m_max < 1) throw UsageError("--max-m must be positive");
    const auto& cat = Catalog::builtin();
    const auto rep = coverage_report(cat, m_max, workers, stderr_progress(quiet));
    if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + csv_path);
        f << coverage_csv(cat, rep);
    }
    fmt::print("{}", coverage_json(rep));
    return kOk;
}

int cmd_verify(u64 n, u64 n1, u64 n2, u64 n3) {
    const bool ok = verify_decomposition(n, n1, n2, n3);
    fmt::print("{}\n", ok ? "ok" : "fail");
    return ok ? kOk : kVerifyFailed;
}

int cmd_wild(u64 m_max) {
    if (m_max < 1) throw UsageError("--max-m must be positive");
    for (u64 m : wild_primes(m_max)) fmt::print("{}\t{}\n", m, 24 * m + 1);
    return kOk;
}

int cmd_reconcile(bool tsv, const std::string& text_path) {
    const auto rep = reconcile(Catalog::builtin());
    if (!text_path.empty()) {
        std::ofstream f(text_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + text_path);
        f << rep.text();
    }
    if (tsv) {
        fmt::print("{}", rep.corrections_tsv());
    } else {
        ojson arr = ojson::array();
        for (const auto& c : rep.corrections())
            arr.push_back({{"example", c.example_id}, {"field", c.field}, {"printed", c.printed}, {"corrected", c.corrected}});
        fmt::print("{}\n", ojson{{"catalog_clean", rep.catalog_clean()}, {"corrections", arr}}.dump(2));
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solver and survey tool for 4/n = 1/n1 + 1/n2 + 1/n3"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress progress on stderr");

    u64 n = 0;
    bool json = false;
    auto* solve_cmd = app.add_subcommand("solve", "decompose 4/n");
    solve_cmd->add_option("n", n, "denominator, n >= 3")->required();
    solve_cmd->add_flag("--json", json, "emit JSON with the derivation trace");

    u64 m_max = 0;
    unsigned workers = 1;
    std::string out_path;
    auto* classify_cmd = app.add_subcommand("classify", "classify every m <= M with 24m+1 prime, as JSONL");
    classify_cmd->add_option("--max-m", m_max)->required();
    classify_cmd->add_option("--workers", workers)->check(CLI::Range(1u, 4096u))->default_val(1);
    classify_cmd->add_option("--out", out_path, "write JSONL here instead of stdout");

    auto* fam = app.add_subcommand("families", "inspect the family catalog");
    fam->require_subcommand(1);
    auto* fam_list = fam->add_subcommand("list", "one line per family");
    std::string fam_id;
    std::vector<std::string> sets;
    auto* fam_gen = fam->add_subcommand("gen", "instantiate one family");
    fam_gen->add_option("id", fam_id)->required();
    fam_gen->add_option("--set", sets, "parameter values, p=v")->required();
    auto* fam_members = fam->add_subcommand("members", "all instances with m <= M");
    fam_members->add_option("id", fam_id)->required();
    fam_members->add_option("--max-m", m_max)->required();
    u64 match_target = 0;
    auto* fam_match = fam->add_subcommand("match", "every family instance producing m");
    fam_match->add_option("m", match_target)->required();

    std::string csv_path;
    auto* cov = app.add_subcommand("coverage", "census and family coverage for m <= M");
    cov->add_option("--max-m", m_max)->required();
    cov->add_option("--workers", workers)->check(CLI::Range(1u, 4096u))->default_val(1);
    cov->add_option("--csv", csv_path, "write the per-family table here");

    u64 vn = 0, v1 = 0, v2 = 0, v3 = 0;
    auto* ver = app.add_subcommand("verify", "check 4/n = 1/n1 + 1/n2 + 1/n3 exactly");
    ver->add_option("n", vn)->required();
    ver->add_option("n1", v1)->required();
    ver->add_option("n2", v2)->required();
    ver->add_option("n3", v3)->required();

    auto* wild = app.add_subcommand("wild", "list wild primes 24m+1 with m <= M");
    wild->add_option("--max-m", m_max)->required();

    bool tsv = false;
    std::string text_path;
    auto* rec = app.add_subcommand("reconcile", "audit the catalog and the worked examples");
    rec->add_flag("--tsv", tsv, "corrections as TSV instead of JSON");
    rec->add_option("--text", text_path, "write the readable report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*solve_cmd) return cmd_solve(n, json);
        if (*classify_cmd) return cmd_classify(m_max, workers, out_path, quiet);
        if (*fam_list) return cmd_families_list();
        if (*fam_gen) return cmd_families_gen(fam_id, sets);
        if (*fam_members) return cmd_families_members(fam_id, m_max);
        if (*fam_match) return cmd_families_match(match_target);
        if (*cov) return cmd_coverage(m_max, workers, csv_path, quiet);
        if (*ver) return cmd_verify(vn, v1, v2, v3);
        if (*wild) return cmd_wild(m_max);
        if (*rec) return cmd_reconcile(tsv, text_path);
    } catch (const UsageError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    } catch (const std::invalid_argument& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    } catch (const std::out_of_range& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    } catch (const std::domain_error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kVerifyFailed;
    }
    return kUsage;
}

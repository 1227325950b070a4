#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "es/reconcile.hpp"

using namespace es;

namespace {

const ReconciliationReport& report() {
    static const ReconciliationReport r = reconcile(Catalog::builtin());
    return r;
}

const ExampleAudit& example(const std::string& id) {
    for (const auto& e : report().examples)
        if (e.example->id == id) return e;
    FAIL("no example " << id);
    throw 0;
}

std::map<std::string, std::string> fixes(const std::string& id) {
    std::map<std::string, std::string> out;
    for (const auto& c : example(id).corrections) out[c.field] = c.printed + " -> " + c.corrected;
    return out;
}

}  // namespace

TEST_CASE("catalog rows are clean on the grid") {
    CHECK(report().catalog_clean());
    CHECK(report().rows.size() == 53);
}

TEST_CASE("flagged denominators") {
    CHECK(fixes("4.3.1") == std::map<std::string, std::string>{{"n3", "2273862 -> 2773862"}});
    CHECK(fixes("6.1.1") == std::map<std::string, std::string>{{"n2", "113955 -> 113055"}});
    CHECK(fixes("4.4.1") == std::map<std::string, std::string>{{"n3", "8457400 -> 8467400"}});
    CHECK_FALSE(example("4.3.1").printed_triple_verifies);
}

TEST_CASE("examples that pass unchanged") {
    const auto& e = example("5.1.1");
    CHECK(e.reproduces);
    CHECK(e.printed_triple_verifies);
    CHECK(e.corrections.empty());
    CHECK(example("4.1.1").corrections.empty());
}

TEST_CASE("every example ends with a verified triple") {
    for (const auto& e : report().examples) {
        CAPTURE(e.example->id);
        REQUIRE(e.triple.has_value());
        REQUIRE(e.triple->n == 24 * e.example->m + 1);
        REQUIRE(verify_decomposition(e.triple->n, *e.triple));
        // a printed triple that fails must have at least one correction
        if (!e.printed_triple_verifies) REQUIRE_FALSE(e.corrections.empty());
    }
}

TEST_CASE("examples whose stated parameters disagree with the printed values") {
    CHECK_FALSE(example("4.5.2").reproduces);
    CHECK(fixes("4.5.2").count("params"));
    CHECK_FALSE(example("6.3.1").reproduces);
    CHECK(example("6.3.1").corrected_label == "F6.3{r=2,c=24}");
    CHECK(fixes("6.7.1").at("n") == "42557 -> 42577");
}

TEST_CASE("printed forms") {
    std::map<std::string, int> bad;
    for (const auto& r : report().rows)
        for (const auto& p : r.printed)
            if (p.status != PrintedFormAudit::Status::Consistent) ++bad[r.id];
    CHECK(bad.count("F4.6"));
    CHECK(bad.count("F5.8"));
    CHECK(bad.count("F6.10"));
    CHECK_FALSE(bad.count("F4.1"));
}

TEST_CASE("tsv layout") {
    const auto tsv = report().corrections_tsv();
    CHECK(tsv.rfind("example_id\tfield\tprinted\tcorrected\n", 0) == 0);
    CHECK(tsv.find("4.3.1\tn3\t2273862\t2773862\n") != std::string::npos);
    CHECK(report().text().find("Worked examples") != std::string::npos);
}

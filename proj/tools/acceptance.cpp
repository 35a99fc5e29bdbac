#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fracrecon/pipeline.hpp"
#include "fracrecon/reference.hpp"
#include "fracrecon/verify.hpp"

using namespace fracrecon;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

const std::vector<NoiseKind> kNoises{NoiseKind::FTN, NoiseKind::STN, NoiseKind::TTN};

std::vector<double> table_nus(ProblemKind kind) {
    std::vector<double> nus;
    if (kind == ProblemKind::FIP)
        for (const auto& r : reference::kFip) nus.push_back(r.nu);
    else
        for (const auto& r : reference::kSip) nus.push_back(r.nu);
    return nus;
}

int count_within(const std::vector<TableCell>& cells, double tol1, double tol2) {
    int n = 0;
    for (const auto& c : cells)
        if (c.result && c.reference && std::fabs(c.result->pair.nu1 - (*c.reference)[0]) <= tol1 &&
            std::fabs(c.result->pair.second - (*c.reference)[1]) <= tol2)
            ++n;
    return n;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome table_fine(ProblemKind kind, int needed, double budget) {
    const PipelineSettings p;
    const auto t0 = std::chrono::steady_clock::now();
    const auto cells = run_table(kind, 0.001, kNoises, table_nus(kind), p);
    const double secs = seconds_since(t0);
    const int ok = count_within(cells, 0.005, 0.02);
    const auto again = run_table(kind, 0.001, kNoises, table_nus(kind), p);
    bool repeatable = again.size() == cells.size();
    for (std::size_t k = 0; repeatable && k < cells.size(); ++k)
        repeatable = cells[k].result.has_value() == again[k].result.has_value() &&
                     (!cells[k].result || (cells[k].result->pair.nu1 == again[k].result->pair.nu1 &&
                                           cells[k].result->pair.second == again[k].result->pair.second));
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%zu cells within tolerance (need %d), %.2f s (budget %.0f s), repeatable: %s", ok,
                  cells.size(), needed, secs, budget, repeatable ? "yes" : "no");
    return {ok >= needed && secs <= budget && repeatable, buf};
}

Outcome table_coarse() {
    const PipelineSettings p;
    int ok = 0, total = 0;
    for (ProblemKind kind : {ProblemKind::FIP, ProblemKind::SIP}) {
        const auto cells = run_table(kind, 0.01, kNoises, table_nus(kind), p);
        ok += count_within(cells, 0.01, 0.05);
        total += static_cast<int>(cells.size());
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%d cells within tolerance (need 80%%)", ok, total);
    return {ok >= 0.8 * total, buf};
}

Outcome suite(const std::string& name) {
    const verify::SuiteResult r = verify::run(name);
    return {r.passed, r.summary};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"table2-fip-delta0.001", [] { return table_fine(ProblemKind::FIP, 25, 60.0); }},
        {"table3-sip-delta0.001", [] { return table_fine(ProblemKind::SIP, 10, 30.0); }},
        {"tables-delta0.01", table_coarse},
        {"identities", [] { return suite("identities"); }},
        {"oracle-equivalence", [] { return suite("oracle"); }},
        {"jacobi-orthogonality", [] { return suite("jacobi"); }},
        {"lemma-suites", [] { return suite("lemmas"); }},
        {"horizon-soundness", [] { return suite("deltas"); }},
        {"leading-order-reference", [] { return suite("reference"); }},
    };
    int failed = 0, k = 0;
    for (const auto& [name, fn] : criteria) {
        ++k;
        Outcome o{false, ""};
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.passed) ++failed;
        std::printf("[%s] criterion %d %s: %s\n", o.passed ? "PASS" : "FAIL", k, name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

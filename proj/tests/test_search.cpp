#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "cpishare/search.hpp"
#include "cpishare/synthkit.hpp"

#include "helpers.hpp"

using namespace cpishare;
using Catch::Approx;

namespace {

SearchConfig config_for(const CpiCatalog& catalog, MonthKey anchor, MonthKey start = {2003, 7}) {
    SearchConfig cfg;
    cfg.start = start;
    cfg.anchor = anchor;
    cfg.latest_cpi = catalog.latest_month().value_or(anchor);
    return cfg;
}

}  // namespace

TEST_CASE("candidate enumeration counts and order") {
    SECTION("3 codes, lags 0..1, no lead: 3 pairs x 4 lag combos") {
        CpiCatalog catalog;
        for (const char* code : {"A", "B", "C"}) {
            catalog.add(code, MonthlySeries({2003, 1}, std::vector<double>(24, 1.0)));
        }
        SearchConfig cfg = config_for(catalog, {2004, 12});
        cfg.max_lag = 1;
        cfg.max_lead = 0;
        auto candidates = enumerate_candidates(catalog, cfg);
        CHECK(candidates.size() == 12);
        // canonical orientation and deterministic order
        CHECK(candidates[0].code1 == "A");
        CHECK(candidates[0].code2 == "B");
        for (const auto& c : candidates) CHECK(c.code1 < c.code2);
        std::set<std::tuple<std::string, std::string, int, int>> unique;
        for (const auto& c : candidates) unique.insert({c.code1, c.code2, c.lag1, c.lag2});
        CHECK(unique.size() == candidates.size());
    }

    SECTION("92 codes, lags 0..11: C(92,2) * 144 candidates") {
        CpiCatalog catalog = generate_catalog(92, {2002, 1}, {2013, 6}, 1);
        SearchConfig cfg = config_for(catalog, {2013, 6});  // anchor at the newest month: no lead room
        auto candidates = enumerate_candidates(catalog, cfg);
        CHECK(candidates.size() == 92ull * 91ull / 2ull * 144ull);
        CHECK(candidates.size() == 602784ull);
    }

    SECTION("an anchor two months before the newest data caps the lead at 2") {
        CpiCatalog catalog = generate_catalog(3, {2002, 1}, {2013, 6}, 2);
        SearchConfig cfg = config_for(catalog, {2013, 4});
        CHECK(effective_lead(cfg) == 2);
        auto candidates = enumerate_candidates(catalog, cfg);
        CHECK(candidates.size() == 3ull * (11 + 2 + 1) * (11 + 2 + 1));
    }

    SECTION("fewer than two series cannot form a pair") {
        CpiCatalog catalog;
        catalog.add("ONLY", MonthlySeries({2003, 1}, std::vector<double>(24, 1.0)));
        SearchConfig cfg;
        cfg.anchor = {2004, 12};
        cfg.latest_cpi = {2004, 12};
        try {
            enumerate_candidates(catalog, cfg);
            FAIL("expected EmptyCatalog");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::EmptyCatalog);
        }
    }
}

TEST_CASE("noiseless search recovers the generating model exactly") {
    CpiCatalog catalog = generate_catalog(8, {2002, 1}, {2013, 6}, 33);
    TruthSpec truth{{"C02", "C06", 3, 0, 1.5, -0.5, 2.0, 10.0}, 0.0, 44, {2003, 7}, {2012, 10}};
    MonthlySeries price = synthesize_price(truth, catalog);
    SearchResult result = best_fit_search(price, catalog, config_for(catalog, {2012, 10}));

    CHECK(result.best.spec.code1 == "C02");
    CHECK(result.best.spec.code2 == "C06");
    CHECK(result.best.spec.lag1 == 3);
    CHECK(result.best.spec.lag2 == 0);
    CHECK(result.best.spec.b1 == Approx(1.5).epsilon(1e-9));
    CHECK(result.best.spec.b2 == Approx(-0.5).epsilon(1e-9));
    CHECK(result.best.sterr <= 1e-8);
    CHECK(result.ranked.size() == 10);
    for (std::size_t i = 1; i < result.ranked.size(); ++i) {
        CHECK(result.ranked[i - 1].sterr <= result.ranked[i].sterr);
    }
    CHECK(result.best.sterr <= result.ranked.back().sterr);
}

TEST_CASE("search results are identical for any worker count") {
    CpiCatalog catalog = generate_catalog(10, {2002, 1}, {2013, 6}, 7);
    TruthSpec truth{{"C01", "C07", 2, 5, -3.0, 2.0, 15.0, 250.0}, 2.5, 55, {2003, 7}, {2012, 10}};
    MonthlySeries price = synthesize_price(truth, catalog);
    SearchConfig cfg = config_for(catalog, {2012, 10});

    SearchResult serial = best_fit_search(price, catalog, cfg, 1);
    SearchResult parallel = best_fit_search(price, catalog, cfg, 7);
    REQUIRE(serial.ranked.size() == parallel.ranked.size());
    CHECK(serial.n_candidates == parallel.n_candidates);
    CHECK(serial.n_rejected == parallel.n_rejected);
    for (std::size_t i = 0; i < serial.ranked.size(); ++i) {
        CHECK(serial.ranked[i].spec == parallel.ranked[i].spec);
        CHECK(serial.ranked[i].sterr == parallel.ranked[i].sterr);  // bitwise
    }
}

TEST_CASE("constructed tie is broken lexicographically and stably") {
    // B duplicates A under a different code; pairs {A,C} and {B,C} tie exactly.
    CpiCatalog catalog;
    std::vector<double> a, c;
    Prng rng(12);
    double level = 150.0;
    for (int k = 0; k < 140; ++k) {
        level *= 1.0 + 0.002 + 0.005 * rng.normal();
        a.push_back(level);
        c.push_back(90.0 + 0.4 * k + 2.0 * rng.normal());
    }
    catalog.add("A", MonthlySeries({2002, 1}, a));
    catalog.add("B", MonthlySeries({2002, 1}, a));
    catalog.add("C", MonthlySeries({2002, 1}, c));
    TruthSpec truth{{"A", "C", 1, 0, 2.0, 1.0, 5.0, 20.0}, 1.0, 9, {2003, 7}, {2012, 10}};
    MonthlySeries price = synthesize_price(truth, catalog);

    SearchConfig cfg = config_for(catalog, {2012, 10});
    for (int threads : {1, 4}) {
        SearchResult result = best_fit_search(price, catalog, cfg, threads);
        CHECK(result.best.spec.code1 == "A");  // A beats the identical B on the tie-break
        CHECK(result.best.spec.code2 == "C");
        // {A,B} candidates are rank-deficient, counted as rejected, never fatal
        CHECK(result.n_rejected > 0);
    }
}

TEST_CASE("enlarging the lag bounds never hurts the best fit") {
    CpiCatalog catalog = generate_catalog(6, {2001, 1}, {2013, 6}, 17);
    TruthSpec truth{{"C00", "C04", 4, 1, 2.0, -1.5, 10.0, 80.0}, 3.0, 23, {2003, 7}, {2012, 10}};
    MonthlySeries price = synthesize_price(truth, catalog);
    double previous = std::numeric_limits<double>::infinity();
    for (int cap = 1; cap <= 11; cap += 2) {
        SearchConfig cfg = config_for(catalog, {2012, 10});
        cfg.max_lag = cap;
        cfg.max_lead = std::min(cap, 8);
        SearchResult result = best_fit_search(price, catalog, cfg);
        CHECK(result.best.sterr <= previous + 1e-12);
        previous = result.best.sterr;
    }
}

TEST_CASE("the winner beats randomly sampled candidates") {
    CpiCatalog catalog = generate_catalog(9, {2002, 1}, {2013, 6}, 29);
    TruthSpec truth{{"C03", "C08", 0, 2, -1.0, 3.0, 6.0, 90.0}, 5.0, 31, {2003, 7}, {2012, 10}};
    MonthlySeries price = synthesize_price(truth, catalog);
    SearchConfig cfg = config_for(catalog, {2012, 10});
    SearchResult result = best_fit_search(price, catalog, cfg);

    auto candidates = enumerate_candidates(catalog, cfg);
    Prng rng(4242);
    int checked = 0;
    for (int draw = 0; draw < 1000; ++draw) {
        const auto& c = candidates[static_cast<std::size_t>(rng.uniform() * static_cast<double>(candidates.size())) %
                                   candidates.size()];
        try {
            FitResult fit = fit_candidate(price, catalog, c.code1, c.lag1, c.code2, c.lag2, cfg.start, cfg.anchor);
            CHECK(result.best.ssr <= fit.ssr * (1.0 + 1e-12));
            ++checked;
        } catch (const Error&) {
            // infeasible draws are fine; the search rejected them too
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("search failure modes") {
    CpiCatalog catalog = generate_catalog(4, {2003, 1}, {2013, 6}, 3);
    TruthSpec truth{{"C00", "C01", 0, 0, 1.0, 1.0, 0.0, 0.0}, 0.0, 2, {2003, 7}, {2012, 10}};
    MonthlySeries price = synthesize_price(truth, catalog);

    SECTION("window shorter than min_obs") {
        SearchConfig cfg = config_for(catalog, {2004, 10});
        CHECK_THROWS_AS(best_fit_search(price, catalog, cfg), Error);
    }

    SECTION("price not covering the window") {
        SearchConfig cfg = config_for(catalog, {2013, 6});
        CHECK_THROWS_AS(best_fit_search(price, catalog, cfg), Error);
    }

    SECTION("no feasible candidate when every lag misses data") {
        // catalog starts 2003-01; a 2003-02 start with lags >= 2 has no coverage,
        // and a catalog that ends at the anchor admits no leads either
        CpiCatalog short_catalog;
        short_catalog.add("X", MonthlySeries({2003, 2}, std::vector<double>(116, 1.0)));
        short_catalog.add("Y", MonthlySeries({2003, 2}, std::vector<double>(116, 2.0)));
        // X and Y are flat: every candidate is also rank-deficient
        MonthlySeries p({2003, 2}, std::vector<double>(116, 3.0));
        SearchConfig cfg;
        cfg.start = {2003, 2};
        cfg.anchor = {2012, 9};
        cfg.latest_cpi = {2012, 9};
        try {
            best_fit_search(p, short_catalog, cfg);
            FAIL("expected NoFeasibleCandidate");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NoFeasibleCandidate);
        }
    }
}

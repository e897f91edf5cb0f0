#include <catch2/catch_amalgamated.hpp>

#include "cpishare/catalog.hpp"
#include "cpishare/synthkit.hpp"

#include "helpers.hpp"

using namespace cpishare;

namespace {

Errc code_of(const std::string& csv) {
    try {
        parse_catalog_csv(csv);
    } catch (const Error& e) {
        return e.code();
    }
    throw std::runtime_error("expected a parse error");
}

}  // namespace

TEST_CASE("parse a two-series catalog") {
    CpiCatalog catalog = parse_catalog_csv(
        "date,F,FB\n"
        "2003-07,180.3,179.9\n"
        "2003-08,181.0,180.5\n");
    REQUIRE(catalog.size() == 2);
    CHECK(catalog.get("F") == MonthlySeries({2003, 7}, {180.3, 181.0}));
    CHECK(catalog.get("FB") == MonthlySeries({2003, 7}, {179.9, 180.5}));
    CHECK(catalog.latest_month() == MonthKey{2003, 8});
}

TEST_CASE("leading and trailing empties trim the span, interior gaps do not parse") {
    CpiCatalog catalog = parse_catalog_csv(
        "date,A,B\n"
        "2003-01,,10\n"
        "2003-02,1.5,11\n"
        "2003-03,1.75,\n");
    CHECK(catalog.get("A") == MonthlySeries({2003, 2}, {1.5, 1.75}));
    CHECK(catalog.get("B") == MonthlySeries({2003, 1}, {10.0, 11.0}));

    CHECK(code_of("date,A\n2003-01,1\n2003-02,\n2003-03,3\n") == Errc::InteriorGap);
}

TEST_CASE("date errors") {
    CHECK(code_of("date,F\n2003-07,1\n2003-09,2\n") == Errc::NonMonotoneDates);
    CHECK(code_of("date,F\n2003-07,1\n2003-07,2\n") == Errc::NonMonotoneDates);
    CHECK(code_of("date,F\n2003-08,1\n2003-07,2\n") == Errc::NonMonotoneDates);
    CHECK(code_of("date,F\nJuly,1\n") == Errc::MalformedRow);
}

TEST_CASE("structural errors") {
    CHECK(code_of("date,F,F\n2003-07,1,2\n") == Errc::DuplicateCode);
    CHECK(code_of("date,F\n2003-07,1,2\n") == Errc::MalformedRow);      // too many cells
    CHECK(code_of("date,F,FB\n2003-07,1\n") == Errc::MalformedRow);     // too few cells
    CHECK(code_of("date,F\n2003-07,abc\n") == Errc::MalformedRow);      // not a number
    CHECK(code_of("price,F\n2003-07,1\n") == Errc::MalformedRow);       // bad header
    CHECK(code_of("date,F\n") == Errc::MalformedRow);                   // column with no values
    CHECK(code_of("") == Errc::MalformedRow);
}

TEST_CASE("catalog rejects duplicate insertion") {
    CpiCatalog catalog;
    catalog.add("F", MonthlySeries({2003, 7}, {1.0}));
    CHECK_THROWS_AS(catalog.add("F", MonthlySeries({2003, 7}, {2.0})), Error);
    CHECK_THROWS_AS(catalog.get("MISSING"), Error);
}

TEST_CASE("serialize then parse round-trips exactly") {
    // seeded catalogs with unequal spans exercise the empty-edge handling
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        CpiCatalog catalog = generate_catalog(6, {2003, 1}, {2009, 6}, seed);
        // stagger the spans
        CpiCatalog staggered;
        int cut = 0;
        for (const auto& [code, s] : catalog.entries()) {
            MonthKey from = add_months(s.start(), cut);
            MonthKey to = add_months(s.end(), -(cut % 3));
            staggered.add(code, s.slice(from, to));
            ++cut;
        }
        CpiCatalog reparsed = parse_catalog_csv(write_catalog_csv(staggered));
        CHECK(reparsed == staggered);
    }
}

TEST_CASE("window validation report") {
    CpiCatalog catalog;
    {
        std::vector<double> v(months_between(MonthKey{2002, 8}, MonthKey{2012, 10}) + 1, 100.0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += 0.3 * static_cast<double>(i);
        catalog.add("F", MonthlySeries({2002, 8}, v));
    }
    std::vector<double> p(months_between(MonthKey{2003, 7}, MonthKey{2012, 10}) + 1, 50.0);
    MonthlySeries price({2003, 7}, p);

    SECTION("anchor at the newest published month leaves no lead room") {
        WindowValidation report = validate_window(catalog, price, {2003, 7}, {2012, 10}, 11, 8);
        CHECK(report.allowed_lead == 0);
        CHECK(report.price_ok);
        REQUIRE(report.cpi.size() == 1);
        CHECK(report.cpi[0].ok);
        CHECK(report.all_ok());
    }

    SECTION("an anchor seven months before the newest data admits a seven-month lead") {
        WindowValidation report = validate_window(catalog, price, {2003, 7}, {2012, 3}, 11, 8);
        CHECK(report.allowed_lead == 7);
        CHECK(report.all_ok());
    }

    SECTION("a late-starting index fails the lag-coverage requirement") {
        CpiCatalog late;
        std::vector<double> v(140, 100.0);
        late.add("LATE", MonthlySeries({2003, 1}, v));
        WindowValidation report = validate_window(late, price, {2003, 7}, {2012, 10}, 11, 8);
        REQUIRE(report.cpi.size() == 1);
        CHECK_FALSE(report.cpi[0].ok);
        CHECK_FALSE(report.all_ok());
        CHECK(report.cpi_required_from == MonthKey{2002, 8});
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cpishare/stats.hpp"
#include "cpishare/synthkit.hpp"

#include "helpers.hpp"

using namespace cpishare;
using Catch::Approx;

namespace {

MonthlySeries noisy_copy(const MonthlySeries& s, double sigma, std::uint64_t seed) {
    Prng rng(seed);
    std::vector<double> out(s.values());
    for (double& v : out) v += sigma * rng.normal();
    return MonthlySeries(s.start(), std::move(out));
}

}  // namespace

TEST_CASE("pearson correlation basics") {
    MonthlySeries x = random_walk(120, 5);
    CHECK(pearson_cc(x, x) == Approx(1.0));

    SECTION("insufficient overlap") {
        MonthlySeries shifted = lag_shift(x, 100);
        CHECK_THROWS_AS(pearson_cc(x, shifted), Error);
        MonthlySeries disjoint = lag_shift(x, 500);
        CHECK_THROWS_AS(pearson_cc(x, disjoint), Error);
    }

    SECTION("degenerate variance") {
        MonthlySeries flat(x.start(), std::vector<double>(120, 3.0));
        CHECK_THROWS_AS(pearson_cc(x, flat), Error);
    }

    SECTION("invariance under positive affine transforms") {
        MonthlySeries y = random_walk(120, 6);
        double base = pearson_cc(x, y);
        std::vector<double> scaled(y.values());
        for (double& v : scaled) v = 2.5 * v + 100.0;
        CHECK(pearson_cc(x, MonthlySeries(y.start(), scaled)) == Approx(base).epsilon(1e-12));
        std::vector<double> flipped(y.values());
        for (double& v : flipped) v = -v;
        CHECK(pearson_cc(x, MonthlySeries(y.start(), flipped)) == Approx(-base).epsilon(1e-12));
    }
}

TEST_CASE("lag scan") {
    MonthlySeries x = random_walk(140, 11);

    SECTION("identical series peak at shift zero") {
        LagScanResult r = lag_scan_cc(x, x);
        CHECK(r.cc == Approx(1.0));
        CHECK(r.lag == 0);
    }

    SECTION("a planted shift is found") {
        MonthlySeries delayed = noisy_copy(lag_shift(x, 4), 0.05, 99);
        LagScanResult r = lag_scan_cc(x, delayed, 11);
        CHECK(r.lag == -4);  // shifting the delayed copy back by 4 re-aligns it
        CHECK(std::abs(r.cc) > 0.99);
    }

    SECTION("max_shift zero reduces to the plain coefficient") {
        MonthlySeries y = random_walk(140, 12);
        LagScanResult r = lag_scan_cc(x, y, 0);
        CHECK(r.lag == 0);
        CHECK(r.cc == Approx(pearson_cc(x, y)));
    }

    SECTION("|cc| at the best lag is never below the lag-0 |cc|") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            MonthlySeries a = random_walk(100, 1000 + seed);
            MonthlySeries b = random_walk(100, 2000 + seed);
            LagScanResult r = lag_scan_cc(a, b, 11);
            CHECK(std::abs(r.cc) + 1e-13 >= std::abs(pearson_cc(a, b)));
        }
    }

    SECTION("exact ties prefer the smaller shift, then the negative one") {
        // period-4 square wave: shifting by +-2 anti-aligns it exactly
        std::vector<double> wave;
        for (int k = 0; k < 96; ++k) wave.push_back((k % 4) < 2 ? 1.0 : -1.0);
        MonthlySeries a({2000, 1}, wave);
        LagScanResult self = lag_scan_cc(a, a, 2);
        CHECK(self.lag == 0);  // |cc| = 1 at shifts 0 and +-2; 0 is smallest
        CHECK(self.cc == Approx(1.0));

        // against a one-month delayed copy, shifts -1 and +3 realign or
        // anti-align exactly; at max_shift 1 the candidates are -1 (cc=+1)
        // and +1 (cc=-1): equal magnitude, negative shift wins
        MonthlySeries b = lag_shift(a, 1);
        LagScanResult r = lag_scan_cc(a, b, 1);
        CHECK(r.lag == -1);
        CHECK(r.cc == Approx(1.0));
    }

    SECTION("the signed value is reported even when the extreme is negative") {
        // b is anti-correlated with a at shift 3 but uncorrelated at shift 0
        MonthlySeries shifted = lag_shift(x, 3);
        std::vector<double> negated;
        for (double v : shifted.values()) negated.push_back(-v);
        MonthlySeries anti = noisy_copy(MonthlySeries(shifted.start(), negated), 0.05, 7);
        LagScanResult r = lag_scan_cc(x, anti, 11);
        CHECK(r.lag == -3);
        CHECK(r.cc < -0.99);
    }
}

TEST_CASE("correlation matrix") {
    MonthlySeries x = random_walk(130, 21);
    MonthlySeries y = random_walk(130, 22);

    SECTION("self pair gives a matrix of ones") {
        CorrelationMatrix m = correlation_matrix({{"X", x}, {"X2", x}}, false);
        REQUIRE(m.labels == std::vector<std::string>{"X", "X2"});
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) CHECK(*m.at(i, j).cc == Approx(1.0));
        }
    }

    SECTION("symmetry, unit diagonal, bounded entries") {
        MonthlySeries z = random_walk(130, 23);
        CorrelationMatrix m = correlation_matrix({{"X", x}, {"Y", y}, {"Z", z}}, true, 6);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(*m.at(i, i).cc == 1.0);
            for (std::size_t j = 0; j < 3; ++j) {
                REQUIRE(m.at(i, j).cc.has_value());
                CHECK(*m.at(i, j).cc == *m.at(j, i).cc);
                CHECK(std::abs(*m.at(i, j).cc) <= 1.0);
                REQUIRE(m.at(i, j).best.has_value());
                CHECK(std::abs(m.at(i, j).best->cc) + 1e-13 >= std::abs(*m.at(i, j).cc));
            }
        }
    }

    SECTION("near-duplicate series correlate above 0.99") {
        MonthlySeries dup = noisy_copy(x, 0.01, 77);
        CorrelationMatrix m = correlation_matrix({{"A", x}, {"B", dup}}, false);
        CHECK(*m.at(0, 1).cc >= 0.99);
    }

    SECTION("uncomputable cells are marked unavailable, labels keep input order") {
        MonthlySeries far = lag_shift(y, 400);
        CorrelationMatrix m = correlation_matrix({{"X", x}, {"FAR", far}}, false);
        REQUIRE(m.labels == std::vector<std::string>{"X", "FAR"});
        CHECK_FALSE(m.at(0, 1).cc.has_value());
        CHECK(*m.at(0, 0).cc == 1.0);
    }
}

// Frozen reference statistics: statsmodels 0.14 adfuller(x, maxlag=14,
// regression='c', autolag=None) on the exact series our seeded generators
// produce (see tests/oracle/adf_reference.py to regenerate).
namespace {

struct AdfReference {
    std::uint64_t seed;
    double statistic;
};

constexpr AdfReference kRandomWalkReference[] = {
    {1, -2.1148855805793856}, {2, -2.070728705862043},  {3, -0.9239563290179775},
    {4, -1.980909550211832},  {5, -1.0005904086914361}, {6, -1.159063460047604},
    {7, -1.2426062690881134}, {8, -1.8199998616379744}, {9, -3.4277308997493523},
    {10, -0.8561042167304617},
};

constexpr AdfReference kAr1Reference[] = {
    {1, -3.203837161500772},  {2, -4.248564159916874},  {3, -4.342407279298868},
    {4, -4.470645542251226},  {5, -3.957615877956685},  {6, -4.86913972150594},
    {7, -4.177843251694633},  {8, -3.2876307505444853}, {9, -3.0522146884015573},
    {10, -3.8076793031624625},
};

}  // namespace

TEST_CASE("adf statistics match the reference implementation") {
    for (const auto& ref : kRandomWalkReference) {
        AdfResult r = adf_test(random_walk(200, ref.seed));
        CHECK(r.lag_order == 14);
        CHECK(r.n_obs == 185);
        CHECK(r.statistic == Approx(ref.statistic).margin(1e-6));
    }
    for (const auto& ref : kAr1Reference) {
        AdfResult r = adf_test(ar1_series(0.3, 200, ref.seed));
        CHECK(r.statistic == Approx(ref.statistic).margin(1e-6));
    }
}

TEST_CASE("adf critical values follow the MacKinnon response surface") {
    AdfResult r = adf_test(random_walk(200, 3));
    // n = 185 regression rows; values cross-checked against statsmodels
    CHECK(r.critical[0] == Approx(-3.46620057).margin(1e-6));
    CHECK(r.critical[1] == Approx(-2.87729328).margin(1e-6));
    CHECK(r.critical[2] == Approx(-2.57516775).margin(1e-6));
}

TEST_CASE("adf behavior on known processes") {
    SECTION("random walks keep the unit root far more often than not") {
        int rejected = 0;
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            if (adf_test(random_walk(200, seed)).reject_unit_root) ++rejected;
        }
        CHECK(rejected <= 4);
    }

    SECTION("a strongly stationary AR(1) is rejected most of the time") {
        int rejected = 0;
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            if (adf_test(ar1_series(0.3, 200, seed)).reject_unit_root) ++rejected;
        }
        CHECK(rejected >= 32);
    }
}

TEST_CASE("adf input validation and invariances") {
    CHECK_THROWS_AS(adf_test(MonthlySeries({2000, 1}, std::vector<double>(200, 1.0))), Error);
    CHECK_THROWS_AS(adf_test(random_walk(30, 1)), Error);  // too short once the lags are formed
    CHECK_NOTHROW(adf_test(random_walk(40, 1)));           // 40 - 1 - lag(9) = 30 rows, just enough
    CHECK_NOTHROW(adf_test(random_walk(40, 1), 5, 2));     // explicit small lag order

    SECTION("statistic is scale invariant") {
        MonthlySeries x = random_walk(200, 9);
        std::vector<double> scaled(x.values());
        for (double& v : scaled) v *= 1e6;
        AdfResult a = adf_test(x);
        AdfResult b = adf_test(MonthlySeries(x.start(), scaled));
        CHECK(b.statistic == Approx(a.statistic).epsilon(1e-9));
    }

    SECTION("level selects the critical value") {
        MonthlySeries x = random_walk(200, 14);
        AdfResult strict = adf_test(x, 1);
        AdfResult loose = adf_test(x, 10);
        CHECK(strict.critical_at_level() < loose.critical_at_level());
        CHECK_THROWS_AS(adf_test(x, 7), Error);
    }
}

TEST_CASE("engle-granger cointegration") {
    SECTION("a scaled copy plus noise is cointegrated") {
        int detected = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            MonthlySeries x = random_walk(150, seed);
            std::vector<double> y;
            Prng rng(seed + 5000);
            for (double v : x.values()) y.push_back(2.0 * v + 0.3 * rng.normal());
            auto r = engle_granger_test(MonthlySeries(x.start(), y), x);
            CHECK(r.slope == Approx(2.0).margin(0.1));
            if (r.cointegrated) ++detected;
        }
        CHECK(detected >= 19);
    }

    SECTION("independent random walks rarely pass") {
        int detected = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto r = engle_granger_test(random_walk(150, seed), random_walk(150, seed + 9000));
            if (r.cointegrated) ++detected;
        }
        CHECK(detected <= 3);
    }

    SECTION("residual test uses the stricter two-variable critical values") {
        auto r = engle_granger_test(random_walk(150, 1), random_walk(150, 2));
        // asymptotic 5% value is about -3.34 versus -2.86 for the plain test
        CHECK(r.residual_adf.critical[1] < -3.3);
        CHECK(r.residual_adf.critical[1] > -3.5);
    }

    SECTION("stationary inputs trigger the warning flags") {
        MonthlySeries a = ar1_series(0.2, 150, 31);
        MonthlySeries b = ar1_series(0.2, 150, 32);
        auto r = engle_granger_test(a, b);
        CHECK(r.actual_stationary_warning);
        CHECK(r.predicted_stationary_warning);
    }

    SECTION("insufficient overlap") {
        CHECK_THROWS_AS(engle_granger_test(random_walk(50, 1), random_walk(50, 2)), Error);
    }
}

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "edgerent/estimators.hpp"
#include "edgerent/validation.hpp"

using namespace edgerent;

TEST_CASE("partitioning points") {
    const Partition p{5, 2};
    CHECK(p.cell_count() == 25);
    const std::vector<double> a{0.0, 0.0}, b{0.25, 0.99}, c{1.0, 1.0}, d{0.2, 0.4};
    CHECK(partition_point(a, p).coords == std::vector<int>{0, 0});
    CHECK(partition_point(b, p).coords == std::vector<int>{1, 4});
    CHECK(partition_point(c, p).coords == std::vector<int>{4, 4});
    CHECK(partition_point(d, p).coords == std::vector<int>{1, 2});
    const std::vector<double> out{1.01, 0.5};
    CHECK_THROWS_WITH_AS(partition_point(out, p), "context out of range", EstimatorError);
    const std::vector<double> neg{-0.01, 0.5};
    CHECK_THROWS_AS(partition_point(neg, p), EstimatorError);
    CHECK_THROWS_AS((Partition{0, 2}.validate()), EstimatorError);
}

TEST_CASE("sample mean estimate") {
    CellStats s;
    CHECK_THROWS_WITH_AS(mle_estimate(s), "no experience", EstimatorError);
    for (double x : {100.0, 200.0, 600.0}) {
        ++s.count;
        s.sum += x;
        s.sum_sq += x * x;
    }
    CHECK(mle_estimate(s) == doctest::Approx(300.0));
}

TEST_CASE("hoeffding tail") {
    // exp(-2 * 200 * 900 / 90000) = exp(-4)
    CHECK(hoeffding_tail(30.0, 200, 300.0) == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
    CHECK(hoeffding_tail(30.0, 200, 300.0) == doctest::Approx(0.0183).epsilon(1e-3));
    CHECK(hoeffding_tail(15.0, 0, 300.0) == 1.0);
}

TEST_CASE("bank records per SBS and cell") {
    EstimatorBank bank(2);
    const CellIndex c0{{0, 1}}, c1{{2, 2}};
    bank.record(0, c0, 10.0);
    bank.record(0, c0, 30.0);
    bank.record(1, c1, 5.0);
    CHECK(bank.count(0, c0) == 2);
    CHECK(bank.count(0, c1) == 0);
    CHECK(mle_estimate(bank.stats(0, c0)) == 20.0);
    CHECK(bank.materialized() == 2);

    std::ostringstream os;
    bank.write_csv(os, 2);
    CHECK(os.str() == "sbs,c0,c1,count,estimate\n0,0,1,2,20\n1,2,2,1,5\n");
}

TEST_CASE("Monte-Carlo violation frequency stays under the Hoeffding bound") {
    for (std::int64_t c : {10, 50, 200}) {
        for (double eps : {15.0, 30.0}) {
            const auto rep = pac_monte_carlo_serial(c, eps, 300.0, 10000, 99);
            CHECK(rep.passed);
            CHECK(rep.frequency <= rep.bound + rep.slack);
        }
    }
}

TEST_CASE("serial and parallel Monte-Carlo agree") {
    const auto a = pac_monte_carlo_serial(50, 30.0, 300.0, 5000, 3);
    const auto b = pac_monte_carlo_parallel(50, 30.0, 300.0, 5000, 3);
    CHECK(a.violations == b.violations);
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "edgerent/model.hpp"

using namespace edgerent;

namespace {

SystemModel reference_model(std::size_t n = 3) {
    SystemModel m;
    for (std::size_t i = 0; i < n; ++i) {
        SbsConfig s;
        s.id = static_cast<int>(i);
        m.sbss.push_back(s);
    }
    return m;
}

}  // namespace

TEST_CASE("edge and cloud delay under the default profile") {
    const TaskProfile task;
    const SbsConfig sbs;
    // 8e6 / 5e6 + 1e9 / (2 * 2e9)
    CHECK(edge_delay(task, sbs, sbs.capacity_hz(2)) == doctest::Approx(1.6 + 0.25).epsilon(1e-12));
    // 8e6 / 2e6 + 8e6 / 1e8 + 1e9 / 2e10 + 0.05
    CHECK(cloud_delay(task, CloudConfig{}) == doctest::Approx(4.0 + 0.08 + 0.05 + 0.05).epsilon(1e-12));
    CHECK(reference_model().delay_reduction(0, 2) == doctest::Approx(4.18 - 1.85).epsilon(1e-12));
}

TEST_CASE("delays clamp to the task deadline") {
    TaskProfile task;
    task.max_delay = 1.0;
    CHECK(edge_delay(task, SbsConfig{}, 4e9) == 1.0);
    CHECK(cloud_delay(task, CloudConfig{}) == 1.0);
}

TEST_CASE("edge delay needs rented capacity") {
    CHECK_THROWS_WITH_AS(edge_delay(TaskProfile{}, SbsConfig{}, 0.0), "no capacity rented", ModelError);
}

TEST_CASE("delay reduction is zero without rental and may be negative") {
    CHECK(delay_reduction(0.0, 4.18, 1.85) == 0.0);
    SystemModel m = reference_model(1);
    m.cloud.uplink_rate = 1e9;
    m.cloud.rtt = 1e-3;
    // cloud: 0.008 + 0.08 + 0.05 + 0.001 < edge 1.85
    CHECK(m.delay_reduction(0, 2) < 0.0);
    CHECK(m.delay_reduction(0, 2) == doctest::Approx(0.139 - 1.85).epsilon(1e-12));
}

TEST_CASE("per-SBS utility caps demand at the admission limit") {
    const auto m = reference_model(1);
    CHECK(m.utility(0, 2, 500.0) == doctest::Approx(300.0 * 2.33).epsilon(1e-12));
    CHECK(m.utility(0, 2, 100.0) == doctest::Approx(100.0 * 2.33).epsilon(1e-12));
    CHECK(m.utility(0, 0, 500.0) == 0.0);
    CHECK(m.utility(0, 6, 0.0) == 0.0);
}

TEST_CASE("total utility sums the SBSs and rejects dimension mismatch") {
    const auto m = reference_model(3);
    const std::vector<double> demand{500.0, 500.0, 500.0};
    const RentalDecision d(std::vector<double>{2, 0, 4});
    const double expect = m.utility(0, 2, 500.0) + m.utility(2, 4, 500.0);
    CHECK(total_utility(d, demand, m) == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(total_utility(RentalDecision(2), demand, m), ModelError);
}

TEST_CASE("feasibility against menu and budget") {
    const auto m = reference_model(3);
    CHECK(check_feasible(RentalDecision(std::vector<double>{2, 0, 6}), m.sbss, 8.0));
    CHECK_FALSE(check_feasible(RentalDecision(std::vector<double>{4, 0, 6}), m.sbss, 8.0));
    CHECK_FALSE(check_feasible(RentalDecision(std::vector<double>{3, 0, 0}), m.sbss, 8.0));
    CHECK_FALSE(check_feasible(RentalDecision(2), m.sbss, 8.0));
    CHECK(decision_cost(RentalDecision(std::vector<double>{2, 4, 0}), m.sbss) == 6.0);
}

TEST_CASE("menu validation") {
    SbsConfig s;
    CHECK_NOTHROW(s.validate());
    s.rental_set = {0, 4, 2};
    CHECK_THROWS_AS(s.validate(), ModelError);
    s = SbsConfig{};
    s.prices = {0, 2, 4};
    CHECK_THROWS_AS(s.validate(), ModelError);
    s = SbsConfig{};
    s.rental_set = {1, 2, 4, 6};
    CHECK_THROWS_AS(s.validate(), ModelError);
}

TEST_CASE("linear menus and level accessors") {
    const auto s = SbsConfig::linear(3, {0, 2, 4, 6}, 1.0, 150.0, 2e9, 5e6);
    CHECK(s.prices == std::vector<double>{0, 2, 4, 6});
    CHECK(s.max_tasks == std::vector<double>{0, 300, 600, 900});
    CHECK(s.min_level() == 2.0);
    CHECK(s.max_level() == 6.0);
    CHECK(s.admission_cap(4) == 600.0);
    CHECK_THROWS_AS(s.price(5), ModelError);
}

TEST_CASE("decision formatting") {
    CHECK(RentalDecision(std::vector<double>{2, 0, 4}).to_string() == "2|0|4");
}

TEST_CASE("shannon uplink rate") {
    ChannelParams ch;
    ch.bandwidth_hz = 1e6;
    ch.tx_power_w = 3.0;
    ch.noise_power_w = 1.0;
    CHECK(uplink_rate(ch) == doctest::Approx(2e6).epsilon(1e-12));  // log2(1 + 3) = 2
}

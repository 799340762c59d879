#include <doctest.h>

#include <map>
#include <stdexcept>

#include "nomalink/degree_dist.hpp"

using namespace nomalink;

TEST_SUITE("degree_dist") {

TEST_CASE("terms are sorted, deduplicated and normalized") {
    DegreeDistribution d(std::map<int, double>{{30, 0.5}, {3, 0.25}, {10, 0.25}});
    REQUIRE(d.terms().size() == 3);
    CHECK(d.terms()[0].degree == 3);
    CHECK(d.terms()[1].degree == 10);
    CHECK(d.terms()[2].degree == 30);
    double sum = 0.0;
    for (const DegreeTerm& t : d.terms()) sum += t.fraction;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inverse moment") {
    DegreeDistribution d(std::map<int, double>{{2, 0.5}, {4, 0.5}});
    // 0.5/2 + 0.5/4
    CHECK(d.inverse_moment() == doctest::Approx(0.375).epsilon(1e-12));

    DegreeDistribution single(std::map<int, double>{{3, 1.0}});
    CHECK(single.inverse_moment() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("invalid profiles are rejected") {
    CHECK_THROWS_AS(DegreeDistribution(std::map<int, double>{{1, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(DegreeDistribution(std::map<int, double>{{3, 0.7}}), std::invalid_argument);
    CHECK_THROWS_AS(DegreeDistribution(std::map<int, double>{{3, 0.5}, {10, 0.5001}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DegreeDistribution(std::map<int, double>{{3, -0.1}, {10, 1.1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DegreeDistribution(std::map<int, double>{}), std::invalid_argument);
}

TEST_CASE("tolerance boundary: 1e-9 simplex slack accepted") {
    CHECK_NOTHROW(DegreeDistribution(std::map<int, double>{{3, 0.5}, {10, 0.5 + 5e-10}}));
}

}  // TEST_SUITE

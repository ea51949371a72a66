#include "infoplan/environment.hpp"
#include "infoplan/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace infoplan;

namespace {

GridData parse(const std::string& text) {
    std::istringstream in(text);
    return parse_grid_csv(in, "mem.csv");
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const DataError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("single-cell grid returns its value at its centre") {
    const auto g = std::make_shared<GridData>(parse("lat,lon,value\n10,20,31.5\n"));
    const auto f = GroundTruthField::from_grid(g);
    CHECK(f.kind() == FieldKind::grid);
    CHECK(f.value({20.0, 10.0}) == 31.5);
    CHECK_THROWS_AS(f.value({25.0, 10.0}), DomainError);
}

TEST_CASE("grid lookup snaps to the nearest cell and skips missing ones") {
    const auto g = std::make_shared<GridData>(parse("lat,lon,value\n0,0,1\n0,1,2\n1,0,NA\n1,1,4\n"));
    const auto f = GroundTruthField::from_grid(g);
    CHECK(f.value({0.1, 0.1}) == 1.0);
    CHECK(f.value({0.9, 0.1}) == 2.0);
    CHECK(f.value({0.9, 0.9}) == 4.0);
    const RoIMask m = RoIMask::from_grid(g);
    CHECK(m.contains({0.0, 0.0}));
    CHECK_FALSE(m.contains({0.0, 1.0}));
    CHECK(g->sample_mean() == doctest::Approx(7.0 / 3.0));
}

TEST_CASE("analytic fields") {
    const auto plane = GroundTruthField::analytic({AnalyticFunction::plane, {1.0, 1.0, 0.0}});
    CHECK(plane.value({2.0, 3.0}) == 5.0);

    const auto sin = GroundTruthField::analytic({AnalyticFunction::sinusoid, {2.0, 1.0, 1.0, 0.5}},
                                                RoIMask::rectangle(0, 0, 1, 1));
    CHECK(sin.value({0.3, 0.4}) == doctest::Approx(2.0 * std::sin(0.3) * std::cos(0.4) + 0.5));
    CHECK_THROWS_AS(sin.value({1.5, 0.5}), DomainError);

    const auto bumps = GroundTruthField::analytic({AnalyticFunction::gaussian_bumps, {1.0, 0.5, 0.5, 2.0, 0.1}});
    CHECK(bumps.value({0.5, 0.5}) == doctest::Approx(3.0));

    CHECK_THROWS_AS(AnalyticSpec({AnalyticFunction::plane, {1.0}}).validate(), InvalidInput);
    CHECK_THROWS_AS(AnalyticSpec({AnalyticFunction::gaussian_bumps, {1.0, 0.5}}).validate(), InvalidInput);
    CHECK(analytic_function_from_string(to_string(AnalyticFunction::gaussian_bumps)) ==
          AnalyticFunction::gaussian_bumps);
    CHECK_THROWS_AS(analytic_function_from_string("cubic"), InvalidInput);
}

TEST_CASE("gp-sample field returns node values") {
    const std::vector<Location> nodes{{0.1, 0.1}, {0.9, 0.9}};
    const auto f = GroundTruthField::gp_sample(nodes, {-1.0, 2.5}, RoIMask::rectangle(0, 0, 1, 1));
    CHECK(f.value({0.1, 0.1}) == -1.0);
    CHECK(f.value({0.9, 0.9}) == 2.5);
    CHECK(f.value({0.8, 0.7}) == 2.5);
    CHECK_THROWS_AS(f.value({-0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(f.value({std::nan(""), 0.5}), DomainError);
    CHECK_THROWS(GroundTruthField::gp_sample(nodes, {1.0}, RoIMask::rectangle(0, 0, 1, 1)));
}

TEST_CASE("polygon masks use the even-odd rule") {
    // L-shaped region
    const RoIMask m = RoIMask::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK(m.contains({0.5, 0.5}));
    CHECK(m.contains({0.5, 1.5}));
    CHECK_FALSE(m.contains({1.5, 1.5}));
    CHECK_FALSE(m.contains({3, 0.5}));
    CHECK(m.bounds().xmax == 2.0);
    CHECK_THROWS_AS(RoIMask::polygon({{0, 0}, {1, 0}}), InvalidInput);
}

TEST_CASE("grid CSV parsing") {
    SUBCASE("absent cells are missing") {
        const GridData g = parse("lat,lon,value\n0,0,1\n0,2,3\n1,1,5\n1,2,4\n");
        CHECK(g.rows == 2);
        CHECK(g.cols == 3);
        CHECK(g.missing(0, 1));
        CHECK(g.missing(1, 0));
        CHECK(g.at(1, 2) == 4.0);
    }
    SUBCASE("errors carry line numbers") {
        CHECK(error_line("lat,lon,value\n0,0,1\n0,1,abc\n") == 3);
        CHECK(error_line("lat,lon,value\n0,0,1\n0,0,2\n") == 3);
        CHECK(error_line("lat,lon\n0,0\n") == 1);
        CHECK(error_line("lat,lon,value\n0,0,1\n0,1\n") == 3);
        CHECK_THROWS_AS(parse("lat,lon,value\n"), DataError);
        CHECK_THROWS_AS(parse("lat,lon,value\n0,0,1\n0,1,1\n0,2.5,1\n"), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_grid_csv("/nonexistent/grid.csv"), DataError);
    }
}

TEST_CASE("grid CSV round trip") {
    Rng rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        GridData g;
        g.lat0 = rng.uniform(-60, 60);
        g.lon0 = rng.uniform(-170, 170);
        g.dlat = 0.25;
        g.dlon = 0.5;
        g.rows = 2 + rng.index(7);
        g.cols = 2 + rng.index(7);
        g.values.resize(g.rows * g.cols);
        for (auto& v : g.values) v = rng.uniform() < 0.2 ? std::nan("") : rng.normal(10.0, 3.0);
        g.values[0] = 1.0;
        g.values.back() = 2.0;  // keep the extent pinned
        std::ostringstream out;
        write_grid_csv(out, g);
        std::istringstream in(out.str());
        const GridData back = parse_grid_csv(in, "rt");
        CHECK(back == g);
    }
}

TEST_CASE("measure adds Gaussian noise from the given stream") {
    const auto f = GroundTruthField::analytic({AnalyticFunction::plane, {0.0, 0.0, 3.0}});
    Rng a(5), b(5);
    CHECK(measure(f, {0, 0}, 0.0, a) == 3.0);
    CHECK(a.uniform() == b.uniform());  // noise-free reads leave the stream alone

    Rng rng(99);
    const int n = 100'000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = measure(f, {0, 0}, 2.0, rng);
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sumsq - n * mean * mean) / (n - 1));
    CHECK(std::abs(mean - 3.0) <= 0.02);
    CHECK(std::abs(sd - 2.0) <= 0.04);

    Rng c(7), d(7);
    for (int i = 0; i < 10; ++i) CHECK(measure(f, {0, 0}, 1.0, c) == measure(f, {0, 0}, 1.0, d));
    CHECK_THROWS_AS(measure(f, {0, 0}, -1.0, c), InvalidInput);
}

TEST_CASE("place_scenario cardinalities and sharing") {
    const RoIMask m = RoIMask::polygon({{0, 0}, {1, 0}, {0.5, 1}});
    const Placement p = place_scenario(m, 61, 60, 5, 2024);
    REQUIRE(p.targets.size() == 61);
    REQUIRE(p.candidates.size() == 60);
    std::size_t shared = 0;
    for (const auto& t : p.targets) {
        CHECK(m.contains(t));
        for (const auto& c : p.candidates) shared += t == c;
    }
    for (const auto& c : p.candidates) CHECK(m.contains(c));
    CHECK(shared == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(p.targets[i] == p.candidates[i]);

    std::set<std::pair<double, double>> distinct;
    for (const auto& t : p.targets) distinct.insert({t.x, t.y});
    CHECK(distinct.size() == 61);

    const Placement again = place_scenario(m, 61, 60, 5, 2024);
    CHECK(again.targets == p.targets);
    CHECK(again.candidates == p.candidates);

    const Placement same = place_scenario(m, 4, 4, 4, 3);
    CHECK(same.targets == same.candidates);

    CHECK_THROWS_AS(place_scenario(m, 3, 4, 5, 1), InvalidInput);
}

TEST_CASE("place_scenario gives up on a vanishing region") {
    auto g = std::make_shared<GridData>();
    g->rows = 1000;
    g->cols = 1000;
    g->values.assign(g->rows * g->cols, std::nan(""));
    g->values[0] = 1.0;
    const RoIMask m = RoIMask::from_grid(g);
    CHECK_THROWS_AS(place_scenario(m, 2, 2, 0, 1), PlacementError);
}

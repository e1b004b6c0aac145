#include "doctest.h"

#include "oversmooth/errors.hpp"
#include "oversmooth/grid_function.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace oversmooth;

TEST_CASE("grid function construction") {
    CHECK_THROWS_AS(GridFunction(1), DomainError);
    CHECK_THROWS_AS(GridFunction(std::vector<double>{1.0}), DomainError);
    CHECK_THROWS_AS(GridFunction(std::vector<double>{1.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(GridFunction(3, std::numeric_limits<double>::infinity()), DomainError);

    const GridFunction u(5);
    CHECK(u.size() == 5);
    CHECK(u.h() == doctest::Approx(0.25));
    CHECK(u.x(0) == 0.0);
    CHECK(u.x(4) == 1.0);
    CHECK(u.sup_norm() == 0.0);
}

TEST_CASE("sup norm") {
    const GridFunction u(std::vector<double>{0.5, -2.0, 1.0});
    CHECK(u.sup_norm() == 2.0);
    CHECK(GridFunction(4).sup_norm() == 0.0);
    CHECK(sup_distance(u, GridFunction(3)) == 2.0);
}

TEST_CASE("sampling and arithmetic") {
    const GridFunction x = GridFunction::sample(11, [](double t) { return t; });
    CHECK(x[10] == 1.0);
    CHECK(x[5] == doctest::Approx(0.5));

    GridFunction y = 2.0 * x - x;
    CHECK(y == x);
    y += x;
    CHECK(y[10] == 2.0);
    CHECK(hadamard(x, x)[5] == doctest::Approx(0.25));

    CHECK_THROWS_AS(x + GridFunction(4), DimensionError);
    CHECK_THROWS_AS(hadamard(x, GridFunction(4)), DimensionError);
}

TEST_CASE("text round trip keeps every bit") {
    const GridFunction u = GridFunction::sample(17, [](double t) { return std::sin(3.0 * t) / 7.0; });
    std::stringstream ss;
    ss << "# header\n";
    write_text(ss, u);
    const GridFunction back = read_text(ss);
    CHECK(back == u);
}

TEST_CASE("text reader rejects off-grid abscissae") {
    std::stringstream ss("0 1\n0.3 2\n1 3\n");
    CHECK_THROWS_AS(read_text(ss), DomainError);
    std::stringstream bad("0 1\nnot a number\n");
    CHECK_THROWS_AS(read_text(bad), DomainError);
}

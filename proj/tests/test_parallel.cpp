#include <doctest.h>

#include "rbc/bounds.hpp"
#include "rbc/prefme.hpp"

using namespace rbc;

// The OpenMP kernels must reproduce the serial reference exactly: same grid
// argmax (value and parameter point) and the same per-trial verdicts.

TEST_CASE("grid search: serial and parallel paths agree bitwise") {
    auto p = GaussianRbcParams::from_distance(0.73, 5.0, 1.0);
    auto serial = cf_rate(p, Exec::Serial);
    auto parallel = cf_rate(p, Exec::Parallel);
    CHECK(serial.rate == parallel.rate);
    CHECK(serial.argmax == parallel.argmax);
    CHECK(serial.active_constraint == parallel.active_constraint);

    auto s2 = scheme1_rate(p, false, Exec::Serial);
    auto p2 = scheme1_rate(p, false, Exec::Parallel);
    CHECK(s2.rate == p2.rate);
    CHECK(s2.argmax == p2.argmax);
}

TEST_CASE("verification trials: serial and parallel paths agree") {
    auto serial = verify_theorem(Scheme::Scheme1, 8, 3, kInf, kInf, Exec::Serial);
    auto parallel = verify_theorem(Scheme::Scheme1, 8, 3, kInf, kInf, Exec::Parallel);
    CHECK(serial.verdicts == parallel.verdicts);
    CHECK(serial.equal_count == parallel.equal_count);
    REQUIRE(serial.mismatches.size() == parallel.mismatches.size());
    for (std::size_t i = 0; i < serial.mismatches.size(); ++i) {
        CHECK(serial.mismatches[i].trial == parallel.mismatches[i].trial);
        CHECK(serial.mismatches[i].explanation == parallel.mismatches[i].explanation);
    }
}

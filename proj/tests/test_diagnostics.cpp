#include <doctest.h>

#include <limits>

#include "wavemaps/config.hpp"
#include "wavemaps/diagnostics.hpp"

using namespace wm;

TEST_CASE("exponent parsing") {
  CHECK(parse_exponents("4,4") == std::pair<double, double>(4.0, 4.0));
  const auto [p, q] = parse_exponents("inf,2");
  CHECK(p == std::numeric_limits<double>::infinity());
  CHECK(q == 2.0);
  CHECK_THROWS(parse_exponents("4"));
  CHECK_THROWS(parse_exponents("a,b"));
}

TEST_CASE("identity suite passes with default tolerances") {
  const auto d = diagnostics_from(default_config());
  const auto checks = identity_suite(d);
  CHECK(checks.size() >= 10);
  for (const auto& c : checks) {
    INFO(c.name << " = " << c.value);
    CHECK(c.status == "pass");
    CHECK(c.suite == "identities");
  }
}

TEST_CASE("a negative tolerance fails the check it names") {
  auto d = diagnostics_from(default_config());
  d.tol_group_law = -1.0;
  bool seen = false;
  for (const auto& c : identity_suite(d)) {
    if (c.name == "group_law") {
      seen = true;
      CHECK(c.status == "fail");
      CHECK_FALSE(c.ok());
    }
  }
  CHECK(seen);
}

TEST_CASE("control statuses") {
  CheckResult c;
  c.status = "expected-fail";
  CHECK(c.ok());
  c.status = "unexpected-pass";
  CHECK_FALSE(c.ok());
}

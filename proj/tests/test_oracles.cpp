#include <doctest.h>

#include "oracle_checks.hpp"

TEST_CASE("oracle equivalence checks") {
  for (const auto& check : oracle_checks::all_checks()) {
    SUBCASE(check.name.c_str()) {
      const auto result = check.run();
      CHECK_MESSAGE(result.passed, result.name << ": " << result.detail);
    }
  }
}

#include <gtest/gtest.h>

#include "starspec/validation.hpp"

using namespace starspec;

class ValidationSuite : public ::testing::TestWithParam<std::string> {};

TEST_P(ValidationSuite, PassesUnperturbed) {
  const auto report = run_validation(GetParam());
  ASSERT_FALSE(report.checks.empty());
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.suite << ": " << c.name << " metric " << c.metric;
}

TEST_P(ValidationSuite, FailsWhenPerturbed) { EXPECT_FALSE(run_validation(GetParam(), 1e-3).all_passed()); }

INSTANTIATE_TEST_SUITE_P(AllSuites, ValidationSuite, ::testing::ValuesIn(validation_suites()),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& ch : s)
                             if (ch == '-') ch = '_';
                           return s;
                         });

TEST(Validation, UnknownSuiteIsAnInputError) {
  try {
    run_validation("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

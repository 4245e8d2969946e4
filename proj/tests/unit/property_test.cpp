#include <gtest/gtest.h>

#include "differential.hpp"
#include "fuzz.hpp"

namespace reqc::testing {
namespace {

constexpr int kCases = 1500;

void sweep(Comparison which, std::uint64_t seed) {
  Gen g(seed);
  StepConfig cfg{10};
  int failures = 0;
  for (int i = 0; i < kCases && failures < 5; ++i) {
    VariableDictionary dict = fuzz_dictionary(g);
    Requirement req = fuzz_requirement(g, dict);
    Trace trace = fuzz_trace(g, dict);
    std::string d = compare(which, req, dict, trace, cfg);
    if (!d.empty()) {
      ++failures;
      ADD_FAILURE() << "case " << i << ": " << d;
    }
  }
}

TEST(Property, FutureAgreesWithBruteForce) { sweep(Comparison::FutureVsOracle, 11); }
TEST(Property, PastAgreesWithFuture) { sweep(Comparison::FutureVsPast, 12); }
TEST(Property, GraphAgreesWithVerdict) { sweep(Comparison::GraphVsVerdict, 13); }
TEST(Property, MonitorAgreesWithVerdict) { sweep(Comparison::MonitorVsVerdict, 14); }

}  // namespace
}  // namespace reqc::testing

#include <gtest/gtest.h>

#include "pgather/demo.hpp"

namespace pgather {
namespace {

TEST(Demo, EveryDemonstrationExhibitsItsFailure) {
    for (const auto* which : {"ring", "glued", "t3"}) {
        const auto report = run_demo(which);
        EXPECT_TRUE(report.failure_exhibited) << which;
        EXPECT_FALSE(report.narrative.empty());
    }
    EXPECT_THROW(run_demo("torus"), std::invalid_argument);
}

}  // namespace
}  // namespace pgather

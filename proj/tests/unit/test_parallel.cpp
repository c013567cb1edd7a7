#include <gtest/gtest.h>

#include <cstdlib>
#include <stdexcept>

#include "locattr/parallel.hpp"

using namespace locattr;

TEST(ParallelFor, VisitsEveryIndexOnce) {
    for (std::size_t jobs : {1u, 2u, 8u}) {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) EXPECT_EQ(h, 1);
    }
    parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
    for (std::size_t jobs : {1u, 4u}) {
        try {
            parallel_for(100, jobs, [](std::size_t i) {
                if (i % 10 == 7) throw std::runtime_error(std::to_string(i));
            });
            FAIL();
        } catch (const std::runtime_error& e) {
            EXPECT_STREQ(e.what(), "7");
        }
    }
}

TEST(DefaultJobs, ReadsEnvironment) {
    ::setenv("LOCATTR_JOBS", "3", 1);
    EXPECT_EQ(default_jobs(), 3u);
    ::setenv("LOCATTR_JOBS", "zero", 1);
    EXPECT_GE(default_jobs(), 1u);
    ::unsetenv("LOCATTR_JOBS");
    EXPECT_GE(default_jobs(), 1u);
}

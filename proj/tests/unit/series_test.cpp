#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "tseval/series.hpp"

namespace fs = std::filesystem;
using tseval::DataError;
using tseval::TimeSeries;

namespace {

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tseval_series_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const auto path = dir_ / name;
        std::ofstream(path) << text;
        return path;
    }

    fs::path dir_;
};

std::vector<double> values_of(const TimeSeries& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

TEST(TimeSeries, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(TimeSeries({}), std::invalid_argument);
    EXPECT_THROW(TimeSeries({1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
    EXPECT_THROW(TimeSeries({std::numeric_limits<double>::infinity()}), std::invalid_argument);
}

TEST(TimeSeries, TimestampsMustMatchAndIncrease) {
    EXPECT_NO_THROW(TimeSeries({1, 2, 3}, "x", std::vector<double>{0, 1, 5}));
    EXPECT_THROW(TimeSeries({1, 2, 3}, "x", std::vector<double>{0, 1}), std::invalid_argument);
    EXPECT_THROW(TimeSeries({1, 2, 3}, "x", std::vector<double>{0, 2, 2}), std::invalid_argument);
}

TEST(TimeSeries, SliceKeepsTimestamps) {
    const TimeSeries s({1, 2, 3, 4}, "x", std::vector<double>{10, 11, 12, 13});
    const auto part = s.slice(1, 3);
    EXPECT_EQ(values_of(part), (std::vector<double>{2, 3}));
    ASSERT_TRUE(part.timestamps().has_value());
    EXPECT_EQ(*part.timestamps(), (std::vector<double>{11, 12}));
}

TEST_F(TempDir, LoadsHeaderlessColumn) {
    const auto s = tseval::load_csv(write("a.csv", "1.0\n2.0\n3.5\n"));
    EXPECT_EQ(values_of(s), (std::vector<double>{1.0, 2.0, 3.5}));
    EXPECT_EQ(s.name(), "a");
}

TEST_F(TempDir, LoadsSingleRowWithHeader) {
    const auto s = tseval::load_csv(write("b.csv", "y\n7\n"), std::string("y"));
    EXPECT_EQ(values_of(s), (std::vector<double>{7.0}));
}

TEST_F(TempDir, NonNumericCellNamesRow) {
    const auto path = write("c.csv", "1\n2\nabc\n4\n");
    try {
        (void)tseval::load_csv(path);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
    }
}

TEST_F(TempDir, SelectsColumnByNameAndIndex) {
    const auto path = write("d.csv", "t,y\n0,5\n1,6\n2,8\n");
    EXPECT_EQ(values_of(tseval::load_csv(path, std::string("y"))), (std::vector<double>{5, 6, 8}));
    EXPECT_EQ(values_of(tseval::load_csv(path, std::size_t{1})), (std::vector<double>{5, 6, 8}));
    EXPECT_THROW((void)tseval::load_csv(path, std::string("z")), DataError);
}

TEST_F(TempDir, MissingFileAndEmptyColumnFail) {
    EXPECT_THROW((void)tseval::load_csv(dir_ / "nope.csv"), DataError);
    EXPECT_THROW((void)tseval::load_csv(write("e.csv", "y\n")), DataError);
}

TEST_F(TempDir, WriteLoadRoundTripIsBitExact) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    std::vector<double> v;
    for (int i = 0; i < 500; ++i) v.push_back(u(rng) * std::pow(10.0, i % 20 - 10));
    v.push_back(5e-324);
    v.push_back(-0.1);
    v.push_back(1.0 / 3.0);
    const TimeSeries s(v, "r");
    const auto path = dir_ / "r.csv";
    tseval::write_csv(s, path);
    const auto back = tseval::load_csv(path);
    ASSERT_EQ(back.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(back[i], v[i]) << i;
}

TEST(Difference, Examples) {
    EXPECT_EQ(values_of(tseval::difference(TimeSeries({1, 2, 4}), 1)), (std::vector<double>{1, 2}));
    EXPECT_EQ(values_of(tseval::difference(TimeSeries({5, 5, 5}), 0)), (std::vector<double>{5, 5, 5}));
    EXPECT_EQ(values_of(tseval::difference(TimeSeries({1, 2, 4, 7}), 2)), (std::vector<double>{1, 1}));
    EXPECT_THROW((void)tseval::difference(TimeSeries({1, 2}), 2), std::invalid_argument);
}

TEST(Difference, TwiceOnceEqualsSecondOrder) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n(0, 1);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> v(3 + rep);
        for (auto& x : v) x = n(rng);
        const TimeSeries s(v);
        EXPECT_EQ(tseval::difference(tseval::difference(s, 1), 1), tseval::difference(s, 2));
    }
}

TEST(Split, SizesFollowFloor) {
    std::vector<double> v(10);
    auto [est, val] = tseval::estimation_validation_split(TimeSeries(v), 0.7);
    EXPECT_EQ(est.size(), 7u);
    EXPECT_EQ(val.size(), 3u);

    std::vector<double> w(200);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(i);
    auto [e2, v2] = tseval::estimation_validation_split(TimeSeries(w), 0.7);
    EXPECT_EQ(e2.size(), 140u);
    EXPECT_EQ(v2.size(), 60u);
    std::vector<double> joined(e2.values().begin(), e2.values().end());
    joined.insert(joined.end(), v2.values().begin(), v2.values().end());
    EXPECT_EQ(joined, w);
}

TEST(Split, DegenerateSidesFail) {
    EXPECT_THROW((void)tseval::estimation_validation_split(TimeSeries({1.0}), 0.7), std::invalid_argument);
    EXPECT_THROW((void)tseval::estimation_validation_split(TimeSeries({1.0, 2.0}), 0.4), std::invalid_argument);
    EXPECT_THROW((void)tseval::estimation_validation_split(TimeSeries({1.0, 2.0}), 1.0), std::invalid_argument);
}

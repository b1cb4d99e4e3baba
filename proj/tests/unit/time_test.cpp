#include <gtest/gtest.h>

#include "adaptivetrend/time.h"

namespace at = adaptivetrend;

TEST(Time, MonthStartAndNavigation) {
    EXPECT_EQ(at::month_start({2021, 1}), 1'609'459'200);
    EXPECT_EQ(at::month_start({2021, 3}), 1'614'556'800);
    EXPECT_EQ(at::next_month({2021, 12}), (at::YearMonth{2022, 1}));
    EXPECT_EQ(at::prev_month({2021, 1}), (at::YearMonth{2020, 12}));
    EXPECT_EQ(at::year_month_of(1'614'556'799), (at::YearMonth{2021, 2}));
    EXPECT_EQ(at::year_month_of(1'614'556'800), (at::YearMonth{2021, 3}));
}

TEST(Time, ParseAndFormatDates) {
    EXPECT_EQ(at::format_date(at::parse_date("2024-02-29")), "2024-02-29");
    EXPECT_THROW(at::parse_date("2023-02-29"), std::invalid_argument);
    EXPECT_THROW(at::parse_date("2023-1-05"), std::invalid_argument);
    EXPECT_EQ(at::parse_timestamp("2021-01-01"), 1'609'459'200);
    EXPECT_EQ(at::parse_timestamp("1609459200"), 1'609'459'200);
    EXPECT_EQ(at::format_year_month({2022, 7}), "2022-07");
}

TEST(Time, BarsPerYear) {
    EXPECT_DOUBLE_EQ(at::bars_per_year(21'600), 1460.0);
    EXPECT_DOUBLE_EQ(at::bars_per_year(3'600), 8760.0);
    EXPECT_DOUBLE_EQ(at::bars_per_year(86'400), 365.0);
}

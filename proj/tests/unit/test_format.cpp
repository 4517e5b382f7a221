#include <cmath>
#include <cstdlib>
#include <limits>

#include <gtest/gtest.h>

#include "overdisp_cli/format.hpp"

using overdisp::cli::format_fixed;
using overdisp::cli::format_sci;

TEST(FormatFixed, HalfEvenOnShortestDecimal) {
    EXPECT_EQ(format_fixed(0.125, 2), "0.12");
    EXPECT_EQ(format_fixed(0.375, 2), "0.38");
    EXPECT_EQ(format_fixed(2.5, 0), "2");
    EXPECT_EQ(format_fixed(3.5, 0), "4");
    EXPECT_EQ(format_fixed(2.675, 2), "2.68");
    EXPECT_EQ(format_fixed(0.0006, 3), "0.001");
}

TEST(FormatFixed, CarriesAndSigns) {
    EXPECT_EQ(format_fixed(9.9996, 3), "10.000");
    EXPECT_EQ(format_fixed(-0.0004, 3), "0.000");
    EXPECT_EQ(format_fixed(-0.0, 2), "0.00");
    EXPECT_EQ(format_fixed(-0.1931, 3), "-0.193");
    EXPECT_EQ(format_fixed(999.5, 0), "1000");
    EXPECT_EQ(format_fixed(1.0, 3), "1.000");
    EXPECT_EQ(format_fixed(123456.789, 1), "123456.8");
    EXPECT_EQ(format_fixed(1e-20, 4), "0.0000");
}

TEST(FormatFixed, NonFinite) {
    EXPECT_EQ(format_fixed(std::numeric_limits<double>::quiet_NaN(), 3), "nan");
    EXPECT_EQ(format_fixed(std::numeric_limits<double>::infinity(), 3), "inf");
    EXPECT_EQ(format_fixed(-std::numeric_limits<double>::infinity(), 3), "-inf");
}

TEST(FormatSci, Examples) {
    EXPECT_EQ(format_sci(4.435e-4, 3), "4.435e-04");
    EXPECT_EQ(format_sci(9.9995, 3), "1.000e+01");
    EXPECT_EQ(format_sci(1.0005, 3), "1.000e+00");
    EXPECT_EQ(format_sci(0.0, 2), "0.00e+00");
    EXPECT_EQ(format_sci(-1.5e-10, 0), "-2e-10");
    EXPECT_EQ(format_sci(2.5e-10, 0), "2e-10");
    EXPECT_EQ(format_sci(1.23456e123, 2), "1.23e+123");
    EXPECT_EQ(format_sci(6.02e-300, 1), "6.0e-300");
}

TEST(FormatSci, RoundTripsAtFullPrecision) {
    for (double x : {1.686117e-3, 0.1, 2.0 / 3.0, 1e-310, 12345.678}) {
        EXPECT_EQ(std::strtod(format_sci(x, 16).c_str(), nullptr), x);
    }
}

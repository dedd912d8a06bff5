#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nwspec/ingest.hpp"

using namespace nwspec;

namespace {

TimeSeries series_of(std::vector<double> v) {
    TimeSeries s;
    s.name = "x";
    s.values = std::move(v);
    return s;
}

}  // namespace

TEST(LoadSeries, ReadsNamedColumnInFileOrder) {
    std::istringstream in("t,gdp\n1,100\n2,101\n3,99");
    const auto s = load_series(in, std::string("gdp"));
    EXPECT_EQ(s.name, "gdp");
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s.values, (std::vector<double>{100, 101, 99}));
}

TEST(LoadSeries, MissingColumnIsConfigError) {
    std::istringstream in("t,gdp\n1,100\n2,101\n3,99");
    EXPECT_THROW(load_series(in, std::string("xyz")), ConfigError);
}

TEST(LoadSeries, NonNumericCellNamesRowAndColumn) {
    std::istringstream in("t,gdp\n1,100\n2,abc\n3,99\n");
    try {
        load_series(in, std::string("gdp"));
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 3u);
        EXPECT_EQ(e.column(), "gdp");
        EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
    }
}

TEST(LoadSeries, EmptyCellIsRejectedNotInterpolated) {
    std::istringstream in("t,gdp\n1,100\n2,\n3,99\n");
    EXPECT_THROW(load_series(in, std::string("gdp")), ParseError);
}

TEST(LoadSeries, NonFiniteCellIsRejected) {
    std::istringstream in("t,gdp\n1,100\n2,nan\n3,99\n");
    EXPECT_THROW(load_series(in, std::string("gdp")), ParseError);
}

TEST(LoadSeries, SingleRowIsTooShort) {
    std::istringstream in("t,gdp\n1,100\n");
    EXPECT_THROW(load_series(in, std::string("gdp")), TooShortError);
}

TEST(LoadSeries, QuotedFieldsDelimiterAndNoHeader) {
    std::istringstream in("\"1955 Q1\";\"1,5\";10\r\n\"1955 \"\"Q2\"\"\";x;11\r\n");
    CsvOptions opt;
    opt.delimiter = ';';
    opt.header = false;
    opt.period_column = std::size_t{0};
    const auto s = load_series(in, std::size_t{2}, opt);
    EXPECT_EQ(s.values, (std::vector<double>{10, 11}));
    ASSERT_EQ(s.periods.size(), 2u);
    EXPECT_EQ(s.periods[1], "1955 \"Q2\"");
}

TEST(LoadSeries, ColumnNameWithoutHeaderIsConfigError) {
    std::istringstream in("1,2\n3,4\n");
    CsvOptions opt;
    opt.header = false;
    EXPECT_THROW(load_series(in, std::string("a"), opt), ConfigError);
}

TEST(LoadSeries, DeterministicAndWriterRoundTrips) {
    TimeSeries s = series_of({0.1, -2.5e-7, 3.0, 1.0 / 3.0});
    s.name = "value";
    std::ostringstream a;
    write_series_csv(a, s);
    std::istringstream in1(a.str());
    std::istringstream in2(a.str());
    const auto r1 = load_series(in1, std::string("value"));
    const auto r2 = load_series(in2, std::string("value"));
    EXPECT_EQ(r1.values, s.values);
    EXPECT_EQ(r1.values, r2.values);
}

TEST(Transform, LogdiffSingleStep) {
    const auto out = transform(series_of({100, 101}), TransformSpec::make(TransformKind::logdiff));
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out.values[0], 100.0 * std::log(1.01), 1e-12);
    EXPECT_NEAR(out.values[0], 0.99503, 1e-5);
}

TEST(Transform, DiffOfConstant) {
    const auto out = transform(series_of({5, 5, 5}), TransformSpec::make(TransformKind::diff));
    EXPECT_EQ(out.values, (std::vector<double>{0, 0}));
}

TEST(Transform, LogdiffExactLogs) {
    const double e = std::numbers::e;
    const auto out = transform(series_of({1, e, e * e}), TransformSpec::make(TransformKind::logdiff, 1.0));
    ASSERT_EQ(out.size(), 2u);
    EXPECT_NEAR(out.values[0], 1.0, 1e-14);
    EXPECT_NEAR(out.values[1], 1.0, 1e-14);
}

TEST(Transform, NoneIsIdentity) {
    const auto s = series_of({3, 1, 4});
    EXPECT_EQ(transform(s, TransformSpec::make(TransformKind::none)).values, s.values);
}

TEST(Transform, NonPositiveLevelNamesIndex) {
    try {
        transform(series_of({1, 2, 0, 3}), TransformSpec::make(TransformKind::logdiff));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos);
    }
}

TEST(Transform, InvalidScaleRejected) {
    EXPECT_THROW(TransformSpec::make(TransformKind::diff, 0.0), ConfigError);
    EXPECT_THROW(TransformSpec::make(TransformKind::diff, -1.0), ConfigError);
    EXPECT_DOUBLE_EQ(TransformSpec::make(TransformKind::logdiff).scale, 100.0);
    EXPECT_DOUBLE_EQ(TransformSpec::make(TransformKind::diff).scale, 1.0);
}

TEST(Transform, LogdiffCumsumExpRecoversLevels) {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u(50.0, 150.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> levels(40);
        for (double& v : levels) v = u(gen);
        const auto g = transform(series_of(levels), TransformSpec::make(TransformKind::logdiff));
        double log_level = std::log(levels[0]);
        for (std::size_t i = 0; i < g.size(); ++i) {
            log_level += g.values[i] / 100.0;
            EXPECT_NEAR(std::exp(log_level) / levels[i + 1], 1.0, 1e-9);
        }
    }
}

TEST(Standardize, AlreadyStandard) {
    const auto z = standardize(series_of({1, -1}));
    EXPECT_EQ(z.values, (std::vector<double>{1, -1}));
    EXPECT_DOUBLE_EQ(z.source_mean, 0.0);
    EXPECT_DOUBLE_EQ(z.source_std, 1.0);
}

TEST(Standardize, Symmetric) {
    const auto z = standardize(series_of({0, 2}));
    EXPECT_EQ(z.values, (std::vector<double>{-1, 1}));
    EXPECT_DOUBLE_EQ(z.source_mean, 1.0);
    EXPECT_DOUBLE_EQ(z.source_std, 1.0);
}

TEST(Standardize, ConstantIsDegenerate) {
    EXPECT_THROW(standardize(series_of({3, 3, 3})), DegenerateInputError);
    EXPECT_THROW(standardize(series_of({3})), TooShortError);
}

TEST(Standardize, InvariantsAndIdempotence) {
    std::mt19937 gen(5);
    std::lognormal_distribution<double> dist(2.0, 1.5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(16 + 37 * trial);
        for (double& x : v) x = 1000.0 + dist(gen);
        const auto z = standardize(v);
        double mean = 0.0;
        double c0 = 0.0;
        for (double x : z.values) {
            mean += x;
            c0 += x * x;
        }
        const double n = double(z.size());
        EXPECT_LT(std::abs(mean / n), 1e-10);
        EXPECT_LT(std::abs(c0 / n - 1.0), 1e-10);
        EXPECT_NEAR(c0 / n, 1.0, 1e-8);
        const auto again = standardize(z.values);
        for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(again.values[i], z.values[i], 1e-10);
    }
}

TEST(SummaryStats, ArithmeticSequence) {
    const auto s = summary_stats(series_of({1, 2, 3}));
    EXPECT_DOUBLE_EQ(s.mean, 2.0);
    EXPECT_DOUBLE_EQ(s.std, 1.0);
    EXPECT_DOUBLE_EQ(s.acc, 1.0);
}

TEST(SummaryStats, Constant) {
    const auto s = summary_stats(series_of({0.7, 0.7, 0.7, 0.7}));
    EXPECT_DOUBLE_EQ(s.mean, 0.7);
    EXPECT_DOUBLE_EQ(s.std, 0.0);
    EXPECT_DOUBLE_EQ(s.acc, 0.0);
}

TEST(SummaryStats, TooShort) { EXPECT_THROW(summary_stats(series_of({1, 2})), TooShortError); }

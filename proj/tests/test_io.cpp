#include "hullcert/hull.hpp"
#include "hullcert/io.hpp"
#include "hullcert/report.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <string>

using namespace hullcert;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("hullcert_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorKind::InvalidArgument;
}

Matrix float_matrix(oracle::Rng& rng, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<float> u(-10.0f, 10.0f);
    std::vector<double> d(rows * cols);
    for (auto& v : d) {
        v = u(rng);
    }
    return Matrix(rows, cols, d);
}

} // namespace

using FvecFile = TempDir;
using HullFile = TempDir;
using CsvFile = TempDir;
using ReportFile = TempDir;

TEST_F(FvecFile, SmallRoundTripAndLayout) {
    const auto m = Matrix::from_rows({{1, 2}, {3, 4}});
    io::write_fvec(path("m.fvec"), m);
    const auto bytes = io::read_file(path("m.fvec"));
    ASSERT_EQ(bytes.size(), 16u + 4 * 4);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "FVEC");
    EXPECT_EQ(bytes[4], 1);
    EXPECT_EQ(bytes[8], 2);
    EXPECT_EQ(bytes[12], 2);
    // 1.0f = 0x3f800000 little-endian.
    EXPECT_EQ(bytes[16], 0x00);
    EXPECT_EQ(bytes[19], 0x3f);
    const auto back = io::read_fvec(path("m.fvec"));
    EXPECT_EQ(back, m);
    EXPECT_EQ(io::encode_fvec(back), bytes);
}

TEST(Fvec, WriteReadWriteIsIdempotent) {
    oracle::Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = oracle::uniform_matrix(rng, 1 + trial, 3 + trial);  // doubles: first write rounds
        const auto once = io::encode_fvec(m);
        EXPECT_EQ(io::encode_fvec(io::decode_fvec(once)), once);
    }
}

TEST(Fvec, MalformedInputs) {
    auto good = io::encode_fvec(Matrix::from_rows({{1, 2}, {3, 4}}));
    auto truncated = good;
    truncated.resize(truncated.size() - 1);
    EXPECT_EQ(kind_of([&] { io::decode_fvec(truncated); }), ErrorKind::MalformedFile);

    auto oversized = good;
    oversized[8] = 200;  // rows = 200 but only 4 values present
    EXPECT_EQ(kind_of([&] { io::decode_fvec(oversized); }), ErrorKind::MalformedFile);

    auto magic = good;
    magic[0] = 'X';
    EXPECT_EQ(kind_of([&] { io::decode_fvec(magic); }), ErrorKind::MalformedFile);

    auto version = good;
    version[4] = 2;
    EXPECT_EQ(kind_of([&] { io::decode_fvec(version); }), ErrorKind::MalformedFile);

    auto trailing = good;
    trailing.push_back(0);
    EXPECT_EQ(kind_of([&] { io::decode_fvec(trailing); }), ErrorKind::MalformedFile);

    auto nan = good;
    nan[16] = 0x00;
    nan[17] = 0x00;
    nan[18] = 0xc0;
    nan[19] = 0x7f;
    EXPECT_EQ(kind_of([&] { io::decode_fvec(nan); }), ErrorKind::NonFiniteValue);
}

TEST(Lvec, RoundTripAndErrors) {
    const LabelVector labels{0, 1, -3, 2147483647};
    const auto bytes = io::encode_lvec(labels);
    EXPECT_EQ(bytes.size(), 12u + 4 * labels.size());
    EXPECT_EQ(io::decode_lvec(bytes), labels);
    auto cut = bytes;
    cut.pop_back();
    EXPECT_EQ(kind_of([&] { io::decode_lvec(cut); }), ErrorKind::MalformedFile);
}

TEST_F(HullFile, BuiltHullRoundTripsBitExactly) {
    oracle::Rng rng(2);
    const auto train = float_matrix(rng, 40, 3);
    const auto hull = build_hull_approximation(train);
    io::write_hull(hull, path("h.hul"));
    const auto back = io::read_hull(path("h.hul"));
    EXPECT_EQ(back.points, hull.points);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.epsilon), std::bit_cast<std::uint64_t>(hull.epsilon));
    EXPECT_EQ(back.source_rows, hull.source_rows);
    EXPECT_EQ(io::encode_hull(back), io::read_file(path("h.hul")));
}

TEST(Hull, MalformedInputs) {
    HullApprox h;
    h.points = Matrix::from_rows({{1, 2}, {3, 4}});
    h.epsilon = 0.5;
    h.source_rows = {4, 9};
    const auto good = io::encode_hull(h);
    EXPECT_EQ(good.size(), 4u + 4 + 8 + 8 + 16 + 4 + 8);

    auto truncated = good;
    truncated.resize(good.size() - 3);
    EXPECT_EQ(kind_of([&] { io::decode_hull(truncated); }), ErrorKind::MalformedFile);

    for (double bad : {0.0, -1.0}) {
        auto b = good;
        const auto bits = std::bit_cast<std::uint64_t>(bad);
        for (int i = 0; i < 8; ++i) {
            b[8 + i] = static_cast<unsigned char>(bits >> (8 * i));
        }
        EXPECT_EQ(kind_of([&] { io::decode_hull(b); }), ErrorKind::MalformedFile);
    }

    HullApprox lossy = h;
    lossy.points = Matrix::from_rows({{0.1, 2}, {3, 4}});
    EXPECT_EQ(kind_of([&] { io::encode_hull(lossy); }), ErrorKind::IoFailure);
}

TEST(Csv, ParsesDecimalsToSinglePrecision) {
    const auto m = io::parse_csv_matrix("1.5,2.0\n3.0,4.0", false);
    EXPECT_EQ(m, Matrix::from_rows({{1.5, 2.0}, {3.0, 4.0}}));
    const auto tenth = io::parse_csv_matrix("0.1\n", false);
    EXPECT_EQ(tenth(0, 0), static_cast<double>(0.1f));
    const auto with_header = io::parse_csv_matrix("a,b\r\n1,2\r\n\n3,4\r\n", true);
    EXPECT_EQ(with_header, Matrix::from_rows({{1, 2}, {3, 4}}));
}

TEST(Csv, ErrorsNameTheLine) {
    try {
        io::parse_csv_matrix("1,2\n3\n", false, "x.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MalformedFile);
        EXPECT_NE(std::string(e.what()).find("x.csv: line 2"), std::string::npos);
    }
    EXPECT_EQ(kind_of([] { io::parse_csv_matrix("1,abc\n", false); }), ErrorKind::MalformedFile);
    EXPECT_EQ(kind_of([] { io::parse_csv_matrix("1,nan\n", false); }), ErrorKind::NonFiniteValue);
    EXPECT_EQ(kind_of([] { io::parse_csv_matrix("1,1e60\n", false); }), ErrorKind::NonFiniteValue);
    EXPECT_EQ(kind_of([] { io::parse_csv_matrix("\n\n", false); }), ErrorKind::MalformedFile);
}

TEST_F(CsvFile, CsvAndFvecAgree) {
    oracle::Rng rng(3);
    const auto m = float_matrix(rng, 5, 4);
    std::string text;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            text += (c ? "," : "") + io::format_number(m(r, c));
        }
        text += "\n";
    }
    EXPECT_EQ(io::parse_csv_matrix(text, false), io::decode_fvec(io::encode_fvec(m)));
}

TEST(Scores, FormatAndParse) {
    const io::NamedScores s{"tu", {0.0, 1.5, 2.0 / 3.0}};
    const auto text = io::format_scores(s);
    EXPECT_EQ(text, "tu\n0\n1.5\n0.666666667\n");
    const auto back = io::parse_scores(text);
    EXPECT_EQ(back.name, "tu");
    EXPECT_EQ(back.values.size(), 3u);
    EXPECT_EQ(io::format_scores(back), text);
    EXPECT_EQ(kind_of([] { io::format_scores({"dsa", {1.0, INFINITY}}); }), ErrorKind::NonFiniteValue);
}

// ----------------------------------------------------------------- reports

TEST(Report, DeterministicSortedAndNineDigits) {
    Report r = make_report("demo");
    r["zeta"] = 2.0 / 3.0;
    r["alpha"] = 1;
    r["missing"] = nullptr;
    const auto text = format_report(r);
    EXPECT_EQ(text, format_report(r));
    EXPECT_LT(text.find("\"alpha\""), text.find("\"zeta\""));
    EXPECT_NE(text.find("0.666666667"), std::string::npos);
    EXPECT_NE(text.find("\"missing\": null"), std::string::npos);
    EXPECT_NE(text.find("\"seed\": null"), std::string::npos);
    EXPECT_NE(text.find("\"version\": \"0.1.0\""), std::string::npos);
    Report parsed;
    EXPECT_NO_THROW(parsed = Report::parse(text));
}

TEST(Report, RefusesNonFiniteNumbers) {
    Report r = make_report("dsa");
    r["scores"] = {1.0, std::numeric_limits<double>::infinity()};
    try {
        (void)format_report(r);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonFiniteValue);
        EXPECT_NE(std::string(e.what()).find("$.scores[1]"), std::string::npos);
    }
}

TEST(Report, EmptyFieldsAreExplicitNulls) {
    SetSummary s;
    s.n_closure = 3;
    s.closure_ratio = 1.0;
    const auto text = format_report(to_json(s));
    EXPECT_NE(text.find("\"mean_exterior_tu\": null"), std::string::npos);
    CorrelationReport c;
    c.pearson.value = 0.5;
    c.point_biserial.error = "SingleGroup: x";
    const auto ctext = format_report(to_json(c));
    EXPECT_NE(ctext.find("\"error\": null"), std::string::npos);
    EXPECT_NE(ctext.find("\"value\": null"), std::string::npos);
}

TEST_F(ReportFile, SameReportTwiceGivesIdenticalBytes) {
    Report r = make_report("x");
    r["value"] = 3.14159265358979;
    write_report(r, path("a.json"));
    write_report(r, path("b.json"));
    EXPECT_EQ(io::read_file(path("a.json")), io::read_file(path("b.json")));
}

TEST(Digest, KnownVector) {
    // FNV-1a 64 of "a" is af63dc4c8601ec8c.
    EXPECT_EQ(fnv1a64_hex(io::Bytes{'a'}), "af63dc4c8601ec8c");
}

#ifndef HULLCERT_IO_HPP
#define HULLCERT_IO_HPP

#include "error.hpp"
#include "hull.hpp"
#include "matrix.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace hullcert::io {

// Binary layouts (all integers and floats little-endian):
//   FVEC: "FVEC" u32 version=1, u32 rows, u32 cols, rows*cols f32
//   LVEC: "LVEC" u32 version=1, u32 count, count i32
//   HUL1: "HUL1" u32 version=1, f64 epsilon, u32 rows, u32 cols, rows*cols f32,
//         u32 count, count u32 source row indices

inline constexpr std::uint32_t format_version = 1;

using Bytes = std::vector<unsigned char>;

inline Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoFailure, "cannot open " + path);
    }
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorKind::IoFailure, "read failed: " + path);
    }
    return bytes;
}

inline void write_file(const std::string& path, const Bytes& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::IoFailure, "cannot open " + path + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw Error(ErrorKind::IoFailure, "write failed: " + path);
    }
}

namespace detail {

class ByteWriter {
public:
    void tag(std::string_view magic) { bytes_.insert(bytes_.end(), magic.begin(), magic.end()); }

    void u32(std::uint32_t v) {
        for (int shift = 0; shift < 32; shift += 8) {
            bytes_.push_back(static_cast<unsigned char>(v >> shift));
        }
    }

    void u64(std::uint64_t v) {
        for (int shift = 0; shift < 64; shift += 8) {
            bytes_.push_back(static_cast<unsigned char>(v >> shift));
        }
    }

    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

    Bytes take() { return std::move(bytes_); }

private:
    Bytes bytes_;
};

class ByteReader {
public:
    ByteReader(const Bytes& bytes, std::string path) : bytes_(bytes), path_(std::move(path)) {}

    void expect_tag(std::string_view magic) {
        need(magic.size(), "magic");
        if (std::memcmp(bytes_.data() + pos_, magic.data(), magic.size()) != 0) {
            fail("bad magic, expected \"" + std::string(magic) + "\"");
        }
        pos_ += magic.size();
    }

    void expect_version() {
        const auto version = u32("version");
        if (version != format_version) {
            fail("unsupported version " + std::to_string(version));
        }
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += 8;
        return v;
    }

    std::int32_t i32(const char* what) { return static_cast<std::int32_t>(u32(what)); }
    float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
    double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    void expect_end() {
        if (pos_ != bytes_.size()) {
            fail(std::to_string(bytes_.size() - pos_) + " trailing bytes");
        }
    }

    /// Ensures `count` payload entries of `width` bytes fit before reading them.
    void need_payload(std::uint64_t count, std::uint64_t width, const char* what) {
        if (count > remaining() / width) {
            fail(std::string("declared ") + what + " (" + std::to_string(count) + " x " +
                 std::to_string(width) + " bytes) exceeds file length");
        }
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw Error(ErrorKind::MalformedFile, path_ + " at byte offset " + std::to_string(pos_) + ": " + message);
    }

private:
    void need(std::size_t n, const char* what) const {
        if (remaining() < n) {
            fail(std::string("truncated while reading ") + what);
        }
    }

    const Bytes& bytes_;
    std::string path_;
    std::size_t pos_ = 0;
};

inline std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorKind::IoFailure, std::string(what) + " exceeds the 32-bit format limit");
    }
    return static_cast<std::uint32_t>(v);
}

inline void write_payload(ByteWriter& out, const Matrix& m) {
    out.u32(checked_u32(m.rows(), "rows"));
    out.u32(checked_u32(m.cols(), "cols"));
    for (double v : m.data()) {
        out.f32(static_cast<float>(v));
    }
}

inline Matrix read_payload(ByteReader& in, const std::string& path) {
    const std::uint32_t rows = in.u32("rows");
    const std::uint32_t cols = in.u32("cols");
    if (rows == 0 || cols == 0) {
        in.fail("empty matrix (rows=" + std::to_string(rows) + ", cols=" + std::to_string(cols) + ")");
    }
    const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
    in.need_payload(count, 4, "payload");
    std::vector<double> data(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const float v = in.f32("payload");
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::NonFiniteValue, path + ": non-finite value at row " + std::to_string(i / cols) +
                                                       ", column " + std::to_string(i % cols));
        }
        data[i] = v;
    }
    return Matrix(rows, cols, std::move(data));
}

inline bool single_precision_exact(double v) { return static_cast<double>(static_cast<float>(v)) == v; }

} // namespace detail

// ---------------------------------------------------------------- FVEC

inline Bytes encode_fvec(const Matrix& m) {
    detail::ByteWriter out;
    out.tag("FVEC");
    out.u32(format_version);
    detail::write_payload(out, m);
    return out.take();
}

inline Matrix decode_fvec(const Bytes& bytes, const std::string& path = "<memory>") {
    detail::ByteReader in(bytes, path);
    in.expect_tag("FVEC");
    in.expect_version();
    auto m = detail::read_payload(in, path);
    in.expect_end();
    return m;
}

/// Writes a matrix as FVEC; values are rounded to single precision.
inline void write_fvec(const std::string& path, const Matrix& m) { write_file(path, encode_fvec(m)); }

inline Matrix read_fvec(const std::string& path) { return decode_fvec(read_file(path), path); }

// ---------------------------------------------------------------- LVEC

inline Bytes encode_lvec(const LabelVector& labels) {
    detail::ByteWriter out;
    out.tag("LVEC");
    out.u32(format_version);
    out.u32(detail::checked_u32(labels.size(), "count"));
    for (auto v : labels) {
        out.i32(v);
    }
    return out.take();
}

inline LabelVector decode_lvec(const Bytes& bytes, const std::string& path = "<memory>") {
    detail::ByteReader in(bytes, path);
    in.expect_tag("LVEC");
    in.expect_version();
    const std::uint32_t count = in.u32("count");
    in.need_payload(count, 4, "labels");
    LabelVector labels(count);
    for (auto& v : labels) {
        v = in.i32("labels");
    }
    in.expect_end();
    return labels;
}

inline void write_lvec(const std::string& path, const LabelVector& labels) { write_file(path, encode_lvec(labels)); }

inline LabelVector read_lvec(const std::string& path) { return decode_lvec(read_file(path), path); }

// ---------------------------------------------------------------- HUL1

/// Serialises points (single precision), epsilon and source rows. Refuses
/// points that single precision cannot hold exactly, so reading back is
/// lossless. Build statistics are not persisted.
inline Bytes encode_hull(const HullApprox& hull) {
    if (!(hull.epsilon > 0.0) || !std::isfinite(hull.epsilon)) {
        throw Error(ErrorKind::IoFailure, "hull epsilon must be positive and finite");
    }
    if (hull.source_rows.size() != hull.points.rows()) {
        throw Error(ErrorKind::IoFailure, "hull has " + std::to_string(hull.points.rows()) + " points but " +
                                              std::to_string(hull.source_rows.size()) + " source rows");
    }
    for (std::size_t i = 0; i < hull.points.data().size(); ++i) {
        if (!detail::single_precision_exact(hull.points.data()[i])) {
            throw Error(ErrorKind::IoFailure, "hull point " + std::to_string(i / hull.points.cols()) +
                                                  " is not exactly representable in single precision");
        }
    }
    detail::ByteWriter out;
    out.tag("HUL1");
    out.u32(format_version);
    out.f64(hull.epsilon);
    detail::write_payload(out, hull.points);
    out.u32(detail::checked_u32(hull.source_rows.size(), "source row count"));
    for (auto r : hull.source_rows) {
        out.u32(detail::checked_u32(r, "source row index"));
    }
    return out.take();
}

inline HullApprox decode_hull(const Bytes& bytes, const std::string& path = "<memory>") {
    detail::ByteReader in(bytes, path);
    in.expect_tag("HUL1");
    in.expect_version();
    HullApprox hull;
    const std::size_t epsilon_offset = in.position();
    hull.epsilon = in.f64("epsilon");
    if (!(hull.epsilon > 0.0) || !std::isfinite(hull.epsilon)) {
        throw Error(ErrorKind::MalformedFile, path + " at byte offset " + std::to_string(epsilon_offset) +
                                                  ": epsilon must be positive and finite");
    }
    hull.points = detail::read_payload(in, path);
    const std::uint32_t count = in.u32("source row count");
    if (count != hull.points.rows()) {
        in.fail("source row count " + std::to_string(count) + " != point count " +
                std::to_string(hull.points.rows()));
    }
    in.need_payload(count, 4, "source rows");
    hull.source_rows.resize(count);
    for (auto& r : hull.source_rows) {
        r = in.u32("source rows");
    }
    in.expect_end();
    return hull;
}

inline void write_hull(const HullApprox& hull, const std::string& path) { write_file(path, encode_hull(hull)); }

inline HullApprox read_hull(const std::string& path) { return decode_hull(read_file(path), path); }

// ---------------------------------------------------------------- CSV

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <typename T>
T parse_number(std::string_view field, const std::string& path, std::size_t line, std::size_t column) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    T value{};
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ptr != last || (ec != std::errc() && ec != std::errc::result_out_of_range)) {
        throw Error(ErrorKind::MalformedFile, path + ": line " + std::to_string(line) + ", column " +
                                                  std::to_string(column) + ": cannot parse \"" +
                                                  std::string(field) + "\"");
    }
    if (ec == std::errc::result_out_of_range || !std::isfinite(value)) {
        throw Error(ErrorKind::NonFiniteValue, path + ": line " + std::to_string(line) + ", column " +
                                                   std::to_string(column) + ": non-finite value \"" +
                                                   std::string(field) + "\"");
    }
    return value;
}

/// Calls fn(line_number, line) for each non-empty line (1-based numbering).
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto end = text.find('\n');
        auto line = text.substr(0, end);
        ++line_no;
        if (!trim(line).empty()) {
            fn(line_no, line);
        }
        if (end == std::string_view::npos) {
            break;
        }
        text.remove_prefix(end + 1);
    }
}

} // namespace detail

/// Comma-separated decimals, one sample per line. Values are rounded to the
/// nearest single-precision number so CSV and FVEC inputs agree exactly.
inline Matrix parse_csv_matrix(std::string_view text, bool has_header, const std::string& path = "<memory>") {
    std::vector<double> data;
    std::size_t cols = 0;
    std::size_t rows = 0;
    bool header_pending = has_header;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (header_pending) {
            header_pending = false;
            return;
        }
        std::size_t fields = 0;
        while (true) {
            const auto comma = line.find(',');
            const auto field = line.substr(0, comma);
            ++fields;
            const float v = detail::parse_number<float>(field, path, line_no, fields);
            data.push_back(v);
            if (comma == std::string_view::npos) {
                break;
            }
            line.remove_prefix(comma + 1);
        }
        if (rows == 0) {
            cols = fields;
        } else if (fields != cols) {
            throw Error(ErrorKind::MalformedFile, path + ": line " + std::to_string(line_no) + " has " +
                                                      std::to_string(fields) + " columns, expected " +
                                                      std::to_string(cols));
        }
        ++rows;
    });
    if (rows == 0) {
        throw Error(ErrorKind::MalformedFile, path + ": no data rows");
    }
    return Matrix(rows, cols, std::move(data));
}

inline Matrix read_csv_matrix(const std::string& path, bool has_header = false) {
    const auto bytes = read_file(path);
    return parse_csv_matrix(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                            has_header, path);
}

enum class MatrixFormat { Fvec, Csv };

/// FVEC unless the path ends in ".csv".
inline MatrixFormat guess_format(const std::string& path) {
    return std::filesystem::path(path).extension() == ".csv" ? MatrixFormat::Csv : MatrixFormat::Fvec;
}

inline Matrix read_matrix(const std::string& path, MatrixFormat format, bool csv_header = false) {
    return format == MatrixFormat::Csv ? read_csv_matrix(path, csv_header) : read_fvec(path);
}

// ---------------------------------------------------------------- score CSV

/// Formats a finite double with 9 significant digits.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct NamedScores {
    std::string name;
    ScoreVector values;
};

/// One value per line after a one-line header naming the metric. Refuses
/// non-finite values (e.g. a degenerate DSA denominator).
inline std::string format_scores(const NamedScores& scores) {
    std::string out = scores.name + "\n";
    for (std::size_t i = 0; i < scores.values.size(); ++i) {
        if (!std::isfinite(scores.values[i])) {
            throw Error(ErrorKind::NonFiniteValue, "score " + std::to_string(i) + " of \"" + scores.name +
                                                       "\" is not finite; refusing to serialise");
        }
        out += format_number(scores.values[i]);
        out += '\n';
    }
    return out;
}

inline NamedScores parse_scores(std::string_view text, const std::string& path = "<memory>") {
    NamedScores scores;
    bool header = true;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        if (header) {
            scores.name = std::string(detail::trim(line));
            header = false;
            return;
        }
        scores.values.push_back(detail::parse_number<double>(line, path, line_no, 1));
    });
    if (header) {
        throw Error(ErrorKind::MalformedFile, path + ": missing header line");
    }
    return scores;
}

inline void write_scores(const std::string& path, const NamedScores& scores) {
    const auto text = format_scores(scores);
    write_file(path, Bytes(text.begin(), text.end()));
}

inline NamedScores read_scores(const std::string& path) {
    const auto bytes = read_file(path);
    return parse_scores(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), path);
}

} // namespace hullcert::io

#endif

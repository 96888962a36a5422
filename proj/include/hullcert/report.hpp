#ifndef HULLCERT_REPORT_HPP
#define HULLCERT_REPORT_HPP

#include "error.hpp"
#include "evaluation.hpp"
#include "io.hpp"
#include "metrics.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace hullcert {

inline constexpr std::string_view tool_name = "hullcert";
inline constexpr std::string_view tool_version = "0.1.0";

using Report = nlohmann::json;

/// FNV-1a 64-bit digest of a byte buffer, as 16 lowercase hex digits.
inline std::string fnv1a64_hex(const io::Bytes& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Skeleton shared by every report: tool identity, inputs, seed (null if unused).
inline Report make_report(std::string_view command) {
    Report r = Report::object();
    r["command"] = command;
    r["tool"] = {{"name", tool_name}, {"version", tool_version}};
    r["inputs"] = Report::object();
    r["seed"] = nullptr;
    return r;
}

inline void add_input_digest(Report& report, const std::string& role, const io::Bytes& bytes) {
    report["inputs"][role] = {{"fnv1a64", fnv1a64_hex(bytes)}, {"bytes", bytes.size()}};
}

inline Report to_json(const SetSummary& s) {
    Report r;
    r["closure_ratio"] = s.closure_ratio;
    r["mean_exterior_tu"] = s.mean_exterior_tu ? Report(*s.mean_exterior_tu) : Report(nullptr);
    r["n_closure"] = s.n_closure;
    r["n_exterior"] = s.n_exterior;
    r["total"] = s.total();
    return r;
}

inline Report to_json(const LogisticModel1D& m) {
    return {{"weight", m.weight}, {"bias", m.bias}, {"training_loss", m.training_loss},
            {"center", m.center}, {"scale", m.scale}};
}

inline Report to_json(const DetectionReport& d) {
    Report r;
    r["accuracy"] = d.accuracy;
    r["n_train_per_class"] = d.n_train_per_class;
    r["n_eval_clean"] = d.n_eval_clean;
    r["n_eval_adversarial"] = d.n_eval_adversarial;
    r["metric_name"] = d.metric_name.empty() ? Report(nullptr) : Report(d.metric_name);
    r["model"] = to_json(d.model);
    return r;
}

inline Report to_json(const CorrelationResult& c) {
    return {{"value", c.value ? Report(*c.value) : Report(nullptr)},
            {"error", c.error ? Report(*c.error) : Report(nullptr)}};
}

inline Report to_json(const CorrelationReport& c) {
    return {{"pearson", to_json(c.pearson)}, {"point_biserial", to_json(c.point_biserial)}, {"samples", c.samples}};
}

namespace detail {

inline void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

inline void serialise(const Report& value, std::string& out, int depth, const std::string& where) {
    switch (value.type()) {
    case Report::value_t::object: {
        if (value.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        // nlohmann's default object type is an ordered std::map: keys come out sorted.
        for (const auto& [key, child] : value.items()) {
            indent(out, depth + 1);
            out += Report(key).dump();
            out += ": ";
            serialise(child, out, depth + 1, where + "." + key);
            out += ++i < value.size() ? ",\n" : "\n";
        }
        indent(out, depth);
        out += "}";
        return;
    }
    case Report::value_t::array: {
        if (value.empty()) {
            out += "[]";
            return;
        }
        out += "[";
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (i > 0) {
                out += ", ";
            }
            serialise(value[i], out, depth + 1, where + "[" + std::to_string(i) + "]");
        }
        out += "]";
        return;
    }
    case Report::value_t::number_float: {
        const double v = value.get<double>();
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::NonFiniteValue, "report field " + where + " is not finite; refusing to serialise");
        }
        out += io::format_number(v);
        return;
    }
    default:
        out += value.dump();
        return;
    }
}

} // namespace detail

/// Deterministic text form: sorted keys, two-space indent, doubles with 9
/// significant digits, trailing newline. Non-finite numbers are refused.
inline std::string format_report(const Report& report) {
    std::string out;
    detail::serialise(report, out, 0, "$");
    out += '\n';
    return out;
}

inline void write_report(const Report& report, const std::string& path) {
    const auto text = format_report(report);
    io::write_file(path, io::Bytes(text.begin(), text.end()));
}

} // namespace hullcert

#endif

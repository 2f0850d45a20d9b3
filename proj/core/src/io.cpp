#include "rcpotts/io.hpp"

#include <charconv>

#include "rcpotts/version.hpp"

namespace rcpotts {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void CsvWriter::key_value(std::string_view key, std::string_view value) {
    *out_ << "# " << key << '=' << value << '\n';
}

void CsvWriter::key_value(std::string_view key, double value) {
    *out_ << "# " << key << '=' << format_double(value) << '\n';
}

void CsvWriter::key_value(std::string_view key, std::int64_t value) {
    *out_ << "# " << key << '=' << value << '\n';
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    CsvWriter csv(out);
    csv.key_value("version", kVersion);
    csv.key_value("steps", trace.steps);
    csv.key_value("burn_in", trace.burn_in);
    csv.row("step", "f_size", "components", "largest", "phase_label");
    for (const TraceRow& row : trace.rows)
        csv.row(row.step, row.f_size, row.components, row.largest, row.phase_label);
}

}  // namespace rcpotts

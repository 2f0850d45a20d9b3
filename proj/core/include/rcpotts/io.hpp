#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include "rcpotts/dynamics.hpp"

namespace rcpotts {

// Shortest round-trip decimal form; locale-independent, so identical inputs
// serialize to identical bytes.
std::string format_double(double x);

// CSV with "# key=value" comment headers carrying the experiment config and
// build version.  Cells are written with the deterministic formatters above.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(&out) {}

    void key_value(std::string_view key, std::string_view value);
    void key_value(std::string_view key, double value);
    void key_value(std::string_view key, std::int64_t value);

    template <class... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((put_cell(first, cells), first = false), ...);
        *out_ << '\n';
    }

  private:
    void put(std::string_view s) { *out_ << s; }
    void put(const std::string& s) { *out_ << s; }
    void put(const char* s) { *out_ << s; }
    void put(double x) { *out_ << format_double(x); }
    void put(bool b) { *out_ << (b ? 1 : 0); }
    template <class T, class = std::enable_if_t<std::is_integral_v<T> && !std::is_same_v<T, bool>>>
    void put(T x) {
        *out_ << static_cast<std::int64_t>(x);
    }

    template <class T>
    void put_cell(bool first, const T& cell) {
        if (!first) *out_ << ',';
        put(cell);
    }

    std::ostream* out_;
};

// Standard trace serialization: config comments, then one row per observed
// step with edge counts, component stats, and the phase label.
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace rcpotts

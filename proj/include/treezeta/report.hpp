#pragma once

// Structured verification reports: one line per checked identity.

#include <string>
#include <vector>

#include "treezeta/scalar.hpp"

namespace treezeta {

struct CheckLine {
    std::string label;
    bool ok = true;
    std::string lhs;
    std::string rhs;

    // "OK <label>" or "FAIL <label> lhs=<lhs> rhs=<rhs>".
    std::string text() const { return ok ? "OK " + label : "FAIL " + label + " lhs=" + lhs + " rhs=" + rhs; }
};

struct Report {
    std::vector<CheckLine> lines;

    template <class T>
    void expect_equal(const std::string& label, const T& lhs, const T& rhs) {
        lines.push_back({label, lhs == rhs, format_scalar(lhs), format_scalar(rhs)});
    }
    void expect(const std::string& label, bool ok, const std::string& detail = {}) {
        lines.push_back({label, ok, detail, {}});
    }
    void append(const Report& other) { lines.insert(lines.end(), other.lines.begin(), other.lines.end()); }

    bool ok() const {
        for (const auto& l : lines)
            if (!l.ok) return false;
        return true;
    }
    std::size_t failures() const {
        std::size_t n = 0;
        for (const auto& l : lines) n += l.ok ? 0 : 1;
        return n;
    }
    std::string text() const {
        std::string s;
        for (const auto& l : lines) s += l.text() + "\n";
        return s;
    }
};

}  // namespace treezeta

#pragma once

#include <stdexcept>
#include <string>

namespace rfsir {

// Invalid input, malformed config, unsatisfiable request. CLI exit code 1.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested evaluation outside the data's span (band vs. grid, disjoint grids).
struct range_error : validation_error {
    using validation_error::validation_error;
};

// Text input that failed to parse; line is 1-based.
struct parse_error : validation_error {
    int line;
    parse_error(int line_no, const std::string& what)
        : validation_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

// Physical layout constraint violated (fold clearance).
struct layout_error : validation_error {
    using validation_error::validation_error;
};

// Numerical failure inside a solver. CLI exit code 2.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace rfsir

#ifndef MM_ERRORS_HPP
#define MM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mm {

// Evaluation point sits on (or too close to) a pole of the integrand.
struct pole_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A numerical routine could not certify the requested accuracy.  Carries
// the routine's own estimate of the error it did achieve.
struct accuracy_error : std::runtime_error {
    double estimate;
    accuracy_error(const std::string& what, double est)
        : std::runtime_error(what + " (error estimate " + std::to_string(est) + ")"),
          estimate(est) {}
};

// Argument outside the supported range (e.g. Kloosterman modulus cap).
struct range_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// An arithmetic precondition such as n1 | c*m failed.
struct divisibility_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A truncated sum's tail bound exceeds the requested tolerance.
struct truncation_error : std::runtime_error {
    double tail_bound;
    truncation_error(const std::string& what, double tail)
        : std::runtime_error(what + " (tail bound " + std::to_string(tail) + ")"),
          tail_bound(tail) {}
};

// Line-oriented input could not be parsed.
struct parse_error : std::runtime_error {
    long line;
    parse_error(const std::string& what, long line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
          line(line_no) {}
};

// Parsed data failed a declared invariant (names the invariant).
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested computation needs coefficient data the corpus does not have.
struct corpus_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Asymptotic constants have not been calibrated for the requested parameters.
struct calibration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mm

#endif

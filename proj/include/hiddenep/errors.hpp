#ifndef HIDDENEP_ERRORS_HPP
#define HIDDENEP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hiddenep {

// Every library error carries a short machine-readable kind so the CLI can
// print one parseable line per failure.
class error : public std::runtime_error {
public:
    error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Argument outside the mathematical domain of an operation.
struct domain_error : error {
    explicit domain_error(const std::string& what) : error("domain_error", what) {}
};

// Closed form requested on the wrong side of an exceptional point.
struct regime_error : error {
    explicit regime_error(const std::string& what) : error("regime_error", what) {}
};

// Truncation or grid too small.
struct size_error : error {
    explicit size_error(const std::string& what) : error("size_error", what) {}
};

// Operands living on different spaces.
struct dimension_error : error {
    explicit dimension_error(const std::string& what) : error("dimension_error", what) {}
};

// Input violates a documented precondition (e.g. non-Hermitian operator
// handed to a Hermitian solver).
struct contract_error : error {
    explicit contract_error(const std::string& what) : error("contract_error", what) {}
};

// Matrix too large for the dense path.
struct capacity_error : error {
    explicit capacity_error(const std::string& what) : error("capacity_error", what) {}
};

} // namespace hiddenep

#endif

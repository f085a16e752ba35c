#pragma once

#include <stdexcept>
#include <string>

namespace ph {

// Invalid or inconsistent user configuration. CLI maps this to exit code 2.
// `field` names the offending config entry as a dotted path ("process.blocks").
class config_error : public std::runtime_error {
public:
    config_error(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// A complex exceeded its simplex budget. CLI maps this to exit code 3.
class budget_error : public std::runtime_error {
public:
    budget_error(const std::string& what, std::size_t requested, std::size_t cap)
        : std::runtime_error(what), requested_(requested), cap_(cap) {}

    std::size_t requested() const { return requested_; }
    std::size_t cap() const { return cap_; }

private:
    std::size_t requested_;
    std::size_t cap_;
};

} // namespace ph

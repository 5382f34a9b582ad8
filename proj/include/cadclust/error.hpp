#ifndef CADCLUST_ERROR_HPP
#define CADCLUST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cadclust {

enum class ErrorKind {
    invalid_spec,
    parse,
    io,
    shape,
    insufficient_data,
    degenerate_data,
    empty_cluster,
    tau_too_small,
    degenerate_assignment,
    all_failed,
    config,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Message raised by KBC seeding when the chaining threshold yields fewer than k groups.
inline constexpr const char* tau_too_small_message = "Parameter tau is set too small !";

}  // namespace cadclust

#endif  // CADCLUST_ERROR_HPP

#ifndef BVARCAST_COMMON_HPP
#define BVARCAST_COMMON_HPP

#include <stdexcept>
#include <string>

namespace bvarcast {

// All precondition and data-validation failures throw this.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

constexpr const char* version_string() { return "bvarcast-0.1.0"; }

} // namespace bvarcast

#endif

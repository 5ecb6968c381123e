#ifndef LCQ_ERROR_H_
#define LCQ_ERROR_H_

#include <stdexcept>
#include <string>

namespace lcq {

// Broad failure classes. The CLI maps each one to a distinct exit status.
enum class ErrorKind {
  kInvalidArgument,  // bad parameter or degenerate input
  kData,             // malformed or unreadable input files
  kUnanswerable,     // the query cannot be answered over this taxonomy
  kNumerical,        // non-finite values during optimization
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lcq

#endif  // LCQ_ERROR_H_

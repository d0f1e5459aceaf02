#ifndef VSEARCH_ERRORS_HPP
#define VSEARCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vsearch {

/// Thrown when an operation's precondition on its arguments is violated.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by loaders; the message carries file and line context.
class LoadError : public std::runtime_error {
public:
  LoadError(const std::string& file, long line, const std::string& what)
      : std::runtime_error(file + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        file_(file), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  long line() const noexcept { return line_; }

private:
  std::string file_;
  long line_;
};

} // namespace vsearch

#endif // VSEARCH_ERRORS_HPP

#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tepui/io.hpp"

namespace tepui::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kParse = 2, kDomain = 3, kIo = 4 };

/// Runs one command line (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fixture files compiled into the binary, by file name.
const std::map<std::string, std::string_view>& embedded_fixtures();

/// Reads fixture files from the embedded set or from a directory.
class FixtureSource {
 public:
  explicit FixtureSource(std::string dir = {}) : dir_(std::move(dir)) {}
  io::Json load(const std::string& name) const;

 private:
  std::string dir_;
};

struct Fixture {
  std::string name;
  std::string summary;
  /// Returns an empty string on success, otherwise what went wrong.
  std::function<std::string(const FixtureSource&)> check;
};

const std::vector<Fixture>& fixture_suite();

}  // namespace tepui::cli

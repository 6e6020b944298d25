#include <filesystem>

#include "cli/cli.hpp"
#include "tepui/errors.hpp"

namespace tepui::cli {

io::Json FixtureSource::load(const std::string& name) const {
  if (!dir_.empty()) return io::read_json_file((std::filesystem::path(dir_) / name).string());
  const auto& all = embedded_fixtures();
  auto it = all.find(name);
  if (it == all.end()) throw IoError("no embedded fixture '" + name + "'");
  return io::parse_json(it->second, name);
}

}  // namespace tepui::cli

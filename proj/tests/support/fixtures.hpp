#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace workauth::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(WORKAUTH_FIXTURES) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string read_fixture(const std::string& name) { return read_file(fixture_path(name)); }

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("workauth-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Registry root holding the two valid fixtures as works/270.xml and works/0.xml.
inline std::filesystem::path seeded_registry(const std::string& name) {
  auto root = scratch_dir(name);
  std::filesystem::create_directories(root / "works");
  std::filesystem::copy_file(fixture_path("valid/work-270.xml"), root / "works" / "270.xml");
  std::filesystem::copy_file(fixture_path("valid/work-0.xml"), root / "works" / "0.xml");
  return root;
}

}  // namespace workauth::testing

#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

namespace testing {

// Scratch directory for file round trips; ctest points GAZEFORGE_TEST_TMP at
// the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const char* env = std::getenv("GAZEFORGE_TEST_TMP");
    const std::filesystem::path base = env != nullptr ? env : std::filesystem::temp_directory_path() / "gazeforge";
    auto dir = base / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unistd.h>

#include "streid/types.h"

namespace streid::testing {

inline Observation obs(std::string id, std::optional<std::string> identity,
                       std::uint32_t camera, double t, std::uint32_t state = 0) {
  return Observation{std::move(id), std::move(identity), CameraId{camera}, t,
                     StateId{state}};
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("streid-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace streid::testing

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace tiermem::testing {

/// Scratch directory under the system temp root, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        root_ = std::filesystem::temp_directory_path() /
                ("tiermem_" + tag + "_" + std::to_string(counter()++));
        std::filesystem::create_directories(root_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(root_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string path(const std::string& name) const { return (root_ / name).string(); }
    const std::filesystem::path& root() const { return root_; }

private:
    static int& counter() {
        static int n = 0;
        return n;
    }
    std::filesystem::path root_;
};

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace tiermem::testing

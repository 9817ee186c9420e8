#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "cylarm/dynamics.hpp"

namespace testing {

// Scalar transcription of the printed inertia entries, kept separate from the
// library so the two can be compared.
inline double oracle_A11(const cylarm::ManipulatorParams& p, double th1, double q3) {
    return (4 * p.m1 * std::sin(th1) - 4 * p.m2 * std::cos(th1)) * q3 + p.I3;
}
inline double oracle_A13(const cylarm::ManipulatorParams& p, double th1, double q3) {
    return (p.m1 + p.m2) * std::sin(th1) * std::cos(th1) * q3;
}
inline double oracle_A31(const cylarm::ManipulatorParams& p, double th1) {
    return p.m1 * std::sin(th1) * std::cos(th1);
}
inline double oracle_A33(const cylarm::ManipulatorParams& p, double th1) {
    return 2 * (p.m1 * std::sin(th1) + p.m2 * std::cos(th1));
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("cylarm_" + tag + "_" + std::to_string(rd()));
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

private:
    std::filesystem::path path_;
};

}  // namespace testing

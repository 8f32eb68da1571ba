#pragma once

#include "tamed/driver.hpp"
#include "tamed/error.hpp"
#include "tamed/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace tamed::test {

inline GridSpec grid(const char* T, const char* tau, const char* h) {
    return build_grid(Rational::parse(T), Rational::parse(tau), Rational::parse(h));
}

inline bool same_bits(double a, double b) {
    std::uint64_t ua, ub;
    std::memcpy(&ua, &a, sizeof a);
    std::memcpy(&ub, &b, sizeof b);
    return ua == ub;
}

/// Runs `f` and checks that it throws tamed::Error of the given kind.
template <class F>
::testing::AssertionResult throws_kind(F&& f, ErrorKind kind) {
    try {
        f();
    } catch (const Error& e) {
        if (e.kind() == kind) return ::testing::AssertionSuccess();
        return ::testing::AssertionFailure() << "threw " << to_string(e.kind()) << ": " << e.what();
    } catch (const std::exception& e) {
        return ::testing::AssertionFailure() << "threw non-library exception: " << e.what();
    }
    return ::testing::AssertionFailure() << "did not throw";
}

/// Scalar system used by several hand-evaluated step examples:
/// D(y) = 0.25 y, b(x,y) = y - x^3, sigma(x,y) = 0.2 x.
inline DiffusionSystem hand_system(double kappa = 0.25) {
    DiffusionSystem sys;
    sys.neutral = [kappa](ConstVec y, Vec out) { out[0] = kappa * y[0]; };
    sys.drift = [](ConstVec x, ConstVec y, Vec out) { out[0] = y[0] - x[0] * x[0] * x[0]; };
    sys.diffusion = [](ConstVec x, ConstVec, Vec out) { out[0] = 0.2 * x[0]; };
    sys.kappa = 0.25;
    sys.alpha = 0.5;
    return sys;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("tamed_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace tamed::test

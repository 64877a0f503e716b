#pragma once

#include "pita/model.hpp"

#include <chrono>
#include <filesystem>
#include <random>
#include <string>

namespace test {

inline double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

/// Random system whose A has eigenvalues with real parts in [-3, -0.5].
inline pita::LtiSystem random_stable_system(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> decay(0.5, 3.0);
    pita::Matrix q = pita::Matrix::NullaryExpr(d, d, [&] { return u(rng); });
    const Eigen::HouseholderQR<pita::Matrix> qr(q);
    const pita::Matrix orth = qr.householderQ();
    pita::Matrix core = pita::Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        core(i, i) = -decay(rng);
        if (i + 1 < d) {
            core(i, i + 1) = u(rng);
        }
    }
    pita::LtiSystem sys;
    sys.A = orth * core * orth.transpose();
    sys.B = pita::Matrix::NullaryExpr(d, 1, [&] { return u(rng); });
    sys.u = pita::Vector::Constant(1, 2.0 * u(rng));
    sys.y0 = pita::Vector::NullaryExpr(d, [&] { return u(rng); });
    return sys;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static int counter = 0;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    auto dir = std::filesystem::temp_directory_path() /
               ("pita_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace test

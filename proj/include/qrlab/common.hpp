#pragma once

#include <cstdio>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qrlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Base error carrying a machine-parsable code and a process exit code.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what, int exit_code)
        : std::runtime_error(what), code_(std::move(code)), exit_code_(exit_code) {}
    const std::string& code() const { return code_; }
    int exit_code() const { return exit_code_; }

private:
    std::string code_;
    int exit_code_;
};

/// Invalid input, preconditions, config errors. CLI exit code 1.
class ValidationError : public Error {
public:
    ValidationError(std::string code, const std::string& what)
        : Error(std::move(code), what, 1) {}
};

/// Solver failures, non-convergence. CLI exit code 2.
class NumericError : public Error {
public:
    NumericError(std::string code, const std::string& what)
        : Error(std::move(code), what, 2) {}
};

/// 17 significant digits, always '.' decimal; round-trips doubles exactly.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Run fn(i) for i in [0, n) on a small thread pool. Each index writes only
/// its own slot in caller-owned storage, so results are deterministic.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
    unsigned workers = std::min<std::size_t>({std::thread::hardware_concurrency(), n, 8});
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        }));
    }
    for (auto& f : pool) f.get();
}

} // namespace qrlab

#pragma once

#include <cstddef>
#include <vector>

namespace firmtrack::linalg {

/// Small dense row-major matrix. The state-space filters and test
/// regressions only ever touch matrices of order <= ~40, so no attempt is
/// made at blocking or vectorization beyond what the compiler does.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n);
};

Mat matmul(const Mat& x, const Mat& y);
Mat matmul_transposed(const Mat& x, const Mat& y);  // x * y^T
Mat transpose(const Mat& x);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Returns false if A is numerically singular.
bool solve(Mat a, std::vector<double> b, std::vector<double>& x);

/// Solves A X = B (B given column-wise as a Mat). Returns false on
/// singular A.
bool solve_matrix(Mat a, Mat b, Mat& x);

}  // namespace firmtrack::linalg

#include "firmtrack/core/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace firmtrack::linalg {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat matmul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: shape mismatch");
    Mat out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int k = 0; k < x.cols; ++k) {
            double v = x(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) out(i, j) += v * y(k, j);
        }
    }
    return out;
}

Mat matmul_transposed(const Mat& x, const Mat& y) {
    if (x.cols != y.cols) throw std::invalid_argument("matmul_transposed: shape mismatch");
    Mat out(x.rows, y.rows);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < y.rows; ++j) {
            double s = 0.0;
            for (int k = 0; k < x.cols; ++k) s += x(i, k) * y(j, k);
            out(i, j) = s;
        }
    }
    return out;
}

Mat transpose(const Mat& x) {
    Mat out(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) out(j, i) = x(i, j);
    return out;
}

bool solve(Mat a, std::vector<double> b, std::vector<double>& x) {
    Mat bm(static_cast<int>(b.size()), 1);
    for (size_t i = 0; i < b.size(); ++i) bm(static_cast<int>(i), 0) = b[i];
    Mat xm;
    if (!solve_matrix(std::move(a), std::move(bm), xm)) return false;
    x.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) x[i] = xm(static_cast<int>(i), 0);
    return true;
}

bool solve_matrix(Mat a, Mat b, Mat& x) {
    if (a.rows != a.cols || a.rows != b.rows) throw std::invalid_argument("solve: shape mismatch");
    int n = a.rows;
    int m = b.cols;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::fabs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::fabs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best < 1e-300) return false;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            for (int j = 0; j < m; ++j) std::swap(b(pivot, j), b(col, j));
        }
        double inv = 1.0 / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            double f = a(r, col) * inv;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            for (int j = 0; j < m; ++j) b(r, j) -= f * b(col, j);
        }
    }
    x = Mat(n, m);
    for (int r = n - 1; r >= 0; --r) {
        for (int j = 0; j < m; ++j) {
            double s = b(r, j);
            for (int k = r + 1; k < n; ++k) s -= a(r, k) * x(k, j);
            x(r, j) = s / a(r, r);
        }
    }
    return true;
}

}  // namespace firmtrack::linalg

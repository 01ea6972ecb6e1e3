#pragma once

// Minimal dense linear algebra for desk-scale lattice work. Everything is
// double precision except the integer matrices, which are exact.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "latred/errors.hpp"

namespace latred {

using Vec = std::vector<double>;
using IntVec = std::vector<long long>;

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm_sq(const Vec& x) { return dot(x, x); }

// x -= c * y
inline void axpy_sub(Vec& x, double c, const Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * y[i];
}

// Round half away from zero. The one quantizer rule used everywhere.
inline long long round_half_away(double x) {
    return static_cast<long long>(x < 0 ? std::ceil(x - 0.5) : std::floor(x + 0.5));
}

struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;  // row-major

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    Vec col(int c) const {
        Vec v(rows);
        for (int r = 0; r < rows; ++r) v[r] = at(r, c);
        return v;
    }
};

inline Vec mat_vec(const Mat& m, const Vec& x) {
    Vec y(m.rows, 0.0);
    for (int r = 0; r < m.rows; ++r) {
        double s = 0.0;
        for (int c = 0; c < m.cols; ++c) s += m.at(r, c) * x[c];
        y[r] = s;
    }
    return y;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
    Mat c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            double v = a.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) c.at(i, j) += v * b.at(k, j);
        }
    return c;
}

inline Mat transpose(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
    return t;
}

// --- Householder QR -------------------------------------------------------

// Thin QR of an n x m matrix, n >= m. R is m x m upper triangular with
// nonnegative diagonal; apply_qt maps y in R^n to Q^T y (length n, first m
// entries are the coordinates in the column space).
struct QrFactorization {
    int rows = 0, cols = 0;
    Mat r;                          // m x m, upper triangular, diag >= 0
    std::vector<Vec> reflectors;    // Householder vectors, v[k] has length n-k
    std::vector<double> tau;        // 2 / |v|^2 per reflector (0 => skip)
    std::vector<double> diag_sign;  // post-hoc sign fix per column

    Vec apply_qt(Vec y) const {
        for (std::size_t k = 0; k < reflectors.size(); ++k) {
            if (tau[k] == 0.0) continue;
            const Vec& v = reflectors[k];
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * y[k + i];
            s *= tau[k];
            for (std::size_t i = 0; i < v.size(); ++i) y[k + i] -= s * v[i];
        }
        for (int k = 0; k < cols; ++k) y[k] *= diag_sign[k];
        return y;
    }
};

inline QrFactorization qr_factor(const Mat& m) {
    const int n = m.rows, p = m.cols;
    if (n < p) throw Error("qr_factor: need rows >= cols");
    QrFactorization f;
    f.rows = n;
    f.cols = p;
    Mat work = m;
    f.reflectors.resize(p);
    f.tau.assign(p, 0.0);
    f.diag_sign.assign(p, 1.0);
    for (int k = 0; k < p; ++k) {
        Vec v(n - k);
        double nrm2 = 0.0;
        for (int i = k; i < n; ++i) {
            v[i - k] = work.at(i, k);
            nrm2 += v[i - k] * v[i - k];
        }
        double alpha = std::sqrt(nrm2);
        if (alpha == 0.0) {
            f.reflectors[k] = std::move(v);
            continue;
        }
        if (v[0] > 0.0) alpha = -alpha;  // v0 - alpha never cancels
        v[0] -= alpha;
        double vsq = 0.0;
        for (double t : v) vsq += t * t;
        double tau = vsq > 0.0 ? 2.0 / vsq : 0.0;
        for (int j = k; j < p; ++j) {
            double s = 0.0;
            for (int i = k; i < n; ++i) s += v[i - k] * work.at(i, j);
            s *= tau;
            for (int i = k; i < n; ++i) work.at(i, j) -= s * v[i - k];
        }
        work.at(k, k) = alpha;
        f.reflectors[k] = std::move(v);
        f.tau[k] = tau;
    }
    f.r = Mat(p, p);
    for (int i = 0; i < p; ++i) {
        double sgn = work.at(i, i) < 0.0 ? -1.0 : 1.0;
        f.diag_sign[i] = sgn;
        for (int j = i; j < p; ++j) f.r.at(i, j) = sgn * work.at(i, j);
    }
    return f;
}

// Solve R x = b for upper-triangular R.
inline Vec back_substitute(const Mat& r, const Vec& b) {
    const int n = r.cols;
    Vec x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= r.at(i, j) * x[j];
        if (r.at(i, i) == 0.0) throw Error("back_substitute: zero pivot");
        x[i] = s / r.at(i, i);
    }
    return x;
}

// Least-squares solution of A x ~= b via QR.
inline Vec least_squares(const Mat& a, const Vec& b) {
    QrFactorization f = qr_factor(a);
    Vec qty = f.apply_qt(b);
    qty.resize(a.cols);
    return back_substitute(f.r, qty);
}

// Cholesky solve for symmetric positive definite A.
inline Vec spd_solve(Mat a, Vec b) {
    const int n = a.rows;
    for (int k = 0; k < n; ++k) {
        double d = a.at(k, k);
        for (int j = 0; j < k; ++j) d -= a.at(k, j) * a.at(k, j);
        if (d <= 0.0) throw Error("spd_solve: matrix not positive definite");
        d = std::sqrt(d);
        a.at(k, k) = d;
        for (int i = k + 1; i < n; ++i) {
            double s = a.at(i, k);
            for (int j = 0; j < k; ++j) s -= a.at(i, j) * a.at(k, j);
            a.at(i, k) = s / d;
        }
    }
    for (int i = 0; i < n; ++i) {  // L z = b
        double s = b[i];
        for (int j = 0; j < i; ++j) s -= a.at(i, j) * b[j];
        b[i] = s / a.at(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {  // L^T x = z
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a.at(j, i) * b[j];
        b[i] = s / a.at(i, i);
    }
    return b;
}

// --- Exact integer matrices ------------------------------------------------

struct IntMat {
    int rows = 0, cols = 0;
    std::vector<long long> a;  // row-major

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

    long long& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    long long at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const IntMat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

inline IntMat int_mat_mul(const IntMat& a, const IntMat& b) {
    IntMat c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            long long v = a.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < b.cols; ++j) c.at(i, j) += v * b.at(k, j);
        }
    return c;
}

inline IntVec int_mat_vec(const IntMat& m, const IntVec& x) {
    IntVec y(m.rows, 0);
    for (int r = 0; r < m.rows; ++r) {
        long long s = 0;
        for (int c = 0; c < m.cols; ++c) s += m.at(r, c) * x[c];
        y[r] = s;
    }
    return y;
}

// Exact determinant, fraction-free Bareiss elimination in 128-bit.
inline long long int_det(const IntMat& m) {
    if (m.rows != m.cols) throw Error("int_det: matrix not square");
    const int n = m.rows;
    std::vector<__int128> w(m.a.begin(), m.a.end());
    auto at = [&](int r, int c) -> __int128& { return w[static_cast<std::size_t>(r) * n + c]; };
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
        prev = at(k, k);
    }
    return sign * static_cast<long long>(at(n - 1, n - 1));
}

// Exact rank over Q of an integer matrix (row vectors), fraction-free.
inline int int_rank(std::vector<IntVec> rows) {
    if (rows.empty()) return 0;
    const int ncols = static_cast<int>(rows[0].size());
    std::vector<std::vector<__int128>> w;
    w.reserve(rows.size());
    for (const auto& r : rows) w.emplace_back(r.begin(), r.end());
    int rank = 0;
    __int128 prev = 1;
    for (int c = 0; c < ncols && rank < static_cast<int>(w.size()); ++c) {
        int p = -1;
        for (int i = rank; i < static_cast<int>(w.size()); ++i)
            if (w[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(w[rank], w[p]);
        for (int i = rank + 1; i < static_cast<int>(w.size()); ++i) {
            for (int j = c + 1; j < ncols; ++j)
                w[i][j] = (w[i][j] * w[rank][c] - w[i][c] * w[rank][j]) / prev;
            w[i][c] = 0;
        }
        prev = w[rank][c];
        ++rank;
    }
    return rank;
}

// Complete a primitive integer vector (gcd 1) to a unimodular matrix whose
// first column is that vector.
inline IntMat complete_unimodular(const IntVec& c) {
    const int n = static_cast<int>(c.size());
    IntVec w = c;
    IntMat inv = IntMat::identity(n);  // maintains c = inv * w
    auto nonzeros = [&]() {
        int cnt = 0;
        for (long long v : w) cnt += (v != 0);
        return cnt;
    };
    if (nonzeros() == 0) throw Error("complete_unimodular: zero vector");
    while (nonzeros() > 1) {
        int b = -1;
        for (int i = 0; i < n; ++i)
            if (w[i] != 0 && (b < 0 || std::llabs(w[i]) < std::llabs(w[b]))) b = i;
        for (int i = 0; i < n; ++i) {
            if (i == b || w[i] == 0) continue;
            long long q = w[i] / w[b];  // truncated division shrinks |w[i]|
            if (q != 0) {
                w[i] -= q * w[b];
                // row op on w  <=>  column op on inv: col b += q * col i
                for (int r = 0; r < n; ++r) inv.at(r, b) += q * inv.at(r, i);
            }
        }
    }
    int r = 0;
    while (w[r] == 0) ++r;
    if (w[r] != 1 && w[r] != -1)
        throw Error("complete_unimodular: input vector is not primitive");
    const long long s = w[r];
    // result columns: s * inv_col_r first, the remaining columns in order
    IntMat t(n, n);
    for (int i = 0; i < n; ++i) t.at(i, 0) = s * inv.at(i, r);
    int out = 1;
    for (int j = 0; j < n; ++j) {
        if (j == r) continue;
        for (int i = 0; i < n; ++i) t.at(i, out) = inv.at(i, j);
        ++out;
    }
    return t;
}

}  // namespace latred

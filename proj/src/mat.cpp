#include "dss/mat.hpp"

#include "dss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dss {

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw InvalidInput("ragged initializer for Mat");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diag(const std::vector<double>& d) {
    Mat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

bool Mat::finite() const {
    return std::all_of(a_.begin(), a_.end(),
                       [](double v) { return std::isfinite(v); });
}

double Mat::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::fabs(v));
    return m;
}

double Mat::inf_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::fabs((*this)(i, j));
        m = std::max(m, s);
    }
    return m;
}

double Mat::frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

static void check_same_shape(const Mat& x, const Mat& y, const char* op) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw InvalidInput(std::string("shape mismatch in Mat ") + op);
}

Mat operator+(const Mat& x, const Mat& y) {
    check_same_shape(x, y, "addition");
    Mat r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            r(i, j) = x(i, j) + y(i, j);
    return r;
}

Mat operator-(const Mat& x, const Mat& y) {
    check_same_shape(x, y, "subtraction");
    Mat r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            r(i, j) = x(i, j) - y(i, j);
    return r;
}

Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols() != y.rows())
        throw InvalidInput("shape mismatch in Mat product");
    Mat r(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) {
            double v = x(i, k);
            for (std::size_t j = 0; j < y.cols(); ++j)
                r(i, j) += v * y(k, j);
        }
    return r;
}

Mat operator*(double c, const Mat& x) {
    Mat r(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            r(i, j) = c * x(i, j);
    return r;
}

std::vector<double> mat_vec(const Mat& m, const std::vector<double>& v) {
    if (m.cols() != v.size())
        throw InvalidInput("shape mismatch in mat_vec");
    std::vector<double> r(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

double vec_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double vec_inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

static double off_diag_frobenius(const Mat& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

std::vector<double> sym_eigenvalues(const Mat& m) {
    if (m.rows() != m.cols())
        throw InvalidInput("sym_eigenvalues requires a square matrix");
    if (!m.finite())
        throw InvalidInput("sym_eigenvalues: non-finite entry");
    const std::size_t n = m.rows();
    if (n == 0) return {};
    if (n == 1) return {m(0, 0)};

    Mat a = m;
    const double tol = 1e-13 * std::max(a.frobenius(), 1e-300);
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diag_frobenius(a) < tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double spectral_norm(const Mat& m) {
    if (!m.finite())
        throw InvalidInput("spectral_norm: non-finite entry");
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    const Mat g = m.transpose() * m;
    const auto eig = sym_eigenvalues(g);
    const double top = std::max(eig.back(), 0.0);
    return std::sqrt(top);
}

double min_eig_sym(const Mat& m) {
    if (m.rows() != m.cols())
        throw InvalidInput("min_eig_sym requires a square matrix");
    if (!m.finite())
        throw InvalidInput("min_eig_sym: non-finite entry");
    const Mat mt = m.transpose();
    double asym = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            asym = std::max(asym, std::fabs(m(i, j) - mt(i, j)));
    if (asym > 1e-12 * std::max(m.max_abs(), 1.0))
        throw InvalidInput("min_eig_sym: matrix is not symmetric");
    const Mat s = 0.5 * (m + mt);
    return sym_eigenvalues(s).front();
}

bool is_pd_above(const Mat& m, double zeta) {
    return min_eig_sym(m) > zeta;
}

std::vector<double> solve_linear(Mat m, std::vector<double> b) {
    const std::size_t n = m.rows();
    if (m.cols() != n || b.size() != n)
        throw InvalidInput("solve_linear: dimension mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(m(i, k)) > std::fabs(m(piv, k))) piv = i;
        if (std::fabs(m(piv, k)) < 1e-300)
            throw InvalidInput("solve_linear: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m(i, k) / m(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
        x[i] = s / m(i, i);
    }
    return x;
}

} // namespace dss

#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace dss {

/// Small dense row-major matrix.  Everything in this project is tiny
/// (n <= 8 states, the largest matrix is the 3n x 3n certificate block),
/// so the implementation favors clarity and determinism over speed.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat identity(std::size_t n);
    static Mat diag(const std::vector<double>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }

    Mat transpose() const;
    bool finite() const;

    /// max |a_ij|
    double max_abs() const;
    /// induced infinity norm (max row sum)
    double inf_norm() const;
    double frobenius() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

Mat operator+(const Mat& x, const Mat& y);
Mat operator-(const Mat& x, const Mat& y);
Mat operator*(const Mat& x, const Mat& y);
Mat operator*(double c, const Mat& x);

std::vector<double> mat_vec(const Mat& m, const std::vector<double>& v);

/// Euclidean norm of a vector.
double vec_norm(const std::vector<double>& v);
/// Max-abs (infinity) norm of a vector.
double vec_inf_norm(const std::vector<double>& v);

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// ascending order.  Deterministic: fixed sweep order, convergence when the
/// off-diagonal Frobenius norm drops below 1e-13 * ||m||_F.
std::vector<double> sym_eigenvalues(const Mat& m);

/// Largest singular value, computed as sqrt(max eig of m^T m).
/// Throws InvalidInput on non-finite entries.
double spectral_norm(const Mat& m);

/// Smallest eigenvalue of the symmetrized matrix (m + m^T)/2.
/// Throws InvalidInput if m is not square or departs from symmetry by more
/// than 1e-12 * ||m||_inf.
double min_eig_sym(const Mat& m);

/// True iff min_eig_sym(m) > zeta (strict).
bool is_pd_above(const Mat& m, double zeta);

/// Solve m x = b for square m by Gaussian elimination with partial pivoting.
/// Throws InvalidInput on dimension mismatch or a numerically singular pivot.
std::vector<double> solve_linear(Mat m, std::vector<double> b);

} // namespace dss

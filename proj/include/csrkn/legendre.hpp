#pragma once

// Shifted, normalized Legendre polynomials on [0,1] and series built on
// them. P_n(x) = sqrt(2n+1) L_n(2x-1), so that int_0^1 P_m P_n = delta_mn.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>

#include "csrkn/errors.hpp"

namespace csrkn {

inline constexpr int kDefaultMaxDegree = 8;

namespace detail {

inline void check_degree(int degree, int max_degree, const char* what) {
  if (degree < 0 || degree > max_degree) {
    throw DegreeLimitError(std::string(what) + ": degree " +
                           std::to_string(degree) + " outside [0, " +
                           std::to_string(max_degree) + "]");
  }
}

}  // namespace detail

/// xi_k = 1 / (2 sqrt(4k^2 - 1)), the coupling constant of the
/// integration and multiplication-by-x identities.
template <typename Scalar = double>
Scalar legendre_xi(int k) {
  using std::sqrt;
  return Scalar(1) / (Scalar(2) * sqrt(Scalar(4 * k * k - 1)));
}

/// Values P_0(x) .. P_n(x) by the three-term recurrence.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> shifted_legendre_values(int n,
                                                                 Scalar x) {
  using std::sqrt;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n + 1);
  const Scalar y = Scalar(2) * x - Scalar(1);
  Scalar prev(1);
  Scalar cur = y;
  out(0) = Scalar(1);
  if (n >= 1) out(1) = sqrt(Scalar(3)) * y;
  for (int k = 1; k < n; ++k) {
    const Scalar next =
        (Scalar(2 * k + 1) * y * cur - Scalar(k) * prev) / Scalar(k + 1);
    prev = cur;
    cur = next;
    out(k + 1) = sqrt(Scalar(2 * k + 3)) * cur;
  }
  return out;
}

/// P_degree(x) of the normalized shifted family.
template <typename Scalar>
Scalar eval_basis(int degree, Scalar x, int max_degree = kDefaultMaxDegree) {
  detail::check_degree(degree, max_degree, "eval_basis");
  return shifted_legendre_values(degree, x)(degree);
}

/// sum_i coeffs[i] P_i(x).
template <typename Scalar = double>
class LegendreSeries1D {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LegendreSeries1D() : coeffs_(Vector::Zero(1)) {}

  explicit LegendreSeries1D(Vector coeffs, int max_degree = kDefaultMaxDegree)
      : coeffs_(std::move(coeffs)), max_degree_(max_degree) {
    if (coeffs_.size() == 0) coeffs_ = Vector::Zero(1);
    detail::check_degree(degree(), max_degree_, "LegendreSeries1D");
  }

  LegendreSeries1D(std::initializer_list<Scalar> coeffs,
                   int max_degree = kDefaultMaxDegree)
      : LegendreSeries1D(from_list(coeffs), max_degree) {}

  static LegendreSeries1D basis(int k, int max_degree = kDefaultMaxDegree) {
    detail::check_degree(k, max_degree, "LegendreSeries1D::basis");
    Vector c = Vector::Zero(k + 1);
    c(k) = Scalar(1);
    return LegendreSeries1D(std::move(c), max_degree);
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int max_degree() const { return max_degree_; }
  const Vector& coeffs() const { return coeffs_; }

  Scalar coeff(int i) const {
    return i >= 0 && i <= degree() ? coeffs_(i) : Scalar(0);
  }

  /// Coefficients zero-padded (or truncated) to length n.
  Vector padded(int n) const {
    Vector out = Vector::Zero(n);
    const int m = std::min<int>(n, static_cast<int>(coeffs_.size()));
    out.head(m) = coeffs_.head(m);
    return out;
  }

  Scalar operator()(Scalar x) const {
    return coeffs_.dot(shifted_legendre_values(degree(), x));
  }

  friend LegendreSeries1D operator+(const LegendreSeries1D& a,
                                    const LegendreSeries1D& b) {
    const int n = std::max(a.degree(), b.degree()) + 1;
    return LegendreSeries1D(a.padded(n) + b.padded(n),
                            std::max(a.max_degree_, b.max_degree_));
  }
  friend LegendreSeries1D operator-(const LegendreSeries1D& a,
                                    const LegendreSeries1D& b) {
    return a + (-b);
  }
  friend LegendreSeries1D operator-(const LegendreSeries1D& a) {
    return LegendreSeries1D(-a.coeffs_, a.max_degree_);
  }
  friend LegendreSeries1D operator*(Scalar s, const LegendreSeries1D& a) {
    return LegendreSeries1D(s * a.coeffs_, a.max_degree_);
  }

 private:
  static Vector from_list(std::initializer_list<Scalar> list) {
    Vector v(static_cast<Eigen::Index>(list.size()));
    Eigen::Index i = 0;
    for (Scalar x : list) v(i++) = x;
    return v;
  }

  Vector coeffs_;
  int max_degree_ = kDefaultMaxDegree;
};

/// sum_{i,j} coeffs(i,j) P_i(tau) P_j(sigma); rows index the tau degree.
template <typename Scalar = double>
class LegendreSeries2D {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LegendreSeries2D() : coeffs_(Matrix::Zero(1, 1)) {}

  explicit LegendreSeries2D(Matrix coeffs, int max_degree = kDefaultMaxDegree)
      : coeffs_(std::move(coeffs)), max_degree_(max_degree) {
    if (coeffs_.size() == 0) coeffs_ = Matrix::Zero(1, 1);
    detail::check_degree(tau_degree(), max_degree_, "LegendreSeries2D (tau)");
    detail::check_degree(sigma_degree(), max_degree_,
                         "LegendreSeries2D (sigma)");
  }

  int tau_degree() const { return static_cast<int>(coeffs_.rows()) - 1; }
  int sigma_degree() const { return static_cast<int>(coeffs_.cols()) - 1; }
  int max_degree() const { return max_degree_; }
  const Matrix& coeffs() const { return coeffs_; }

  Scalar coeff(int i, int j) const {
    return i >= 0 && j >= 0 && i <= tau_degree() && j <= sigma_degree()
               ? coeffs_(i, j)
               : Scalar(0);
  }

  /// Square n-by-n copy, zero-padded or truncated.
  Matrix padded(int n) const {
    Matrix out = Matrix::Zero(n, n);
    const int r = std::min<int>(n, static_cast<int>(coeffs_.rows()));
    const int c = std::min<int>(n, static_cast<int>(coeffs_.cols()));
    out.topLeftCorner(r, c) = coeffs_.topLeftCorner(r, c);
    return out;
  }

  Scalar operator()(Scalar tau, Scalar sigma) const {
    return shifted_legendre_values(tau_degree(), tau).dot(
        coeffs_ * shifted_legendre_values(sigma_degree(), sigma));
  }

  /// The function (tau, sigma) -> this(sigma, tau).
  LegendreSeries2D swapped() const {
    return LegendreSeries2D(coeffs_.transpose(), max_degree_);
  }

  /// int_0^1 A(tau, sigma) dsigma as a series in tau.
  LegendreSeries1D<Scalar> integrate_sigma() const {
    return LegendreSeries1D<Scalar>(coeffs_.col(0), max_degree_);
  }

  /// int_0^1 A(tau, sigma) dtau as a series in sigma.
  LegendreSeries1D<Scalar> integrate_tau() const {
    return LegendreSeries1D<Scalar>(coeffs_.row(0).transpose(), max_degree_);
  }

 private:
  Matrix coeffs_;
  int max_degree_ = kDefaultMaxDegree;
};

template <typename Scalar>
Scalar eval_series_1d(const LegendreSeries1D<Scalar>& s, Scalar x) {
  return s(x);
}

template <typename Scalar>
Scalar eval_series_2d(const LegendreSeries2D<Scalar>& s, Scalar tau,
                      Scalar sigma) {
  return s(tau, sigma);
}

/// int_0^1 a(t) b(t) dt, which orthonormality reduces to a coefficient dot
/// product.
template <typename Scalar>
Scalar inner_product(const LegendreSeries1D<Scalar>& a,
                     const LegendreSeries1D<Scalar>& b) {
  const int n = std::min(a.degree(), b.degree()) + 1;
  return a.coeffs().head(n).dot(b.coeffs().head(n));
}

/// int_0^1 u(tau) A(tau, sigma) v(sigma) dsigma dtau.
template <typename Scalar>
Scalar bilinear_integral(const LegendreSeries1D<Scalar>& u,
                         const LegendreSeries2D<Scalar>& a,
                         const LegendreSeries1D<Scalar>& v) {
  const auto& m = a.coeffs();
  return u.padded(static_cast<int>(m.rows()))
      .dot(m * v.padded(static_cast<int>(m.cols())));
}

/// t(x) = int_0^x s. Uses
///   int_0^x P_0 = xi_1 P_1 + P_0 / 2,
///   int_0^x P_k = xi_{k+1} P_{k+1} - xi_k P_{k-1}   (k >= 1).
template <typename Scalar>
LegendreSeries1D<Scalar> antiderivative(const LegendreSeries1D<Scalar>& s) {
  const int d = s.degree();
  detail::check_degree(d + 1, s.max_degree(), "antiderivative");
  typename LegendreSeries1D<Scalar>::Vector out =
      LegendreSeries1D<Scalar>::Vector::Zero(d + 2);
  out(0) += s.coeff(0) / Scalar(2);
  out(1) += s.coeff(0) * legendre_xi<Scalar>(1);
  for (int k = 1; k <= d; ++k) {
    out(k + 1) += s.coeff(k) * legendre_xi<Scalar>(k + 1);
    out(k - 1) -= s.coeff(k) * legendre_xi<Scalar>(k);
  }
  return LegendreSeries1D<Scalar>(std::move(out), s.max_degree());
}

/// x s(x), from x P_k = k xi_k P_{k-1} + P_k / 2 + (k+1) xi_{k+1} P_{k+1}.
template <typename Scalar>
LegendreSeries1D<Scalar> multiply_by_x(const LegendreSeries1D<Scalar>& s) {
  const int d = s.degree();
  detail::check_degree(d + 1, s.max_degree(), "multiply_by_x");
  typename LegendreSeries1D<Scalar>::Vector out =
      LegendreSeries1D<Scalar>::Vector::Zero(d + 2);
  for (int k = 0; k <= d; ++k) {
    const Scalar a = s.coeff(k);
    if (k >= 1) out(k - 1) += a * Scalar(k) * legendre_xi<Scalar>(k);
    out(k) += a / Scalar(2);
    out(k + 1) += a * Scalar(k + 1) * legendre_xi<Scalar>(k + 1);
  }
  return LegendreSeries1D<Scalar>(std::move(out), s.max_degree());
}

/// Expansion of x^k, built by k exact multiplications by x.
template <typename Scalar = double>
LegendreSeries1D<Scalar> monomial_to_legendre(
    int k, int max_degree = kDefaultMaxDegree) {
  detail::check_degree(k, max_degree, "monomial_to_legendre");
  LegendreSeries1D<Scalar> s({Scalar(1)}, max_degree);
  for (int i = 0; i < k; ++i) s = multiply_by_x(s);
  return s;
}

/// Zeroes coefficients with magnitude below `threshold`. Series operations
/// never prune on their own.
template <typename Scalar>
LegendreSeries1D<Scalar> prune(const LegendreSeries1D<Scalar>& s,
                               Scalar threshold) {
  using std::abs;
  auto c = s.coeffs();
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (abs(c(i)) < threshold) c(i) = Scalar(0);
  return LegendreSeries1D<Scalar>(std::move(c), s.max_degree());
}

template <typename Scalar>
LegendreSeries2D<Scalar> prune(const LegendreSeries2D<Scalar>& s,
                               Scalar threshold) {
  using std::abs;
  auto c = s.coeffs();
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      if (abs(c(i, j)) < threshold) c(i, j) = Scalar(0);
  return LegendreSeries2D<Scalar>(std::move(c), s.max_degree());
}

}  // namespace csrkn

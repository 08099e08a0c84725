#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace phs::qcore {

using cx = std::complex<double>;

template <std::size_t N>
struct Vector {
  static_assert(N == 2 || N == 4, "only 2- and 4-level states are supported");

  std::array<cx, N> v{};

  cx& operator[](std::size_t i) { return v[i]; }
  const cx& operator[](std::size_t i) const { return v[i]; }

  double norm2() const {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  static Vector basis(std::size_t k) {
    Vector e;
    e.v.at(k) = cx{1.0, 0.0};
    return e;
  }
};

template <std::size_t N>
Vector<N> operator+(const Vector<N>& a, const Vector<N>& b) {
  Vector<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
  return r;
}

template <std::size_t N>
Vector<N> operator-(const Vector<N>& a, const Vector<N>& b) {
  Vector<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}

template <std::size_t N>
Vector<N> operator*(const cx& s, const Vector<N>& a) {
  Vector<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = s * a[i];
  return r;
}

// Inner product, conjugate-linear in the first argument.
template <std::size_t N>
cx inner(const Vector<N>& a, const Vector<N>& b) {
  cx s{};
  for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

template <std::size_t N>
struct Matrix {
  static_assert(N == 2 || N == 4, "only 2x2 and 4x4 operators are supported");

  std::array<cx, N * N> m{};  // row-major

  cx& operator()(std::size_t r, std::size_t c) { return m[r * N + c]; }
  const cx& operator()(std::size_t r, std::size_t c) const { return m[r * N + c]; }

  static Matrix identity() {
    Matrix id;
    for (std::size_t i = 0; i < N; ++i) id(i, i) = cx{1.0, 0.0};
    return id;
  }

  Matrix adjoint() const {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  cx trace() const {
    cx s{};
    for (std::size_t i = 0; i < N; ++i) s += (*this)(i, i);
    return s;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& z : m) s += std::norm(z);
    return std::sqrt(s);
  }

  // Largest entrywise deviation from A = A^dagger.
  double hermiticity_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i; j < N; ++j)
        d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
  }

  // Largest entrywise magnitude of A - B.
  double max_abs_diff(const Matrix& b) const {
    double d = 0.0;
    for (std::size_t i = 0; i < N * N; ++i) d = std::max(d, std::abs(m[i] - b.m[i]));
    return d;
  }
};

template <std::size_t N>
Matrix<N> operator+(const Matrix<N>& a, const Matrix<N>& b) {
  Matrix<N> r;
  for (std::size_t i = 0; i < N * N; ++i) r.m[i] = a.m[i] + b.m[i];
  return r;
}

template <std::size_t N>
Matrix<N> operator-(const Matrix<N>& a, const Matrix<N>& b) {
  Matrix<N> r;
  for (std::size_t i = 0; i < N * N; ++i) r.m[i] = a.m[i] - b.m[i];
  return r;
}

template <std::size_t N>
Matrix<N> operator*(const cx& s, const Matrix<N>& a) {
  Matrix<N> r;
  for (std::size_t i = 0; i < N * N; ++i) r.m[i] = s * a.m[i];
  return r;
}

template <std::size_t N>
Matrix<N> operator*(double s, const Matrix<N>& a) {
  return cx{s, 0.0} * a;
}

template <std::size_t N>
Matrix<N> operator*(const Matrix<N>& a, const Matrix<N>& b) {
  Matrix<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const cx aik = a(i, k);
      for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

template <std::size_t N>
Vector<N> operator*(const Matrix<N>& a, const Vector<N>& x) {
  Vector<N> r;
  for (std::size_t i = 0; i < N; ++i) {
    cx s{};
    for (std::size_t j = 0; j < N; ++j) s += a(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

inline Matrix<2> pauli_x() {
  Matrix<2> s;
  s(0, 1) = cx{1.0, 0.0};
  s(1, 0) = cx{1.0, 0.0};
  return s;
}

inline Matrix<2> pauli_y() {
  Matrix<2> s;
  s(0, 1) = cx{0.0, -1.0};
  s(1, 0) = cx{0.0, 1.0};
  return s;
}

inline Matrix<2> pauli_z() {
  Matrix<2> s;
  s(0, 0) = cx{1.0, 0.0};
  s(1, 1) = cx{-1.0, 0.0};
  return s;
}

// Kronecker product; `left` is the slow (most significant) factor, giving the
// composite basis order |00>, |01>, |10>, |11> with the left index first.
inline Matrix<4> tensor(const Matrix<2>& left, const Matrix<2>& right) {
  Matrix<4> out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          out(2 * i + k, 2 * j + l) = left(i, j) * right(k, l);
  return out;
}

inline Vector<4> tensor(const Vector<2>& left, const Vector<2>& right) {
  Vector<4> out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) out[2 * i + k] = left[i] * right[k];
  return out;
}

// Hermitian-tagged operator: construction enforces the defect bound so the
// spectral code can assume A = A^dagger.
template <std::size_t N>
class Hermitian {
 public:
  explicit Hermitian(const Matrix<N>& m) : m_(m) {
    if (m.hermiticity_defect() > 1e-12)
      throw std::invalid_argument("Hermitian: matrix fails the A = A^dagger check");
  }

  const Matrix<N>& matrix() const { return m_; }

 private:
  Matrix<N> m_;
};

template <std::size_t N>
struct EigenSystem {
  std::array<double, N> values{};  // ascending
  Matrix<N> vectors;               // column k pairs with values[k]
};

template <std::size_t N>
EigenSystem<N> eig_hermitian(const Hermitian<N>& h);

template <std::size_t N>
Vector<N> propagate(const EigenSystem<N>& es, const Vector<N>& psi0, double t);

// exp(-i H t) psi0 via the spectral decomposition of H.
template <std::size_t N>
Vector<N> propagate(const Hermitian<N>& h, const Vector<N>& psi0, double t);

struct Postselected {
  Vector<2> sensor;    // unnormalized amplitudes of the kept branch
  double probability;  // squared norm retained by the projector
};

// Keep the ancilla-|0> block: the first two amplitudes in the slow-factor
// basis order.  probability = 0 is a legal result; callers decide.
Postselected postselect_ancilla0(const Vector<4>& psi);

}  // namespace phs::qcore

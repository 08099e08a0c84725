#include "phsensor/qcore.hpp"

#include <algorithm>
#include <numeric>

#include "phsensor/errors.hpp"

namespace phs::qcore {

namespace {

// Unitary rotation in the (p, q) plane chosen so (U^dagger A U)_{pq} = 0:
// factor out the phase of the off-diagonal entry, then apply the classic
// symmetric Jacobi angle.  U_pp = c, U_pq = s, U_qp = -s e*, U_qq = c e*
// with e the unit phase of A_pq.
template <std::size_t N>
void rotate(Matrix<N>& a, Matrix<N>& v, std::size_t p, std::size_t q) {
  const cx apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const cx e = apq / r;
  const double alpha = a(p, p).real();
  const double beta = a(q, q).real();
  const double zeta = (beta - alpha) / (2.0 * r);
  const double t =
      (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cx ce = c * std::conj(e);
  const cx se = s * std::conj(e);

  for (std::size_t i = 0; i < N; ++i) {  // A <- A U, V <- V U
    const cx aip = a(i, p), aiq = a(i, q);
    a(i, p) = c * aip - se * aiq;
    a(i, q) = s * aip + ce * aiq;
    const cx vip = v(i, p), viq = v(i, q);
    v(i, p) = c * vip - se * viq;
    v(i, q) = s * vip + ce * viq;
  }
  for (std::size_t j = 0; j < N; ++j) {  // A <- U^dagger A
    const cx apj = a(p, j), aqj = a(q, j);
    a(p, j) = c * apj - s * e * aqj;
    a(q, j) = s * apj + c * e * aqj;
  }
  a(p, q) = cx{0.0, 0.0};
  a(q, p) = cx{0.0, 0.0};
  a(p, p) = cx{a(p, p).real(), 0.0};
  a(q, q) = cx{a(q, q).real(), 0.0};
}

template <std::size_t N>
double offdiag_norm2(const Matrix<N>& a) {
  double s = 0.0;
  for (std::size_t p = 0; p + 1 < N; ++p)
    for (std::size_t q = p + 1; q < N; ++q) s += std::norm(a(p, q));
  return s;
}

}  // namespace

template <std::size_t N>
EigenSystem<N> eig_hermitian(const Hermitian<N>& h) {
  Matrix<N> a = h.matrix();
  Matrix<N> v = Matrix<N>::identity();
  const double scale = a.frobenius();
  const double tol = (scale > 0.0 ? scale : 1.0) * 1e-14;

  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    if (2.0 * offdiag_norm2(a) <= tol * tol) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) rotate(a, v, p, q);
  }
  if (!converged && 2.0 * offdiag_norm2(a) > tol * tol)
    throw ConvergenceError("eig_hermitian: Jacobi sweeps did not converge");

  std::array<std::size_t, N> idx{};
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&a](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenSystem<N> es;
  for (std::size_t k = 0; k < N; ++k) {
    es.values[k] = a(idx[k], idx[k]).real();
    for (std::size_t i = 0; i < N; ++i) es.vectors(i, k) = v(i, idx[k]);
  }
  return es;
}

template <std::size_t N>
Vector<N> propagate(const EigenSystem<N>& es, const Vector<N>& psi0, double t) {
  Vector<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    cx amp{};
    for (std::size_t i = 0; i < N; ++i) amp += std::conj(es.vectors(i, k)) * psi0[i];
    const cx phase = std::polar(1.0, -es.values[k] * t) * amp;
    for (std::size_t i = 0; i < N; ++i) out[i] += phase * es.vectors(i, k);
  }
  return out;
}

template <std::size_t N>
Vector<N> propagate(const Hermitian<N>& h, const Vector<N>& psi0, double t) {
  return propagate(eig_hermitian(h), psi0, t);
}

Postselected postselect_ancilla0(const Vector<4>& psi) {
  Postselected r;
  r.sensor[0] = psi[0];
  r.sensor[1] = psi[1];
  r.probability = std::norm(psi[0]) + std::norm(psi[1]);
  return r;
}

template EigenSystem<2> eig_hermitian<2>(const Hermitian<2>&);
template EigenSystem<4> eig_hermitian<4>(const Hermitian<4>&);
template Vector<2> propagate<2>(const EigenSystem<2>&, const Vector<2>&, double);
template Vector<4> propagate<4>(const EigenSystem<4>&, const Vector<4>&, double);
template Vector<2> propagate<2>(const Hermitian<2>&, const Vector<2>&, double);
template Vector<4> propagate<4>(const Hermitian<4>&, const Vector<4>&, double);

}  // namespace phs::qcore

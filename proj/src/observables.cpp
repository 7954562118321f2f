#include "bhgl/observables.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bhgl {

double reduced_current(const SmallMatrix& sigma, int i, int j) {
  return 2.0 * sigma(i, j).imag();
}

double coherence(const SmallMatrix& sigma, int i, int j) { return 2.0 * sigma(i, j).real(); }

double purity(const SmallMatrix& sigma) {
  const int M = sigma.size();
  const double tr = sigma.trace().real();
  if (!(std::abs(tr) > 0.0)) throw std::invalid_argument("purity: zero trace");
  if (M == 1) return 1.0;
  // tr(s^2) = sum_ij s_ij s_ji = sum_ij |s_ij|^2 for Hermitian s.
  double tr2 = 0.0;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) tr2 += (sigma(i, j) * sigma(j, i)).real();
  tr2 /= tr * tr;
  return (M * tr2 - 1.0) / (M - 1);
}

SmallMatrix restrict_matrix(const SmallMatrix& sigma, int first, int count) {
  if (first < 0 || first + count > sigma.size())
    throw std::out_of_range("restrict_matrix: block outside the matrix");
  SmallMatrix block(count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) block(i, j) = sigma(first + i, first + j);
  return block;
}

std::pair<double, double> purity_embedded(const SmallMatrix& sigma) {
  if (sigma.size() != 4) throw std::invalid_argument("purity_embedded: 4x4 SPDM required");
  return {purity(sigma), purity(restrict_matrix(sigma, 1, 2))};
}

SmallMatrix sigma_matrix(const MomentSource& ms) {
  const int M = ms.wells();
  SmallMatrix s(M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) s(i, j) = ms.sigma(i, j);
  return s;
}

Complex covariance(const MomentSource& ms, int i, int j, int k, int l) {
  return ms.delta(i, j, k, l) - ms.sigma(i, j) * ms.sigma(k, l);
}

double variance_n(const MomentSource& ms, int i) { return covariance(ms, i, i, i, i).real(); }

double variance_jt(const MomentSource& ms, int i, int j) {
  return (covariance(ms, i, j, j, i) + covariance(ms, j, i, i, j) - covariance(ms, i, j, i, j) -
          covariance(ms, j, i, j, i))
      .real();
}

double variance_c(const MomentSource& ms, int i, int j) {
  return (covariance(ms, i, j, j, i) + covariance(ms, j, i, i, j) + covariance(ms, i, j, i, j) +
          covariance(ms, j, i, j, i))
      .real();
}

double ObservableRecord::value(Column c) const {
  const auto& v = (*this)[c];
  if (!v) throw std::out_of_range("observable '" + std::string(kColumnNames[static_cast<int>(c)]) +
                                  "' not recorded");
  return *v;
}

ObservableRecord four_mode_record(double t, const MomentSource& ms, const ParameterValues& p,
                                  bool with_variances, double conservation) {
  if (ms.wells() != 4) throw std::invalid_argument("four_mode_record: four wells required");
  const SmallMatrix s = sigma_matrix(ms);
  ObservableRecord r;
  r[Column::t] = t;
  r[Column::n0] = s(0, 0).real();
  r[Column::n1] = s(1, 1).real();
  r[Column::n2] = s(2, 2).real();
  r[Column::n3] = s(3, 3).real();
  r[Column::jt01] = reduced_current(s, 0, 1);
  r[Column::jt12] = reduced_current(s, 1, 2);
  r[Column::jt23] = reduced_current(s, 2, 3);
  r[Column::c01] = coherence(s, 0, 1);
  r[Column::c12] = coherence(s, 1, 2);
  r[Column::c23] = coherence(s, 2, 3);
  r[Column::J01] = p.J01;
  r[Column::J23] = p.J23;
  r[Column::mu0] = p.mu0;
  r[Column::mu3] = p.mu3;
  const auto [p4, p2] = purity_embedded(s);
  r[Column::P4] = p4;
  r[Column::P2] = p2;
  if (with_variances) {
    r[Column::var_n1] = variance_n(ms, 1);
    r[Column::var_n2] = variance_n(ms, 2);
    r[Column::var_jt12] = variance_jt(ms, 1, 2);
  } else {
    r[Column::var_n1] = 0.0;
    r[Column::var_n2] = 0.0;
    r[Column::var_jt12] = 0.0;
    r.mean_field_variances = true;
  }
  r[Column::conservation] = conservation;
  return r;
}

ObservableRecord two_mode_record(double t, std::span<const Complex> psi) {
  if (psi.size() != 2) throw std::invalid_argument("two_mode_record: two components required");
  const MeanFieldMoments ms(psi);
  const SmallMatrix s = sigma_matrix(ms);
  ObservableRecord r;
  r[Column::t] = t;
  r[Column::n1] = s(0, 0).real();
  r[Column::n2] = s(1, 1).real();
  r[Column::jt12] = reduced_current(s, 0, 1);
  r[Column::c12] = coherence(s, 0, 1);
  r[Column::P2] = purity(s);
  r[Column::var_n1] = 0.0;
  r[Column::var_n2] = 0.0;
  r[Column::var_jt12] = 0.0;
  r.mean_field_variances = true;
  r[Column::conservation] = s(0, 0).real() + s(1, 1).real();
  return r;
}

}  // namespace bhgl

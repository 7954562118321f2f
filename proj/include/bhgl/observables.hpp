#ifndef BHGL_OBSERVABLES_HPP
#define BHGL_OBSERVABLES_HPP

#include <array>
#include <optional>
#include <string_view>
#include <utility>

#include "bhgl/moments.hpp"
#include "bhgl/types.hpp"

namespace bhgl {

// jt_ij = 2 Im sigma_ij; the physical current is J_ij jt_ij.
double reduced_current(const SmallMatrix& sigma, int i, int j);
// c_ij = 2 Re sigma_ij.
double coherence(const SmallMatrix& sigma, int i, int j);

// P = (M tr(s^2) - 1)/(M - 1) on the unit-trace normalized matrix s.
double purity(const SmallMatrix& sigma);

// (P4, P2): the full four-well SPDM and the block of wells 1 and 2.
std::pair<double, double> purity_embedded(const SmallMatrix& sigma);

SmallMatrix sigma_matrix(const MomentSource& moments);
SmallMatrix restrict_matrix(const SmallMatrix& sigma, int first, int count);

// cov_ijkl = delta_ijkl - sigma_ij sigma_kl.
Complex covariance(const MomentSource& moments, int i, int j, int k, int l);
double variance_n(const MomentSource& moments, int i);
double variance_jt(const MomentSource& moments, int i, int j);
double variance_c(const MomentSource& moments, int i, int j);

enum class Column {
  t, n0, n1, n2, n3, jt01, jt12, jt23, c01, c12, c23, J01, J23, mu0, mu3,
  P4, P2, var_n1, var_n2, var_jt12, conservation,
};
inline constexpr std::size_t kColumnCount = 21;

inline constexpr std::array<std::string_view, kColumnCount> kColumnNames = {
    "t",   "n0",  "n1",  "n2",  "n3",  "jt01", "jt12",   "jt23",   "c01",      "c12",
    "c23", "J01", "J23", "mu0", "mu3", "P4",   "P2",     "var_n1", "var_n2",   "var_jt12",
    "conservation"};

// One sampled row. Entries a back-end cannot provide stay empty. Mean-field
// runs set the variances to exact zeros and raise mean_field_variances so
// writers can tell them apart from measured values.
struct ObservableRecord {
  std::array<std::optional<double>, kColumnCount> values{};
  bool mean_field_variances = false;

  std::optional<double>& operator[](Column c) { return values[static_cast<std::size_t>(c)]; }
  const std::optional<double>& operator[](Column c) const {
    return values[static_cast<std::size_t>(c)];
  }
  double value(Column c) const;  // throws if absent
};

struct ParameterValues {
  double J01 = 0.0, J23 = 0.0, mu0 = 0.0, mu3 = 0.0;
};

// Record for a four-well state. with_variances selects whether the TPDM is
// reported (many-body) or zeroed and flagged (mean field).
ObservableRecord four_mode_record(double t, const MomentSource& moments,
                                  const ParameterValues& params, bool with_variances,
                                  double conservation);

// Record for the isolated dimer; wells 1 and 2 carry the two components.
ObservableRecord two_mode_record(double t, std::span<const Complex> psi);

}  // namespace bhgl

#endif  // BHGL_OBSERVABLES_HPP

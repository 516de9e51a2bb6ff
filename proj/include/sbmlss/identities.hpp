#pragma once

// Exact combinatorial checks run by the `identities` subcommand and the
// acceptance suite, plus CSV dumps of the coefficient tables.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sbmlss/combinatorics.hpp"
#include "sbmlss/csv.hpp"
#include "sbmlss/series_oracle.hpp"

namespace sbmlss {

struct IdentityResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct IdentityLimits {
  int psi_max_half = 40;    // P_{2k} for k = 2..psi_max_half
  int f_series_max_m = 20;
  int f_sum_max_m = 40;
  int d_max_k = 15;
  int chebyshev_max_m = 40;
};

// sum_{r=0}^{k} P_{2k}[2r] psi_{2r} = 0 and sum_{r=1}^{k} P_{2k}[2r] r psi_{2r} = 0.
inline IdentityResult check_psi_cancellation(int max_half) {
  const auto cheb = chebyshev_family(2 * max_half);
  for (int k = 2; k <= max_half; ++k) {
    const auto& poly = cheb[static_cast<std::size_t>(2 * k)];
    BigInt plain = 0, weighted = 0;
    for (int r = 0; r <= k; ++r) {
      const BigInt term = poly.coeff(2 * r) * catalan_psi(2 * r);
      plain += term;
      weighted += term * r;
    }
    if (plain != 0 || weighted != 0) {
      std::ostringstream msg;
      msg << "fails at k=" << k << ": sums " << plain << ", " << weighted;
      return {"psi cancellation", false, msg.str()};
    }
  }
  return {"psi cancellation", true, "k=2.." + std::to_string(max_half)};
}

inline IdentityResult check_f_series(int max_m) {
  const auto series = oracle::fk_by_series(max_m);
  for (int m = 1; m <= max_m; ++m)
    for (int r = 1; r <= m; ++r)
      if (Rational(fk_coefficient(m, r)) != series[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)]) {
        std::ostringstream msg;
        msg << "f(" << m << "," << r << ") = " << fk_coefficient(m, r) << " but series gives "
            << series[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)];
        return {"f(m,r) vs series expansion", false, msg.str()};
      }
  return {"f(m,r) vs series expansion", true, "m<=" + std::to_string(max_m)};
}

inline IdentityResult check_f_sum_bound(int max_m) {
  for (int m = 1; m <= max_m; ++m) {
    BigInt total = 0;
    for (int r = 1; r <= m; ++r) total += fk_coefficient(m, r);
    if (total > (BigInt(1) << (m - 1))) return {"sum_r f(m,r) <= 2^(m-1)", false, "fails at m=" + std::to_string(m)};
  }
  return {"sum_r f(m,r) <= 2^(m-1)", true, "m<=" + std::to_string(max_m)};
}

inline std::vector<IdentityResult> check_alpha_values() {
  std::vector<IdentityResult> out;
  auto add = [&](const std::string& name, const BigInt& got, int want) {
    std::ostringstream msg;
    msg << got;
    out.push_back({name, got == want, msg.str()});
  };
  add("alpha1(2) = 0", alpha1(2), 0);
  add("alpha1(3) = 4", alpha1(3), 4);
  add("alpha2(2) = 1", alpha2(2), 1);
  add("alpha2(3) = 6", alpha2(3), 6);
  return out;
}

inline IdentityResult check_d_inverse(int max_k) {
  for (int k = 1; k <= max_k; ++k) {
    const auto d = d_matrix(k);
    const auto inv = to_rational(d_matrix_inverse(k));
    const auto id = ExactMatrix<Rational>::identity(static_cast<std::size_t>(k));
    if (!(d * inv == id) || !(inv * d == id))
      return {"D * D^-1 = I", false, "fails at k=" + std::to_string(k)};
  }
  return {"D * D^-1 = I", true, "k<=" + std::to_string(max_k)};
}

// P_m(2 cos theta) = 2 cos(m theta), checked in floating point at a few angles.
inline IdentityResult check_chebyshev_cosine(int max_m) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  const auto cheb = chebyshev_family(max_m);
  for (int m = 0; m <= max_m; ++m)
    for (Real theta : {boost::math::constants::pi<Real>() / 5, Real(0.3), Real(1.1), Real(2.9)}) {
      const Real x = 2 * cos(theta);
      Real acc = 0;
      const auto& c = cheb[static_cast<std::size_t>(m)].coeffs;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + Real(*it);
      const Real want = 2 * cos(m * theta);
      if (abs(acc - want) > Real(1e-30))
        return {"P_m(2cos t) = 2cos(mt)", false, "fails at m=" + std::to_string(m)};
    }
  return {"P_m(2cos t) = 2cos(mt)", true, "m<=" + std::to_string(max_m)};
}

inline std::vector<IdentityResult> run_identities(const IdentityLimits& limits = {}) {
  std::vector<IdentityResult> out;
  out.push_back(check_psi_cancellation(limits.psi_max_half));
  out.push_back(check_f_series(limits.f_series_max_m));
  out.push_back(check_f_sum_bound(limits.f_sum_max_m));
  for (auto& r : check_alpha_values()) out.push_back(std::move(r));
  out.push_back(check_d_inverse(limits.d_max_k));
  out.push_back(check_chebyshev_cosine(limits.chebyshev_max_m));
  return out;
}

inline bool print_identities(const std::vector<IdentityResult>& results, std::ostream& os) {
  bool ok = true;
  for (const auto& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) os << " (" << r.detail << ")";
    os << '\n';
    ok = ok && r.passed;
  }
  return ok;
}

// Long-format CSV of the coefficient tables: table,index1,index2,value.
inline void write_coefficient_tables(std::ostream& os, int max_degree) {
  os << "table,i,j,value\n";
  auto row = [&](const char* table, int i, int j, const BigInt& v) {
    std::ostringstream val;
    val << v;
    os << csv_join({table, std::to_string(i), std::to_string(j), val.str()}) << '\n';
  };
  for (int k = 0; k <= max_degree; ++k) row("psi", k, 0, catalan_psi(k));
  for (int m = 1; m <= max_degree; ++m)
    for (int r = 1; r <= m; ++r)
      if ((m - r) % 2 == 0) row("f", m, r, fk_coefficient(m, r));
  const auto cheb = chebyshev_family(max_degree);
  for (int m = 0; m <= max_degree; ++m)
    for (int j = 0; j <= m; ++j)
      if ((m - j) % 2 == 0) row("chebyshev", m, j, cheb[static_cast<std::size_t>(m)].coeff(j));
  for (int k = 2; 2 * k <= max_degree; ++k) {
    row("alpha1", k, 0, alpha1(k));
    row("alpha2", k, 0, alpha2(k));
  }
}

}  // namespace sbmlss

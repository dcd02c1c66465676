#include "ossfield.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "ossfield/covariance.hpp"
#include "ossfield/csvio.hpp"
#include "ossfield/exponents.hpp"
#include "ossfield/fieldsim.hpp"
#include "ossfield/matlin.hpp"
#include "ossfield/polar.hpp"
#include "ossfield/semistable.hpp"

using nlohmann::json;

struct ossf_matrix {
  ossf::Matrix data;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Runs fn, translating the C++ error taxonomy into status codes.
template <typename Fn>
ossf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ossf::ValidationError& e) {
    set_error(e.what());
    return OSSF_ERR_VALIDATION;
  } catch (const ossf::DomainError& e) {
    set_error(e.what());
    return OSSF_ERR_DOMAIN;
  } catch (const ossf::ConditioningError& e) {
    set_error(e.what());
    return OSSF_ERR_CONDITIONING;
  } catch (const ossf::NumericError& e) {
    set_error(e.what());
    return OSSF_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return OSSF_ERR_NUMERIC;
  }
}

ossf_matrix* wrap(ossf::Matrix m) { return new ossf_matrix{std::move(m)}; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const ossf::Matrix& need(const ossf_matrix* m, const char* what) {
  if (!m) throw ossf::ValidationError(std::string(what) + " is null");
  return m->data;
}

ossf::Vector as_vector(const ossf_matrix* m, const char* what) {
  const ossf::Matrix& mat = need(m, what);
  if (mat.rows() != 1 && mat.cols() != 1) {
    throw ossf::ValidationError(std::string(what) + " must be a vector");
  }
  if (mat.rows() == 1) return mat.transpose().col(0);
  return mat.col(0);
}

std::vector<ossf::Vector> as_grid(const ossf_matrix* m, const char* what) {
  const ossf::Matrix& mat = need(m, what);
  std::vector<ossf::Vector> pts;
  pts.reserve(mat.rows());
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    pts.push_back(mat.row(i).transpose());
  }
  return pts;
}

ossf::covariance::CovarianceModel make_model(const char* name, double gamma) {
  const std::string id = name ? name : "";
  if (id == "ofbf") return ossf::covariance::make_ofbf_model(gamma);
  if (id == "fbf" || id == "fbf-closed-form") {
    return ossf::covariance::make_fbf_closed_form_model(gamma);
  }
  throw ossf::ValidationError("unknown covariance model '" + id +
                              "' (expected 'ofbf' or 'fbf')");
}

ossf::exponents::GroupSpec parse_group(const char* name) {
  using ossf::exponents::GroupSpec;
  std::string id = name ? name : "";
  auto dim_after = [&](size_t prefix_len) {
    const std::string d = id.substr(prefix_len);
    try {
      const int n = std::stoi(d);
      if (n < 1) throw std::invalid_argument(d);
      return static_cast<Eigen::Index>(n);
    } catch (const std::exception&) {
      throw ossf::ValidationError("bad group dimension in '" + id + "'");
    }
  };
  if (id.rfind("SO:", 0) == 0) return GroupSpec::special_orthogonal(dim_after(3));
  if (id.rfind("O:", 0) == 0) return GroupSpec::orthogonal(dim_after(2));
  if (id.rfind("trivial:", 0) == 0) return GroupSpec::trivial(dim_after(8));
  if (id.rfind("SO", 0) == 0) return GroupSpec::special_orthogonal(dim_after(2));
  if (id.rfind("O", 0) == 0) return GroupSpec::orthogonal(dim_after(1));
  throw ossf::ValidationError("unknown group '" + id +
                              "' (expected O:n, SO:n or trivial:n)");
}

ossf::exponents::Side parse_side(const char* side) {
  const std::string s = side ? side : "";
  if (s == "range" || s == "ran") return ossf::exponents::Side::kRange;
  if (s == "domain" || s == "dom") return ossf::exponents::Side::kDomain;
  throw ossf::ValidationError("side must be 'range' or 'domain', got '" + s + "'");
}

json matrix_to_json(const ossf::Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json report_to_json(const ossf::covariance::OssCheckReport& rep) {
  json j;
  j["max_abs_deviation"] = rep.max_abs_deviation;
  j["max_rel_deviation"] = rep.max_rel_deviation;
  j["tolerance"] = rep.tolerance;
  j["passed"] = rep.passed;
  if (rep.worst_s.size() > 0) {
    j["worst_pair"] = {std::vector<double>(rep.worst_s.data(),
                                           rep.worst_s.data() + rep.worst_s.size()),
                       std::vector<double>(rep.worst_t.data(),
                                           rep.worst_t.data() + rep.worst_t.size())};
  }
  return j;
}

}  // namespace

extern "C" {

const char* ossf_last_error(void) { return g_last_error.c_str(); }

ossf_matrix* ossf_matrix_create(int rows, int cols, const double* row_major) {
  if (rows < 1 || cols < 1 || !row_major) {
    set_error("ossf_matrix_create: bad arguments");
    return nullptr;
  }
  ossf::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = row_major[i * cols + j];
  return wrap(std::move(m));
}

ossf_matrix* ossf_matrix_parse(const char* literal) {
  ossf_matrix* out = nullptr;
  guarded([&]() -> ossf_status {
    out = wrap(ossf::csvio::parse_literal(literal ? literal : ""));
    return OSSF_OK;
  });
  return out;
}

ossf_matrix* ossf_matrix_from_csv(const char* csv_text) {
  ossf_matrix* out = nullptr;
  guarded([&]() -> ossf_status {
    out = wrap(ossf::csvio::read_matrix(csv_text ? csv_text : ""));
    return OSSF_OK;
  });
  return out;
}

int ossf_matrix_rows(const ossf_matrix* m) {
  return m ? static_cast<int>(m->data.rows()) : 0;
}

int ossf_matrix_cols(const ossf_matrix* m) {
  return m ? static_cast<int>(m->data.cols()) : 0;
}

ossf_status ossf_matrix_data(const ossf_matrix* m, double* out_row_major) {
  return guarded([&]() -> ossf_status {
    const ossf::Matrix& mat = need(m, "matrix");
    if (!out_row_major) throw ossf::ValidationError("output buffer is null");
    for (Eigen::Index i = 0; i < mat.rows(); ++i)
      for (Eigen::Index j = 0; j < mat.cols(); ++j)
        out_row_major[i * mat.cols() + j] = mat(i, j);
    return OSSF_OK;
  });
}

char* ossf_matrix_to_csv(const ossf_matrix* m) {
  if (!m) return nullptr;
  return dup_string(ossf::csvio::write_matrix(m->data));
}

void ossf_matrix_free(ossf_matrix* m) { delete m; }

void ossf_string_free(char* s) { std::free(s); }

ossf_status ossf_expm(const ossf_matrix* m, ossf_matrix** out) {
  return guarded([&]() -> ossf_status {
    *out = wrap(ossf::matlin::expm(need(m, "matrix")));
    return OSSF_OK;
  });
}

ossf_status ossf_mat_power(const ossf_matrix* m, double c, ossf_matrix** out) {
  return guarded([&]() -> ossf_status {
    *out = wrap(ossf::matlin::mat_power(need(m, "matrix"), c));
    return OSSF_OK;
  });
}

ossf_status ossf_spectrum(const ossf_matrix* m, char** json_out) {
  return guarded([&]() -> ossf_status {
    const auto s = ossf::matlin::spectrum(need(m, "matrix"));
    json j;
    j["eigenvalues"] = json::array();
    for (const auto& z : s.eigen_values)
      j["eigenvalues"].push_back({z.real(), z.imag()});
    j["real_parts"] = s.eigen_real_parts;
    j["min_real_part"] = s.min_real_part;
    j["all_positive"] = s.all_positive;
    *json_out = dup_string(j.dump(2));
    return OSSF_OK;
  });
}

ossf_status ossf_sn_decompose(const ossf_matrix* m, double tol,
                              ossf_matrix** semisimple, ossf_matrix** nilpotent) {
  return guarded([&]() -> ossf_status {
    auto sn = ossf::matlin::sn_decompose(need(m, "matrix"), tol);
    *semisimple = wrap(std::move(sn.semisimple));
    *nilpotent = wrap(std::move(sn.nilpotent));
    return OSSF_OK;
  });
}

ossf_status ossf_spectral_split(const ossf_matrix* m, double zero_band,
                                ossf_matrix** conjugacy, ossf_matrix** block_zero,
                                ossf_matrix** block_positive) {
  return guarded([&]() -> ossf_status {
    auto split = ossf::matlin::spectral_split(need(m, "matrix"), zero_band);
    *conjugacy = wrap(std::move(split.conjugacy));
    *block_zero = wrap(std::move(split.block_zero));
    *block_positive = wrap(std::move(split.block_positive));
    return OSSF_OK;
  });
}

ossf_status ossf_e_norm(const ossf_matrix* exponent, const ossf_matrix* x,
                        double* out) {
  return guarded([&]() -> ossf_status {
    ossf::polar::PolarConfig cfg(need(exponent, "exponent"));
    *out = ossf::polar::e_norm(as_vector(x, "x"), cfg);
    return OSSF_OK;
  });
}

ossf_status ossf_polar_decompose(const ossf_matrix* exponent,
                                 const ossf_matrix* x, double* tau,
                                 ossf_matrix** direction) {
  return guarded([&]() -> ossf_status {
    ossf::polar::PolarConfig cfg(need(exponent, "exponent"));
    auto coords = ossf::polar::polar_decompose(as_vector(x, "x"), cfg);
    *tau = coords.radial;
    *direction = wrap(coords.directional.transpose());
    return OSSF_OK;
  });
}

ossf_status ossf_polar_compose(const ossf_matrix* exponent, double r,
                               const ossf_matrix* theta, ossf_matrix** out) {
  return guarded([&]() -> ossf_status {
    ossf::polar::PolarConfig cfg(need(exponent, "exponent"));
    *out = wrap(ossf::Matrix(
        ossf::polar::polar_compose(r, as_vector(theta, "theta"), cfg)
            .transpose()));
    return OSSF_OK;
  });
}

ossf_status ossf_cov_eval(const char* model, double gamma, const ossf_matrix* s,
                          const ossf_matrix* t, ossf_matrix** out) {
  return guarded([&]() -> ossf_status {
    const auto cov = make_model(model, gamma);
    *out = wrap(cov.eval(as_vector(s, "s"), as_vector(t, "t")));
    return OSSF_OK;
  });
}

ossf_status ossf_cov_oss_check(const char* model, double gamma,
                               const ossf_matrix* E, const ossf_matrix* H,
                               double c, const ossf_matrix* grid, double tol,
                               char** json_report) {
  return guarded([&]() -> ossf_status {
    const auto cov = make_model(model, gamma);
    const auto rep = ossf::covariance::cov_oss_check(
        cov, need(E, "E"), need(H, "H"), c, as_grid(grid, "grid"), tol);
    json j = report_to_json(rep);
    j["model"] = model;
    j["gamma"] = gamma;
    j["c"] = c;
    *json_report = dup_string(j.dump(2));
    return rep.passed ? OSSF_OK : OSSF_CHECK_FAILED;
  });
}

ossf_status ossf_sym_check(const char* model, double gamma, const char* side,
                           const ossf_matrix* A, const ossf_matrix* grid,
                           double tol, char** json_report) {
  return guarded([&]() -> ossf_status {
    const auto cov = make_model(model, gamma);
    const std::string s = side ? side : "";
    ossf::covariance::OssCheckReport rep;
    if (s == "dom" || s == "domain") {
      rep = ossf::covariance::dom_symmetry_check(cov, need(A, "A"),
                                                 as_grid(grid, "grid"), tol);
    } else if (s == "ran" || s == "range") {
      rep = ossf::covariance::ran_symmetry_check(cov, need(A, "A"),
                                                 as_grid(grid, "grid"), tol);
    } else {
      throw ossf::ValidationError("side must be 'dom' or 'ran', got '" + s + "'");
    }
    json j = report_to_json(rep);
    j["model"] = model;
    j["gamma"] = gamma;
    j["side"] = s;
    *json_report = dup_string(j.dump(2));
    return rep.passed ? OSSF_OK : OSSF_CHECK_FAILED;
  });
}

ossf_status ossf_tangent_basis(const char* group, char** json_out) {
  return guarded([&]() -> ossf_status {
    const auto basis = ossf::exponents::tangent_basis(parse_group(group));
    json j;
    j["group"] = group;
    j["dimension"] = basis.size();
    j["basis"] = json::array();
    for (const auto& b : basis) j["basis"].push_back(matrix_to_json(b));
    *json_out = dup_string(j.dump(2));
    return OSSF_OK;
  });
}

ossf_status ossf_exp_family(const char* group, const ossf_matrix* base,
                            const char* side, char** json_out) {
  return guarded([&]() -> ossf_status {
    const auto fam = ossf::exponents::exponent_family(
        need(base, "base"), parse_group(group), parse_side(side));
    json j;
    j["group"] = group;
    j["side"] = side;
    j["base"] = matrix_to_json(fam.base);
    j["tangent_basis"] = json::array();
    for (const auto& b : fam.tangent_basis)
      j["tangent_basis"].push_back(matrix_to_json(b));
    *json_out = dup_string(j.dump(2));
    return OSSF_OK;
  });
}

ossf_status ossf_family_check(const char* group, const ossf_matrix* base,
                              const char* side, int samples, double tol,
                              char** json_report) {
  return guarded([&]() -> ossf_status {
    const auto fam = ossf::exponents::exponent_family(
        need(base, "base"), parse_group(group), parse_side(side));
    const auto rep = ossf::exponents::family_invariants_check(fam, samples, tol);
    json j;
    j["passed"] = rep.passed;
    j["samples"] = rep.samples;
    j["max_spectrum_deviation"] = rep.max_spectrum_deviation;
    j["max_nilpotent_deviation"] = rep.max_nilpotent_deviation;
    j["max_nilpotent_commutator"] = rep.max_nilpotent_commutator;
    j["tolerance"] = tol;
    *json_report = dup_string(j.dump(2));
    return rep.passed ? OSSF_OK : OSSF_CHECK_FAILED;
  });
}

ossf_status ossf_haar_commuting_exponent(const char* group,
                                         const ossf_matrix* h,
                                         ossf_matrix** out) {
  return guarded([&]() -> ossf_status {
    *out = wrap(ossf::exponents::haar_commuting_exponent(need(h, "H"),
                                                         parse_group(group)));
    return OSSF_OK;
  });
}

ossf_status ossf_admissibility_check(const ossf_matrix* h, double tol,
                                     char** json_report) {
  return guarded([&]() -> ossf_status {
    const auto rep =
        ossf::exponents::admissibility_check(need(h, "H"), tol > 0 ? tol : 1e-9);
    json j;
    j["admissible"] = rep.admissible;
    j["reasons"] = rep.reasons;
    *json_report = dup_string(j.dump(2));
    return rep.admissible ? OSSF_OK : OSSF_CHECK_FAILED;
  });
}

ossf_status ossf_opposite_sign_check(const ossf_matrix* e, const ossf_matrix* h,
                                     double tol, char** json_report) {
  return guarded([&]() -> ossf_status {
    const bool ok = ossf::exponents::opposite_sign_check(
        need(e, "E"), need(h, "H"), tol > 0 ? tol : 1e-9);
    json j;
    j["compatible"] = ok;
    *json_report = dup_string(j.dump(2));
    return ok ? OSSF_OK : OSSF_CHECK_FAILED;
  });
}

ossf_status ossf_invariant_gaussian(const ossf_matrix* h1, ossf_matrix** sigma) {
  return guarded([&]() -> ossf_status {
    *sigma = wrap(ossf::exponents::invariant_gaussian(need(h1, "H1")));
    return OSSF_OK;
  });
}

ossf_status ossf_exp_split(const ossf_matrix* h, double tol,
                           ossf_matrix** conjugacy, ossf_matrix** block_zero,
                           ossf_matrix** block_positive) {
  return guarded([&]() -> ossf_status {
    auto split = ossf::exponents::decompose_field_exponent(
        need(h, "H"), tol > 0 ? tol : 1e-7);
    *conjugacy = wrap(std::move(split.conjugacy));
    *block_zero = wrap(std::move(split.block_zero));
    *block_positive = wrap(std::move(split.block_positive));
    return OSSF_OK;
  });
}

ossf_status ossf_sim_sample(const char* model, double gamma,
                            const ossf_matrix* grid, int n_samples,
                            uint64_t seed, ossf_matrix** samples) {
  return guarded([&]() -> ossf_status {
    const auto cov = make_model(model, gamma);
    ossf::fieldsim::Grid g{as_grid(grid, "grid")};
    auto sample = ossf::fieldsim::sample_field(cov, g, n_samples, seed);
    *samples = wrap(std::move(sample.values));
    return OSSF_OK;
  });
}

ossf_status ossf_sim_verify(const char* model, double gamma,
                            const ossf_matrix* E, const ossf_matrix* H,
                            double c, const ossf_matrix* grid, int n_samples,
                            uint64_t seed, double k_sigma, char** json_report) {
  return guarded([&]() -> ossf_status {
    const auto cov = make_model(model, gamma);
    ossf::fieldsim::Grid g{as_grid(grid, "grid")};
    const auto rep = ossf::fieldsim::empirical_oss_test(
        cov, need(E, "E"), need(H, "H"), c, g, n_samples, seed,
        k_sigma > 0 ? k_sigma : 4.0);
    json j;
    j["max_abs_deviation"] = rep.max_abs_deviation;
    j["band"] = rep.band;
    j["scale"] = rep.scale;
    j["passed"] = rep.passed;
    j["n_samples"] = n_samples;
    j["seed"] = seed;
    *json_report = dup_string(j.dump(2));
    return rep.passed ? OSSF_OK : OSSF_CHECK_FAILED;
  });
}

ossf_status ossf_semistable_check(double b, double c0, int truncation,
                                  double theta_min, double theta_max,
                                  int n_theta, double off_lattice_c,
                                  char** json_report) {
  return guarded([&]() -> ossf_status {
    if (n_theta < 1) throw ossf::ValidationError("n_theta must be >= 1");
    ossf::semistable::SemistableSpec spec(b, c0, truncation);
    std::vector<double> grid;
    grid.reserve(n_theta);
    for (int i = 0; i < n_theta; ++i) {
      grid.push_back(n_theta == 1
                         ? theta_min
                         : theta_min + (theta_max - theta_min) * i / (n_theta - 1));
    }
    const auto lattice = ossf::semistable::lattice_scaling_check(spec, grid, 1e-12);
    json curve = json::array();
    for (double theta : grid) {
      const auto lo = ossf::semistable::psi(theta, spec);
      const auto hi = ossf::semistable::psi(b * theta, spec);
      curve.push_back(
          {{"theta", theta},
           {"residual", std::abs(hi.value - c0 * lo.value)},
           {"bound", hi.tail_bound + c0 * lo.tail_bound}});
    }
    json j;
    j["curve"] = std::move(curve);
    j["b"] = b;
    j["c0"] = c0;
    j["alpha"] = spec.alpha();
    j["truncation"] = truncation;
    j["lattice"] = {{"max_residual", lattice.max_residual},
                    {"bound", lattice.bound},
                    {"worst_theta", lattice.worst_theta},
                    {"passed", lattice.passed}};
    bool ok = lattice.passed;
    if (off_lattice_c > 0.0) {
      const auto witness =
          ossf::semistable::oss_failure_witness(spec, off_lattice_c, grid);
      j["witness"] = {{"c", off_lattice_c},
                      {"max_deviation", witness.max_deviation},
                      {"bound", witness.bound},
                      {"worst_theta", witness.worst_theta},
                      {"certified", witness.certified}};
      ok = ok && witness.certified;
    }
    j["passed"] = ok;
    *json_report = dup_string(j.dump(2));
    return ok ? OSSF_OK : OSSF_CHECK_FAILED;
  });
}

}  // extern "C"

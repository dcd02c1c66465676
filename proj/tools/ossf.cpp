// Command-line front end.  Everything numerical goes through the shared
// library's C API; this file only does flag parsing, file I/O and report
// plumbing.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ossfield.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckFailed : std::runtime_error {
  explicit CheckFailed(std::string report)
      : std::runtime_error("check failed"), report(std::move(report)) {}
  std::string report;
};

using MatrixPtr = std::unique_ptr<ossf_matrix, decltype(&ossf_matrix_free)>;

MatrixPtr wrap(ossf_matrix* m) { return MatrixPtr(m, &ossf_matrix_free); }

std::string take_string(char* s) {
  std::string out = s ? s : "";
  ossf_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Matrix flags accept a CSV file path or an inline "a,b;c,d" literal.
MatrixPtr load_matrix(const std::string& spec, const char* what) {
  ossf_matrix* m = nullptr;
  if (std::filesystem::exists(spec)) {
    m = ossf_matrix_from_csv(read_file(spec).c_str());
  } else {
    m = ossf_matrix_parse(spec.c_str());
  }
  if (!m) {
    throw UsageError(std::string(what) + ": " + ossf_last_error());
  }
  return wrap(m);
}

std::string matrix_csv(const ossf_matrix* m) {
  char* s = ossf_matrix_to_csv(m);
  if (!s) throw UsageError(ossf_last_error());
  return take_string(s);
}

json matrix_json(const ossf_matrix* m) {
  const int rows = ossf_matrix_rows(m), cols = ossf_matrix_cols(m);
  std::vector<double> data(static_cast<size_t>(rows) * cols);
  ossf_matrix_data(m, data.data());
  json rows_out = json::array();
  for (int i = 0; i < rows; ++i) {
    json row = json::array();
    for (int j = 0; j < cols; ++j) row.push_back(data[i * cols + j]);
    rows_out.push_back(row);
  }
  return rows_out;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw UsageError("cannot write file: " + out_path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

// Raises on hard errors; returns the JSON report and whether the check
// passed (OSSF_CHECK_FAILED still carries a report).
std::string expect_report(ossf_status st, char* report, bool* passed) {
  if (st == OSSF_OK || st == OSSF_CHECK_FAILED) {
    *passed = st == OSSF_OK;
    return take_string(report);
  }
  throw UsageError(ossf_last_error());
}

void expect_ok(ossf_status st) {
  if (st != OSSF_OK) throw UsageError(ossf_last_error());
}

// Reports are wrapped with echoed inputs and wall time, then either
// printed (exit 0) or thrown as a failed check (exit 2).
void emit_report(const std::string& out_path, json wrapped, bool passed) {
  const std::string text = wrapped.dump(2);
  write_output(out_path, text);
  if (!passed) throw CheckFailed(text);
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// --config FILE: a flat JSON object of flag values.  Explicit command-line
// flags win; config fills in the rest.
class ConfigOverlay {
 public:
  void load(const std::string& path) {
    if (path.empty()) return;
    cfg_ = json::parse(read_file(path));
    if (!cfg_.is_object()) throw UsageError("config must be a JSON object");
  }

  template <typename T>
  void apply(const CLI::Option* opt, const char* key, T* value) const {
    if (opt != nullptr && opt->count() > 0) return;
    if (cfg_.contains(key)) *value = cfg_.at(key).get<T>();
  }

 private:
  json cfg_ = json::object();
};

json parse_report(const std::string& raw) { return json::parse(raw); }

// ---- verb implementations ----------------------------------------------

struct CommonFlags {
  std::string config_path;
  std::string out_path;
};

int run_cov_eval(const std::string& model, double gamma, const std::string& s,
                 const std::string& t, const std::string& out_path) {
  auto sv = load_matrix(s, "--s");
  auto tv = load_matrix(t, "--t");
  ossf_matrix* result = nullptr;
  expect_ok(ossf_cov_eval(model.c_str(), gamma, sv.get(), tv.get(), &result));
  auto res = wrap(result);
  write_output(out_path, matrix_csv(res.get()));
  return kExitOk;
}

int run_cov_check_oss(const std::string& model, double gamma,
                      const std::string& e, const std::string& h, double c,
                      const std::string& grid, double tol,
                      const std::string& out_path) {
  Timer timer;
  auto em = load_matrix(e, "--E");
  auto hm = load_matrix(h, "--H");
  auto gm = load_matrix(grid, "--grid");
  char* report = nullptr;
  bool passed = false;
  const ossf_status st = ossf_cov_oss_check(model.c_str(), gamma, em.get(),
                                            hm.get(), c, gm.get(), tol,
                                            &report);
  const std::string raw = expect_report(st, report, &passed);
  json wrapped = {{"command", "cov check-oss"},
                  {"inputs",
                   {{"model", model},
                    {"gamma", gamma},
                    {"E", matrix_json(em.get())},
                    {"H", matrix_json(hm.get())},
                    {"c", c},
                    {"tol", tol}}},
                  {"report", parse_report(raw)},
                  {"wall_time_s", timer.seconds()}};
  emit_report(out_path, std::move(wrapped), passed);
  return kExitOk;
}

int run_sym_check(const std::string& model, double gamma,
                  const std::string& side, const std::string& a,
                  const std::string& grid, double tol,
                  const std::string& out_path) {
  Timer timer;
  auto am = load_matrix(a, "--matrix");
  auto gm = load_matrix(grid, "--grid");
  char* report = nullptr;
  bool passed = false;
  const ossf_status st = ossf_sym_check(model.c_str(), gamma, side.c_str(),
                                        am.get(), gm.get(), tol, &report);
  const std::string raw = expect_report(st, report, &passed);
  json wrapped = {{"command", "sym check"},
                  {"inputs",
                   {{"model", model},
                    {"gamma", gamma},
                    {"side", side},
                    {"matrix", matrix_json(am.get())},
                    {"tol", tol}}},
                  {"report", parse_report(raw)},
                  {"wall_time_s", timer.seconds()}};
  emit_report(out_path, std::move(wrapped), passed);
  return kExitOk;
}

int run_exp_family(const std::string& group, const std::string& base,
                   const std::string& side, const std::string& out_path) {
  auto bm = load_matrix(base, "--base");
  char* out = nullptr;
  expect_ok(ossf_exp_family(group.c_str(), bm.get(), side.c_str(), &out));
  write_output(out_path, take_string(out));
  return kExitOk;
}

int run_exp_haar(const std::string& group, const std::string& matrix,
                 const std::string& out_path) {
  auto hm = load_matrix(matrix, "--matrix");
  ossf_matrix* avg = nullptr;
  expect_ok(ossf_haar_commuting_exponent(group.c_str(), hm.get(), &avg));
  auto res = wrap(avg);
  write_output(out_path, matrix_csv(res.get()));
  return kExitOk;
}

int run_exp_admissible(const std::string& matrix, double tol,
                       const std::string& out_path) {
  Timer timer;
  auto hm = load_matrix(matrix, "--matrix");
  char* report = nullptr;
  bool passed = false;
  const ossf_status st = ossf_admissibility_check(hm.get(), tol, &report);
  const std::string raw = expect_report(st, report, &passed);
  json wrapped = {{"command", "exp admissible"},
                  {"inputs", {{"matrix", matrix_json(hm.get())}, {"tol", tol}}},
                  {"report", parse_report(raw)},
                  {"wall_time_s", timer.seconds()}};
  emit_report(out_path, std::move(wrapped), passed);
  return kExitOk;
}

int run_exp_split(const std::string& matrix, double tol,
                  const std::string& out_path) {
  auto hm = load_matrix(matrix, "--matrix");
  ossf_matrix *p = nullptr, *bz = nullptr, *bp = nullptr;
  expect_ok(ossf_exp_split(hm.get(), tol, &p, &bz, &bp));
  auto pw = wrap(p), bzw = wrap(bz), bpw = wrap(bp);
  json out = {{"command", "exp split"},
              {"conjugacy", matrix_json(pw.get())},
              {"block_zero", matrix_json(bzw.get())},
              {"block_positive", matrix_json(bpw.get())}};
  write_output(out_path, out.dump(2));
  return kExitOk;
}

int run_polar(const std::string& e, const std::string& x,
              const std::string& out_path) {
  auto em = load_matrix(e, "--E");
  auto xm = load_matrix(x, "--x");
  double tau = 0.0;
  ossf_matrix* dir = nullptr;
  expect_ok(ossf_polar_decompose(em.get(), xm.get(), &tau, &dir));
  auto dw = wrap(dir);
  json out = {{"command", "polar"},
              {"tau", tau},
              {"direction", matrix_json(dw.get())}};
  write_output(out_path, out.dump(2));
  return kExitOk;
}

int run_sim_sample(const std::string& model, double gamma,
                   const std::string& grid, int n_samples, std::uint64_t seed,
                   const std::string& out_path) {
  auto gm = load_matrix(grid, "--grid");
  ossf_matrix* samples = nullptr;
  expect_ok(ossf_sim_sample(model.c_str(), gamma, gm.get(), n_samples, seed,
                            &samples));
  auto sw = wrap(samples);
  write_output(out_path, matrix_csv(sw.get()));
  // JSON sidecar with everything needed to reproduce the draw.
  json sidecar = {{"model", model},
                  {"gamma", gamma},
                  {"seed", seed},
                  {"n_samples", n_samples},
                  {"grid", matrix_json(gm.get())}};
  if (!out_path.empty() && out_path != "-") {
    std::ofstream side(out_path + ".json");
    if (!side) throw UsageError("cannot write sidecar: " + out_path + ".json");
    side << sidecar.dump(2) << '\n';
  } else {
    std::cout << sidecar.dump(2) << '\n';
  }
  return kExitOk;
}

int run_sim_verify(const std::string& model, double gamma, const std::string& e,
                   const std::string& h, double c, const std::string& grid,
                   int n_samples, std::uint64_t seed, double k_sigma,
                   const std::string& out_path) {
  Timer timer;
  auto em = load_matrix(e, "--E");
  auto hm = load_matrix(h, "--H");
  auto gm = load_matrix(grid, "--grid");
  char* report = nullptr;
  bool passed = false;
  const ossf_status st =
      ossf_sim_verify(model.c_str(), gamma, em.get(), hm.get(), c, gm.get(),
                      n_samples, seed, k_sigma, &report);
  const std::string raw = expect_report(st, report, &passed);
  json wrapped = {{"command", "sim verify"},
                  {"inputs",
                   {{"model", model},
                    {"gamma", gamma},
                    {"E", matrix_json(em.get())},
                    {"H", matrix_json(hm.get())},
                    {"c", c},
                    {"n_samples", n_samples},
                    {"seed", seed},
                    {"k_sigma", k_sigma}}},
                  {"report", parse_report(raw)},
                  {"wall_time_s", timer.seconds()}};
  emit_report(out_path, std::move(wrapped), passed);
  return kExitOk;
}

int run_semistable(double b, double c0, int truncation, double theta_min,
                   double theta_max, int n_theta, double witness_c,
                   const std::string& out_path, const std::string& tsv_path) {
  Timer timer;
  char* report = nullptr;
  bool passed = false;
  const ossf_status st = ossf_semistable_check(
      b, c0, truncation, theta_min, theta_max, n_theta, witness_c, &report);
  const std::string raw = expect_report(st, report, &passed);
  json parsed = parse_report(raw);
  if (!tsv_path.empty()) {
    // Plot-ready residual curve: theta vs lattice residual bound ratio.
    std::ostringstream tsv;
    tsv << "theta\tresidual\tbound\n";
    if (parsed.contains("curve")) {
      for (const auto& row : parsed["curve"]) {
        tsv << row["theta"].get<double>() << '\t'
            << row["residual"].get<double>() << '\t'
            << row["bound"].get<double>() << '\n';
      }
    }
    write_output(tsv_path, tsv.str());
  }
  json wrapped = {{"command", "semistable check"},
                  {"inputs",
                   {{"b", b},
                    {"c0", c0},
                    {"truncation", truncation},
                    {"theta_min", theta_min},
                    {"theta_max", theta_max},
                    {"n_theta", n_theta},
                    {"witness_c", witness_c}}},
                  {"report", std::move(parsed)},
                  {"wall_time_s", timer.seconds()}};
  emit_report(out_path, std::move(wrapped), passed);
  return kExitOk;
}

// The worked example at gamma = 3: check the scaling law for (I, hI),
// check sampled O(2) symmetries on both sides, check the family hI + so(2).
int run_repro(const std::string& case_name, const std::string& out_path) {
  if (case_name != "ofbf-example") {
    throw UsageError("unknown repro case '" + case_name +
                     "' (available: ofbf-example)");
  }
  Timer timer;
  const double gamma = 3.0;
  const double h = (gamma - 2.0) / 2.0;
  auto ident = wrap(ossf_matrix_parse("1,0;0,1"));
  std::ostringstream hs;
  hs << h << ",0;0," << h;
  auto hmat = wrap(ossf_matrix_parse(hs.str().c_str()));
  auto grid = wrap(ossf_matrix_parse("1,0;0,1;0.6,-0.8;-0.4,0.3;1,1"));

  json steps = json::array();
  bool all_passed = true;
  auto record = [&](const std::string& name, ossf_status st, char* report) {
    bool passed = false;
    const std::string raw = expect_report(st, report, &passed);
    all_passed = all_passed && passed;
    steps.push_back({{"step", name}, {"report", parse_report(raw)}});
  };

  char* rep = nullptr;
  ossf_status st = ossf_cov_oss_check("ofbf", gamma, ident.get(), hmat.get(),
                                      2.0, grid.get(), 1e-5, &rep);
  record("scaling law (I, hI), c = 2", st, rep);

  // Eight rotations and eight reflections of O(2).
  for (int k = 0; k < 16; ++k) {
    const double angle = 2.0 * M_PI * (k % 8) / 8.0;
    const bool reflect = k >= 8;
    const double ca = std::cos(angle), sa = std::sin(angle);
    std::ostringstream lit;
    if (reflect) {
      lit << ca << "," << sa << ";" << sa << "," << -ca;
    } else {
      lit << ca << "," << -sa << ";" << sa << "," << ca;
    }
    auto a = wrap(ossf_matrix_parse(lit.str().c_str()));
    for (const char* side : {"dom", "ran"}) {
      rep = nullptr;
      st = ossf_sym_check("ofbf", gamma, side, a.get(), grid.get(), 1e-6, &rep);
      record("O(2) symmetry " + std::string(side) + " #" + std::to_string(k),
             st, rep);
    }
  }

  rep = nullptr;
  st = ossf_family_check("O2", hmat.get(), "range", 50, 1e-8, &rep);
  record("family hI + so(2)", st, rep);

  json wrapped = {{"command", "repro"},
                  {"case", case_name},
                  {"gamma", gamma},
                  {"passed", all_passed},
                  {"steps", std::move(steps)},
                  {"wall_time_s", timer.seconds()}};
  emit_report(out_path, std::move(wrapped), all_passed);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator self-similar random fields: covariance checks, "
               "exponent-set machinery, simulation"};
  app.require_subcommand(1);

  CommonFlags common;
  app.add_option("--config", common.config_path,
                 "JSON config file; explicit flags override its values");

  // Flag storage shared across verbs where the meaning coincides.
  std::string model = "ofbf", side, group, base, matrix_arg, e_arg, h_arg,
              x_arg, grid_arg, case_name;
  double gamma = 3.0, c = 2.0, tol = 1e-6, k_sigma = 4.0;
  double b = 4.0, c0 = 2.0, theta_min = 0.05, theta_max = 2.0, witness_c = 1.5;
  int truncation = 50, n_theta = 101, n_samples = 10000;
  std::uint64_t seed = 1;
  std::string out_path, tsv_path;

  ConfigOverlay cfg;

  auto* cov = app.add_subcommand("cov", "covariance models");
  auto* cov_eval = cov->add_subcommand("eval", "evaluate Gamma(s, t)");
  auto* o_model = cov_eval->add_option("--model", model, "ofbf | fbf");
  auto* o_gamma = cov_eval->add_option("--gamma", gamma, "exponent in (2, 4)");
  cov_eval->add_option("--s", x_arg, "point s (csv file or literal)")
      ->required();
  cov_eval->add_option("--t", h_arg, "point t (csv file or literal)")
      ->required();
  cov_eval->add_option("--out", out_path, "output path (default stdout)");
  cov_eval->callback([&] {
    cfg.apply(o_model, "model", &model);
    cfg.apply(o_gamma, "gamma", &gamma);
    run_cov_eval(model, gamma, x_arg, h_arg, out_path);
  });

  auto* cov_oss = cov->add_subcommand("check-oss", "verify the o.s.s. law");
  auto* o_model2 = cov_oss->add_option("--model", model, "ofbf | fbf");
  auto* o_gamma2 = cov_oss->add_option("--gamma", gamma, "exponent in (2, 4)");
  cov_oss->add_option("--E", e_arg, "domain exponent")->required();
  cov_oss->add_option("--H", h_arg, "range exponent")->required();
  auto* o_c = cov_oss->add_option("--c", c, "scaling factor");
  cov_oss->add_option("--grid", grid_arg, "grid csv, one point per row")
      ->required();
  auto* o_tol = cov_oss->add_option("--tol", tol, "relative tolerance");
  cov_oss->add_option("--out", out_path, "report path (default stdout)");
  cov_oss->callback([&] {
    cfg.apply(o_model2, "model", &model);
    cfg.apply(o_gamma2, "gamma", &gamma);
    cfg.apply(o_c, "c", &c);
    cfg.apply(o_tol, "tol", &tol);
    run_cov_check_oss(model, gamma, e_arg, h_arg, c, grid_arg, tol, out_path);
  });

  auto* sym = app.add_subcommand("sym", "symmetry groups");
  auto* sym_check = sym->add_subcommand("check", "domain/range symmetry check");
  auto* o_model3 = sym_check->add_option("--model", model, "ofbf | fbf");
  auto* o_gamma3 = sym_check->add_option("--gamma", gamma, "exponent in (2, 4)");
  sym_check->add_option("--side", side, "dom | ran")->required();
  sym_check->add_option("--matrix", matrix_arg, "candidate symmetry")
      ->required();
  sym_check->add_option("--grid", grid_arg, "grid csv")->required();
  auto* o_tol2 = sym_check->add_option("--tol", tol, "relative tolerance");
  sym_check->add_option("--out", out_path, "report path (default stdout)");
  sym_check->callback([&] {
    cfg.apply(o_model3, "model", &model);
    cfg.apply(o_gamma3, "gamma", &gamma);
    cfg.apply(o_tol2, "tol", &tol);
    run_sym_check(model, gamma, side, matrix_arg, grid_arg, tol, out_path);
  });

  auto* exp = app.add_subcommand("exp", "exponent sets");
  auto* exp_family = exp->add_subcommand("family", "base + tangent space");
  exp_family->add_option("--group", group, "O:n, SO:n, trivial:n")->required();
  exp_family->add_option("--base", base, "base exponent")->required();
  auto* o_side = exp_family->add_option("--side", side, "range | domain");
  exp_family->add_option("--out", out_path, "output path (default stdout)");
  exp_family->callback([&] {
    if (side.empty()) side = "range";
    (void)o_side;
    run_exp_family(group, base, side, out_path);
  });

  auto* exp_haar = exp->add_subcommand("haar", "Haar commuting exponent");
  exp_haar->add_option("--group", group, "O:n, SO:n, trivial:n")->required();
  exp_haar->add_option("--matrix", matrix_arg, "exponent H")->required();
  exp_haar->add_option("--out", out_path, "output path (default stdout)");
  exp_haar->callback([&] { run_exp_haar(group, matrix_arg, out_path); });

  auto* exp_adm = exp->add_subcommand("admissible", "admissibility check");
  exp_adm->add_option("--matrix", matrix_arg, "exponent H")->required();
  auto* o_tol3 = exp_adm->add_option("--tol", tol, "eigenvalue tolerance");
  exp_adm->add_option("--out", out_path, "report path (default stdout)");
  exp_adm->callback([&] {
    cfg.apply(o_tol3, "tol", &tol);
    run_exp_admissible(matrix_arg, tol, out_path);
  });

  auto* exp_split = exp->add_subcommand("split", "H = H1 (+) H2");
  exp_split->add_option("--matrix", matrix_arg, "exponent H")->required();
  auto* o_tol4 = exp_split->add_option("--tol", tol, "zero-band width");
  exp_split->add_option("--out", out_path, "output path (default stdout)");
  exp_split->callback([&] {
    cfg.apply(o_tol4, "tol", &tol);
    run_exp_split(matrix_arg, tol == 1e-6 ? 1e-7 : tol, out_path);
  });

  auto* polar = app.add_subcommand("polar", "anisotropic polar coordinates");
  polar->add_option("--E", e_arg, "positive-stable exponent")->required();
  polar->add_option("--x", x_arg, "vector (csv file or literal)")->required();
  polar->add_option("--out", out_path, "output path (default stdout)");
  polar->callback([&] { run_polar(e_arg, x_arg, out_path); });

  auto* sim = app.add_subcommand("sim", "Gaussian field simulation");
  auto* sim_sample = sim->add_subcommand("sample", "draw field realizations");
  auto* o_model4 = sim_sample->add_option("--model", model, "ofbf | fbf");
  auto* o_gamma4 = sim_sample->add_option("--gamma", gamma, "exponent in (2, 4)");
  sim_sample->add_option("--grid", grid_arg, "grid csv")->required();
  auto* o_n = sim_sample->add_option("--n", n_samples, "number of realizations");
  auto* o_seed = sim_sample->add_option("--seed", seed, "rng seed");
  sim_sample->add_option("--out", out_path, "samples csv (sidecar: .json)");
  sim_sample->callback([&] {
    cfg.apply(o_model4, "model", &model);
    cfg.apply(o_gamma4, "gamma", &gamma);
    cfg.apply(o_n, "n", &n_samples);
    cfg.apply(o_seed, "seed", &seed);
    run_sim_sample(model, gamma, grid_arg, n_samples, seed, out_path);
  });

  auto* sim_verify = sim->add_subcommand("verify", "empirical o.s.s. test");
  auto* o_model5 = sim_verify->add_option("--model", model, "ofbf | fbf");
  auto* o_gamma5 = sim_verify->add_option("--gamma", gamma, "exponent in (2, 4)");
  sim_verify->add_option("--E", e_arg, "domain exponent")->required();
  sim_verify->add_option("--H", h_arg, "range exponent")->required();
  auto* o_c2 = sim_verify->add_option("--c", c, "scaling factor");
  sim_verify->add_option("--grid", grid_arg, "grid csv")->required();
  auto* o_n2 = sim_verify->add_option("--n", n_samples, "number of realizations");
  auto* o_seed2 = sim_verify->add_option("--seed", seed, "rng seed");
  auto* o_k = sim_verify->add_option("--k-sigma", k_sigma, "pass band width");
  sim_verify->add_option("--out", out_path, "report path (default stdout)");
  sim_verify->callback([&] {
    cfg.apply(o_model5, "model", &model);
    cfg.apply(o_gamma5, "gamma", &gamma);
    cfg.apply(o_c2, "c", &c);
    cfg.apply(o_n2, "n", &n_samples);
    cfg.apply(o_seed2, "seed", &seed);
    cfg.apply(o_k, "k_sigma", &k_sigma);
    run_sim_verify(model, gamma, e_arg, h_arg, c, grid_arg, n_samples, seed,
                   k_sigma, out_path);
  });

  auto* semi = app.add_subcommand("semistable", "semistable counterexample");
  auto* semi_check = semi->add_subcommand("check", "lattice identity + witness");
  auto* o_b = semi_check->add_option("--b", b, "lattice base > 1");
  auto* o_c0 = semi_check->add_option("--c0", c0, "measure ratio > 1");
  auto* o_k2 = semi_check->add_option("--truncation", truncation, "K");
  auto* o_tmin = semi_check->add_option("--theta-min", theta_min, "grid start");
  auto* o_tmax = semi_check->add_option("--theta-max", theta_max, "grid end");
  auto* o_nt = semi_check->add_option("--n-theta", n_theta, "grid size");
  auto* o_wc = semi_check->add_option("--witness-c", witness_c,
                                      "off-lattice c (0 disables)");
  semi_check->add_option("--out", out_path, "report path (default stdout)");
  semi_check->add_option("--tsv", tsv_path, "plot-ready residual curve");
  semi_check->callback([&] {
    cfg.apply(o_b, "b", &b);
    cfg.apply(o_c0, "c0", &c0);
    cfg.apply(o_k2, "truncation", &truncation);
    cfg.apply(o_tmin, "theta_min", &theta_min);
    cfg.apply(o_tmax, "theta_max", &theta_max);
    cfg.apply(o_nt, "n_theta", &n_theta);
    cfg.apply(o_wc, "witness_c", &witness_c);
    run_semistable(b, c0, truncation, theta_min, theta_max, n_theta, witness_c,
                   out_path, tsv_path);
  });

  auto* repro = app.add_subcommand("repro", "re-run a packaged pipeline");
  repro->add_option("--case", case_name, "case name (ofbf-example)")
      ->required();
  repro->add_option("--out", out_path, "report path (default stdout)");
  repro->callback([&] { run_repro(case_name, out_path); });

  try {
    // Pre-scan for --config so the overlay is ready before callbacks run.
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config") cfg.load(argv[i + 1]);
    }
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kExitOk : kExitUsage;
  } catch (const CheckFailed&) {
    return kExitCheckFailed;
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

// btbslab: estimation, verification, and export driver for the interacting
// PDE field laboratory. Links only the C interface of the shared library.
//
// Exit codes: 0 success, 2 usage error, 3 accuracy failure, 4 tolerance breach.
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "btbs/btbs.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAccuracy = 3;
constexpr int kExitTolerance = 4;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_csv(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw CLI::ValidationError("bad number: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

int family_code(const std::string& name) {
  if (name == "btbs") return BTBS_FAMILY_BTBS;
  if (name == "ks") return BTBS_FAMILY_KS;
  if (name == "bs") return BTBS_FAMILY_BS;
  throw CLI::ValidationError("unknown family: " + name);
}

// Grid spec "t=v1,v2,...;x=w1,w2,...": the time grid is the tensor power of
// the t-list over the n axes, the space grid the tensor power of the x-list
// over the d coordinates.
struct GridSpec {
  std::vector<double> t_values{0.7, 1.1};
  std::vector<double> x_values{0.0, 0.4};
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  if (s.empty()) return g;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ';')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("grid part needs key=list: " + part);
    std::string key = part.substr(0, eq);
    auto vals = parse_csv(part.substr(eq + 1));
    if (key == "t") g.t_values = vals;
    else if (key == "x") g.x_values = vals;
    else throw CLI::ValidationError("unknown grid key: " + key);
  }
  return g;
}

std::vector<std::vector<double>> tensor_power(const std::vector<double>& vals, int k) {
  std::vector<std::vector<double>> out{{}};
  for (int a = 0; a < k; ++a) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : out)
      for (double v : vals) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    out = std::move(next);
  }
  return out;
}

struct InitialDataHandle {
  btbs_initial_data* h = nullptr;
  ~InitialDataHandle() { btbs_initial_data_free(h); }
};

// Writes through a temp file; the partial file is removed unless commit() runs.
class OutputFile {
 public:
  explicit OutputFile(std::string path) : path_(std::move(path)) {
    if (path_.empty()) return;
    tmp_ = path_ + ".part";
    file_.open(tmp_, std::ios::trunc);
    if (!file_) throw std::runtime_error("cannot open output file: " + tmp_);
  }
  ~OutputFile() {
    if (!committed_ && !tmp_.empty()) {
      file_.close();
      std::remove(tmp_.c_str());
    }
  }
  std::ostream& stream() { return path_.empty() ? std::cout : file_; }
  void commit() {
    if (path_.empty()) return;
    file_.close();
    if (std::rename(tmp_.c_str(), path_.c_str()) != 0)
      throw std::runtime_error("cannot move output into place: " + path_);
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream file_;
  bool committed_ = false;
};

int lib_status_to_exit(int st) {
  if (st == BTBS_OK) return kExitOk;
  if (st == BTBS_EACCURACY) return kExitAccuracy;
  if (st == BTBS_EINVAL) return kExitUsage;
  return 1;
}

int fail(int st, const char* what) {
  std::cerr << "error (" << what << "): " << btbs_last_error() << "\n";
  return lib_status_to_exit(st);
}

struct CommonArgs {
  std::string family = "btbs";
  int n = 1;
  int d = 1;
  std::string fspec = "cosine:1";
  int p = 0;
  int j = 0;
  std::string t_csv = "1";
  std::string x_csv = "0";
  std::uint64_t seed = 0;
  int workers = 1;
  int order = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs* a) {
  cmd->add_option("--family", a->family, "solution family: btbs, ks, bs");
  cmd->add_option("--n", a->n, "number of time parameters");
  cmd->add_option("--d", a->d, "spatial dimension");
  cmd->add_option("--f", a->fspec,
                  "initial data: cosine:th1,..|gaussian:c1,..,width|const:c");
  cmd->add_option("--p", a->p, "moment power: 0 (u), 1 (first power), 2");
  cmd->add_option("--j", a->j, "1-based axis index where applicable");
  cmd->add_option("--t", a->t_csv, "time point t1,...,tn");
  cmd->add_option("--x", a->x_csv, "space point x1,...,xd");
  cmd->add_option("--seed", a->seed, "rng seed")->envname("BTBS_SEED");
  cmd->add_option("--workers", a->workers, "worker thread count");
  cmd->add_option("--order", a->order, "quadrature order per axis (0 = auto)");
  cmd->add_option("--out", a->out, "output file (default: stdout)");
  cmd->set_config("--config", "", "key=value config file; flags override");
}

void echo_inputs_json(std::ostream& os, const CommonArgs& a, const std::vector<double>& t,
                      const std::vector<double>& x) {
  os << "  \"inputs\": {\n"
     << "    \"family\": \"" << a.family << "\",\n"
     << "    \"n\": " << a.n << ",\n    \"d\": " << a.d << ",\n"
     << "    \"f\": \"" << a.fspec << "\",\n"
     << "    \"p\": " << a.p << ",\n    \"j\": " << a.j << ",\n"
     << "    \"t\": [";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << fmt17(t[i]);
  os << "],\n    \"x\": [";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << fmt17(x[i]);
  os << "],\n    \"seed\": " << a.seed << ",\n    \"workers\": " << a.workers
     << ",\n    \"order\": " << a.order << "\n  }";
}

int run_estimate(const CommonArgs& a, const std::string& method, std::uint64_t samples,
                 double truncation) {
  auto t = parse_csv(a.t_csv);
  auto x = parse_csv(a.x_csv);
  if (static_cast<int>(t.size()) != a.n || static_cast<int>(x.size()) != a.d) {
    std::cerr << "error: --t needs n entries and --x needs d entries\n";
    return kExitUsage;
  }
  InitialDataHandle f;
  f.h = btbs_initial_data_parse(a.fspec.c_str(), a.d);
  if (!f.h) return fail(BTBS_EINVAL, "initial data");
  int fam = family_code(a.family);

  auto t0 = std::chrono::steady_clock::now();
  double re = 0.0, im = 0.0, err = 0.0;
  bool is_mc = (method == "mc");
  int st;
  if (is_mc) {
    st = btbs_mc_moment(fam, f.h, a.n, a.d, a.p, a.j, t.data(), x.data(), samples, a.seed, 0,
                        a.workers, &re, &err);
  } else if (method == "quad") {
    st = btbs_quad_moment(fam, f.h, a.n, a.d, a.p, a.j, t.data(), x.data(), a.order, truncation,
                          &re, &im, &err);
  } else {
    std::cerr << "error: --method must be mc or quad\n";
    return kExitUsage;
  }
  if (st != BTBS_OK) return fail(st, "estimate");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  OutputFile out(a.out);
  std::ostream& os = out.stream();
  os << "{\n  \"version\": \"" << btbs_version() << "\",\n  \"command\": \"estimate\",\n";
  echo_inputs_json(os, a, t, x);
  os << ",\n  \"method\": \"" << method << "\",\n";
  if (is_mc) os << "  \"samples\": " << samples << ",\n";
  os << "  \"value\": [" << fmt17(re) << ", " << fmt17(im) << "],\n"
     << "  \"" << (is_mc ? "stderr" : "quad_error") << "\": " << fmt17(err) << ",\n"
     << "  \"timing_seconds\": " << fmt17(secs) << "\n}\n";
  out.commit();
  return kExitOk;
}

int run_verify(const CommonArgs& a, const std::string& system, const std::string& grid_spec,
               double tol, double h_time, double h_space, const std::string& route) {
  GridSpec grid = parse_grid(grid_spec);
  InitialDataHandle f;
  f.h = btbs_initial_data_parse(a.fspec.c_str(), a.d);
  if (!f.h) return fail(BTBS_EINVAL, "initial data");
  int route_code = (route == "fd") ? 1 : 0;
  bool per_axis = (system == "btbs-lin" || system == "bs-lin" || system == "ks");

  struct Row {
    int j;
    std::vector<double> t, x;
    double lhs_re, lhs_im, rhs_re, rhs_im, abs_res, rel_res;
    std::string notes;
  };
  std::vector<Row> rows;
  double worst = -1.0;
  std::size_t worst_idx = 0;

  for (const auto& t : tensor_power(grid.t_values, a.n)) {
    for (const auto& x : tensor_power(grid.x_values, a.d)) {
      for (int j = per_axis ? 1 : 0; j <= (per_axis ? a.n : 0); ++j) {
        Row r;
        r.j = j;
        r.t = t;
        r.x = x;
        char notes[256] = {0};
        int st = btbs_residual(system.c_str(), f.h, a.n, a.d, j, t.data(), x.data(), h_time,
                               h_space, a.order, route_code, &r.lhs_re, &r.lhs_im, &r.rhs_re,
                               &r.rhs_im, &r.abs_res, &r.rel_res, notes, sizeof(notes));
        if (st != BTBS_OK) return fail(st, "residual");
        r.notes = notes;
        if (r.rel_res > worst) {
          worst = r.rel_res;
          worst_idx = rows.size();
        }
        rows.push_back(std::move(r));
      }
    }
  }

  OutputFile out(a.out);
  std::ostream& os = out.stream();
  os << "# version=" << btbs_version() << " system=" << system << " n=" << a.n << " d=" << a.d
     << " f=" << a.fspec << " tol=" << fmt17(tol) << " h_time=" << fmt17(h_time)
     << " h_space=" << fmt17(h_space) << " order=" << a.order << " route=" << route << "\n";
  os << "system,j";
  for (int i = 1; i <= a.n; ++i) os << ",t" << i;
  for (int i = 1; i <= a.d; ++i) os << ",x" << i;
  os << ",lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,rel_residual,notes\n";
  for (const auto& r : rows) {
    os << system << "," << r.j;
    for (double v : r.t) os << "," << fmt17(v);
    for (double v : r.x) os << "," << fmt17(v);
    os << "," << fmt17(r.lhs_re) << "," << fmt17(r.lhs_im) << "," << fmt17(r.rhs_re) << ","
       << fmt17(r.rhs_im) << "," << fmt17(r.abs_res) << "," << fmt17(r.rel_res) << ",\""
       << r.notes << "\"\n";
  }
  out.commit();

  if (worst > tol) {
    const Row& w = rows[worst_idx];
    std::cerr << "tolerance breach: rel_residual " << fmt17(w.rel_res) << " > " << fmt17(tol)
              << " at j=" << w.j << " t=(";
    for (std::size_t i = 0; i < w.t.size(); ++i) std::cerr << (i ? "," : "") << fmt17(w.t[i]);
    std::cerr << ") x=(";
    for (std::size_t i = 0; i < w.x.size(); ++i) std::cerr << (i ? "," : "") << fmt17(w.x[i]);
    std::cerr << ")\n";
    return kExitTolerance;
  }
  return kExitOk;
}

void write_rows(OutputFile& out, const std::string& format, const CommonArgs& a,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
  std::ostream& os = out.stream();
  if (format == "json") {
    os << "{\n  \"version\": \"" << btbs_version() << "\",\n  \"config\": {\"family\": \""
       << a.family << "\", \"n\": " << a.n << ", \"d\": " << a.d << ", \"f\": \"" << a.fspec
       << "\", \"p\": " << a.p << ", \"j\": " << a.j << ", \"seed\": " << a.seed << "},\n"
       << "  \"columns\": [";
    for (std::size_t i = 0; i < columns.size(); ++i)
      os << (i ? ", " : "") << "\"" << columns[i] << "\"";
    os << "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      os << "    [";
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        os << (c ? ", " : "") << fmt17(rows[r][c]);
      os << "]" << (r + 1 < rows.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
  } else {
    os << "# version=" << btbs_version() << " family=" << a.family << " n=" << a.n
       << " d=" << a.d << " f=" << a.fspec << " p=" << a.p << " j=" << a.j
       << " seed=" << a.seed << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << fmt17(row[c]);
      os << "\n";
    }
  }
}

int run_export(const CommonArgs& a, const std::string& what, const std::string& format,
               const std::string& grid_spec, std::uint64_t samples, const std::string& probes_csv,
               double truncation) {
  InitialDataHandle f;
  f.h = btbs_initial_data_parse(a.fspec.c_str(), a.d);
  if (!f.h) return fail(BTBS_EINVAL, "initial data");
  int fam = family_code(a.family);

  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  if (what == "field-grid") {
    GridSpec grid = parse_grid(grid_spec);
    for (int i = 1; i <= a.n; ++i) columns.push_back("t" + std::to_string(i));
    for (int i = 1; i <= a.d; ++i) columns.push_back("x" + std::to_string(i));
    columns.insert(columns.end(), {"re", "im", "stderr"});
    for (const auto& t : tensor_power(grid.t_values, a.n)) {
      bool boundary = false;
      for (double v : t) boundary = boundary || v == 0.0;
      for (const auto& x : tensor_power(grid.x_values, a.d)) {
        double re = 0.0, im = 0.0, err = 0.0;
        int st = boundary
                     ? btbs_boundary_value(fam, f.h, a.n, a.d, a.p, a.j, t.data(), x.data(), &re,
                                           &im)
                     : btbs_quad_moment(fam, f.h, a.n, a.d, a.p, a.j, t.data(), x.data(), a.order,
                                        truncation, &re, &im, &err);
        if (st != BTBS_OK) return fail(st, "field-grid");
        std::vector<double> row = t;
        row.insert(row.end(), x.begin(), x.end());
        row.insert(row.end(), {re, im, err});
        rows.push_back(std::move(row));
      }
    }
  } else if (what == "sheet-sample") {
    GridSpec grid = parse_grid(grid_spec);
    std::vector<double> knots = grid.t_values;
    if (knots.empty() || knots.front() != 0.0) knots.insert(knots.begin(), 0.0);
    std::vector<int> shape(static_cast<std::size_t>(a.n), static_cast<int>(knots.size()));
    std::vector<double> all_knots;
    for (int axis = 0; axis < a.n; ++axis)
      all_knots.insert(all_knots.end(), knots.begin(), knots.end());
    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    std::vector<double> values(total * static_cast<std::size_t>(a.d));
    int st = btbs_sheet_sample(a.n, a.d, shape.data(), all_knots.data(), a.seed, 0, 0,
                               values.data());
    if (st != BTBS_OK) return fail(st, "sheet-sample");
    for (int i = 1; i <= a.n; ++i) columns.push_back("t" + std::to_string(i));
    for (int i = 1; i <= a.d; ++i) columns.push_back("w" + std::to_string(i));
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::vector<double> row;
      std::size_t rem = flat;
      for (int axis = 0; axis < a.n; ++axis) {
        row.push_back(knots[rem % knots.size()]);
        rem /= knots.size();
      }
      for (int c = 0; c < a.d; ++c)
        row.push_back(values[flat * static_cast<std::size_t>(a.d) + static_cast<std::size_t>(c)]);
      rows.push_back(std::move(row));
    }
  } else if (what == "martingale-profile") {
    auto t = parse_csv(a.t_csv);
    auto x = parse_csv(a.x_csv);
    if (static_cast<int>(t.size()) != a.n || static_cast<int>(x.size()) != a.d) {
      std::cerr << "error: --t needs n entries and --x needs d entries\n";
      return kExitUsage;
    }
    int j = (a.j >= 1) ? a.j : 1;
    std::vector<double> probes;
    if (!probes_csv.empty()) {
      probes = parse_csv(probes_csv);
    } else {
      for (int k = 0; k < 5; ++k)
        probes.push_back(static_cast<double>(k) * t[static_cast<std::size_t>(j - 1)] / 6.0);
    }
    std::vector<double> vals(probes.size()), errs(probes.size());
    int st = btbs_martingale_profile(f.h, a.n, a.d, j, t.data(), x.data(), probes.data(),
                                     static_cast<int>(probes.size()), samples, a.seed, 0,
                                     a.workers, vals.data(), errs.data());
    if (st != BTBS_OK) return fail(st, "martingale-profile");
    columns = {"s", "value", "stderr"};
    for (std::size_t i = 0; i < probes.size(); ++i)
      rows.push_back({probes[i], vals[i], errs[i]});
  } else {
    std::cerr << "error: --what must be field-grid, sheet-sample, or martingale-profile\n";
    return kExitUsage;
  }

  OutputFile out(a.out);
  write_rows(out, format, a, columns, rows);
  out.commit();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"btbslab: interacting PDE field estimation, verification, and export"};
  app.require_subcommand(1);

  CommonArgs est_args, ver_args, exp_args;

  auto* est = app.add_subcommand("estimate", "estimate one field moment");
  add_common(est, &est_args);
  std::string method = "quad";
  std::uint64_t samples = 100000;
  double truncation = 0.0;
  est->add_option("--method", method, "mc or quad");
  est->add_option("--samples", samples, "mc sample count");
  est->add_option("--truncation", truncation, "quad half-width in sqrt(t) units (0 = default)");

  auto* ver = app.add_subcommand("verify", "check PDE residuals on a probe grid");
  add_common(ver, &ver_args);
  std::string system, grid_spec_v, route = "analytic";
  double tol = 1e-6, h_time = 0.0, h_space = 0.0;
  ver->add_option("--system", system,
                  "btbs-lin, btbs-nonlin, bs-lin, bs-nonlin, bs-2n, or ks")
      ->required();
  ver->add_option("--grid", grid_spec_v, "probe grid, e.g. t=0.7,1.1;x=0,0.4");
  ver->add_option("--tol", tol, "relative residual tolerance")->required();
  ver->add_option("--h-time", h_time, "time step for difference stencils");
  ver->add_option("--h-space", h_space, "space step for difference stencils");
  ver->add_option("--route", route, "analytic (eigenfunction) or fd");

  auto* exp = app.add_subcommand("export", "write field, sheet, or profile data");
  add_common(exp, &exp_args);
  std::string what, format = "csv", grid_spec_e, probes_csv;
  std::uint64_t exp_samples = 100000;
  double exp_trunc = 0.0;
  exp->add_option("--what", what, "field-grid, sheet-sample, or martingale-profile")->required();
  exp->add_option("--format", format, "csv or json");
  exp->add_option("--grid", grid_spec_e, "grid, e.g. t=0,0.5,1;x=0,0.4");
  exp->add_option("--samples", exp_samples, "mc sample count");
  exp->add_option("--probes", probes_csv, "probe offsets s1,s2,... in [0, t_j)");
  exp->add_option("--truncation", exp_trunc, "quad half-width in sqrt(t) units (0 = default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (est->parsed()) return run_estimate(est_args, method, samples, truncation);
    if (ver->parsed()) return run_verify(ver_args, system, grid_spec_v, tol, h_time, h_space,
                                         route);
    if (exp->parsed())
      return run_export(exp_args, what, format, grid_spec_e, exp_samples, probes_csv, exp_trunc);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}

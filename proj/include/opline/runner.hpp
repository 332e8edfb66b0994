#pragma once

// Batch runner behind the command-line tool. Builds the report for one
// command into a buffer, so output is all-or-nothing: on error nothing is
// written and the exit code tells the class of failure (1 domain, 2 I/O or
// parse).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "opline/errors.hpp"
#include "opline/matrix_io.hpp"
#include "opline/mobius.hpp"
#include "opline/projective.hpp"
#include "opline/spectral.hpp"
#include "opline/subspace.hpp"
#include "opline/symplectic.hpp"

namespace opline {

enum class Command { check, transform, extract, decompose, eig, probe, orbit, example_r4 };

struct RunConfig {
  Command command = Command::check;
  std::string polarization_path;
  std::string point_path;     // subspace basis or vector, per command
  std::string operator_path;  // symmetric matrix (alternative point source)
  std::string group_spec;
  std::vector<double> grid;
  bool grid_has_inf = false;
  double eps = 0.5;
  double t_max = 20.0;
  double bisect_tol = 1e-8;
  TolerancePolicy tol;
  std::string output_path;  // empty: standard output
};

namespace detail {

inline double parse_real(const std::string& token, const std::string& what) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size() || token.empty())
    throw parse_error("bad " + what + ": '" + token + "'");
  if (!std::isfinite(v)) throw parse_error(what + " must be finite: '" + token + "'");
  return v;
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string::size_type pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    if (comma == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

}  // namespace detail

/// Grid syntax: comma-separated decimals, plus the token `inf` to request
/// the infinity test explicitly.
inline std::pair<std::vector<double>, bool> parse_grid(const std::string& csv) {
  std::vector<double> values;
  bool has_inf = false;
  if (csv.empty()) return {values, has_inf};
  for (const std::string& token : detail::split_commas(csv)) {
    if (token == "inf") {
      has_inf = true;
      continue;
    }
    values.push_back(detail::parse_real(token, "grid value"));
  }
  return {values, has_inf};
}

/// Group element syntax: either four comma-separated coefficients `a,b,c,d`
/// or a tagged one-parameter form K:t, N:t, NP:t, A:t, NL:lambda,t,
/// AL:lambda,t.
inline GroupElement parse_group_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    const auto parts = detail::split_commas(spec);
    if (parts.size() != 4)
      throw parse_error("group element needs 4 coefficients a,b,c,d, got '" + spec + "'");
    return GroupElement(detail::parse_real(parts[0], "coefficient a"),
                        detail::parse_real(parts[1], "coefficient b"),
                        detail::parse_real(parts[2], "coefficient c"),
                        detail::parse_real(parts[3], "coefficient d"));
  }
  const std::string tag = spec.substr(0, colon);
  const auto parts = detail::split_commas(spec.substr(colon + 1));
  const auto one = [&](const char* what) {
    if (parts.size() != 1) throw parse_error(std::string(what) + " takes one parameter: '" + spec + "'");
    return detail::parse_real(parts[0], "group parameter");
  };
  const auto two = [&](const char* what) {
    if (parts.size() != 2)
      throw parse_error(std::string(what) + " takes two parameters lambda,t: '" + spec + "'");
    return std::make_pair(detail::parse_real(parts[0], "lambda"),
                          detail::parse_real(parts[1], "group parameter"));
  };
  if (tag == "K") return subgroup::k(one("K"));
  if (tag == "N") return subgroup::n(one("N"));
  if (tag == "NP") return subgroup::n_prime(one("NP"));
  if (tag == "A") return subgroup::a(one("A"));
  if (tag == "NL") {
    const auto [lambda, t] = two("NL");
    return subgroup::n_lambda(lambda, t);
  }
  if (tag == "AL") {
    const auto [lambda, t] = two("AL");
    return subgroup::a_lambda(lambda, t);
  }
  throw parse_error("unknown subgroup tag '" + tag + "' (use K, N, NP, A, NL, AL)");
}

namespace detail {

inline Polarization load_polarization(const RunConfig& cfg) {
  if (cfg.polarization_path.empty()) throw parse_error("--polarization is required");
  return build_polarization(read_matrix_file(cfg.polarization_path), cfg.tol);
}

inline Subspace load_subspace(const RunConfig& cfg, const Polarization& p) {
  if (cfg.point_path.empty()) throw parse_error("--point is required");
  const Matrix b = read_matrix_file(cfg.point_path);
  p.require_ambient(b.rows(), "point file");
  if (b.cols() == 0) fail(errc::empty_subspace, "point file has no columns");
  return orthonormalize(b, cfg.tol);
}

inline LagrangianPoint load_point(const RunConfig& cfg, const Polarization& p) {
  if (!cfg.operator_path.empty()) {
    if (!cfg.point_path.empty())
      throw parse_error("give either --point or --operator, not both");
    return graph_of_operator(p, read_matrix_file(cfg.operator_path));
  }
  return LagrangianPoint(p, load_subspace(cfg, p));
}

inline Vector load_vector(const RunConfig& cfg, const Polarization& p) {
  if (cfg.point_path.empty()) throw parse_error("--point is required");
  const Matrix m = read_matrix_file(cfg.point_path);
  if (m.cols() != 1)
    throw parse_error("orbit expects a single column vector, got " + std::to_string(m.cols()) +
                      " columns");
  p.require_ambient(m.rows(), "vector file");
  return m.col(0);
}

inline void print_eigen_reports(std::ostream& out, const std::vector<EigenReport>& reports) {
  for (const EigenReport& rep : reports) {
    if (rep.lambda.infinite)
      out << "inf " << rep.multiplicity << "\n";
    else
      out << format_double(rep.lambda.value) << " " << rep.multiplicity << "\n";
  }
}

inline int dispatch(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::check: {
      const Polarization p = load_polarization(cfg);
      const Subspace s = load_subspace(cfg, p);
      out << "lagrangian: " << (is_lagrangian(p, s) ? "true" : "false") << "\n";
      return 0;
    }
    case Command::transform: {
      const Polarization p = load_polarization(cfg);
      const Subspace s = load_subspace(cfg, p);
      if (cfg.group_spec.empty()) throw parse_error("--g is required");
      const GroupElement g = parse_group_spec(cfg.group_spec);
      write_matrix(out, act_subspace(p, g, s).basis());
      return 0;
    }
    case Command::extract: {
      const Polarization p = load_polarization(cfg);
      const BiFredholmPair pair = extract_operator(p, load_point(cfg, p));
      out << "blocks " << pair.generic_rank << " " << (pair.t_hat.rows() - pair.generic_rank)
          << " " << (pair.t_check.rows() - pair.generic_rank) << "\n";
      out << "T_hat\n";
      write_matrix(out, pair.t_hat);
      out << "T_check\n";
      write_matrix(out, pair.t_check);
      return 0;
    }
    case Command::decompose: {
      const Polarization p = load_polarization(cfg);
      const TwoSubspaceDecomposition dec = decompose(p, load_point(cfg, p));
      out << "dims " << dec.m00.rank() << " " << dec.m01.rank() << " " << dec.m10.rank() << " "
          << dec.m11.rank() << " " << dec.m0.rank() << " " << dec.m1.rank() << "\n";
      out << "angles";
      for (double a : dec.generic_angles) out << " " << format_double(a);
      out << "\n";
      return 0;
    }
    case Command::eig: {
      const Polarization p = load_polarization(cfg);
      const LagrangianPoint n = load_point(cfg, p);
      print_eigen_reports(out, eigen_sweep(p, n, cfg.grid));
      return 0;
    }
    case Command::probe: {
      const Polarization p = load_polarization(cfg);
      const LagrangianPoint n = load_point(cfg, p);
      if (cfg.grid_has_inf)
        fail(errc::bad_argument, "probe needs finite lambda values; drop 'inf' from the grid");
      std::vector<double> grid = cfg.grid;
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
      for (double lambda : grid) {
        const ProbeResult r = resolvent_probe(p, n, lambda, cfg.eps, cfg.t_max, cfg.bisect_tol);
        out << format_double(r.lambda) << " " << format_double(r.t_star) << " "
            << format_double(r.sigma_est) << " " << (r.saturated ? "saturated" : "ok") << "\n";
      }
      return 0;
    }
    case Command::orbit: {
      const Polarization p = load_polarization(cfg);
      const OrbitClassification oc = orbit_classify(p, load_vector(cfg, p));
      if (oc.kind == OrbitKind::planar) {
        out << "classification planar\n";
        out << "plane\n";
        write_matrix(out, oc.plane.basis());
      } else {
        out << "classification generic\n";
        out << "directions\n";
        Matrix dirs(oc.directions.front().size(), static_cast<Index>(oc.directions.size()));
        for (std::size_t i = 0; i < oc.directions.size(); ++i)
          dirs.col(static_cast<Index>(i)) = oc.directions[i];
        write_matrix(out, dirs);
      }
      return 0;
    }
    case Command::example_r4: {
      const Polarization p = build_polarization(Matrix::Identity(2, 2), cfg.tol);
      Matrix span(4, 2);
      span << 1, 0, 0, 2, 1, 0, 0, 1;  // columns e1 + e3, 2 e2 + e4
      const LagrangianPoint n(p, orthonormalize(span, cfg.tol));

      out << "eigenvalues\n";
      const std::vector<EigenReport> reports =
          eigen_sweep(p, n, {0.0, 0.5, 1.0, 1.5, 2.0, 2.5});
      print_eigen_reports(out, reports);
      bool eig_ok = reports.size() == 2 && !reports[0].lambda.infinite &&
                    !reports[1].lambda.infinite && reports[0].lambda.value == 1.0 &&
                    reports[1].lambda.value == 2.0 && reports[0].multiplicity == 1 &&
                    reports[1].multiplicity == 1;
      const bool inf_absent = !infinity_eigen_test(p, n).has_value();
      out << "infinity " << (inf_absent ? "absent" : "present") << "\n";

      Matrix expected(2, 2);
      expected << 1, 0, 0, 2;
      const BiFredholmPair pair = extract_operator(p, n);
      const double t_dev = max_abs(Matrix(pair.operator_on_m() - expected));
      out << "t_hat_deviation " << format_double(t_dev) << "\n";

      const std::vector<double> angles = principal_angles(p.m(), n.space());
      double cos_dev = 0.0;
      const double want[2] = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(5.0)};
      if (angles.size() == 2) {
        for (int i = 0; i < 2; ++i)
          cos_dev = std::max(cos_dev, std::abs(std::cos(angles[i]) - want[i]));
      } else {
        cos_dev = 1.0;
      }
      out << "cosine_deviation " << format_double(cos_dev) << "\n";

      const bool ok = eig_ok && inf_absent && t_dev <= 1e-12 && cos_dev <= 1e-12;
      out << "verdict " << (ok ? "ok" : "fail") << "\n";
      return ok ? 0 : 1;
    }
  }
  throw parse_error("unknown command");
}

}  // namespace detail

/// Build the report for cfg. The report goes to cfg.output_path when set,
/// otherwise to `out`; diagnostics go to `err`. Returns the process exit
/// code: 0 success, 1 domain error, 2 I/O or parse error.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ostringstream buf;
  int rc = 0;
  try {
    cfg.tol.validate();
    rc = detail::dispatch(cfg, buf);
  } catch (const parse_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (cfg.output_path.empty()) {
    out << buf.str();
    out.flush();
    return rc;
  }
  std::ofstream f(cfg.output_path);
  if (!f) {
    err << "error: cannot open output file: " << cfg.output_path << "\n";
    return 2;
  }
  f << buf.str();
  f.flush();
  if (!f) {
    err << "error: failed writing output file: " << cfg.output_path << "\n";
    return 2;
  }
  return rc;
}

inline int run(const RunConfig& cfg) { return run(cfg, std::cout, std::cerr); }

}  // namespace opline

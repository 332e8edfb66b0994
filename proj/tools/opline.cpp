// Command-line front end: wires file I/O to the library commands.

#include <iostream>
#include <string>
#include <tuple>

#include "CLI11.hpp"
#include "opline/opline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian subspace toolkit: points of the operator projective line,\n"
               "Mobius actions, chart extraction, and spectral probes"};
  app.require_subcommand(1);

  opline::RunConfig cfg;
  std::string grid_csv;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol.rank_tol,
                    "relative singular-value cutoff for rank decisions (default 1e-10)");
    sub->add_option("--out", cfg.output_path, "write the report to this file instead of stdout");
  };
  const auto add_polarization = [&](CLI::App* sub) {
    sub->add_option("--polarization", cfg.polarization_path,
                    "file holding the n x n orthogonal matrix U of the polarization");
  };
  const auto add_point = [&](CLI::App* sub) {
    sub->add_option("--point", cfg.point_path,
                    "file holding spanning columns of a subspace of R^(2n)");
  };
  const auto add_operator = [&](CLI::App* sub) {
    sub->add_option("--operator", cfg.operator_path,
                    "file holding a symmetric n x n matrix; its graph is the point");
  };
  const auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--grid", grid_csv,
                    "comma-separated lambda values; the token inf requests the infinity test");
  };

  CLI::App* check = app.add_subcommand("check", "report whether a subspace is Lagrangian");
  add_polarization(check);
  add_point(check);
  add_common(check);

  CLI::App* transform = app.add_subcommand("transform", "apply a group element to a subspace");
  add_polarization(transform);
  add_point(transform);
  transform->add_option("--g", cfg.group_spec,
                        "group element: a,b,c,d or K:t, N:t, NP:t, A:t, NL:lambda,t, AL:lambda,t");
  add_common(transform);

  CLI::App* extract =
      app.add_subcommand("extract", "extract the two chart operators of a point");
  add_polarization(extract);
  add_point(extract);
  add_operator(extract);
  add_common(extract);

  CLI::App* decompose =
      app.add_subcommand("decompose", "five-subspace decomposition of (M, point)");
  add_polarization(decompose);
  add_point(decompose);
  add_operator(decompose);
  add_common(decompose);

  CLI::App* eig = app.add_subcommand("eig", "sweep a lambda grid for eigenvalues of a point");
  add_polarization(eig);
  add_point(eig);
  add_operator(eig);
  add_grid(eig);
  add_common(eig);

  CLI::App* probe =
      app.add_subcommand("probe", "estimate distance to spectrum at each grid lambda");
  add_polarization(probe);
  add_point(probe);
  add_operator(probe);
  add_grid(probe);
  probe->add_option("--eps", cfg.eps, "adjunct neighbourhood width in (0,1) (default 0.5)");
  probe->add_option("--tmax", cfg.t_max, "largest flow time searched (default 20)");
  add_common(probe);

  CLI::App* orbit = app.add_subcommand("orbit", "classify the group orbit of one vector");
  add_polarization(orbit);
  orbit->add_option("--point", cfg.point_path, "file holding one column vector in R^(2n)");
  add_common(orbit);

  CLI::App* example = app.add_subcommand(
      "example-r4", "run the built-in R^4 worked example and compare against golden values");
  add_common(example);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (check->parsed()) cfg.command = opline::Command::check;
  if (transform->parsed()) cfg.command = opline::Command::transform;
  if (extract->parsed()) cfg.command = opline::Command::extract;
  if (decompose->parsed()) cfg.command = opline::Command::decompose;
  if (eig->parsed()) cfg.command = opline::Command::eig;
  if (probe->parsed()) cfg.command = opline::Command::probe;
  if (orbit->parsed()) cfg.command = opline::Command::orbit;
  if (example->parsed()) cfg.command = opline::Command::example_r4;

  try {
    std::tie(cfg.grid, cfg.grid_has_inf) = opline::parse_grid(grid_csv);
  } catch (const opline::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  return opline::run(cfg);
}

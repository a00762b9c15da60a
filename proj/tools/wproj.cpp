#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wproj/matrix_io.hpp"
#include "wproj/projections.hpp"
#include "wproj/splines.hpp"
#include "wproj/verify.hpp"
#include "wproj/winverse.hpp"

namespace {

using nlohmann::json;
using namespace wproj;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

struct CommonOpts {
  ToleranceConfig tol;
  std::uint64_t seed = 0;
  std::string output;  // empty = stdout
};

double env_default_tol() {
  if (const char* raw = std::getenv("WPROJ_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (end != raw && v > 0.0 && v < 1.0) return v;
  }
  return ToleranceConfig{}.residual_tol;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--tol", opts.tol.residual_tol, "residual tolerance")
      ->default_val(env_default_tol());
  cmd->add_option("--rank-tol", opts.tol.rank_rel_tol, "relative singular-value cutoff")
      ->default_val(ToleranceConfig{}.rank_rel_tol);
  cmd->add_option("--seed", opts.seed, "root seed for randomized commands")->default_val(0);
  cmd->add_option("--output,-o", opts.output, "write the result document here (default stdout)");
}

json tolerances_json(const ToleranceConfig& tol) {
  return json{{"residual_tol", tol.residual_tol}, {"rank_rel_tol", tol.rank_rel_tol}};
}

json subspace_to_json(const Subspace& s) { return io::matrix_to_json(s.basis()); }

json family_to_json(const AffineOperatorFamily& fam) {
  return json{{"base", io::matrix_to_json(fam.base)},
              {"range_basis", subspace_to_json(fam.range_space)},
              {"domain_basis", subspace_to_json(fam.domain_space)}};
}

json vector_to_json(const Vector& v) { return io::matrix_to_json(Matrix(v)); }

json flag_to_json(const Flag& f) { return json{{"pass", f.pass}, {"residual", f.residual}}; }

json classify_to_json(const ClassifyReport& rep) {
  json j{{"a_selfadjoint", flag_to_json(rep.a_selfadjoint)},
         {"a_idempotent", flag_to_json(rep.a_idempotent)},
         {"a_projection", rep.a_projection},
         {"routes_agree", rep.routes_agree},
         {"route_defining", flag_to_json(rep.route_defining)},
         {"route_split", flag_to_json(rep.route_split)},
         {"route_oblique", flag_to_json(rep.route_oblique)},
         {"a_contraction", flag_to_json(rep.a_contraction)},
         {"a_positive", flag_to_json(rep.a_positive)},
         {"seminorm_of_T", rep.seminorm_of_t}};
  if (rep.a_projection_into_s) {
    j["a_projection_into_S"] = *rep.a_projection_into_s;
    j["range_in_S"] = flag_to_json(*rep.range_in_s);
    j["projects_onto_S"] = flag_to_json(*rep.projects_onto_s);
  }
  return j;
}

json inverse_report_to_json(const InverseCheckReport& rep) {
  json eqs = json::array();
  for (const auto& eq : rep.equations)
    eqs.push_back(json{{"equation", eq.name}, {"residual", eq.residual}, {"pass", eq.pass}});
  json j{{"kind", inverse_kind_name(rep.kind)}, {"pass", rep.pass}, {"equations", std::move(eqs)}};
  if (rep.system_vs_equations_agree) j["system_vs_equations_agree"] = *rep.system_vs_equations_agree;
  return j;
}

void emit(const json& result, const json& residuals, const json& dims, const CommonOpts& opts) {
  const json doc{{"result", result},
                 {"residuals", residuals},
                 {"dims", dims},
                 {"tolerances", tolerances_json(opts.tol)}};
  if (opts.output.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + opts.output);
  out << doc.dump(2) << "\n";
}

InverseKind parse_kind(const std::string& name) {
  if (name == "a-inverse") return InverseKind::a_inverse;
  if (name == "restricted") return InverseKind::restricted;
  if (name == "a1a2") return InverseKind::a1a2;
  if (name == "weak-a1a2") return InverseKind::weak_a1a2;
  if (name == "wgi") return InverseKind::wgi;
  if (name == "weak-wgi-system") return InverseKind::weak_wgi_system;
  throw InputError("unknown check kind: " + name);
}

struct Paths {
  std::string a, a1, a2, b, t, g, c, m, s, x, y;
};

int run_cli(int argc, char** argv) {
  CLI::App app{"projections, splines and generalized inverses under a PSD seminorm"};
  app.require_subcommand(1);

  Paths paths;
  CommonOpts opts;
  std::string kind_name;
  int verify_dim = 8;
  int verify_trials = 100;
  int exit_code = kExitOk;

  auto subcommand = [&](const std::string& name, const std::string& desc) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    add_common(cmd, opts);
    return cmd;
  };
  auto need = [](CLI::App* cmd, const char* flag, std::string& slot, const char* what) {
    cmd->add_option(flag, slot, what)->required()->check(CLI::ExistingFile);
  };

  // decompose: blocks of A relative to (S, S^perp)
  {
    CLI::App* cmd = subcommand("decompose", "block decomposition of a PSD operator");
    need(cmd, "--A", paths.a, "weight operator file");
    need(cmd, "--S", paths.s, "subspace file (column span)");
    cmd->callback([&] {
      const PsdOperator a(io::read_matrix_file(paths.a), opts.tol);
      const Subspace s = io::read_subspace_file(paths.s, opts.tol);
      const BlockDecomposition dec = block_decompose(a, s);
      const double roundtrip = (assemble_from_blocks(dec) - a.mat()).norm() /
                               residual_scale({a.mat().norm()});
      emit(json{{"a", io::matrix_to_json(dec.a)},
                {"b", io::matrix_to_json(dec.b)},
                {"c", io::matrix_to_json(dec.c)},
                {"s_basis", subspace_to_json(dec.subspace)},
                {"complement_basis", subspace_to_json(dec.complement)}},
           json{{"reassembly", roundtrip}},
           json{{"n", a.dim()}, {"dim_S", s.dim()}}, opts);
    });
  }

  // pinv
  {
    CLI::App* cmd = subcommand("pinv", "Moore-Penrose inverse");
    need(cmd, "--A", paths.a, "matrix file");
    cmd->callback([&] {
      const Matrix m = io::read_matrix_file(paths.a);
      const Matrix p = pseudo_inverse(m, opts.tol);
      const double s1 = (m * p * m - m).norm() / residual_scale({m.norm()});
      const double s2 = (p * m * p - p).norm() / residual_scale({p.norm()});
      const double s3 = (m * p - (m * p).adjoint()).norm() / residual_scale({(m * p).norm()});
      const double s4 = (p * m - (p * m).adjoint()).norm() / residual_scale({(p * m).norm()});
      emit(io::matrix_to_json(p),
           json{{"penrose_1", s1}, {"penrose_2", s2}, {"penrose_3", s3}, {"penrose_4", s4}},
           json{{"rows", m.rows()}, {"cols", m.cols()}}, opts);
    });
  }

  // project: distinguished projection P_{A,S}
  {
    CLI::App* cmd = subcommand("project", "distinguished projection onto S");
    need(cmd, "--A", paths.a, "weight operator file");
    need(cmd, "--S", paths.s, "subspace file");
    cmd->callback([&] {
      const PsdOperator a(io::read_matrix_file(paths.a), opts.tol);
      const Subspace s = io::read_subspace_file(paths.s, opts.tol);
      const CompatibilityCertificate cert = compatibility_certificate(a, s, opts.tol);
      const Matrix q = distinguished_projection(a, s, opts.tol);
      emit(io::matrix_to_json(q),
           json{{"compatibility", cert.residual},
                {"membership", p_membership_residual(a, s, q, opts.tol)}},
           json{{"n", a.dim()}, {"dim_S", s.dim()}, {"dim_N", cert.degenerate.dim()}}, opts);
    });
  }

  // pfamily / pifamily
  {
    CLI::App* cmd = subcommand("pfamily", "the family of A-selfadjoint projections onto S");
    need(cmd, "--A", paths.a, "weight operator file");
    need(cmd, "--S", paths.s, "subspace file");
    cmd->callback([&] {
      const PsdOperator a(io::read_matrix_file(paths.a), opts.tol);
      const Subspace s = io::read_subspace_file(paths.s, opts.tol);
      const AffineOperatorFamily fam = projection_family(a, s, opts.tol);
      emit(family_to_json(fam),
           json{{"base_membership", p_membership_residual(a, s, fam.base, opts.tol)}},
           json{{"n", a.dim()},
                {"dim_S", s.dim()},
                {"param_rows", fam.param_rows()},
                {"param_cols", fam.param_cols()}},
           opts);
    });
  }
  {
    CLI::App* cmd = subcommand("pifamily", "the family of A-projections into S");
    need(cmd, "--A", paths.a, "weight operator file");
    need(cmd, "--S", paths.s, "subspace file");
    cmd->callback([&] {
      const PsdOperator a(io::read_matrix_file(paths.a), opts.tol);
      const Subspace s = io::read_subspace_file(paths.s, opts.tol);
      const AffineOperatorFamily fam = weighted_projection_family(a, s, opts.tol);
      emit(family_to_json(fam),
           json{{"base_membership", pi_membership_residual(a, s, fam.base)}},
           json{{"n", a.dim()},
                {"dim_S", s.dim()},
                {"param_rows", fam.param_rows()},
                {"param_cols", fam.param_cols()}},
           opts);
    });
  }

  // classify
  {
    CLI::App* cmd = subcommand("classify", "classify an operator against a weight");
    need(cmd, "--A", paths.a, "weight operator file");
    need(cmd, "--T", paths.t, "operator file");
    cmd->add_option("--S", paths.s, "optional subspace file")->check(CLI::ExistingFile);
    cmd->callback([&] {
      const PsdOperator a(io::read_matrix_file(paths.a), opts.tol);
      const Matrix t = io::read_matrix_file(paths.t);
      std::optional<Subspace> s;
      if (!paths.s.empty()) s = io::read_subspace_file(paths.s, opts.tol);
      const ClassifyReport rep = classify_operator(a, t, s, opts.tol);
      emit(classify_to_json(rep),
           json{{"defining", rep.route_defining.residual},
                {"selfadjoint", rep.a_selfadjoint.residual},
                {"idempotent", rep.a_idempotent.residual}},
           json{{"n", a.dim()}}, opts);
    });
  }

  // spline
  {
    CLI::App* cmd = subcommand("spline", "interpolants of x over the coset x + S");
    need(cmd, "--C", paths.c, "factor operator file");
    need(cmd, "--S", paths.s, "subspace file");
    need(cmd, "--x", paths.x, "vector file");
    cmd->callback([&] {
      const Matrix c = io::read_matrix_file(paths.c);
      const Subspace s = io::read_subspace_file(paths.s, opts.tol);
      const Vector x = io::read_vector_file(paths.x);
      const AffineVectorFamily fam = spline_set(c, s, x, opts.tol);
      const double dist = weighted_distance(c, s, x, opts.tol);
      emit(json{{"representative", vector_to_json(fam.representative)},
                {"direction_basis", subspace_to_json(fam.direction_space)},
                {"distance", dist}},
           json{{"coset_membership", s.containment_residual(fam.representative - x)}},
           json{{"n", s.ambient_dim()}, {"dim_S", s.dim()}, {"dim_N", fam.direction_space.dim()}},
           opts);
    });
  }

  // alss
  {
    CLI::App* cmd = subcommand("alss", "weighted least-squares solution of B x = y");
    need(cmd, "--A", paths.a, "weight operator file");
    need(cmd, "--B", paths.b, "operator file");
    need(cmd, "--y", paths.y, "vector file");
    cmd->callback([&] {
      const PsdOperator a(io::read_matrix_file(paths.a), opts.tol);
      const Matrix b = io::read_matrix_file(paths.b);
      const Vector y = io::read_vector_file(paths.y);
      const Vector x = a_lss_solve(a, b, y, opts.tol);
      const Matrix gram = b.adjoint() * a.mat() * b;
      const Vector rhs = b.adjoint() * (a.mat() * y);
      const double normal_eq = (gram * x - rhs).norm() / residual_scale({gram.norm(), rhs.norm()});
      emit(json{{"x", vector_to_json(x)}, {"objective", seminorm(a, y - b * x, opts.tol)}},
           json{{"normal_equation", normal_eq}},
           json{{"rows", b.rows()}, {"cols", b.cols()}}, opts);
    });
  }

  // ainv / rainv / a12inv / wgi
  {
    CLI::App* cmd = subcommand("ainv", "the affine family of A-inverses of B");
    need(cmd, "--A", paths.a, "weight operator file");
    need(cmd, "--B", paths.b, "operator file");
    cmd->callback([&] {
      const PsdOperator a(io::read_matrix_file(paths.a), opts.tol);
      const Matrix b = io::read_matrix_file(paths.b);
      const AffineOperatorFamily fam = a_inverse_family(a, b, opts.tol);
      const InverseCheckReport rep =
          inverse_check(a, std::nullopt, b, fam.base, InverseKind::a_inverse, std::nullopt, opts.tol);
      emit(family_to_json(fam), json{{"base_defining", rep.equations.front().residual}},
           json{{"rows", b.rows()},
                {"cols", b.cols()},
                {"param_rows", fam.param_rows()},
                {"param_cols", fam.param_cols()}},
           opts);
    });
  }
  {
    CLI::App* cmd = subcommand("rainv", "A-inverse of B restricted to M");
    need(cmd, "--A", paths.a, "weight operator file");
    need(cmd, "--B", paths.b, "operator file");
    need(cmd, "--M", paths.m, "restriction subspace file");
    cmd->callback([&] {
      const PsdOperator a(io::read_matrix_file(paths.a), opts.tol);
      const Matrix b = io::read_matrix_file(paths.b);
      const Subspace m = io::read_subspace_file(paths.m, opts.tol);
      const Matrix g = restricted_a_inverse(a, b, m, opts.tol);
      const InverseCheckReport rep =
          inverse_check(a, std::nullopt, b, g, InverseKind::restricted, m, opts.tol);
      json residuals;
      for (const auto& eq : rep.equations) residuals[eq.name] = eq.residual;
      emit(io::matrix_to_json(g), residuals,
           json{{"rows", b.rows()}, {"cols", b.cols()}, {"dim_M", m.dim()}}, opts);
    });
  }
  auto dual_weight_command = [&](const std::string& name, const std::string& desc, auto compute,
                                 InverseKind kind) {
    CLI::App* cmd = subcommand(name, desc);
    need(cmd, "--A1", paths.a1, "first weight operator file");
    need(cmd, "--A2", paths.a2, "second weight operator file");
    need(cmd, "--B", paths.b, "operator file");
    cmd->callback([&, compute, kind] {
      const PsdOperator a1(io::read_matrix_file(paths.a1), opts.tol);
      const PsdOperator a2(io::read_matrix_file(paths.a2), opts.tol);
      const Matrix b = io::read_matrix_file(paths.b);
      const Matrix g = compute(a1, a2, b, opts.tol);
      const InverseCheckReport rep = inverse_check(a1, a2, b, g, kind, std::nullopt, opts.tol);
      json residuals;
      for (const auto& eq : rep.equations) residuals[eq.name] = eq.residual;
      emit(io::matrix_to_json(g), residuals, json{{"rows", b.rows()}, {"cols", b.cols()}}, opts);
    });
  };
  dual_weight_command("a12inv", "minimum-seminorm weighted inverse", a1a2_inverse,
                      InverseKind::a1a2);
  dual_weight_command("wgi", "weighted generalized inverse", weighted_generalized_inverse,
                      InverseKind::wgi);

  // check
  {
    CLI::App* cmd = subcommand("check", "verify a candidate against a named characterization");
    cmd->add_option("--kind", kind_name,
                    "a-projection | a-inverse | restricted | a1a2 | weak-a1a2 | wgi | "
                    "weak-wgi-system")
        ->required();
    cmd->add_option("--A", paths.a, "weight operator file")->check(CLI::ExistingFile);
    cmd->add_option("--A1", paths.a1, "first weight operator file")->check(CLI::ExistingFile);
    cmd->add_option("--A2", paths.a2, "second weight operator file")->check(CLI::ExistingFile);
    cmd->add_option("--B", paths.b, "operator file")->check(CLI::ExistingFile);
    cmd->add_option("--T", paths.t, "operator file (a-projection kind)")->check(CLI::ExistingFile);
    cmd->add_option("--G", paths.g, "candidate inverse file")->check(CLI::ExistingFile);
    cmd->add_option("--M", paths.m, "restriction subspace file")->check(CLI::ExistingFile);
    cmd->add_option("--S", paths.s, "target subspace file")->check(CLI::ExistingFile);
    cmd->callback([&] {
      if (kind_name == "a-projection") {
        if (paths.a.empty() || paths.t.empty())
          throw InputError("check a-projection needs --A and --T");
        const PsdOperator a(io::read_matrix_file(paths.a), opts.tol);
        const Matrix t = io::read_matrix_file(paths.t);
        std::optional<Subspace> s;
        if (!paths.s.empty()) s = io::read_subspace_file(paths.s, opts.tol);
        const ClassifyReport rep = classify_operator(a, t, s, opts.tol);
        const bool pass = rep.a_projection && (!s || *rep.a_projection_into_s);
        emit(classify_to_json(rep), json{{"defining", rep.route_defining.residual}},
             json{{"n", a.dim()}}, opts);
        exit_code = pass ? kExitOk : kExitCheckFailed;
        return;
      }
      const InverseKind kind = parse_kind(kind_name);
      const std::string first = !paths.a1.empty() ? paths.a1 : paths.a;
      if (first.empty() || paths.b.empty() || paths.g.empty())
        throw InputError("check " + kind_name + " needs a weight, --B and --G");
      const PsdOperator a1(io::read_matrix_file(first), opts.tol);
      std::optional<PsdOperator> a2;
      if (!paths.a2.empty()) a2 = PsdOperator(io::read_matrix_file(paths.a2), opts.tol);
      const Matrix b = io::read_matrix_file(paths.b);
      const Matrix g = io::read_matrix_file(paths.g);
      std::optional<Subspace> m;
      if (!paths.m.empty()) m = io::read_subspace_file(paths.m, opts.tol);
      const InverseCheckReport rep = inverse_check(a1, a2, b, g, kind, m, opts.tol);
      json residuals;
      for (const auto& eq : rep.equations) residuals[eq.name] = eq.residual;
      emit(inverse_report_to_json(rep), residuals,
           json{{"rows", b.rows()}, {"cols", b.cols()}}, opts);
      exit_code = rep.pass ? kExitOk : kExitCheckFailed;
    });
  }

  // verify
  {
    CLI::App* cmd = subcommand("verify", "run the full property suite on random instances");
    cmd->add_option("--n", verify_dim, "largest ambient dimension")->default_val(8);
    cmd->add_option("--trials", verify_trials, "instances per property")->default_val(100);
    cmd->callback([&] {
      if (verify_dim < 1 || verify_trials < 1)
        throw InputError("verify: --n and --trials must be positive");
      verify::VerifyOptions vopts;
      vopts.max_dim = verify_dim;
      vopts.trials = verify_trials;
      vopts.seed = opts.seed;
      const auto results = verify::run_suite(vopts);
      json list = json::array();
      bool all_pass = true;
      double worst = 0.0;
      for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        worst = std::max(worst, r.worst_residual);
        list.push_back(json{{"property", r.name},
                            {"pass", r.pass},
                            {"worst_residual", r.worst_residual},
                            {"trials", r.trials},
                            {"failures", r.failures},
                            {"detail", r.detail}});
      }
      emit(list, json{{"worst", worst}},
           json{{"n", verify_dim}, {"trials", verify_trials}, {"seed", opts.seed}}, opts);
      exit_code = all_pass ? kExitOk : kExitCheckFailed;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const wproj::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const wproj::PreconditionError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

#include "carnot/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "carnot/constructions.hpp"
#include "carnot/errors.hpp"
#include "carnot/group_geometry.hpp"
#include "carnot/io.hpp"
#include "carnot/rank_analysis.hpp"
#include "carnot/rigidity.hpp"

namespace carnot {

namespace {

AlgebraPtr load_algebra(const std::string& spec) {
  if (std::filesystem::exists(spec)) {
    std::ifstream in(spec);
    if (!in) throw CarnotError(Errc::parse_error, "cannot read " + spec);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_algebra(buffer.str());
  }
  return catalog(spec);  // throws UnknownCatalogName on miss
}

AlgebraPtr load_validated(const std::string& spec) {
  auto alg = load_algebra(spec);
  auto report = validate(*alg);
  if (!report.pass()) {
    std::string detail = report.failures.empty() ? "" : (": " + report.failures.front());
    throw CarnotError(Errc::invalid_algebra, spec + " fails validation" + detail);
  }
  return alg;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

void print_subspace_rows(std::ostream& out, const Subspace& s, const std::string& pad) {
  for (const auto& row : s.basis()) out << pad << format_vector(row) << "\n";
}

SurveyParams survey_params_from(long seed, long grid, long sparsity, long samples) {
  SurveyParams p;
  p.seed = static_cast<std::uint64_t>(seed);
  p.grid_radius = grid;
  p.sparsity = static_cast<std::size_t>(sparsity);
  p.samples = static_cast<std::size_t>(samples);
  return p;
}

int command_validate(const std::string& alg_spec, std::ostream& out) {
  auto alg = load_algebra(alg_spec);
  auto report = validate(*alg);
  out << "algebra " << alg->name() << "\n";
  out << "check storage " << (report.storage_ok ? "pass" : "fail") << "\n";
  out << "check grading " << (report.grading_ok ? "pass" : "fail") << "\n";
  out << "check jacobi " << (report.jacobi_ok ? "pass" : "fail") << "\n";
  out << "check generation " << (report.generation_ok ? "pass" : "fail") << "\n";
  for (const auto& f : report.failures) out << "  " << f << "\n";
  out << "validate " << (report.pass() ? "pass" : "fail") << "\n";
  return report.pass() ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"carnot: exact structure-constant toolkit for Carnot algebras"};
  app.require_subcommand(1);

  std::string alg_spec, other_spec;
  std::string x_spec, y_spec, p_spec, q_spec, w_spec, v_spec;
  std::string t_list, w1_rows, assume_name;
  std::string wm_rows, wpm_rows, glue_rows, x0_spec, x0p_spec, u1_rows, u1p_rows;
  long layer = 0, wedge_k = -1;
  long seed = 0, grid = 2, sparsity = 3, samples = 500;
  bool require_rigid = false;
  bool list_names = false;

  auto add_survey_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "search seed (default 0)");
    cmd->add_option("--grid", grid, "integer grid radius (default 2)");
    cmd->add_option("--sparsity", sparsity, "support sparsity bound (default 3)");
    cmd->add_option("--samples", samples, "random sample count (default 500)");
  };

  auto* cmd_validate = app.add_subcommand("validate", "check the Carnot axioms");
  cmd_validate->add_option("algebra", alg_spec, "catalog name or file")->required();

  auto* cmd_info = app.add_subcommand("info", "basic invariants of an algebra");
  cmd_info->add_option("algebra", alg_spec, "catalog name or file")->required();

  auto* cmd_rank = app.add_subcommand("rank", "rank of ad(x), optionally layer-restricted");
  cmd_rank->add_option("algebra", alg_spec)->required();
  cmd_rank->add_option("--x", x_spec, "element (vector or label)")->required();
  cmd_rank->add_option("--layer", layer, "restrict ad(x) to the given layer");
  cmd_rank->add_option("--wedge", wedge_k, "also run the exterior-power test at this k");

  auto* cmd_analyze = app.add_subcommand("analyze", "minimal-rank survey and derived subspaces");
  cmd_analyze->add_option("algebra", alg_spec)->required();
  add_survey_flags(cmd_analyze);

  auto* cmd_rigidity = app.add_subcommand("rigidity", "build a rigidity certificate");
  cmd_rigidity->add_option("algebra", alg_spec)->required();
  add_survey_flags(cmd_rigidity);
  cmd_rigidity->add_option("--w1", w1_rows, "user-asserted W1 rows 'a,b,...;c,d,...'");
  cmd_rigidity->add_option("--assume", assume_name, "assert the algebra is this catalog entry");
  cmd_rigidity->add_flag("--require-rigid", require_rigid, "exit 1 unless the verdict is rigid");

  auto* cmd_product = app.add_subcommand("product", "direct, central, or level-one product");
  std::string product_kind;
  cmd_product->add_option("kind", product_kind, "direct | central | level1")->required();
  cmd_product->add_option("a", alg_spec)->required();
  cmd_product->add_option("b", other_spec)->required();
  cmd_product->add_option("--wm", wm_rows, "central: rows of Wm in A's top layer");
  cmd_product->add_option("--wpm", wpm_rows, "central: rows of Wm' in B's top layer");
  cmd_product->add_option("--map", glue_rows, "central: matrix of f with dim(Wm) columns");
  cmd_product->add_option("--x0", x0_spec, "level1: X0 in A's first layer");
  cmd_product->add_option("--x0p", x0p_spec, "level1: X0' in B's first layer");
  cmd_product->add_option("--u1", u1_rows, "level1: complement of R*X0");
  cmd_product->add_option("--u1p", u1p_rows, "level1: complement of R*X0'");

  auto* cmd_bch = app.add_subcommand("bch", "group product in exponential coordinates");
  cmd_bch->add_option("algebra", alg_spec)->required();
  cmd_bch->add_option("--x", x_spec)->required();
  cmd_bch->add_option("--y", y_spec)->required();

  auto* cmd_distance = app.add_subcommand("distance", "homogeneous distance d(p, q)");
  cmd_distance->add_option("algebra", alg_spec)->required();
  cmd_distance->add_option("--p", p_spec);
  cmd_distance->add_option("--q", q_spec);
  long quasi_samples = 0;
  cmd_distance->add_option("--quasi-constant", quasi_samples,
                           "report the observed quasi-triangle constant over N seeded triples");

  cmd_distance->add_option("--seed", seed, "seed for --quasi-constant (default 0)");

  auto* cmd_probe = app.add_subcommand("probe-divergence", "normalized coset divergence ratios");
  cmd_probe->add_option("algebra", alg_spec)->required();
  cmd_probe->add_option("--w", w_spec, "horizontal direction")->required();
  cmd_probe->add_option("--v", v_spec, "offset point")->required();
  cmd_probe->add_option("--t", t_list, "comma-separated increasing t values")->required();

  auto* cmd_catalog = app.add_subcommand("catalog", "emit a named algebra file");
  cmd_catalog->add_option("name", alg_spec, "catalog name");
  cmd_catalog->add_flag("--list", list_names, "list catalog families");

  std::vector<const char*> argv;
  argv.push_back("carnot");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_validate->parsed()) return command_validate(alg_spec, out);

    if (cmd_info->parsed()) {
      auto alg = load_algebra(alg_spec);
      out << "name " << alg->name() << "\n";
      out << "step " << alg->step() << "\n";
      out << "layers";
      for (auto d : alg->layer_dims()) out << " " << d;
      out << "\n";
      out << "dim " << alg->dim() << "\n";
      out << "hausdorff-dimension " << hausdorff_dimension(*alg) << "\n";
      out << "basis";
      for (const auto& l : alg->labels()) out << " " << l;
      out << "\n";
      return 0;
    }

    if (cmd_rank->parsed()) {
      auto alg = load_validated(alg_spec);
      Element x = parse_element(alg, x_spec);
      if (layer > 0) {
        out << "rank-on-layer " << layer << " "
            << rank_on_layer(x, static_cast<std::size_t>(layer)) << "\n";
      } else {
        out << "rank " << rank_of(x) << "\n";
      }
      if (wedge_k >= 0)
        out << "wedge " << wedge_k << " "
            << (wedge_rank_test(x, static_cast<std::size_t>(wedge_k)) ? "true" : "false") << "\n";
      return 0;
    }

    if (cmd_analyze->parsed()) {
      auto alg = load_validated(alg_spec);
      SurveyParams params = survey_params_from(seed, grid, sparsity, samples);
      RankReport report = min_rank_survey(alg, std::nullopt, params);
      out << "algebra " << alg->name() << "\n";
      out << "layers";
      for (auto d : alg->layer_dims()) out << " " << d;
      out << "\n";
      out << "r1 " << report.r_min_found << "\n";
      out << "generic-rank " << report.generic_rank << "\n";
      out << "certification " << to_string(report.certification) << "\n";
      out << "witnesses " << report.witnesses.size() << "\n";
      const std::size_t shown = std::min<std::size_t>(report.witnesses.size(), 8);
      for (std::size_t t = 0; t < shown; ++t)
        out << "  " << format_element(report.witnesses[t]) << "\n";
      if (shown < report.witnesses.size())
        out << "  ... " << report.witnesses.size() - shown << " more\n";
      out << "W1 dim " << report.span.dim() << "\n";
      out << "W1 basis\n";
      print_subspace_rows(out, report.span, "  ");
      for (std::size_t l = 1; l + 1 <= alg->step(); ++l) {
        RankReport layered = min_rank_survey(alg, l, params);
        out << "r1," << l << " " << layered.r_min_found << "\n";
        out << "W1," << l << " dim " << layered.span.dim() << "\n";
        out << "W1," << l << " basis\n";
        print_subspace_rows(out, layered.span, "  ");
      }
      const Subspace& w1 = report.span;
      if (w1.dim() > 0) {
        GradedSubalgebra gen = generated_subalgebra(alg, w1);
        out << "<W1> dims";
        for (std::size_t j = 0; j < gen.layers.size(); ++j)
          if (gen.layers[j].dim() > 0) out << " " << gen.layers[j].dim();
        out << "\n";
        Subspace n1 = normalizer(alg, w1);
        out << "N(W1) dim " << n1.dim() << "\n";
        out << "N(W1) basis\n";
        print_subspace_rows(out, n1, "  ");
        out << "ideal " << (is_ideal(*alg, gen) ? "true" : "false") << "\n";
        Subspace t12 = theorem12_space(alg, w1);
        out << "T1.2-space dim " << t12.dim() << "\n";
        out << "T1.2 holds " << (!w1.contains(t12) ? "true" : "false") << "\n";
      }
      return 0;
    }

    if (cmd_rigidity->parsed()) {
      auto alg = load_validated(alg_spec);
      CertifyOptions options;
      options.survey = survey_params_from(seed, grid, sparsity, samples);
      if (!w1_rows.empty())
        options.user_w1 = parse_subspace(w1_rows, alg->layer_dims()[0]);
      if (!assume_name.empty()) options.assume_isomorphic = assume_name;
      RigidityCertificate cert = certify(alg, options);
      out << certificate_to_text(cert);
      if (require_rigid && cert.verdict != Verdict::rigid) return 1;
      return 0;
    }

    if (cmd_product->parsed()) {
      auto a = load_validated(alg_spec);
      auto b = load_validated(other_spec);
      if (product_kind == "direct") {
        out << emit_algebra(*direct_product(*a, *b).algebra);
      } else if (product_kind == "central") {
        const std::size_t da = a->layer_dims()[a->step() - 1];
        const std::size_t db = b->layer_dims()[b->step() - 1];
        Subspace wm = wm_rows.empty() ? Subspace::full(da) : parse_subspace(wm_rows, da);
        Subspace wpm = wpm_rows.empty() ? Subspace::full(db) : parse_subspace(wpm_rows, db);
        RatMatrix glue;
        if (glue_rows.empty()) {
          if (wm.dim() != wpm.dim())
            throw CarnotError(Errc::bad_params,
                              "default glue needs equal dimensions; pass --map");
          glue.assign(db, RatVector(wm.dim(), Rat(0)));
          for (std::size_t t = 0; t < wpm.dim(); ++t)
            for (std::size_t c = 0; c < db; ++c) glue[c][t] = wpm.basis()[t][c];
        } else {
          glue = parse_matrix(glue_rows);
        }
        out << emit_algebra(*central_product(*a, *b, wm, wpm, glue).algebra);
      } else if (product_kind == "level1") {
        const std::size_t d1a = a->layer_dims()[0], d1b = b->layer_dims()[0];
        auto first_layer_vec = [](const AlgebraPtr& alg, const std::string& spec,
                                  std::size_t d1) {
          if (spec.empty()) {
            RatVector v(d1, Rat(0));
            v[0] = 1;
            return v;
          }
          Element e = parse_element(alg, spec);
          if (!e.is_horizontal())
            throw CarnotError(Errc::not_in_first_layer, "X0 must lie in the first layer");
          return RatVector(e.coords().begin(), e.coords().begin() + d1);
        };
        RatVector x0 = first_layer_vec(a, x0_spec, d1a);
        RatVector x0p = first_layer_vec(b, x0p_spec, d1b);
        auto default_complement = [](std::size_t d1) {
          RatMatrix rows;
          for (std::size_t t = 1; t < d1; ++t) {
            RatVector row(d1, Rat(0));
            row[t] = 1;
            rows.push_back(std::move(row));
          }
          return Subspace::span(d1, rows);
        };
        Subspace u1 = u1_rows.empty() ? default_complement(d1a) : parse_subspace(u1_rows, d1a);
        Subspace u1p = u1p_rows.empty() ? default_complement(d1b) : parse_subspace(u1p_rows, d1b);
        out << emit_algebra(*level_one_product(*a, *b, x0, x0p, u1, u1p).algebra);
      } else {
        err << "usage error: unknown product kind '" << product_kind << "'\n";
        return 2;
      }
      return 0;
    }

    if (cmd_bch->parsed()) {
      auto alg = load_validated(alg_spec);
      Element x = parse_element(alg, x_spec);
      Element y = parse_element(alg, y_spec);
      out << format_element(bch_multiply(x, y)) << "\n";
      return 0;
    }

    if (cmd_distance->parsed()) {
      auto alg = load_validated(alg_spec);
      if (quasi_samples > 0) {
        out << "quasi-metric-constant "
            << format_double(observed_quasi_metric_constant(
                   alg, static_cast<std::size_t>(quasi_samples),
                   static_cast<std::uint64_t>(seed)))
            << "\n";
        return 0;
      }
      if (p_spec.empty() || q_spec.empty()) {
        err << "usage error: distance needs --p and --q (or --quasi-constant N)\n";
        return 2;
      }
      Element p = parse_element(alg, p_spec);
      Element q = parse_element(alg, q_spec);
      out << format_double(distance(p, q)) << "\n";
      return 0;
    }

    if (cmd_probe->parsed()) {
      auto alg = load_validated(alg_spec);
      Element w = parse_element(alg, w_spec);
      Element v = parse_element(alg, v_spec);
      std::vector<Rat> ts;
      std::istringstream is(t_list);
      std::string piece;
      while (std::getline(is, piece, ',')) ts.push_back(parse_rat(piece));
      for (const auto& [t, ratio] : coset_divergence_probe(w, v, ts))
        out << rat_to_string(t) << " " << format_double(ratio) << "\n";
      return 0;
    }

    if (cmd_catalog->parsed()) {
      if (list_names) {
        for (const auto& entry : catalog_entries()) {
          out << entry.name << "  " << entry.provenance;
          if (entry.known_status) out << "  [" << *entry.known_status << " " << entry.citation << "]";
          out << "\n";
        }
        return 0;
      }
      if (alg_spec.empty()) {
        err << "usage error: catalog needs a name or --list\n";
        return 2;
      }
      out << emit_algebra(*catalog(alg_spec));
      return 0;
    }
  } catch (const CarnotError& e) {
    if (e.is_usage_error()) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
    if (e.is_budget_error()) {
      err << "budget exceeded: " << e.what() << "\n";
      return 3;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  err << "usage error: no command\n";
  return 2;
}

}  // namespace carnot

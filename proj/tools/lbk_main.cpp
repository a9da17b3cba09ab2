// Command-line front end. Subcommands cover enumeration, parsing, the
// products and coproducts, Euler/exp/log, the Lie basis, flow maps,
// substitution (concrete and universal) and the self-verification drivers.
// Identical invocations produce byte-identical output.
//
// Exit codes: 0 success, 1 verification failure or internal error, 2 usage
// or input error, 3 capacity (order above the configured maximum).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lbk/errors.hpp"
#include "lbk/flows.hpp"
#include "lbk/free_algebra.hpp"
#include "lbk/hopf.hpp"
#include "lbk/kernels.hpp"
#include "lbk/linear_map.hpp"
#include "lbk/parser.hpp"
#include "lbk/prelie.hpp"
#include "lbk/subst.hpp"

using namespace lbk;

namespace {

constexpr int kDefaultMaxOrder = 8;

struct Options {
  int order = 4;
  std::vector<std::string> colors = {"a"};
  std::string format = "text";
  std::string input_file;
};

int max_order_cap() {
  if (const char* env = std::getenv("LBK_MAX_ORDER")) {
    int cap = std::atoi(env);
    if (cap > kDefaultMaxOrder)
      std::cerr << "warning: LBK_MAX_ORDER=" << cap
                << " raises the order cap; expect large tables and long "
                   "runtimes beyond order "
                << kDefaultMaxOrder << "\n";
    if (cap >= 1) return cap;
  }
  return kDefaultMaxOrder;
}

std::string read_input(const Options& opt) {
  if (!opt.input_file.empty()) {
    std::ifstream in(opt.input_file);
    if (!in) throw ContractError("cannot open input file " + opt.input_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::stringstream ss;
  ss << std::cin.rdbuf();
  return ss.str();
}

Series read_one_series(Context& ctx, const Options& opt) {
  return parse_series(&ctx, opt.order, read_input(opt));
}

std::pair<Series, Series> read_two_series(Context& ctx, const Options& opt) {
  std::string text = read_input(opt);
  auto cut = text.find(';');
  if (cut == std::string::npos)
    throw ContractError("expected two series separated by ';'");
  return {parse_series(&ctx, opt.order, text.substr(0, cut)),
          parse_series(&ctx, opt.order, text.substr(cut + 1))};
}

nlohmann::json series_json(const Context& ctx, const Series& s) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [f, c] : s.terms())
    rows.emplace_back(ctx.forest_string(f), rat_str(c));
  std::sort(rows.begin(), rows.end());
  nlohmann::json terms = nlohmann::json::array();
  for (auto& [f, c] : rows) terms.push_back({f, c});
  return {{"order", s.order()}, {"terms", terms}};
}

void print_series(const Context& ctx, const Options& opt, const Series& s) {
  if (opt.format == "json")
    std::cout << series_json(ctx, s).dump(2) << "\n";
  else
    std::cout << s.str() << "\n";
}

void print_tensor(const Options& opt, const TensorSeries& t) {
  if (opt.format == "json") {
    const Context& ctx = *t.ctx();
    std::vector<std::tuple<std::string, std::string, std::string>> rows;
    for (const auto& [k, c] : t.terms())
      rows.emplace_back(ctx.forest_string(k.first), ctx.forest_string(k.second),
                        rat_str(c));
    std::sort(rows.begin(), rows.end());
    nlohmann::json terms = nlohmann::json::array();
    for (auto& [l, r, c] : rows) terms.push_back({l, r, c});
    std::cout << nlohmann::json{{"order", t.order()}, {"terms", terms}}.dump(2)
              << "\n";
  } else {
    std::cout << t.str() << "\n";
  }
}

Endomorphism read_endomorphism(Context& ctx, int order, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open endomorphism file " + path);
  std::vector<Series> images(ctx.num_colors(), Series(&ctx, order));
  std::vector<bool> seen(ctx.num_colors(), false);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cut = line.find(":=");
    if (cut == std::string::npos)
      throw ParseError("expected 'color := series'", lineno, 1);
    std::string name = line.substr(0, cut);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    int color = ctx.color_index(name);
    if (color < 0) throw ParseError("unknown color '" + name + "'", lineno, 1);
    images[color] = parse_series(&ctx, order, line.substr(cut + 2));
    seen[color] = true;
  }
  for (int c = 0; c < ctx.num_colors(); ++c)
    if (!seen[c])
      throw ContractError("no image given for color " + ctx.color_name(c));
  return Endomorphism(&ctx, order, std::move(images));
}

// ---- verify drivers ------------------------------------------------------------

int verify_flow(Context& ctx, const Options& opt, const std::string& field) {
  YPoly f = parse_ypoly(field);
  YPoly phi = YPoly::y();
  Series flow = exp_gl(Series::of_tree(&ctx, opt.order, ctx.leaf(0)));
  HSeries got = elementary_differential_eval(flow, f, phi);
  auto oracle = exact_flow_taylor(f, opt.order);
  bool ok = true;
  std::printf("%-4s %-32s %-32s %s\n", "h^n", "series evaluation", "exact flow",
              "match");
  for (int n = 0; n <= opt.order; ++n) {
    bool same = got.at(n) == oracle[n];
    ok = ok && same;
    std::printf("%-4d %-32s %-32s %s\n", n, got.at(n).str().c_str(),
                oracle[n].str().c_str(), same ? "ok" : "MISMATCH");
  }
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

int verify_axioms(Context& ctx, const Options& opt) {
  std::vector<Series> trees;
  for (int g = 1; g <= opt.order - 2; ++g)
    for (TreeId t : ctx.trees_of_grade(g))
      trees.push_back(Series::of_tree(&ctx, opt.order, t));
  struct Triple {
    int x, y, z;
  };
  std::vector<Triple> triples;
  for (int i = 0; i < static_cast<int>(trees.size()); ++i)
    for (int j = 0; j < static_cast<int>(trees.size()); ++j)
      for (int k = 0; k < static_cast<int>(trees.size()); ++k)
        if (trees[i].min_grade() + trees[j].min_grade() +
                trees[k].min_grade() <=
            opt.order)
          triples.push_back({i, j, k});
  auto check = [&](int idx) {
    const Series& x = trees[triples[idx].x];
    const Series& y = trees[triples[idx].y];
    const Series& z = trees[triples[idx].z];
    Series lhs1 = graft(x, bracket_conc(y, z));
    Series rhs1 = bracket_conc(graft(x, y), z) + bracket_conc(y, graft(x, z));
    if (!(lhs1 == rhs1)) return false;
    auto assoc = [&](const Series& p, const Series& q, const Series& r) {
      return graft(p, graft(q, r)) - graft(graft(p, q), r);
    };
    return graft(bracket_conc(x, y), z) == assoc(x, y, z) - assoc(y, x, z);
  };
  auto bad =
      find_violation(static_cast<int>(triples.size()), Exec::parallel, check);
  if (bad) {
    std::printf("FAIL: post-Lie axiom violated on (%s, %s, %s)\n",
                trees[triples[*bad].x].str().c_str(),
                trees[triples[*bad].y].str().c_str(),
                trees[triples[*bad].z].str().c_str());
    return 1;
  }
  std::printf("PASS: post-Lie axioms hold on %zu tree triples of total grade "
              "<= %d\n",
              triples.size(), opt.order);
  return 0;
}

int verify_pbw(Context& ctx, const Options& opt) {
  for (int g = 1; g <= opt.order; ++g)
    for (ForestId f : ctx.forests_of_grade(g)) {
      Series e = euler_idempotent(Series::of_forest(&ctx, opt.order, f));
      if (!(euler_idempotent(e) == e)) {
        std::printf("FAIL: e not idempotent on %s\n",
                    ctx.forest_string(f).c_str());
        return 1;
      }
    }
  std::vector<long> d(opt.order + 1, 0), t(opt.order + 1, 0), series(opt.order + 1, 0);
  t[0] = 1;
  series[0] = 1;
  for (int g = 1; g <= opt.order; ++g) {
    t[g] = static_cast<long>(ctx.forests_of_grade(g).size());
    d[g] = static_cast<long>(lie_basis(ctx, g).size());
  }
  for (int k = 1; k <= opt.order; ++k)
    for (long copy = 0; copy < d[k]; ++copy)
      for (int n = k; n <= opt.order; ++n) series[n] += series[n - k];
  for (int n = 0; n <= opt.order; ++n)
    if (series[n] != t[n]) {
      std::printf("FAIL: dimension identity off at order %d (%ld vs %ld)\n", n,
                  series[n], t[n]);
      return 1;
    }
  for (int g = 1; g <= opt.order; ++g) {
    int rk = pbw_rank(ctx, g, Exec::parallel);
    if (rk != static_cast<int>(t[g])) {
      std::printf("FAIL: psi rank %d != %ld at grade %d\n", rk, t[g], g);
      return 1;
    }
  }
  std::printf("PASS: euler idempotent, dimension identity and psi ranks "
              "through order %d\n",
              opt.order);
  return 0;
}

int verify_recursion(Context& ctx, const Options& opt) {
  UniversalSubst sub(ctx, opt.order);
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 10; ++trial) {
    Endomorphism a = random_endomorphism(ctx, opt.order, rng);
    EndoCharacter alpha = EndoCharacter::from_endomorphism(a);
    for (int g = 0; g <= opt.order; ++g)
      for (ForestId omega : ctx.forests_of_grade(g)) {
        Series lhs = sub.evaluate(sub.forest_transform(omega), alpha, opt.order);
        Series rhs = substitution_transpose(a, omega, opt.order);
        if (!(lhs == rhs)) {
          std::printf("FAIL: universal recursion disagrees with the concrete "
                      "action on %s (trial %d)\n",
                      ctx.forest_string(omega).c_str(), trial);
          return 1;
        }
      }
  }
  std::printf("PASS: universal recursion matches the transposed substitution "
              "action through grade %d (10 random endomorphisms)\n",
              opt.order);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"exact Lie-Butcher series engine on planar rooted trees"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--order", opt.order, "truncation order")->capture_default_str();
  app.add_option("--colors", opt.colors, "color alphabet, in order")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--format", opt.format, "text|json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--input", opt.input_file, "input file (default: stdin)");

  auto* cmd_trees = app.add_subcommand("trees", "enumerate forests per grade");
  int trees_grade = -1;
  cmd_trees->add_option("--grade", trees_grade, "only this grade");

  auto* cmd_parse =
      app.add_subcommand("parse", "parse a series and print its canonical form");

  auto* cmd_mul = app.add_subcommand("mul", "multiply two series");
  std::string product = "conc";
  cmd_mul->add_option("--product", product, "conc|shuffle|gl|graft")
      ->check(CLI::IsMember({"conc", "shuffle", "gl", "graft"}));

  auto* cmd_euler =
      app.add_subcommand("euler", "apply the Eulerian idempotent");

  auto* cmd_exp = app.add_subcommand("exp", "exponential of a series");
  auto* cmd_log = app.add_subcommand("log", "logarithm of a series");
  std::string exp_product = "conc";
  cmd_exp->add_option("--product", exp_product, "conc|gl")
      ->check(CLI::IsMember({"conc", "gl"}));
  std::string log_product = "conc";
  cmd_log->add_option("--product", log_product, "conc|gl")
      ->check(CLI::IsMember({"conc", "gl"}));

  auto* cmd_lie = app.add_subcommand("lie-basis", "Lyndon basis per grade");

  auto* cmd_cop = app.add_subcommand("coproduct", "apply a coproduct");
  std::string which = "gl";
  cmd_cop->add_option("--which", which, "gl|graft|deconcat|unshuffle")
      ->check(CLI::IsMember({"gl", "graft", "deconcat", "unshuffle"}));
  bool cop_table = false;
  int cop_grade = -1;
  cmd_cop->add_flag("--table", cop_table, "emit the JSON matrix table instead");
  cmd_cop->add_option("--grade", cop_grade, "grade for --table");

  auto* cmd_phi = app.add_subcommand("phi", "field-to-flow map");
  auto* cmd_bch = app.add_subcommand("bch", "BCH product (concatenation)");
  auto* cmd_sharp = app.add_subcommand("sharp", "composition of flows");
  auto* cmd_back = app.add_subcommand("backward-error", "inverse of phi");

  auto* cmd_subst = app.add_subcommand("subst", "substitution");
  auto* cmd_subst_apply =
      cmd_subst->add_subcommand("apply", "apply an endomorphism to a series");
  std::string endo_file;
  cmd_subst_apply->add_option("--endo", endo_file, "file with 'color := series'")
      ->required();
  auto* cmd_subst_uni = cmd_subst->add_subcommand(
      "universal", "universal substitution coefficient tables");
  int uni_grade = 3;
  bool one_generator = false;
  cmd_subst_uni->add_option("--grade", uni_grade, "maximum dual-forest grade");
  cmd_subst_uni->add_flag("--one-generator", one_generator,
                          "require a single-color alphabet");
  cmd_subst->require_subcommand(1);

  auto* cmd_verify = app.add_subcommand("verify", "self checks");
  auto* cmd_vflow = cmd_verify->add_subcommand("flow", "flow vs scalar ODE");
  std::string field = "y^2";
  cmd_vflow->add_option("--f", field, "scalar polynomial field in y");
  auto* cmd_vax = cmd_verify->add_subcommand("axioms", "post-Lie axioms");
  auto* cmd_vpbw = cmd_verify->add_subcommand("pbw", "euler/PBW identities");
  auto* cmd_vrec =
      cmd_verify->add_subcommand("recursion", "universal substitution");
  cmd_verify->require_subcommand(1);

  auto* cmd_dims = app.add_subcommand("dims", "dimension table per grade");

  // Let --order/--colors/--format/--input appear after the subcommand name.
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    for (CLI::App* sc : a->get_subcommands([](const CLI::App*) { return true; })) {
      sc->fallthrough();
      enable_fallthrough(sc);
    }
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  int cap = max_order_cap();
  if (opt.order < 0 || opt.order > cap)
    throw CapacityError("order " + std::to_string(opt.order) +
                        " outside [0, " + std::to_string(cap) + "]");
  Context ctx(opt.colors, opt.order);

  if (*cmd_trees) {
    nlohmann::json jgrades = nlohmann::json::array();
    int lo = trees_grade >= 0 ? trees_grade : 0;
    int hi = trees_grade >= 0 ? trees_grade : opt.order;
    for (int g = lo; g <= hi; ++g) {
      const auto& basis = ctx.forests_of_grade(g);
      if (opt.format == "json") {
        nlohmann::json names = nlohmann::json::array();
        for (ForestId f : basis) names.push_back(ctx.forest_string(f));
        jgrades.push_back({{"grade", g}, {"forests", names}});
      } else {
        std::printf("grade %d: %zu forests\n", g, basis.size());
        for (ForestId f : basis)
          std::printf("  %s\n", ctx.forest_string(f).c_str());
      }
    }
    if (opt.format == "json") std::cout << jgrades.dump(2) << "\n";
    return 0;
  }

  if (*cmd_parse) {
    print_series(ctx, opt, read_one_series(ctx, opt));
    return 0;
  }

  if (*cmd_mul) {
    auto [u, v] = read_two_series(ctx, opt);
    Series out(&ctx, opt.order);
    if (product == "conc") out = conc_mul(u, v);
    else if (product == "shuffle") out = shuffle_mul(u, v);
    else if (product == "gl") out = gl_mul(u, v);
    else out = graft(u, v);
    print_series(ctx, opt, out);
    return 0;
  }

  if (*cmd_euler) {
    print_series(ctx, opt, euler_idempotent(read_one_series(ctx, opt)));
    return 0;
  }

  if (*cmd_exp) {
    Series x = read_one_series(ctx, opt);
    print_series(ctx, opt, exp_product == "conc" ? exp_conc(x) : exp_gl(x));
    return 0;
  }
  if (*cmd_log) {
    Series s = read_one_series(ctx, opt);
    print_series(ctx, opt, log_product == "conc" ? log_conc(s) : log_gl(s));
    return 0;
  }

  if (*cmd_lie) {
    nlohmann::json jall = nlohmann::json::array();
    for (int g = 1; g <= opt.order; ++g) {
      const auto& level = lie_basis(ctx, g);
      if (opt.format == "json") {
        nlohmann::json elems = nlohmann::json::array();
        for (const LieElem& l : level)
          elems.push_back(lie_elem_series(ctx, l, opt.order).str());
        jall.push_back({{"grade", g}, {"elements", elems}});
      } else {
        std::printf("grade %d: %zu elements\n", g, level.size());
        for (const LieElem& l : level)
          std::printf("  [%d] %s\n", l.flat_index,
                      lie_elem_series(ctx, l, opt.order).str().c_str());
      }
    }
    if (opt.format == "json") std::cout << jall.dump(2) << "\n";
    return 0;
  }

  if (*cmd_cop) {
    if (cop_table) {
      if (cop_grade < 0 || cop_grade > opt.order)
        throw ContractError("--table needs --grade within the order");
      Product p = which == "gl"        ? Product::gl
                  : which == "graft"   ? Product::graft
                  : which == "deconcat" ? Product::conc
                                        : Product::shuffle;
      GradedLinearMap table =
          product_map(ctx, p, cop_grade, Exec::parallel).transposed();
      std::cout << table.to_json() << "\n";
      return 0;
    }
    Series w = read_one_series(ctx, opt);
    TensorSeries out = which == "gl"        ? coproduct_gl(w)
                       : which == "graft"   ? coproduct_graft(w)
                       : which == "deconcat" ? deconcat(w)
                                             : unshuffle(w);
    print_tensor(opt, out);
    return 0;
  }

  if (*cmd_phi) {
    print_series(ctx, opt, field_to_flow(read_one_series(ctx, opt)));
    return 0;
  }
  if (*cmd_back) {
    print_series(ctx, opt, backward_error(read_one_series(ctx, opt)));
    return 0;
  }
  if (*cmd_bch) {
    auto [x, y] = read_two_series(ctx, opt);
    print_series(ctx, opt, bch_conc(x, y));
    return 0;
  }
  if (*cmd_sharp) {
    auto [x, y] = read_two_series(ctx, opt);
    // default mode: both routes cross-checked in debug builds, the grafting
    // route alone in release builds
    print_series(ctx, opt, sharp(x, y));
    return 0;
  }

  if (*cmd_subst_apply) {
    Endomorphism endo = read_endomorphism(ctx, opt.order, endo_file);
    print_series(ctx, opt, endo.apply(read_one_series(ctx, opt)));
    return 0;
  }

  if (*cmd_subst_uni) {
    if (one_generator && ctx.num_colors() != 1)
      throw ContractError("--one-generator requires a single-color alphabet");
    if (uni_grade < 0 || uni_grade > opt.order)
      throw ContractError("--grade must lie within the order");
    UniversalSubst sub(ctx, opt.order);
    nlohmann::json jall = nlohmann::json::array();
    for (int g = 0; g <= uni_grade; ++g)
      for (ForestId omega : ctx.forests_of_grade(g)) {
        nlohmann::json jterms = nlohmann::json::array();
        std::vector<std::pair<std::string, std::string>> rows;
        for (const auto& [target, poly] : sub.forest_transform(omega))
          rows.emplace_back(ctx.forest_string(target),
                            poly.str([&](std::uint32_t var) {
                              return subst_var_name(ctx, var);
                            }));
        std::sort(rows.begin(), rows.end());
        for (auto& [target, coeff] : rows)
          jterms.push_back({{"coeff", coeff}, {"target", target}});
        jall.push_back(
            {{"omega", ctx.forest_string(omega)}, {"terms", jterms}});
      }
    std::cout << jall.dump(2) << "\n";
    return 0;
  }

  if (*cmd_vflow) return verify_flow(ctx, opt, field);
  if (*cmd_vax) return verify_axioms(ctx, opt);
  if (*cmd_vpbw) return verify_pbw(ctx, opt);
  if (*cmd_vrec) return verify_recursion(ctx, opt);

  if (*cmd_dims) {
    nlohmann::json jrows = nlohmann::json::array();
    if (opt.format == "text")
      std::printf("%-6s %-8s %-6s %-8s %-9s\n", "grade", "forests", "trees",
                  "lie", "np-trees");
    for (int g = 1; g <= opt.order; ++g) {
      std::size_t forests = ctx.forests_of_grade(g).size();
      std::size_t trees = ctx.trees_of_grade(g).size();
      std::size_t lie = lie_basis(ctx, g).size();
      std::size_t np = ctx.np_trees_of_grade(g).size();
      if (opt.format == "json")
        jrows.push_back({{"grade", g},
                         {"forests", forests},
                         {"trees", trees},
                         {"lie", lie},
                         {"np_trees", np}});
      else
        std::printf("%-6d %-8zu %-6zu %-8zu %-9zu\n", g, forests, trees, lie,
                    np);
    }
    if (opt.format == "json") std::cout << jrows.dump(2) << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

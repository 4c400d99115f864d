#include "rpp/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "rpp/cayley.hpp"
#include "rpp/feasibility.hpp"
#include "rpp/manifest.hpp"
#include "rpp/solver.hpp"
#include "rpp/suite.hpp"

namespace rpp {

namespace {

std::size_t default_cap() {
  if (const char* env = std::getenv("RPP_DEFAULT_CAP")) {
    const long long v = std::atoll(env);
    if (v > 0) return std::size_t(v);
  }
  return kDefaultEnumCap;
}

struct InputTracker {
  std::vector<std::pair<std::string, std::string>> digests;

  std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    auto bytes = ss.str();
    digests.emplace_back(path, digest_hex(bytes));
    return bytes;
  }

  // accepts inline JSON (starting with '{' or '[') or a file path
  nlohmann::json load(const std::string& spec) {
    std::string text = spec;
    if (!spec.empty() && spec[0] != '{' && spec[0] != '[') text = slurp(spec);
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad JSON: ") + e.what());
    }
  }
};

std::vector<std::uint8_t> parse_tuple_arr(const nlohmann::json& j, const GroupSpec& g) {
  std::vector<std::uint8_t> c;
  for (const auto& v : j) {
    const auto x = v.get<std::int64_t>();
    if (x < 0 || x >= std::int64_t(g.order())) throw ParseError("coordinate out of range");
    c.push_back(std::uint8_t(x));
  }
  return c;
}

struct Ctx {
  InputTracker inputs;
  nlohmann::json output;
  int exit_code = 0;
  std::uint64_t seed = 0;
};

struct GroupOpts {
  std::string gspec, a, b, x, y, subgroup, eps;
  std::size_t n = 0, r = 0, cap = 0;
  double kbound = 0;
};

void add_group_sub(CLI::App* app, Ctx& ctx) {
  auto* group = app->add_subcommand("group", "group arithmetic and oracles");
  group->require_subcommand(1);
  auto o = std::make_shared<GroupOpts>();

  auto need_group = [&ctx, o]() { return GroupSpec::from_json(ctx.inputs.load(o->gspec)); };

  auto* check = group->add_subcommand("check", "validate a group spec");
  check->add_option("--group", o->gspec)->required();
  check->callback([&ctx, need_group] {
    const auto g = need_group();
    ctx.output["order"] = g->order();
    ctx.output["kind"] = g->is_abelian_kind() ? "abelian" : "table";
    ctx.output["commutes"] = g->commutes();
    ctx.output["identity"] = g->identity();
    ctx.output["generating_set"] = g->generating_set();
  });

  auto* mulc = group->add_subcommand("mul", "coordinatewise product");
  mulc->add_option("--group", o->gspec)->required();
  mulc->add_option("--a", o->a)->required();
  mulc->add_option("--b", o->b)->required();
  mulc->callback([&ctx, o, need_group] {
    const auto g = need_group();
    ctx.output["result"] = mul(TupleElement::from_json(g, ctx.inputs.load(o->a)),
                               TupleElement::from_json(g, ctx.inputs.load(o->b)))
                               .to_json();
  });

  auto* invc = group->add_subcommand("inv", "coordinatewise inverse");
  invc->add_option("--group", o->gspec)->required();
  invc->add_option("--a", o->a)->required();
  invc->callback([&ctx, o, need_group] {
    const auto g = need_group();
    ctx.output["result"] =
        TupleElement::from_json(g, ctx.inputs.load(o->a)).inverse().to_json();
  });

  auto* wc = group->add_subcommand("weight", "non-identity coordinate count");
  wc->add_option("--group", o->gspec)->required();
  wc->add_option("--x", o->x)->required();
  wc->callback([&ctx, o, need_group] {
    const auto g = need_group();
    ctx.output["weight"] = TupleElement::from_json(g, ctx.inputs.load(o->x)).weight();
  });

  auto* hc = group->add_subcommand("hamming", "hamming distance");
  hc->add_option("--group", o->gspec)->required();
  hc->add_option("--x", o->x)->required();
  hc->add_option("--y", o->y)->required();
  hc->callback([&ctx, o, need_group] {
    const auto g = need_group();
    ctx.output["hamming"] =
        hamming(TupleElement::from_json(g, ctx.inputs.load(o->x)),
                TupleElement::from_json(g, ctx.inputs.load(o->y)));
  });

  auto* ec = group->add_subcommand("enumerate", "closure of a subgroup");
  ec->add_option("--group", o->gspec)->required();
  ec->add_option("--subgroup", o->subgroup)->required();
  ec->add_option("--cap", o->cap);
  ec->callback([&ctx, o, need_group] {
    const auto g = need_group();
    const auto h = Subgroup::from_json(g, ctx.inputs.load(o->subgroup));
    const auto& els = h.enumerate(o->cap ? o->cap : default_cap());
    if (els.size() > 65536) throw TooLarge("refusing to print > 65536 elements");
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < els.size(); ++i) arr.push_back(els.element(i).to_json());
    ctx.output["order"] = els.size();
    ctx.output["elements"] = arr;
  });

  auto* dc = group->add_subcommand("dimension", "|H| and log_|G| |H|");
  dc->add_option("--group", o->gspec)->required();
  dc->add_option("--subgroup", o->subgroup)->required();
  dc->callback([&ctx, o, need_group] {
    const auto g = need_group();
    const auto h = Subgroup::from_json(g, ctx.inputs.load(o->subgroup));
    const auto d = h.dimension();
    ctx.output["order"] = big_to_json(d.order);
    ctx.output["delta"] = d.delta;
  });

  auto* distc = group->add_subcommand("distance", "exact distance to a subgroup");
  distc->add_option("--group", o->gspec)->required();
  distc->add_option("--subgroup", o->subgroup)->required();
  distc->add_option("--x", o->x)->required();
  distc->add_option("--cap", o->cap);
  distc->callback([&ctx, o, need_group] {
    const auto g = need_group();
    const auto h = Subgroup::from_json(g, ctx.inputs.load(o->subgroup));
    const auto x = TupleElement::from_json(g, ctx.inputs.load(o->x));
    ctx.output["distance"] = h.distance_to(x, o->cap ? o->cap : default_cap());
  });

  auto* fc = group->add_subcommand("feasibility", "counting-argument bound");
  fc->add_option("--group", o->gspec)->required();
  fc->add_option("--n", o->n)->required();
  fc->add_option("--k", o->kbound)->required();
  fc->add_option("--r", o->r)->required();
  fc->add_option("--eps", o->eps)->required();
  fc->callback([&ctx, o, need_group] {
    const auto g = need_group();
    ctx.output =
        feasibility_check(o->n, o->kbound, o->r, rat_from_string(o->eps), *g).to_json();
  });
}

struct PermOpts {
  std::string gspec, subgroup, x, prefix;
  std::size_t prefix_len = 0;
};

void add_perm_sub(CLI::App* app, Ctx& ctx) {
  auto* perm = app->add_subcommand("perm", "permutation-group queries on G x [n]");
  perm->require_subcommand(1);
  auto o = std::make_shared<PermOpts>();

  auto load_sub = [&ctx, o]() {
    const auto g = GroupSpec::from_json(ctx.inputs.load(o->gspec));
    return Subgroup::from_json(g, ctx.inputs.load(o->subgroup));
  };

  auto* oc = perm->add_subcommand("order", "|H| by Schreier-Sims");
  oc->add_option("--group", o->gspec)->required();
  oc->add_option("--subgroup", o->subgroup)->required();
  oc->callback([&ctx, load_sub] {
    ctx.output["order"] = big_to_json(embedded_bsgs(load_sub()).order());
  });

  auto* mc = perm->add_subcommand("member", "membership by sifting");
  mc->add_option("--group", o->gspec)->required();
  mc->add_option("--subgroup", o->subgroup)->required();
  mc->add_option("--x", o->x)->required();
  mc->callback([&ctx, o, load_sub] {
    const auto h = load_sub();
    const auto x = TupleElement::from_json(h.group_ptr(), ctx.inputs.load(o->x));
    ctx.output["member"] = bsgs_contains(h, x);
  });

  auto* sc = perm->add_subcommand("stab", "pointwise stabilizer of G x [i]");
  sc->add_option("--group", o->gspec)->required();
  sc->add_option("--subgroup", o->subgroup)->required();
  sc->add_option("--prefix-len", o->prefix_len)->required();
  sc->callback([&ctx, o, load_sub] {
    const auto h = load_sub();
    if (o->prefix_len > h.ambient_n()) throw InvalidArgument("prefix-len > n");
    std::vector<Point> delta;
    for (std::size_t i = 0; i < o->prefix_len; ++i)
      for (std::uint32_t a = 0; a < h.group().order(); ++a)
        delta.push_back(omega_point(h.group(), i, a));
    ctx.output["order"] = big_to_json(pointwise_stabilizer(embedded_bsgs(h), delta).order());
  });

  auto* cc = perm->add_subcommand("cosetcount", "|{x in H : x matches a prefix}|");
  cc->add_option("--group", o->gspec)->required();
  cc->add_option("--subgroup", o->subgroup)->required();
  cc->add_option("--prefix", o->prefix)->required();
  cc->callback([&ctx, o, load_sub] {
    const auto h = load_sub();
    const auto y = parse_tuple_arr(ctx.inputs.load(o->prefix), h.group());
    ctx.output["count"] = big_to_json(coset_prefix_count(h, {y.data(), y.size()}));
    ctx.output["projection_member"] = projection_member(h, {y.data(), y.size()});
  });
}

struct SmallbiasOpts {
  std::string gspec, eps, space;
  std::size_t n = 0;
  bool no_verify = false;
};

void add_smallbias_sub(CLI::App* app, Ctx& ctx) {
  auto* sb = app->add_subcommand("smallbias", "epsilon-biased space construction");
  sb->require_subcommand(1);
  auto o = std::make_shared<SmallbiasOpts>();

  auto* gen = sb->add_subcommand("gen", "construct a space for an abelian group");
  gen->add_option("--group", o->gspec)->required();
  gen->add_option("--n", o->n)->required();
  gen->add_option("--eps", o->eps)->required();
  gen->add_flag("--no-verify", o->no_verify);
  gen->callback([&ctx, o] {
    const auto g = GroupSpec::from_json(ctx.inputs.load(o->gspec));
    ConstructOptions opts;
    opts.verify = !o->no_verify;
    ctx.output = construct_for_group(g, o->n, rat_from_string(o->eps), opts).to_json();
  });

  auto* verify = sb->add_subcommand("verify", "recompute the bias exhaustively");
  verify->add_option("--space", o->space)->required();
  verify->callback([&ctx, o] {
    const auto sp = BiasedSpace::from_json(nullptr, ctx.inputs.load(o->space));
    const double bias = measure_bias(sp.space);
    ctx.output["measured_bias"] = bias;
    ctx.output["target_epsilon"] = rat_to_string(sp.target_epsilon);
    const bool ok = bias <= rat_to_double(sp.target_epsilon) + 1e-9;
    ctx.output["ok"] = ok;
    if (!ok) ctx.exit_code = 1;
  });
}

struct CayleyOpts {
  std::string space, subgroup, shift, method = "auto";
  std::size_t t = 0;
  std::uint64_t trials = 100000;
};

void add_cayley_sub(CLI::App* app, Ctx& ctx) {
  auto* cy = app->add_subcommand("cayley", "Cayley graph spectra and walks");
  cy->require_subcommand(1);
  auto o = std::make_shared<CayleyOpts>();

  auto load_graph = [&ctx, o]() {
    const auto sp = BiasedSpace::from_json(nullptr, ctx.inputs.load(o->space));
    return CayleyGraph(sp.space);
  };

  auto* lc = cy->add_subcommand("lambda", "second eigenvalue (normalized)");
  lc->add_option("--space", o->space)->required();
  lc->add_option("--method", o->method);
  lc->callback([&ctx, o, load_graph] {
    const auto g = load_graph();
    const bool abelian = g.group().is_abelian_kind();
    if (o->method == "character" || o->method == "both" ||
        (o->method == "auto" && abelian))
      ctx.output["character"] = lambda_by_characters(g).to_json();
    if (o->method == "numeric" || o->method == "both" ||
        (o->method == "auto" && !abelian))
      ctx.output["numeric"] = lambda_numeric(g).to_json();
  });

  auto* wc = cy->add_subcommand("walk", "seeded random walk");
  wc->add_option("--space", o->space)->required();
  wc->add_option("--t", o->t)->required();
  wc->add_option("--seed", ctx.seed);
  wc->callback([&ctx, o, load_graph] {
    ctx.output = random_walk(load_graph(), o->t, ctx.seed).to_json();
  });

  auto* cc = cy->add_subcommand("confine", "confinement probability in a coset");
  cc->add_option("--space", o->space)->required();
  cc->add_option("--subgroup", o->subgroup)->required();
  cc->add_option("--shift", o->shift);
  cc->add_option("--t", o->t)->required();
  cc->add_option("--trials", o->trials);
  cc->add_option("--seed", ctx.seed);
  cc->callback([&ctx, o, load_graph] {
    const auto g = load_graph();
    const auto h = Subgroup::from_json(g.group_ptr(), ctx.inputs.load(o->subgroup));
    if (h.ambient_n() != g.n()) throw InvalidArgument("subgroup/graph n mismatch");
    TupleElement shift = TupleElement::identity(g.group_ptr(), g.n());
    if (!o->shift.empty())
      shift = TupleElement::from_json(g.group_ptr(), ctx.inputs.load(o->shift));
    const auto& els = h.enumerate();
    TupleSet b(g.group_ptr(), g.n());
    for (std::size_t i = 0; i < els.size(); ++i)
      b.push_row(mul(shift, els.element(i)).coords());
    b.sort_unique();
    ctx.output = confinement_probability(g, b, o->t, o->trials, ctx.seed).to_json();
  });
}

struct RppOpts {
  std::string instance, solution, mode, c = "1/4", solver = "auto";
  std::size_t cap = 0;
};

void add_rpp_sub(CLI::App* app, Ctx& ctx) {
  auto* rp = app->add_subcommand("rpp", "remote point solvers");
  rp->require_subcommand(1);
  auto o = std::make_shared<RppOpts>();

  auto* sv = rp->add_subcommand("solve", "solve an RPP instance");
  sv->add_option("--instance", o->instance)->required();
  sv->add_option("--mode", o->mode);
  sv->add_option("--c", o->c);
  sv->add_option("--solver", o->solver)
      ->check(CLI::IsMember({"auto", "half", "blocks"}));
  sv->add_option("--seed", ctx.seed);
  sv->callback([&ctx, o] {
    auto inst = RppInstance::from_json(ctx.inputs.load(o->instance));
    if (!o->mode.empty()) inst.mode = solve_mode_from_name(o->mode);
    SolveOptions opts;
    opts.c = rat_from_string(o->c);

    std::optional<RppSolution> sol;
    if (o->solver == "blocks") {
      sol = solve_general_k(inst, opts);
    } else if (o->solver == "half") {
      sol = solve_half_dim(inst, opts);
    } else {
      // prefer the block reduction when delta(H) is strictly below n/2 and
      // it certifies at least the requested distance
      const BigInt horder = inst.h.order();
      std::size_t k = 0;
      BigInt p = 1;
      while (p < horder) {
        p *= inst.h.group().order();
        ++k;
      }
      if (2 * k < inst.h.ambient_n()) {
        auto blocks = solve_general_k(inst, opts);
        if (blocks.claimed_r >= inst.r) sol = std::move(blocks);
      }
      if (!sol) sol = solve_half_dim(inst, opts);
    }
    const auto rep = verify_solution(inst, *sol);
    if (rep.exact_distance) sol->verified_distance = rep.exact_distance;
    ctx.output = sol->to_json();
    ctx.output["verify"] = rep.to_json();
    if (!rep.ok) ctx.exit_code = 1;
  });

  auto* vf = rp->add_subcommand("verify", "verify a solution against an instance");
  vf->add_option("--instance", o->instance)->required();
  vf->add_option("--solution", o->solution)->required();
  vf->add_option("--cap", o->cap);
  vf->callback([&ctx, o] {
    const auto inst = RppInstance::from_json(ctx.inputs.load(o->instance));
    const auto sol =
        RppSolution::from_json(inst.h.group_ptr(), ctx.inputs.load(o->solution));
    const auto rep = verify_solution(inst, sol, o->cap ? o->cap : default_cap());
    ctx.output = rep.to_json();
    if (!rep.ok) ctx.exit_code = 1;
  });
}

void add_suite_sub(CLI::App* app, Ctx& ctx) {
  auto* st = app->add_subcommand("suite", "acceptance suite driver");
  st->require_subcommand(1);
  auto profile = std::make_shared<std::string>("quick");

  auto* runc = st->add_subcommand("run", "run the acceptance items");
  runc->add_option("--profile", *profile);
  runc->add_option("--seed", ctx.seed);
  runc->add_flag_function(
      "--quick", [profile](std::int64_t) { *profile = "quick"; },
      "shorthand for --profile quick");
  runc->add_flag_function(
      "--full", [profile](std::int64_t) { *profile = "full"; },
      "shorthand for --profile full");
  runc->callback([&ctx, profile] {
    const auto res = run_suite(*profile, ctx.seed);
    ctx.output = res.summary_json();
    if (!res.all_pass) ctx.exit_code = 1;
  });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"remote point problem toolkit"};
  app.require_subcommand(1);

  Ctx ctx;
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "write a reproducibility manifest");

  add_group_sub(&app, ctx);
  add_perm_sub(&app, ctx);
  add_smallbias_sub(&app, ctx);
  add_cayley_sub(&app, ctx);
  add_rpp_sub(&app, ctx);
  add_suite_sub(&app, ctx);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::vector<const char*> argv;
    argv.push_back("rpp");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help() << std::flush;
      return 0;
    }
    err << nlohmann::json{{"error", "usage"}, {"detail", e.what()}}.dump(2) << "\n";
    return 2;
  } catch (const Error& e) {
    err << nlohmann::json{{"error", e.code()}, {"detail", e.what()}}.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", "internal"}, {"detail", e.what()}}.dump(2) << "\n";
    return 1;
  }

  const std::string payload = ctx.output.dump(2) + "\n";
  out << payload << std::flush;

  if (!manifest_path.empty()) {
    RunManifest man;
    man.command_line.push_back("rpp");
    for (const auto& a : args) man.command_line.push_back(a);
    man.seed = ctx.seed;
    man.input_digests = ctx.inputs.digests;
    man.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    man.output_digest = digest_hex(payload);
    std::ofstream mf(manifest_path);
    mf << man.to_json().dump(2) << "\n";
  }
  return ctx.exit_code;
}

}  // namespace rpp

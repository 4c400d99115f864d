#include "rpp/suite.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "rpp/cayley.hpp"
#include "rpp/manifest.hpp"
#include "rpp/solver.hpp"

namespace rpp {

namespace {

using Clock = std::chrono::steady_clock;

GroupPtr s3_table_group() {
  // S3 built from composing permutations of three letters (right action)
  const std::array<std::array<int, 3>, 6> els = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<std::vector<std::uint32_t>> table(6, std::vector<std::uint32_t>(6));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const std::array<int, 3> c = {els[j][els[i][0]], els[j][els[i][1]],
                                    els[j][els[i][2]]};
      for (std::size_t k = 0; k < 6; ++k)
        if (els[k] == c) table[i][j] = std::uint32_t(k);
    }
  return GroupSpec::from_table(table);
}

TupleElement random_tuple(const GroupPtr& g, std::size_t n, Rng& rng) {
  std::vector<std::uint8_t> c(n);
  for (auto& v : c) v = std::uint8_t(rng.below(g->order()));
  return TupleElement(g, std::move(c));
}

TupleMultiset random_symmetric_multiset(const GroupPtr& g, std::size_t n,
                                        std::size_t items, Rng& rng) {
  TupleMultiset s(g, n);
  for (std::size_t i = 0; i < items; ++i) {
    const auto t = random_tuple(g, n, rng);
    const auto m = 1 + rng.below(2);
    s.add_row(t.coords(), m);
    s.add_row(t.inverse().coords(), m);
  }
  s.finalize();
  return s;
}

TupleMultiset full_group_multiset(const GroupPtr& g, std::size_t n) {
  TupleMultiset s(g, n);
  std::vector<std::uint8_t> c(n, 0);
  while (true) {
    s.add_row(c);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (std::uint32_t(c[i]) + 1 < g->order()) {
        ++c[i];
        break;
      }
      c[i] = 0;
    }
    if (i == n) break;
  }
  s.finalize();
  return s;
}

// B(H, r) = H * B(r), enumerated exactly.
TupleSet ball_around(const Subgroup& h, std::size_t r) {
  const auto& g = h.group();
  const std::size_t n = h.ambient_n();
  TupleSet out(h.group_ptr(), n);
  const auto& els = h.enumerate();
  std::vector<std::uint8_t> cur(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from,
                                                          std::size_t used) {
    out.push_row(cur);
    if (used == r) return;
    for (std::size_t i = from; i < n; ++i) {
      const std::uint8_t save = cur[i];
      for (std::uint32_t e = 0; e < g.order(); ++e) {
        if (std::uint8_t(e) == save) continue;
        cur[i] = std::uint8_t(e);
        rec(i + 1, used + 1);
      }
      cur[i] = save;
    }
  };
  for (std::size_t ei = 0; ei < els.size(); ++ei) {
    const auto row = els.row(ei);
    std::copy(row.begin(), row.end(), cur.begin());
    rec(0, 0);
  }
  out.sort_unique();
  return out;
}

// ------------------------------------------------------------ shared state

struct Item5Instance {
  GroupPtr g;
  std::string group_name;
  std::size_t n = 0;
  Subgroup h;
};

// The deterministic instance list shared by criteria 5, 7 and 8.
std::vector<Item5Instance> item5_instances(std::uint64_t seed) {
  const auto z2 = GroupSpec::abelian({2});
  const auto z3 = GroupSpec::abelian({3});
  const auto s3 = s3_table_group();
  const std::array<std::pair<GroupPtr, std::string>, 3> groups = {
      {{z2, "Z2"}, {z3, "Z3"}, {s3, "S3"}}};

  std::vector<Item5Instance> out;
  for (std::size_t i = 0; i < 25; ++i) {
    const auto& [g, name] = groups[i % 3];
    const std::size_t n = 8 + (i % 7);
    Rng rng = Rng::for_trial(seed, 1000 + i);
    for (int attempt = 0; attempt < 200; ++attempt) {
      const std::size_t ngens = 1 + rng.below(1 + n / 3);
      std::vector<TupleElement> gens;
      for (std::size_t j = 0; j < ngens; ++j) gens.push_back(random_tuple(g, n, rng));
      Subgroup h(g, n, std::move(gens));
      BigInt order;
      try {
        order = BigInt(h.enumerate(4096).size());
      } catch (const CapExceeded&) {
        continue;
      }
      if (order * order > big_pow(BigInt(g->order()), n)) continue;
      if (order > 2048) continue;
      out.push_back(Item5Instance{g, name, n, std::move(h)});
      break;
    }
  }
  return out;
}

struct ItemRunner {
  std::uint64_t seed;
  std::vector<SuiteItem> items;
  // caches shared between items
  std::vector<Item5Instance> inst5;
  std::map<std::string, CoverFamily> covers;  // key: instance#/r
  std::map<std::string, BiasedSpace> spaces;  // hitting spaces

  explicit ItemRunner(std::uint64_t s) : seed(s), inst5(item5_instances(s)) {}

  CoverFamily& cover_for(std::size_t idx, std::size_t r) {
    const std::string key = std::to_string(idx) + "/" + std::to_string(r);
    auto it = covers.find(key);
    if (it == covers.end()) {
      const auto& inst = inst5[idx];
      it = covers
               .emplace(key, build_cover(inst.h, r,
                                         CoverParams::desk(inst.n, r)))
               .first;
    }
    return it->second;
  }

  void run(const std::string& id, const std::string& name, double budget,
           const std::function<void(SuiteItem&)>& fn) {
    SuiteItem item;
    item.id = id;
    item.name = name;
    item.budget_seconds = budget;
    item.pass = true;
    item.details = nlohmann::json::object();
    const auto t0 = Clock::now();
    try {
      fn(item);
    } catch (const std::exception& e) {
      item.pass = false;
      item.details["exception"] = e.what();
    }
    item.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budget > 0 && item.seconds >= budget) {
      item.pass = false;
      item.details["over_budget"] = true;
    }
    items.push_back(std::move(item));
  }
};

void check(SuiteItem& item, bool cond, const std::string& what) {
  if (!cond) {
    item.pass = false;
    if (!item.details.contains("first_failure")) item.details["first_failure"] = what;
  }
}

// --------------------------------------------------------------- criteria

void item1_bias_lambda(SuiteItem& item, std::uint64_t seed) {
  const auto z2 = GroupSpec::abelian({2});
  const auto z3 = GroupSpec::abelian({3});
  const auto z24 = GroupSpec::abelian({2, 4});
  const std::array<std::pair<GroupPtr, std::size_t>, 3> cases = {
      {{z2, 4}, {z3, 3}, {z24, 2}}};
  double worst = 0;
  std::size_t count = 0;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& [g, n] = cases[ci];
    for (std::size_t it = 0; it < 18; ++it) {
      Rng rng = Rng::for_trial(seed, 100 + ci * 100 + it);
      const auto s = random_symmetric_multiset(g, n, 1 + rng.below(8), rng);
      const CayleyGraph graph(s);
      const double ch = lambda_by_characters(graph).lambda;
      const double nu = lambda_numeric(graph).lambda;
      const double mb = measure_bias(s);
      check(item, ch == mb, "character path must equal measure_bias exactly");
      worst = std::max(worst, std::abs(ch - nu));
      ++count;
    }
  }
  check(item, worst <= 1e-6, "numeric/character disagreement above 1e-6");
  item.details["multisets"] = count;
  item.details["worst_numeric_gap"] = worst;
}

void item2_construction_quality(SuiteItem& item) {
  const auto z2 = GroupSpec::abelian({2});
  const auto z3 = GroupSpec::abelian({3});
  const auto z5 = GroupSpec::abelian({5});
  const auto z24 = GroupSpec::abelian({2, 4});
  const std::array<std::pair<GroupPtr, std::string>, 4> groups = {
      {{z2, "Z2"}, {z3, "Z3"}, {z5, "Z5"}, {z24, "Z2xZ4"}}};
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [g, gname] : groups) {
    const std::size_t k = g->invariant_factors().size();
    const std::uint32_t m = g->exponent();
    for (const auto& [num, den] : std::array<std::pair<int, int>, 3>{
             {{1, 2}, {1, 4}, {1, 8}}}) {
      const BigRat eps(num, den);
      const std::size_t nlo = (k == 1) ? 2 : 1;
      for (std::size_t n = nlo; n <= 6; ++n) {
        const auto sp = construct_for_group(g, n, eps);
        check(item, sp.verified && sp.measured_bias.has_value(),
              "cell must be sweep-verified");
        check(item, *sp.measured_bias <= rat_to_double(eps) + 1e-9,
              "measured bias above epsilon");
        check(item, sp.symmetric && sp.space.is_symmetric(),
              "output must be symmetric");
        const std::size_t nk = n * k;
        const std::uint64_t qeff = effective_q_bound(*g, n, eps);
        const bool prime_case = is_prime_u64(m);
        // the literal prime-case clause, wherever it is attainable
        if (prime_case) {
          const BigRat lit = BigRat(std::int64_t(nk) - 1) / eps;
          if (lit >= BigRat(m)) {
            const auto qlit = next_prime_geq(
                ((numerator(lit) + denominator(lit) - 1) / denominator(lit))
                    .convert_to<std::uint64_t>());
            check(item, qeff == qlit, "q bound must match the literal clause");
            check(item, BigInt(sp.space.total()) <= 2 * BigInt(qlit) * BigInt(qlit),
                  "size above 2*q^2 (literal prime case)");
          }
        }
        if (prime_case)
          check(item, BigInt(sp.space.total()) <= 2 * BigInt(qeff) * BigInt(qeff),
                "size above 2*Qeff^2 (prime case)");
        cells.push_back({{"group", gname},
                         {"eps", rat_to_string(eps)},
                         {"n", n},
                         {"branch", sp.meta.value("branch", "")},
                         {"size", sp.space.total()},
                         {"bias", *sp.measured_bias}});
      }
    }
  }
  item.details["cells"] = cells;
}

void item3_prime_field_exact(SuiteItem& item) {
  double worst = 0;
  for (std::uint32_t q : {3u, 5u, 7u}) {
    for (std::size_t n = 2; n <= q; ++n) {
      const auto sp = construct_prime_field(q, n);
      const double want = double(n - 1) / q;
      check(item, sp.measured_bias.has_value(), "prime-field cell must be measured");
      worst = std::max(worst, std::abs(*sp.measured_bias - want));
    }
  }
  check(item, worst <= 1e-12, "prime-field bias differs from (n-1)/q");
  item.details["worst_abs_error"] = worst;
}

void item4_quotient_lift(SuiteItem& item, std::uint64_t seed) {
  struct Case {
    GroupPtr target;
    GroupPtr source;  // G0 framing
    std::size_t n;
  };
  const std::vector<Case> cases = {
      {GroupSpec::abelian({2, 4}), GroupSpec::abelian({4, 4}), 2},
      {GroupSpec::abelian({2, 2, 6}), GroupSpec::abelian({6, 6, 6}), 2},
  };
  std::size_t checked = 0;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& c = cases[ci];
    for (std::size_t it = 0; it < 20; ++it) {
      Rng rng = Rng::for_trial(seed, 400 + ci * 50 + it);
      TupleMultiset s0(c.source, c.n);
      const std::size_t items = 2 + rng.below(10);
      for (std::size_t i = 0; i < items; ++i)
        s0.add_row(random_tuple(c.source, c.n, rng).coords(), 1 + rng.below(2));
      s0.finalize();
      const double before = measure_bias(s0);
      BiasedSpace sp{std::move(s0), BigRat(1), Construction::explicit_tag,
                     false, before, true, nlohmann::json::object()};
      const auto lifted = quotient_lift(sp, c.target);
      const double after = measure_bias(lifted.space);
      check(item, after <= before + 1e-12, "lift increased the measured bias");
      ++checked;
    }
  }
  item.details["spaces"] = checked;
}

void item5_cover_soundness(SuiteItem& item, ItemRunner& runner) {
  nlohmann::json rows = nlohmann::json::array();
  check(item, runner.inst5.size() == 25, "expected 25 sampled instances");
  for (std::size_t idx = 0; idx < runner.inst5.size(); ++idx) {
    const auto& inst = runner.inst5[idx];
    for (std::size_t r : {1u, 2u}) {
      const CoverFamily& fam = runner.cover_for(idx, r);
      // exact cardinality bound |H_A| <= |H| * |K_A|
      const BigInt horder = inst.h.order();
      for (const auto& mem : fam.members) {
        BigInt korder = 1;
        for ([[maybe_unused]] auto b : mem.block_ids)
          korder *= BigInt(inst.g->order());
        check(item, embedded_bsgs(mem.subgroup).order() <= horder * korder,
              "|H_A| exceeded |H|*|K_A|");
      }
      // enumerated union covers the enumerated ball
      TupleSet uni(inst.g, inst.n);
      for (const auto& mem : fam.members) {
        const auto& els = mem.subgroup.enumerate(1u << 20);
        for (std::size_t i = 0; i < els.size(); ++i) uni.push_row(els.row(i));
      }
      uni.sort_unique();
      const auto ball = ball_around(inst.h, r);
      bool covered = true;
      for (std::size_t i = 0; i < ball.size() && covered; ++i)
        covered = uni.contains(ball.row(i));
      check(item, covered, "B(H,r) escaped the cover union");
      rows.push_back({{"group", inst.group_name},
                      {"n", inst.n},
                      {"H", inst.h.enumerate().size()},
                      {"r", r},
                      {"members", fam.members.size()},
                      {"ball", ball.size()}});
    }
  }
  item.details["instances"] = rows;
}

void item6_schreier_sims(SuiteItem& item, std::uint64_t seed) {
  // S_m orders
  for (std::size_t m = 2; m <= 7; ++m) {
    std::vector<Point> swap_img(m), cyc_img(m);
    for (std::size_t i = 0; i < m; ++i) swap_img[i] = Point(i);
    std::swap(swap_img[0], swap_img[1]);
    for (std::size_t i = 0; i < m; ++i) cyc_img[i] = Point((i + 1) % m);
    const auto g = schreier_sims(
        m, {Permutation(std::move(swap_img)), Permutation(std::move(cyc_img))});
    BigInt want = 1;
    for (std::size_t i = 2; i <= m; ++i) want *= BigInt(i);
    check(item, g.order() == want, "S_m order mismatch");
  }
  // embedded full groups
  const auto z2 = GroupSpec::abelian({2});
  const auto z4 = GroupSpec::abelian({4});
  const auto s3 = s3_table_group();
  for (const auto& g : {z2, z4, s3}) {
    for (std::size_t n = 1; n <= 5; ++n) {
      std::vector<TupleElement> gens;
      for (std::size_t i = 0; i < n; ++i)
        for (auto e : g->generating_set()) {
          std::vector<std::uint8_t> row(n, std::uint8_t(g->identity()));
          row[i] = std::uint8_t(e);
          gens.emplace_back(g, std::move(row));
        }
      Subgroup full(g, n, std::move(gens));
      check(item, embedded_bsgs(full).order() == big_pow(BigInt(g->order()), n),
            "embedded full group order mismatch");
    }
  }
  // member vs enumeration, exhaustive over G^n
  const auto z22 = GroupSpec::abelian({2, 2});
  std::size_t agree_points = 0;
  {
    std::size_t probe = 0;
    for (const auto& g : {z2, z4, z22}) {
      for (std::size_t n = 2; n <= 4; ++n) {
        Rng rng = Rng::for_trial(seed, 600 + probe++);
        std::vector<TupleElement> gens;
        const std::size_t ngens = 1 + rng.below(3);
        for (std::size_t i = 0; i < ngens; ++i) gens.push_back(random_tuple(g, n, rng));
        Subgroup h(g, n, std::move(gens));
        const auto& els = h.enumerate();
        std::vector<std::uint8_t> c(n, 0);
        while (true) {
          const TupleElement x(g, c);
          check(item, bsgs_contains(h, x) == els.contains(x),
                "member/enumeration disagreement");
          ++agree_points;
          std::size_t i = 0;
          for (; i < n; ++i) {
            if (std::uint32_t(c[i]) + 1 < g->order()) {
              ++c[i];
              break;
            }
            c[i] = 0;
          }
          if (i == n) break;
        }
      }
    }
  }
  // coset prefix counts against brute force, 100 random subgroups
  const std::array<GroupPtr, 3> pool = {z2, z4, s3};
  std::size_t prefix_checks = 0;
  for (std::size_t it = 0; it < 100; ++it) {
    Rng rng = Rng::for_trial(seed, 700 + it);
    const auto& g = pool[it % pool.size()];
    const std::size_t n = 2 + rng.below(g->order() > 4 ? 2 : 3);
    std::vector<TupleElement> gens;
    const std::size_t ngens = 1 + rng.below(2);
    for (std::size_t i = 0; i < ngens; ++i) gens.push_back(random_tuple(g, n, rng));
    Subgroup h(g, n, std::move(gens));
    const auto& els = h.enumerate();
    for (std::size_t plen = 1; plen <= n; ++plen) {
      std::vector<std::uint8_t> y(plen, 0);
      while (true) {
        BigInt brute = 0;
        for (std::size_t e = 0; e < els.size(); ++e) {
          const auto row = els.row(e);
          bool match = true;
          for (std::size_t j = 0; j < plen && match; ++j) match = row[j] == y[j];
          brute += match ? 1 : 0;
        }
        check(item, coset_prefix_count(h, {y.data(), plen}) == brute,
              "prefix count differs from brute force");
        ++prefix_checks;
        std::size_t i = 0;
        for (; i < plen; ++i) {
          if (std::uint32_t(y[i]) + 1 < g->order()) {
            ++y[i];
            break;
          }
          y[i] = 0;
        }
        if (i == plen) break;
      }
    }
  }
  item.details["membership_points"] = agree_points;
  item.details["prefix_checks"] = prefix_checks;
}

void item7_greedy(SuiteItem& item, ItemRunner& runner) {
  std::size_t solved = 0, skipped = 0;
  for (std::size_t idx = 0; idx < runner.inst5.size(); ++idx) {
    const auto& inst = runner.inst5[idx];
    for (std::size_t r : {1u, 2u}) {
      const CoverFamily& fam = runner.cover_for(idx, r);
      const BigInt gn = big_pow(BigInt(inst.g->order()), inst.n);
      BigInt mass = 0;
      for (const auto& mem : fam.members) mass += embedded_bsgs(mem.subgroup).order();
      if (BigRat(mass, gn) >= 1) {
        ++skipped;
        continue;
      }
      GreedyCertificate cert;
      const auto x = greedy_conditional(fam, &cert);
      check(item, cert.phi_trace.front() < 1, "phi_0 must be < 1");
      for (std::size_t i = 1; i < cert.phi_trace.size(); ++i)
        check(item, cert.phi_trace[i] <= cert.phi_trace[i - 1],
              "phi trace must be non-increasing");
      check(item, cert.phi_trace.back() < 1, "final phi must be < 1");
      check(item, cert.phi_trace.back() == 0, "final integral phi below 1 must be 0");
      check(item, inst.h.distance_to(x) > r, "oracle distance must exceed r");
      ++solved;
    }
  }
  check(item, solved > 0, "no instance had phi_0 < 1");
  item.details["solved"] = solved;
  item.details["skipped_phi0_ge_1"] = skipped;
}

void item8_hitting(SuiteItem& item, ItemRunner& runner) {
  std::size_t solved = 0;
  for (std::size_t idx = 0; idx < runner.inst5.size(); ++idx) {
    const auto& inst = runner.inst5[idx];
    if (!inst.g->is_abelian_kind()) continue;
    for (std::size_t r : {1u, 2u}) {
      const CoverFamily& fam = runner.cover_for(idx, r);
      const BigRat alpha(1, std::int64_t(2 * fam.members.size()));
      const std::string key = inst.group_name + "/" + std::to_string(inst.n) + "/" +
                              rat_to_string(alpha);
      auto it = runner.spaces.find(key);
      if (it == runner.spaces.end()) {
        ConstructOptions opts;
        opts.verify = false;
        it = runner.spaces
                 .emplace(key, construct_for_group(inst.g, inst.n, alpha, opts))
                 .first;
      }
      HittingCertificate cert;
      const auto x = hit_with_space(fam, it->second, &cert);  // NoHit -> exception
      check(item, inst.h.distance_to(x) > r, "hit must be oracle-remote");
      ++solved;
    }
  }
  check(item, solved > 0, "no abelian instances available");
  item.details["solved"] = solved;
  item.details["spaces_built"] = runner.spaces.size();
}

void item9_block_reduction(SuiteItem& item, std::uint64_t seed) {
  const auto z2 = GroupSpec::abelian({2});
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t n : {8u, 12u, 16u}) {
    for (std::size_t k : {1u, 2u, 3u}) {
      Rng rng = Rng::for_trial(seed, 900 + n * 10 + k);
      Subgroup h(z2, n, {});
      for (int attempt = 0;; ++attempt) {
        check(item, attempt < 500, "failed to sample |H| = 2^k");
        if (attempt >= 500) return;
        std::vector<TupleElement> gens;
        for (std::size_t j = 0; j < k; ++j) gens.push_back(random_tuple(z2, n, rng));
        Subgroup cand(z2, n, std::move(gens));
        if (BigInt(cand.enumerate().size()) == big_pow(BigInt(2), k)) {
          h = std::move(cand);
          break;
        }
      }
      RppInstance inst{h, 0, SolveMode::auto_mode};
      const auto sol = solve_general_k(inst);
      const auto* bc = std::get_if<BlockCertificate>(&sol.certificate);
      check(item, bc != nullptr, "block certificate missing");
      if (!bc) continue;
      for (const auto& blk : bc->blocks)
        check(item, blk.r_achieved == bc->r_block,
              "a block degraded below the formula r_block");
      const std::size_t guarantee = bc->blocks.size() * bc->r_block;
      const std::size_t dist = h.distance_to(sol.x);
      check(item, dist >= guarantee, "oracle distance below blocks*r_block");
      const auto rep = verify_solution(inst, sol);
      check(item, rep.ok, "verify_solution rejected the block solution");
      rows.push_back({{"n", n},
                      {"k", k},
                      {"blocks", bc->blocks.size()},
                      {"r_block", bc->r_block},
                      {"distance", dist}});
    }
  }
  item.details["cases"] = rows;
}

void item10_walk_bound(SuiteItem& item, std::uint64_t seed) {
  struct Ambient {
    GroupPtr g;
    std::size_t n;
  };
  std::vector<Ambient> ambients;
  const auto z2 = GroupSpec::abelian({2});
  const auto z3 = GroupSpec::abelian({3});
  const auto z4 = GroupSpec::abelian({4});
  const auto z24 = GroupSpec::abelian({2, 4});
  const auto s3 = s3_table_group();
  for (std::size_t n = 1; n <= 6; ++n) ambients.push_back({z2, n});
  for (std::size_t n = 1; n <= 3; ++n) ambients.push_back({z3, n});
  for (std::size_t n = 1; n <= 3; ++n) ambients.push_back({z4, n});
  for (std::size_t n = 1; n <= 2; ++n) ambients.push_back({z24, n});
  for (std::size_t n = 1; n <= 2; ++n) ambients.push_back({s3, n});

  struct Config {
    CayleyGraph graph;
    TupleSet b;
    std::size_t t;
  };
  std::vector<Config> exact_configs;
  std::size_t exact_checked = 0;

  std::size_t amb_idx = 0;
  for (const auto& amb : ambients) {
    const BigInt nn = big_pow(BigInt(amb.g->order()), amb.n);
    if (nn > 64) continue;
    Rng rng = Rng::for_trial(seed, 1100 + amb_idx++);

    std::vector<TupleMultiset> steps;
    steps.push_back(full_group_multiset(amb.g, amb.n));
    for (int i = 0; i < 2; ++i)
      steps.push_back(random_symmetric_multiset(amb.g, amb.n, 2 + rng.below(4), rng));

    // subgroup family: cyclic subgroups (deduplicated) plus sampled pairs
    std::vector<Subgroup> subs;
    std::vector<std::vector<std::uint8_t>> seen;
    auto add_sub = [&](Subgroup s) {
      const auto& els = s.enumerate();
      std::vector<std::uint8_t> sig(els.row(0).data(),
                                    els.row(0).data() + els.size() * amb.n);
      for (const auto& old : seen)
        if (old == sig) return;
      seen.push_back(std::move(sig));
      if (subs.size() < 12) subs.push_back(std::move(s));
    };
    const std::uint64_t nsmall = nn.convert_to<std::uint64_t>();
    for (std::uint64_t v = 0; v < nsmall && subs.size() < 12; ++v) {
      std::vector<std::uint8_t> c(amb.n);
      std::uint64_t tmp = v;
      for (std::size_t i = 0; i < amb.n; ++i) {
        c[i] = std::uint8_t(tmp % amb.g->order());
        tmp /= amb.g->order();
      }
      add_sub(Subgroup(amb.g, amb.n, {TupleElement(amb.g, c)}));
    }
    for (int i = 0; i < 3 && subs.size() < 12; ++i)
      add_sub(Subgroup(amb.g, amb.n,
                       {random_tuple(amb.g, amb.n, rng), random_tuple(amb.g, amb.n, rng)}));

    for (const auto& st : steps) {
      const CayleyGraph graph(st);
      std::optional<double> alpha;
      for (const auto& sub : subs) {
        const auto& els = sub.enumerate();
        // identity coset plus up to three shifted cosets
        std::vector<TupleElement> shifts{TupleElement::identity(amb.g, amb.n)};
        for (int i = 0; i < 3; ++i) shifts.push_back(random_tuple(amb.g, amb.n, rng));
        std::vector<std::vector<std::uint8_t>> coset_seen;
        for (const auto& shift : shifts) {
          TupleSet b(amb.g, amb.n);
          for (std::size_t e = 0; e < els.size(); ++e)
            b.push_row(mul(shift, els.element(e)).coords());
          b.sort_unique();
          std::vector<std::uint8_t> sig(b.row(0).data(),
                                        b.row(0).data() + b.size() * amb.n);
          bool dup = false;
          for (const auto& old : coset_seen) dup |= old == sig;
          if (dup) continue;
          coset_seen.push_back(std::move(sig));
          for (std::size_t t : {1u, 2u, 4u, 8u, 16u, 32u}) {
            const auto rep = confinement_probability(graph, b, t, 0, seed, alpha);
            alpha = rep.alpha;
            check(item, rep.exact.has_value(), "exact chain value missing");
            check(item, *rep.exact <= rep.bound + 1e-9,
                  "exact confinement above (beta+alpha)^t");
            ++exact_checked;
            // spot-check configs where 1e5 walks carry real information:
            // Wilson coverage is only nominal once n*p is a few units
            if (exact_configs.size() < 24 && *rep.exact * 1e5 >= 10.0 &&
                (1.0 - *rep.exact) * 1e5 >= 10.0 && (exact_checked % 29) == 0) {
              exact_configs.push_back(Config{graph, b, t});
            }
          }
        }
      }
    }
  }

  // Monte-Carlo spot checks against the exact values
  std::size_t mc_checked = 0;
  for (std::size_t i = 0; i < exact_configs.size() && mc_checked < 12; ++i) {
    const auto& cfg = exact_configs[i];
    const auto rep = confinement_probability(cfg.graph, cfg.b, cfg.t, 100000,
                                             seed + 31 * i, std::nullopt);
    check(item, rep.exact.has_value(), "mc config lost its exact value");
    const bool inside = rep.wilson_lo <= *rep.exact && *rep.exact <= rep.wilson_hi;
    check(item, inside, "exact value escaped the Wilson 99% interval");
    if (!inside)
      item.details["mc_miss"] = {{"i", i},
                                 {"exact", *rep.exact},
                                 {"estimate", rep.estimate},
                                 {"lo", rep.wilson_lo},
                                 {"hi", rep.wilson_hi},
                                 {"t", cfg.t},
                                 {"B", cfg.b.size()},
                                 {"N", big_to_json(cfg.graph.vertex_count())},
                                 {"D", cfg.graph.degree()}};
    ++mc_checked;
  }
  check(item, exact_checked > 500, "config family unexpectedly small");
  check(item, mc_checked >= 10, "too few Monte-Carlo spot checks");
  item.details["exact_configs"] = exact_checked;
  item.details["mc_configs"] = mc_checked;
}

std::vector<SuiteItem> run_items(const std::string& profile, std::uint64_t seed) {
  ItemRunner r(seed);
  r.run("1", "bias equals lambda (characters vs numeric)", 10.0,
        [&](SuiteItem& it) { item1_bias_lambda(it, seed); });
  r.run("2", "construction quality", 30.0, [&](SuiteItem& it) {
    item2_construction_quality(it);
  });
  r.run("3", "prime-field exactness", 0.0,
        [&](SuiteItem& it) { item3_prime_field_exact(it); });
  r.run("4", "quotient lift monotonicity", 0.0,
        [&](SuiteItem& it) { item4_quotient_lift(it, seed); });
  r.run("5", "cover soundness", 60.0,
        [&](SuiteItem& it) { item5_cover_soundness(it, r); });
  r.run("6", "schreier-sims orders, membership, prefix counts", 0.0,
        [&](SuiteItem& it) { item6_schreier_sims(it, seed); });
  r.run("7", "greedy conditional-probabilities solver", 0.0,
        [&](SuiteItem& it) { item7_greedy(it, r); });
  r.run("8", "hitting solver with constructed spaces", 0.0,
        [&](SuiteItem& it) { item8_hitting(it, r); });
  r.run("9", "block reduction", 0.0, [&](SuiteItem& it) { item9_block_reduction(it, seed); });
  r.run("10", "random-walk confinement bound", 60.0,
        [&](SuiteItem& it) { item10_walk_bound(it, seed); });

  if (profile == "full") {
    r.run("F1", "N=4096 numeric eigensolve cross-check", 0.0, [&](SuiteItem& it) {
      const auto z2 = GroupSpec::abelian({2});
      Rng rng = Rng::for_trial(seed, 5000);
      const auto s = random_symmetric_multiset(z2, 12, 12, rng);
      const CayleyGraph g(s);
      const double ch = lambda_by_characters(g).lambda;
      const double nu = lambda_numeric(g).lambda;
      check(it, std::abs(ch - nu) <= 1e-6, "numeric/character gap above 1e-6 at N=4096");
      it.details["gap"] = std::abs(ch - nu);
    });
  }
  return r.items;
}

nlohmann::json items_summary(const std::string& profile, std::uint64_t seed,
                             const std::vector<SuiteItem>& items) {
  nlohmann::json j;
  j["profile"] = profile;
  j["seed"] = seed;
  j["version"] = kVersion;
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const auto& it : items) {
    arr.push_back({{"id", it.id},
                   {"name", it.name},
                   {"pass", it.pass},
                   {"details", it.details}});
    all &= it.pass;
  }
  j["items"] = arr;
  j["all_pass"] = all;
  return j;
}

}  // namespace

SuiteResult run_suite(const std::string& profile, std::uint64_t seed) {
  if (profile != "quick" && profile != "full")
    throw InvalidArgument("profile must be quick or full");
  SuiteResult res;
  res.profile = profile;
  res.seed = seed;
  res.items = run_items(profile, seed);

  // determinism: a second full execution must reproduce the summary bytes
  SuiteItem det;
  det.id = "11";
  det.name = "determinism (byte-identical reruns)";
  const auto t0 = Clock::now();
  const auto again = run_items(profile, seed);
  const std::string b1 = items_summary(profile, seed, res.items).dump();
  const std::string b2 = items_summary(profile, seed, again).dump();
  det.pass = b1 == b2;
  det.details = nlohmann::json::object();
  det.details["bytes"] = b1.size();
  if (!det.pass) det.details["first_failure"] = "second run produced different bytes";
  det.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  res.items.push_back(std::move(det));

  res.all_pass = true;
  for (const auto& it : res.items) res.all_pass &= it.pass;
  return res;
}

nlohmann::json SuiteResult::summary_json() const {
  return items_summary(profile, seed, items);
}

nlohmann::json SuiteResult::timings_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& it : items) j[it.id] = it.seconds;
  return j;
}

}  // namespace rpp

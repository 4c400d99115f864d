#include <doctest.h>

#include <functional>

#include "rpp/solver.hpp"
#include "test_helpers.hpp"

using namespace rpp;
using testutil::s3_group;

namespace {

TupleElement tup(const GroupPtr& g, std::vector<std::uint8_t> c) {
  return TupleElement(g, std::move(c));
}

// enumerate B(H, r) = H * B(r) exactly
TupleSet ball_around(const Subgroup& h, std::size_t r) {
  const auto& g = h.group();
  const std::size_t n = h.ambient_n();
  TupleSet out(h.group_ptr(), n);
  const auto& els = h.enumerate();
  // enumerate weight <= r perturbations recursively
  std::vector<std::uint8_t> base(n);
  std::vector<std::uint8_t> cur(n);
  for (std::size_t ei = 0; ei < els.size(); ++ei) {
    const auto row = els.row(ei);
    std::copy(row.begin(), row.end(), base.begin());
    cur.assign(base.begin(), base.end());
    // iterative enumeration: choose up to r coordinates to overwrite
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
    rec(0, 0);
  }
  out.sort_unique();
  return out;
}

}  // namespace

TEST_CASE("build_cover: r = 0 degenerates to {H}") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup h(z2, 4, {tup(z2, {1, 1, 1, 1})});
  const auto fam = build_cover(h, 0, CoverParams::desk(4, 0));
  REQUIRE(fam.members.size() == 1);
  CHECK(fam.members[0].block_ids.empty());
  CHECK(fam.members[0].subgroup.enumerate().size() == 2);
}

TEST_CASE("build_cover: singleton blocks on Z2^4, r = 1 and r = 2") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup h(z2, 4, {tup(z2, {1, 1, 1, 1})});

  const auto fam1 = build_cover(h, 1, CoverParams::desk(4, 1));
  REQUIRE(fam1.members.size() == 4);
  for (const auto& mem : fam1.members)
    CHECK(mem.subgroup.enumerate().size() == 4);  // |H| * |G| = 2*2
  const auto ball1 = ball_around(h, 1);
  CHECK(ball1.size() == 10);
  for (std::size_t i = 0; i < ball1.size(); ++i) {
    bool covered = false;
    for (const auto& mem : fam1.members)
      covered |= mem.subgroup.enumerate().contains(ball1.row(i));
    CHECK(covered);
  }

  const auto fam2 = build_cover(h, 2, CoverParams::desk(4, 2));
  REQUIRE(fam2.members.size() == 6);
  const auto ball2 = ball_around(h, 2);
  for (std::size_t i = 0; i < ball2.size(); ++i) {
    bool covered = false;
    for (const auto& mem : fam2.members)
      covered |= mem.subgroup.enumerate().contains(ball2.row(i));
    CHECK(covered);
  }

  // |H_A| <= |H| * |K_A| exactly
  for (const auto& mem : fam2.members)
    CHECK(BigInt(mem.subgroup.enumerate().size()) <= BigInt(2) * 4);
}

TEST_CASE("build_cover: preconditions") {
  auto z2 = GroupSpec::abelian({2});
  // delta(H) > n/2 rejected
  Subgroup big(z2, 2, {tup(z2, {1, 0}), tup(z2, {0, 1})});
  CHECK_THROWS_AS(build_cover(big, 1, CoverParams::desk(2, 1)), RegimeViolation);

  // insufficient a_size rejected
  Subgroup h(z2, 4, {tup(z2, {1, 1, 1, 1})});
  CoverParams p = CoverParams::desk(4, 2);
  p.a_size = 1;
  CHECK_THROWS_AS(build_cover(h, 2, p), RegimeViolation);
}

TEST_CASE("hit_with_space: scan order and NoHit") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup diag(z2, 2, {tup(z2, {1, 1})});

  CoverFamily fam{CoverParams::desk(2, 0), diag, 0, {}, {}};
  fam.members.push_back(CoverMember{{}, diag});

  TupleMultiset all(z2, 2);
  for (std::uint8_t a : {0, 1})
    for (std::uint8_t b : {0, 1}) all.add_row(std::vector<std::uint8_t>{a, b});
  all.finalize();
  BiasedSpace sp{std::move(all), BigRat(1, 2), Construction::explicit_tag,
                 true, std::nullopt, false, nlohmann::json::object()};

  HittingCertificate cert;
  const auto x = hit_with_space(fam, sp, &cert);
  CHECK(x == tup(z2, {0, 1}));  // lex scan: (0,0) inside, (0,1) first outside
  CHECK(cert.scanned == 2);

  // covering member = everything: NoHit
  Subgroup full(z2, 2, {tup(z2, {1, 0}), tup(z2, {0, 1})});
  CoverFamily famfull{CoverParams::desk(2, 0), diag, 0, {}, {}};
  famfull.members.push_back(CoverMember{{}, full});
  CHECK_THROWS_AS(hit_with_space(famfull, sp, nullptr), NoHit);
}

TEST_CASE("greedy_conditional: hand-traced example and stuck detection") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup diag(z2, 2, {tup(z2, {1, 1})});
  CoverFamily fam{CoverParams::desk(2, 0), diag, 0, {}, {}};
  fam.members.push_back(CoverMember{{}, diag});

  GreedyCertificate cert;
  const auto x = greedy_conditional(fam, &cert);
  CHECK(x == tup(z2, {0, 1}));
  REQUIRE(cert.phi_trace.size() == 3);
  CHECK(cert.phi_trace[0] == BigRat(1, 2));
  CHECK(cert.phi_trace[1] == BigRat(1, 2));
  CHECK(cert.phi_trace[2] == BigRat(0));

  Subgroup full(z2, 2, {tup(z2, {1, 0}), tup(z2, {0, 1})});
  CoverFamily stuck{CoverParams::desk(2, 0), diag, 0, {}, {}};
  stuck.members.push_back(CoverMember{{}, full});
  CHECK_THROWS_AS(greedy_conditional(stuck, nullptr), EstimatorStuck);
}

TEST_CASE("greedy martingale: average of extensions equals current phi") {
  auto z3 = GroupSpec::abelian({3});
  Rng rng(606);
  const auto h = testutil::random_subgroup(z3, 5, 2, rng);
  if (h.order() * h.order() > big_pow(BigInt(3), 5)) return;  // regime
  const auto fam = build_cover(h, 1, CoverParams::desk(5, 1));

  std::vector<std::uint8_t> prefix;
  for (std::size_t i = 0; i < 3; ++i) {
    BigInt cur = 0, ext = 0;
    for (const auto& mem : fam.members)
      cur += coset_prefix_count(mem.subgroup, {prefix.data(), prefix.size()});
    for (std::uint32_t e = 0; e < 3; ++e) {
      prefix.push_back(std::uint8_t(e));
      for (const auto& mem : fam.members)
        ext += coset_prefix_count(mem.subgroup, {prefix.data(), prefix.size()});
      prefix.pop_back();
    }
    CHECK(ext == cur);  // extensions partition the prefix class
    prefix.push_back(0);
  }
}

TEST_CASE("greedy on a nonabelian diagonal subgroup") {
  auto s3 = s3_group();
  std::vector<std::uint8_t> diag(4);
  std::vector<TupleElement> gens;
  for (std::uint32_t e : {1u, 3u}) {  // a transposition and a 3-cycle generate S3
    std::fill(diag.begin(), diag.end(), std::uint8_t(e));
    gens.push_back(tup(s3, diag));
  }
  Subgroup h(s3, 4, gens);
  REQUIRE(h.enumerate().size() == 6);

  const auto fam = build_cover(h, 1, CoverParams::desk(4, 1));
  GreedyCertificate cert;
  const auto x = greedy_conditional(fam, &cert);
  for (const auto& mem : fam.members)
    CHECK_FALSE(mem.subgroup.enumerate().contains(x));
  CHECK(h.distance_to(x) > 1);
  CHECK(cert.phi_trace.front() < 1);
  for (std::size_t i = 1; i < cert.phi_trace.size(); ++i)
    CHECK(cert.phi_trace[i] <= cert.phi_trace[i - 1]);
}

TEST_CASE("solve_half_dim: trivial subgroup, r = 0") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup trivial(z2, 3, {});
  RppInstance inst{trivial, 0, SolveMode::auto_mode};
  const auto sol = solve_half_dim(inst);
  CHECK(trivial.distance_to(sol.x) > 0);
  CHECK(verify_solution(inst, sol).ok);
}

TEST_CASE("solve_half_dim: Z2 n=12 with |H| = 64, r = 2") {
  auto z2 = GroupSpec::abelian({2});
  Rng rng(4242);
  for (int attempt = 0;; ++attempt) {
    REQUIRE(attempt < 200);
    const auto h = testutil::random_subgroup(z2, 12, 6, rng);
    if (h.enumerate().size() != 64) continue;
    RppInstance inst{h, 2, SolveMode::auto_mode};
    const auto sol = solve_half_dim(inst);
    CHECK(h.distance_to(sol.x) >= 3);
    const auto rep = verify_solution(inst, sol);
    CHECK(rep.ok);
    REQUIRE(rep.exact_distance.has_value());
    CHECK(*rep.exact_distance >= 3);
    break;
  }
}

TEST_CASE("solve_half_dim: table-kind and abelian-kind agree on Z2xZ2") {
  auto z22 = GroupSpec::abelian({2, 2});
  // same group as an opaque table
  std::vector<std::vector<std::uint32_t>> table(4, std::vector<std::uint32_t>(4));
  for (std::uint32_t a = 0; a < 4; ++a)
    for (std::uint32_t b = 0; b < 4; ++b) table[a][b] = z22->mul(a, b);
  auto z22t = GroupSpec::from_table(table);

  for (const auto& g : {z22, z22t}) {
    Subgroup h(g, 6, {tup(g, {1, 1, 0, 0, 3, 2}), tup(g, {0, 0, 1, 1, 2, 0})});
    RppInstance inst{h, 1, SolveMode::auto_mode};
    const auto sol = solve_half_dim(inst);
    const auto rep = verify_solution(inst, sol);
    CHECK(rep.ok);
    CHECK(h.distance_to(sol.x) > 1);
  }
}

TEST_CASE("solve_general_k: worked n=4 diagonal example") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup h(z2, 4, {tup(z2, {1, 1, 1, 1})});
  RppInstance inst{h, 1, SolveMode::auto_mode};
  const auto sol = solve_general_k(inst);
  CHECK(sol.x == tup(z2, {0, 1, 0, 1}));
  CHECK(h.distance_to(sol.x) == 2);
  CHECK(sol.claimed_r == 1);
  const auto* bc = std::get_if<BlockCertificate>(&sol.certificate);
  REQUIRE(bc != nullptr);
  CHECK(bc->blocks.size() == 2);
  CHECK(bc->r_block == 1);
  CHECK(verify_solution(inst, sol).ok);
}

TEST_CASE("solve_general_k: k = n/2 single-block boundary") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup h(z2, 4, {tup(z2, {1, 1, 0, 0}), tup(z2, {0, 0, 1, 1})});
  REQUIRE(h.enumerate().size() == 4);  // k = 2 = n/2
  RppInstance inst{h, 0, SolveMode::auto_mode};
  const auto sol = solve_general_k(inst);
  const auto* bc = std::get_if<BlockCertificate>(&sol.certificate);
  REQUIRE(bc != nullptr);
  CHECK(bc->blocks.size() == 1);
  CHECK(verify_solution(inst, sol).ok);
}

TEST_CASE("solve_general_k: Z3 n=16 k=2 with c=1 degrades gracefully") {
  auto z3 = GroupSpec::abelian({3});
  Rng rng(777);
  for (int attempt = 0;; ++attempt) {
    REQUIRE(attempt < 300);
    const auto h = testutil::random_subgroup(z3, 16, 2, rng);
    if (h.enumerate().size() != 9) continue;
    RppInstance inst{h, 0, SolveMode::auto_mode};
    SolveOptions opts;
    opts.c = BigRat(1);
    const auto sol = solve_general_k(inst, opts);
    const auto rep = verify_solution(inst, sol);
    CHECK(rep.ok);
    REQUIRE(rep.exact_distance.has_value());
    CHECK(*rep.exact_distance > sol.claimed_r);
    const auto* bc = std::get_if<BlockCertificate>(&sol.certificate);
    REQUIRE(bc != nullptr);
    std::size_t sum = 0;
    for (const auto& blk : bc->blocks) sum += blk.r_achieved;
    CHECK(sum - 1 == sol.claimed_r);
    break;
  }
}

TEST_CASE("verify_solution: tampering is caught") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup h(z2, 6, {tup(z2, {1, 1, 1, 0, 0, 0}), tup(z2, {0, 0, 0, 1, 1, 1})});
  RppInstance inst{h, 1, SolveMode::auto_mode};
  auto sol = solve_half_dim(inst);
  REQUIRE(verify_solution(inst, sol).ok);
  sol.x = h.generators()[0];  // inside H
  const auto rep = verify_solution(inst, sol);
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.first_violation.empty());
}

TEST_CASE("solution json round trip") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup h(z2, 6, {tup(z2, {1, 1, 0, 0, 1, 0})});
  RppInstance inst{h, 1, SolveMode::auto_mode};
  const auto sol = solve_half_dim(inst);
  const auto j = sol.to_json();
  const auto back = RppSolution::from_json(z2, j);
  CHECK(back.to_json() == j);
  CHECK(verify_solution(inst, back).ok);

  const auto ij = inst.to_json();
  const auto inst2 = RppInstance::from_json(ij);
  CHECK(inst2.to_json() == ij);
}

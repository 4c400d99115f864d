#include "rpp/solver.hpp"

#include <cmath>

namespace rpp {

std::string solve_mode_name(SolveMode m) {
  switch (m) {
    case SolveMode::abelian_hitting: return "abelian_hitting";
    case SolveMode::general_greedy: return "general_greedy";
    case SolveMode::auto_mode: return "auto";
  }
  return "auto";
}

SolveMode solve_mode_from_name(const std::string& s) {
  if (s == "abelian_hitting") return SolveMode::abelian_hitting;
  if (s == "general_greedy") return SolveMode::general_greedy;
  if (s == "auto") return SolveMode::auto_mode;
  throw ParseError("unknown solve mode: " + s);
}

nlohmann::json RppInstance::to_json() const {
  nlohmann::json j;
  j["group"] = h.group().to_json();
  j["n"] = h.ambient_n();
  j["generators"] = h.to_json()["generators"];
  j["r"] = r;
  j["mode"] = solve_mode_name(mode);
  return j;
}

RppInstance RppInstance::from_json(const nlohmann::json& j) {
  auto g = GroupSpec::from_json(j.at("group"));
  Subgroup h = Subgroup::from_json(g, j);
  RppInstance inst{std::move(h), j.at("r").get<std::size_t>(), SolveMode::auto_mode};
  if (j.contains("mode")) inst.mode = solve_mode_from_name(j.at("mode"));
  return inst;
}

TupleElement hit_with_space(const CoverFamily& cover, const BiasedSpace& s,
                            HittingCertificate* cert) {
  const auto& space = s.space;
  if (space.width() != cover.base.ambient_n() ||
      !space.group().same_as(cover.base.group()))
    throw InvalidArgument("space/cover shape mismatch");
  for (std::size_t i = 0; i < space.distinct(); ++i) {
    const TupleElement cand = space.element(i);
    bool outside_all = true;
    for (const auto& mem : cover.members)
      if (bsgs_contains(mem.subgroup, cand)) {
        outside_all = false;
        break;
      }
    if (!outside_all) continue;
    if (cert) {
      cert->verdicts.clear();
      for (const auto& mem : cover.members)
        cert->verdicts.emplace_back(mem.block_ids, false);
      cert->scanned = i + 1;
      cert->alpha = rat_to_string(s.target_epsilon);
      cert->space_size = space.total();
    }
    return cand;
  }
  throw NoHit("every element of the space lies in some cover member");
}

namespace {

BigInt total_prefix_count(const CoverFamily& cover,
                          std::span<const std::uint8_t> prefix) {
  BigInt total = 0;
  for (const auto& mem : cover.members) total += coset_prefix_count(mem.subgroup, prefix);
  return total;
}

}  // namespace

TupleElement greedy_conditional(const CoverFamily& cover, GreedyCertificate* cert) {
  const auto& g = cover.base.group();
  const std::size_t n = cover.base.ambient_n();
  const BigInt gn = big_pow(BigInt(g.order()), n);

  std::vector<std::uint8_t> prefix;
  prefix.reserve(n);
  std::vector<BigRat> trace;
  const BigInt phi0_num = total_prefix_count(cover, prefix);
  trace.emplace_back(phi0_num, gn);
  if (trace.back() >= 1)
    throw EstimatorStuck("phi_0 = " + rat_to_string(trace.back()) + " >= 1");

  for (std::size_t i = 0; i < n; ++i) {
    BigInt best_count;
    std::uint32_t best_elem = 0;
    bool first = true;
    for (std::uint32_t e = 0; e < g.order(); ++e) {
      prefix.push_back(std::uint8_t(e));
      const BigInt cnt = total_prefix_count(cover, prefix);
      prefix.pop_back();
      if (first || cnt < best_count) {
        best_count = cnt;
        best_elem = e;
        first = false;
      }
    }
    prefix.push_back(std::uint8_t(best_elem));
    trace.emplace_back(best_count, big_pow(BigInt(g.order()), n - i - 1));
  }
  if (trace.back() >= 1)
    throw EstimatorStuck("final phi >= 1; the estimator could not finish");
  if (cert) cert->phi_trace = trace;
  return TupleElement(cover.base.group_ptr(), prefix);
}

namespace {

SolveMode resolve_mode(SolveMode m, const GroupSpec& g) {
  if (m != SolveMode::auto_mode) return m;
  return g.is_abelian_kind() ? SolveMode::abelian_hitting : SolveMode::general_greedy;
}

nlohmann::json cover_json(const CoverFamily& fam) {
  nlohmann::json j;
  j["params"] = fam.params.to_json();
  j["r"] = fam.r;
  j["m_actual"] = fam.members.size();
  return j;
}

}  // namespace

RppSolution solve_half_dim(const RppInstance& inst, const SolveOptions& opts) {
  const auto& g = inst.h.group();
  const std::size_t n = inst.h.ambient_n();
  if (opts.enforce_r_bound) {
    const double bound = std::ceil(rat_to_double(opts.c) * std::log2(double(n)));
    if (double(inst.r) > bound)
      throw RegimeViolation("r exceeds ceil(c log2 n)");
  }
  const CoverParams params =
      opts.cover_params ? *opts.cover_params : CoverParams::desk(n, inst.r);
  CoverFamily cover = build_cover(inst.h, inst.r, params);

  const SolveMode mode = resolve_mode(inst.mode, g);
  RppSolution sol{TupleElement::identity(inst.h.group_ptr(), n), mode, inst.r,
                  nlohmann::json::object(), GreedyCertificate{}, std::nullopt};
  sol.params["cover"] = cover_json(cover);
  sol.params["mode"] = solve_mode_name(mode);
  sol.params["c"] = rat_to_string(opts.c);

  if (mode == SolveMode::abelian_hitting) {
    if (!g.is_abelian_kind())
      throw InvalidArgument("hitting mode needs the abelian kind");
    const BigRat alpha = opts.alpha_override
                             ? *opts.alpha_override
                             : BigRat(1, std::int64_t(2 * cover.members.size()));
    ConstructOptions copts;
    copts.verify = false;  // soundness comes from the membership verdicts
    const BiasedSpace space =
        construct_for_group(inst.h.group_ptr(), n, alpha, copts);
    HittingCertificate cert;
    sol.x = hit_with_space(cover, space, &cert);
    sol.params["alpha"] = rat_to_string(alpha);
    sol.params["space"] = {{"size", space.space.total()},
                           {"branch", space.meta.value("branch", "")}};
    sol.certificate = std::move(cert);
  } else {
    GreedyCertificate cert;
    sol.x = greedy_conditional(cover, &cert);
    sol.certificate = std::move(cert);
  }
  return sol;
}

namespace {

std::size_t ceil_log_order(const BigInt& order, std::uint32_t base) {
  std::size_t k = 0;
  BigInt p = 1;
  while (p < order) {
    p *= base;
    ++k;
  }
  return k;
}

std::size_t r_block_of(const BigRat& c, std::size_t k_clamped) {
  // exact for powers of two, double elsewhere
  std::size_t j = 0, v = k_clamped;
  while (v % 2 == 0) {
    v /= 2;
    ++j;
  }
  if (v == 1) {
    const BigRat t = BigRat(4) * c * BigRat(std::int64_t(j));
    const BigInt num = numerator(t), den = denominator(t);
    return std::size_t(((num + den - 1) / den).convert_to<std::uint64_t>());
  }
  return std::size_t(
      std::ceil(4.0 * rat_to_double(c) * std::log2(double(k_clamped))));
}

}  // namespace

RppSolution solve_general_k(const RppInstance& inst, const SolveOptions& opts) {
  const auto& g = inst.h.group();
  const std::size_t n = inst.h.ambient_n();
  const BigInt horder = inst.h.order();
  if (horder * horder > big_pow(BigInt(g.order()), n))
    throw RegimeViolation("delta(H) > n/2");

  const std::size_t k_int = ceil_log_order(horder, g.order());
  const std::size_t k1 = std::max<std::size_t>(1, k_int);
  const std::size_t m = std::max<std::size_t>(1, n / (2 * k1));
  const std::size_t k_clamped = std::max<std::size_t>(2, k_int);
  const std::size_t r_block = std::max<std::size_t>(1, r_block_of(opts.c, k_clamped));

  // balanced consecutive blocks
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  const std::size_t lo = n / m, extra = n % m;
  std::size_t at = 0;
  for (std::size_t b = 0; b < m; ++b) {
    const std::size_t len = lo + (b < extra ? 1 : 0);
    if (m > 1 && (len < 2 * k1 || len >= 4 * k1))
      throw RegimeViolation("block sizes fell outside [2k, 4k)");
    ranges.emplace_back(at, at + len);
    at += len;
  }

  BlockCertificate cert;
  cert.r_block = r_block;
  std::vector<std::uint8_t> xall(n);
  std::size_t total_guarantee = 0;
  for (const auto& [s, e] : ranges) {
    const Subgroup proj = project_subgroup(inst.h, s, e - s);
    std::size_t achieved = 0;
    nlohmann::json sub;
    TupleElement bx = TupleElement::identity(inst.h.group_ptr(), e - s);
    for (std::size_t rin = r_block - 1;; --rin) {
      try {
        RppInstance bi{proj, rin, inst.mode};
        RppSolution bs = solve_half_dim(bi, opts);
        achieved = rin + 1;
        bx = bs.x;
        sub = bs.to_json();
        break;
      } catch (const NoHit&) {
      } catch (const EstimatorStuck&) {
      }
      if (rin == 0)
        throw RegimeViolation("block admits no remote point even at r = 0");
    }
    for (std::size_t i = s; i < e; ++i) xall[i] = bx[i - s];
    total_guarantee += achieved;
    cert.blocks.push_back(
        BlockCertificate::Block{s, e - s, r_block, achieved, bx, std::move(sub)});
  }

  RppSolution sol{TupleElement(inst.h.group_ptr(), std::move(xall)),
                  resolve_mode(inst.mode, g), total_guarantee - 1,
                  nlohmann::json::object(), std::move(cert), std::nullopt};
  sol.params["mode"] = solve_mode_name(resolve_mode(inst.mode, g));
  sol.params["c"] = rat_to_string(opts.c);
  sol.params["k"] = k_int;
  sol.params["blocks"] = m;
  sol.params["r_block"] = r_block;
  return sol;
}

// ------------------------------------------------------------ verification

namespace {

CoverFamily rebuild_cover(const RppInstance& inst, const nlohmann::json& params) {
  const auto cj = params.at("cover");
  return build_cover(inst.h, cj.at("r").get<std::size_t>(),
                     CoverParams::from_json(cj.at("params")));
}

}  // namespace

VerifyReport verify_solution(const RppInstance& inst, const RppSolution& sol,
                             std::size_t cap) {
  VerifyReport rep;
  auto fail = [&rep](const std::string& what) {
    if (rep.ok) {
      rep.ok = false;
      rep.first_violation = what;
    }
  };
  auto pass = [&rep](const std::string& what) { rep.passed.push_back(what); };

  if (sol.x.size() != inst.h.ambient_n() || !sol.x.group().same_as(inst.h.group())) {
    fail("solution shape mismatch");
    return rep;
  }

  if (const auto* hc = std::get_if<HittingCertificate>(&sol.certificate)) {
    const CoverFamily cover = rebuild_cover(inst, sol.params);
    if (hc->verdicts.size() != cover.members.size())
      fail("certificate verdict count differs from cover size");
    bool any_member = false;
    for (const auto& mem : cover.members)
      any_member |= bsgs_contains(mem.subgroup, sol.x);
    if (any_member)
      fail("x lies inside a cover member");
    else
      pass("x outside all " + std::to_string(cover.members.size()) + " cover members");
    for (const auto& [a, verdict] : hc->verdicts)
      if (verdict) fail("certificate records a positive membership verdict");
  } else if (const auto* gc = std::get_if<GreedyCertificate>(&sol.certificate)) {
    const CoverFamily cover = rebuild_cover(inst, sol.params);
    const std::size_t n = inst.h.ambient_n();
    if (gc->phi_trace.size() != n + 1) {
      fail("phi trace has wrong length");
    } else {
      const BigInt go(inst.h.group().order());
      bool match = true, monotone = true;
      for (std::size_t i = 0; i <= n; ++i) {
        const std::span<const std::uint8_t> prefix(sol.x.coords().data(), i);
        BigInt cnt = 0;
        for (const auto& mem : cover.members)
          cnt += coset_prefix_count(mem.subgroup, prefix);
        const BigRat phi(cnt, big_pow(go, n - i));
        if (phi != gc->phi_trace[i]) match = false;
        if (i > 0 && gc->phi_trace[i] > gc->phi_trace[i - 1]) monotone = false;
      }
      if (!match) fail("recomputed phi trace differs from certificate");
      if (!monotone) fail("phi trace is not non-increasing");
      if (gc->phi_trace.back() >= 1) fail("final phi >= 1");
      if (rep.ok) pass("phi trace recomputed, non-increasing, final < 1");
    }
  } else if (const auto* bc = std::get_if<BlockCertificate>(&sol.certificate)) {
    std::size_t sum = 0;
    for (const auto& blk : bc->blocks) {
      const Subgroup proj = project_subgroup(inst.h, blk.start, blk.len);
      for (std::size_t i = 0; i < blk.len; ++i)
        if (blk.x[i] != sol.x[blk.start + i]) fail("block x disagrees with solution x");
      try {
        const std::size_t d = proj.distance_to(blk.x, cap);
        if (d < blk.r_achieved)
          fail("block distance " + std::to_string(d) + " below achieved bound");
        else
          pass("block [" + std::to_string(blk.start) + "," +
               std::to_string(blk.start + blk.len) + ") distance >= " +
               std::to_string(blk.r_achieved));
      } catch (const CapExceeded&) {
        pass("block projection too large for the oracle; skipped");
      }
      sum += blk.r_achieved;
    }
    if (sum == 0 || sum - 1 != sol.claimed_r)
      fail("claimed distance does not match the per-block guarantees");
  }

  if (sol.claimed_r < inst.r)
    fail("certified bound is weaker than the instance target");

  try {
    const std::size_t d = inst.h.distance_to(sol.x, cap);
    rep.exact_distance = d;
    if (d > inst.r)
      pass("oracle distance " + std::to_string(d) + " > r = " + std::to_string(inst.r));
    else
      fail("oracle distance " + std::to_string(d) + " <= r");
  } catch (const CapExceeded&) {
    pass("subgroup too large for the exact oracle; certificate checks only");
  } catch (const TooLarge&) {
    pass("subgroup too large for the exact oracle; certificate checks only");
  }
  return rep;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["ok"] = ok;
  j["passed"] = passed;
  if (!ok) j["first_violation"] = first_violation;
  if (exact_distance) j["exact_distance"] = *exact_distance;
  return j;
}

// ------------------------------------------------------------------ JSON

nlohmann::json RppSolution::to_json() const {
  nlohmann::json j;
  j["x"] = x.to_json();
  j["mode"] = solve_mode_name(mode_used);
  j["claimed_r"] = claimed_r;
  j["params"] = params;
  nlohmann::json c;
  if (const auto* hc = std::get_if<HittingCertificate>(&certificate)) {
    c["type"] = "hitting";
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& [a, v] : hc->verdicts) vs.push_back({{"A", a}, {"member", v}});
    c["verdicts"] = vs;
    c["scanned"] = hc->scanned;
    c["alpha"] = hc->alpha;
    c["space_size"] = hc->space_size;
  } else if (const auto* gc = std::get_if<GreedyCertificate>(&certificate)) {
    c["type"] = "greedy";
    nlohmann::json tr = nlohmann::json::array();
    for (const auto& p : gc->phi_trace) tr.push_back(rat_to_string(p));
    c["phi_trace"] = tr;
  } else if (const auto* bc = std::get_if<BlockCertificate>(&certificate)) {
    c["type"] = "blocks";
    c["r_block"] = bc->r_block;
    nlohmann::json bs = nlohmann::json::array();
    for (const auto& blk : bc->blocks)
      bs.push_back({{"start", blk.start},
                    {"len", blk.len},
                    {"r_target", blk.r_target},
                    {"r_achieved", blk.r_achieved},
                    {"x", blk.x.to_json()},
                    {"sub", blk.sub}});
    c["blocks"] = bs;
  }
  j["certificate"] = c;
  if (verified_distance) j["verified_distance"] = *verified_distance;
  return j;
}

RppSolution RppSolution::from_json(GroupPtr g, const nlohmann::json& j) {
  RppSolution sol{TupleElement::from_json(g, j.at("x")),
                  solve_mode_from_name(j.at("mode")),
                  j.at("claimed_r").get<std::size_t>(), j.at("params"),
                  GreedyCertificate{}, std::nullopt};
  const auto& c = j.at("certificate");
  const std::string type = c.at("type");
  if (type == "hitting") {
    HittingCertificate hc;
    for (const auto& v : c.at("verdicts"))
      hc.verdicts.emplace_back(v.at("A").get<std::vector<std::uint32_t>>(),
                               v.at("member").get<bool>());
    hc.scanned = c.at("scanned").get<std::uint64_t>();
    hc.alpha = c.at("alpha").get<std::string>();
    hc.space_size = c.at("space_size").get<std::uint64_t>();
    sol.certificate = std::move(hc);
  } else if (type == "greedy") {
    GreedyCertificate gc;
    for (const auto& p : c.at("phi_trace"))
      gc.phi_trace.push_back(rat_from_string(p.get<std::string>()));
    sol.certificate = std::move(gc);
  } else if (type == "blocks") {
    BlockCertificate bc;
    bc.r_block = c.at("r_block").get<std::size_t>();
    for (const auto& b : c.at("blocks")) {
      bc.blocks.push_back(BlockCertificate::Block{
          b.at("start").get<std::size_t>(), b.at("len").get<std::size_t>(),
          b.value("r_target", std::size_t(0)), b.at("r_achieved").get<std::size_t>(),
          TupleElement::from_json(g, b.at("x")), b.value("sub", nlohmann::json())});
    }
    sol.certificate = std::move(bc);
  } else {
    throw ParseError("unknown certificate type: " + type);
  }
  if (j.contains("verified_distance"))
    sol.verified_distance = j.at("verified_distance").get<std::size_t>();
  return sol;
}

}  // namespace rpp

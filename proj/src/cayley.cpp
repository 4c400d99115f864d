#include "rpp/cayley.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "rpp/embed.hpp"

namespace rpp {

CayleyGraph::CayleyGraph(TupleMultiset s) : s_(std::move(s)) {
  if (!s_.finalized()) throw InvalidArgument("finalize the step multiset first");
  if (s_.total() == 0) throw InvalidArgument("step multiset must be non-empty");
  if (!s_.is_symmetric())
    throw InvalidArgument("Cayley step multiset must be symmetric");
}

namespace {

SpectrumReport make_report(double lambda, std::string method, double degree) {
  SpectrumReport r;
  r.lambda = lambda;
  r.method = std::move(method);
  r.lambda_sqrt_degree = lambda * std::sqrt(degree);
  r.low_flag = r.lambda_sqrt_degree < 0.1;
  return r;
}

}  // namespace

SpectrumReport lambda_by_characters(const CayleyGraph& g) {
  return make_report(measure_bias(g.steps()), "character", double(g.degree()));
}

SpectrumReport lambda_numeric(const CayleyGraph& g) {
  const BigInt nn = g.vertex_count();
  if (nn > 4096) throw TooLarge("numeric eigensolve capped at N = 4096");
  const std::size_t N = nn.convert_to<std::size_t>();
  const auto& grp = g.group();
  const std::size_t n = g.n();

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(Eigen::Index(N), Eigen::Index(N));
  std::vector<std::uint8_t> u(n), v(n);
  for (std::size_t ui = 0; ui < N; ++ui) {
    std::uint64_t tmp = ui;
    for (std::size_t c = n; c-- > 0;) {
      u[c] = std::uint8_t(tmp % grp.order());
      tmp /= grp.order();
    }
    for (std::size_t si = 0; si < g.steps().distinct(); ++si) {
      const auto s = g.steps().row(si);
      std::uint64_t vi = 0;
      for (std::size_t c = 0; c < n; ++c) vi = vi * grp.order() + grp.mul(u[c], s[c]);
      a(Eigen::Index(ui), Eigen::Index(vi)) += double(g.steps().multiplicity(si));
    }
  }
  a /= double(g.degree());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> mags(N);
  for (std::size_t i = 0; i < N; ++i) mags[i] = std::abs(es.eigenvalues()[Eigen::Index(i)]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  const double lambda = N >= 2 ? mags[1] : 0.0;
  return make_report(lambda, "numeric", double(g.degree()));
}

nlohmann::json SpectrumReport::to_json() const {
  nlohmann::json j;
  j["lambda"] = lambda;
  j["method"] = method;
  if (alpha_target) j["alpha_target"] = *alpha_target;
  j["lambda_sqrt_degree"] = lambda_sqrt_degree;
  j["low_flag"] = low_flag;
  return j;
}

void WalkTrace::validate() const {
  if (vertices.size() != steps.size() + 1)
    throw VerificationFailed("walk trace has wrong vertex count");
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (!(mul(vertices[i], steps[i]) == vertices[i + 1]))
      throw VerificationFailed("walk trace step " + std::to_string(i) +
                               " does not satisfy v*s = v'");
}

WalkTrace random_walk(const CayleyGraph& g, std::size_t t, std::uint64_t seed) {
  Rng rng(seed);
  const auto& grp = g.group();
  const std::size_t n = g.n();

  WalkTrace w;
  w.seed = seed;
  std::vector<std::uint8_t> v0(n);
  for (auto& c : v0) c = std::uint8_t(rng.below(grp.order()));
  w.vertices.emplace_back(g.group_ptr(), std::move(v0));

  // cumulative multiplicities for step sampling
  std::vector<std::uint64_t> cum(g.steps().distinct());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < cum.size(); ++i) {
    acc += g.steps().multiplicity(i);
    cum[i] = acc;
  }
  for (std::size_t i = 0; i < t; ++i) {
    const std::uint64_t pick = rng.below(g.degree());
    const auto it = std::upper_bound(cum.begin(), cum.end(), pick);
    const auto si = std::size_t(it - cum.begin());
    w.steps.push_back(g.steps().element(si));
    w.vertices.push_back(mul(w.vertices.back(), w.steps.back()));
  }
  return w;
}

nlohmann::json WalkTrace::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["t"] = steps.size();
  nlohmann::json vs = nlohmann::json::array(), ss = nlohmann::json::array();
  for (const auto& v : vertices) vs.push_back(v.to_json());
  for (const auto& s : steps) ss.push_back(s.to_json());
  j["vertices"] = vs;
  j["steps"] = ss;
  return j;
}

WalkTrace WalkTrace::from_json(GroupPtr g, const nlohmann::json& j) {
  WalkTrace w;
  w.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& v : j.at("vertices"))
    w.vertices.push_back(TupleElement::from_json(g, v));
  for (const auto& s : j.at("steps")) w.steps.push_back(TupleElement::from_json(g, s));
  w.validate();
  return w;
}

namespace {

double wilson_z() { return 2.5758293035489004; }  // 99% two-sided

}  // namespace

ConfinementReport confinement_probability(const CayleyGraph& g, const TupleSet& b,
                                          std::size_t t, std::uint64_t trials,
                                          std::uint64_t seed,
                                          std::optional<double> alpha) {
  const auto& grp = g.group();
  const std::size_t n = g.n();
  ConfinementReport rep;
  rep.t = t;
  rep.trials = trials;

  const BigInt nn = g.vertex_count();
  rep.beta = BigRat(BigInt(b.size()), nn).convert_to<double>();
  if (alpha) {
    rep.alpha = *alpha;
  } else if (grp.is_abelian_kind() && nn <= BigInt(kSweepCapBins)) {
    rep.alpha = lambda_by_characters(g).lambda + 1e-9;
  } else if (nn <= 4096) {
    rep.alpha = lambda_numeric(g).lambda + 1e-9;
  } else {
    throw InvalidArgument("supply alpha for large nonabelian graphs");
  }
  rep.bound = std::pow(rep.beta + rep.alpha, double(t));

  // exact restricted-chain product for small graphs
  if (nn <= 64) {
    const std::size_t bs = b.size();
    Eigen::MatrixXd pb = Eigen::MatrixXd::Zero(Eigen::Index(bs), Eigen::Index(bs));
    std::vector<std::uint8_t> dst(n);
    for (std::size_t ui = 0; ui < bs; ++ui) {
      const auto u = b.row(ui);
      for (std::size_t si = 0; si < g.steps().distinct(); ++si) {
        const auto s = g.steps().row(si);
        for (std::size_t c = 0; c < n; ++c) dst[c] = std::uint8_t(grp.mul(u[c], s[c]));
        // locate dst within B
        std::size_t lo = 0, hi = bs;
        while (lo < hi) {
          const std::size_t mid = (lo + hi) / 2;
          const int cmp = std::memcmp(b.row(mid).data(), dst.data(), n);
          if (cmp == 0) {
            pb(Eigen::Index(ui), Eigen::Index(mid)) +=
                double(g.steps().multiplicity(si));
            break;
          }
          if (cmp < 0)
            lo = mid + 1;
          else
            hi = mid;
        }
      }
    }
    pb /= double(g.degree());
    Eigen::VectorXd mass = Eigen::VectorXd::Ones(Eigen::Index(bs));
    for (std::size_t i = 0; i < t; ++i) mass = pb * mass;
    rep.exact = mass.sum() / nn.convert_to<double>();
  }

  // Monte-Carlo with per-trial derived streams; trials == 0 requests the
  // exact/bound computation only
  if (trials == 0) {
    rep.estimate = 0;
    rep.wilson_lo = 0;
    rep.wilson_hi = 1;
    return rep;
  }
  std::vector<std::uint64_t> cum(g.steps().distinct());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < cum.size(); ++i) {
    acc += g.steps().multiplicity(i);
    cum[i] = acc;
  }
  std::uint64_t hits = 0;
  std::vector<std::uint8_t> v(n);
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::for_trial(seed, trial);
    for (auto& c : v) c = std::uint8_t(rng.below(grp.order()));
    bool inside = b.contains(std::span<const std::uint8_t>(v.data(), n));
    for (std::size_t i = 0; inside && i < t; ++i) {
      const std::uint64_t pick = rng.below(g.degree());
      const auto it = std::upper_bound(cum.begin(), cum.end(), pick);
      const auto s = g.steps().row(std::size_t(it - cum.begin()));
      for (std::size_t c = 0; c < n; ++c) v[c] = std::uint8_t(grp.mul(v[c], s[c]));
      inside = b.contains(std::span<const std::uint8_t>(v.data(), n));
    }
    hits += inside;
  }
  const double z = wilson_z();
  const double nd = double(trials);
  const double ph = double(hits) / nd;
  const double denom = 1.0 + z * z / nd;
  const double center = (ph + z * z / (2 * nd)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / nd + z * z / (4 * nd * nd)) / denom;
  rep.estimate = ph;
  rep.wilson_lo = std::max(0.0, center - half);
  rep.wilson_hi = std::min(1.0, center + half);
  return rep;
}

nlohmann::json ConfinementReport::to_json() const {
  nlohmann::json j;
  j["t"] = t;
  j["trials"] = trials;
  j["estimate"] = estimate;
  j["wilson_99"] = {wilson_lo, wilson_hi};
  if (exact) j["exact"] = *exact;
  j["beta"] = beta;
  j["alpha"] = alpha;
  j["bound"] = bound;
  return j;
}

BigRat subgroup_fraction(const TupleMultiset& s, const Subgroup& h) {
  if (s.width() != h.ambient_n() || !s.group().same_as(h.group()))
    throw InvalidArgument("space/subgroup shape mismatch");
  BigInt inside = 0;
  for (std::size_t i = 0; i < s.distinct(); ++i)
    if (bsgs_contains(h, s.element(i))) inside += BigInt(s.multiplicity(i));
  return BigRat(inside, BigInt(s.total()));
}

BigRat subgroup_fraction(const BiasedSpace& s, const Subgroup& h) {
  return subgroup_fraction(s.space, h);
}

std::uint64_t walk_parameter_t(std::uint64_t n, const BigRat& d_exponent,
                               const GroupSpec& g) {
  if (n < 2) throw InvalidArgument("n must be >= 2");
  // exact when n is a power of |G|
  std::uint64_t p = 1, e = 0;
  while (p < n) {
    p *= g.order();
    ++e;
  }
  if (p == n) {
    const BigRat denom = d_exponent * BigRat(e) - 2;
    if (denom <= 0) throw InvalidArgument("requires d*log_|G| n > 2");
    const BigRat tr = BigRat(2) * BigRat(BigInt(n)) / denom;
    const BigInt num = numerator(tr), den = denominator(tr);
    return ((num + den - 1) / den).convert_to<std::uint64_t>();
  }
  const double lg = std::log2(double(n)) / std::log2(double(g.order()));
  const double denom = rat_to_double(d_exponent) * lg - 2.0;
  if (denom <= 0) throw InvalidArgument("requires d*log_|G| n > 2");
  return std::uint64_t(std::ceil(2.0 * double(n) / denom));
}

}  // namespace rpp

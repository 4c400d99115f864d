#include "rpp/bias.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <numeric>

#include "rpp/kernels.hpp"

namespace rpp {

// ---------------------------------------------------------------- multiset

TupleElement TupleMultiset::element(std::size_t i) const {
  auto r = row(i);
  return TupleElement(g_, std::vector<std::uint8_t>(r.begin(), r.end()));
}

void TupleMultiset::add_row(std::span<const std::uint8_t> r, std::uint64_t count) {
  if (r.size() != n_) throw InvalidArgument("row width mismatch");
  if (count == 0) return;
  flat_.insert(flat_.end(), r.begin(), r.end());
  mult_.push_back(count);
  total_ += count;
  finalized_ = false;
}

void TupleMultiset::finalize() {
  const std::size_t count = mult_.size();
  bool sorted = true;
  for (std::size_t i = 0; i + 1 < count && sorted; ++i)
    sorted = std::memcmp(flat_.data() + i * n_, flat_.data() + (i + 1) * n_, n_) < 0;
  if (!sorted) {
    std::vector<std::uint32_t> order(count);
    std::iota(order.begin(), order.end(), 0u);
    const auto* base = flat_.data();
    const std::size_t w = n_;
    std::sort(order.begin(), order.end(), [base, w](std::uint32_t a, std::uint32_t b) {
      return std::memcmp(base + std::size_t(a) * w, base + std::size_t(b) * w, w) < 0;
    });
    std::vector<std::uint8_t> nf;
    std::vector<std::uint64_t> nm;
    nf.reserve(flat_.size());
    nm.reserve(count);
    for (auto oi : order) {
      const auto* r = base + std::size_t(oi) * w;
      if (!nm.empty() && std::memcmp(nf.data() + nf.size() - w, r, w) == 0) {
        nm.back() += mult_[oi];
      } else {
        nf.insert(nf.end(), r, r + w);
        nm.push_back(mult_[oi]);
      }
    }
    flat_ = std::move(nf);
    mult_ = std::move(nm);
  }
  // strictly ascending rows need no merge pass
  finalized_ = true;
}

namespace {

std::ptrdiff_t find_row(const std::vector<std::uint8_t>& flat, std::size_t n,
                        std::size_t count, const std::uint8_t* r) {
  std::size_t lo = 0, hi = count;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const int c = std::memcmp(flat.data() + mid * n, r, n);
    if (c == 0) return std::ptrdiff_t(mid);
    if (c < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return -1;
}

}  // namespace

bool TupleMultiset::is_symmetric() const {
  if (!finalized_) throw InvalidArgument("finalize() the multiset first");
  std::vector<std::uint8_t> inv(n_);
  for (std::size_t i = 0; i < mult_.size(); ++i) {
    const auto r = row(i);
    for (std::size_t c = 0; c < n_; ++c) inv[c] = std::uint8_t(g_->inv(r[c]));
    const auto j = find_row(flat_, n_, mult_.size(), inv.data());
    if (j < 0 || mult_[std::size_t(j)] != mult_[i]) return false;
  }
  return true;
}

TupleMultiset TupleMultiset::from_json(GroupPtr g, const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty())
    throw ParseError("space must be a non-empty array of tuples");
  const std::size_t n = rows.front().size();
  TupleMultiset s(g, n);
  for (const auto& a : rows) {
    const auto t = TupleElement::from_json(g, a);
    if (t.size() != n) throw ParseError("ragged space rows");
    s.add_row(t.coords());
  }
  s.finalize();
  return s;
}

nlohmann::json TupleMultiset::to_json(std::uint64_t max_elements) const {
  if (total_ > max_elements)
    throw TooLarge("refusing to expand " + std::to_string(total_) +
                   " multiset elements into JSON");
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < mult_.size(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (auto v : row(i)) r.push_back(int(v));
    for (std::uint64_t c = 0; c < mult_[i]; ++c) rows.push_back(r);
  }
  return rows;
}

std::string construction_name(Construction c) {
  switch (c) {
    case Construction::prime_field: return "prime_field";
    case Construction::rounding: return "rounding";
    case Construction::quotient_lift: return "quotient_lift";
    case Construction::explicit_tag: return "explicit";
  }
  return "explicit";
}

Construction construction_from_name(const std::string& s) {
  if (s == "prime_field") return Construction::prime_field;
  if (s == "rounding") return Construction::rounding;
  if (s == "quotient_lift") return Construction::quotient_lift;
  if (s == "explicit") return Construction::explicit_tag;
  throw ParseError("unknown construction tag: " + s);
}

nlohmann::json BiasedSpace::to_json(std::uint64_t max_elements) const {
  nlohmann::json j;
  j["group"] = space.group().to_json();
  j["n"] = space.width();
  j["space"] = space.to_json(max_elements);
  j["construction"] = construction_name(construction);
  j["target_epsilon"] = rat_to_string(target_epsilon);
  j["symmetric"] = symmetric;
  if (measured_bias) j["measured_bias"] = *measured_bias;
  j["verified"] = verified;
  if (!meta.empty()) j["meta"] = meta;
  return j;
}

BiasedSpace BiasedSpace::from_json(GroupPtr g, const nlohmann::json& j) {
  if (!g) g = GroupSpec::from_json(j.at("group"));
  BiasedSpace s{TupleMultiset::from_json(g, j.at("space")), BigRat(1),
                Construction::explicit_tag, false, std::nullopt, false,
                nlohmann::json::object()};
  if (j.contains("target_epsilon")) s.target_epsilon = rat_from_string(j.at("target_epsilon"));
  if (j.contains("construction")) s.construction = construction_from_name(j.at("construction"));
  if (j.contains("symmetric")) s.symmetric = j.at("symmetric").get<bool>();
  if (j.contains("measured_bias")) s.measured_bias = j.at("measured_bias").get<double>();
  if (j.contains("verified")) s.verified = j.at("verified").get<bool>();
  if (j.contains("meta")) s.meta = j.at("meta");
  return s;
}

// ------------------------------------------------------------ measurement

namespace {

std::uint64_t bin_count_checked(const GroupSpec& g, std::size_t n) {
  if (!g.is_abelian_kind())
    throw InvalidArgument("character bias is defined for the abelian kind");
  BigInt bins = big_pow(BigInt(g.order()), n);
  if (bins > BigInt(kSweepCapBins))
    throw TooLarge("|G|^n exceeds the exhaustive sweep cap 2^24");
  return bins.convert_to<std::uint64_t>();
}

struct Kahan {
  double s = 0, c = 0;
  void add(double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

}  // namespace

double measure_bias_sweep(const TupleMultiset& s) {
  bin_count_checked(s.group(), s.width());
  const auto shape = DigitShape::of(s.group(), s.width());
  const auto roots = unit_roots(shape.L);
  const std::size_t dims = shape.dims();
  // digit-expand all distinct rows once
  std::vector<std::uint8_t> digits(s.distinct() * dims);
  for (std::size_t i = 0; i < s.distinct(); ++i)
    shape.row_digits(s.group(), s.row(i).data(), digits.data() + i * dims);

  std::vector<std::uint8_t> label(dims, 0);
  auto advance = [&]() {
    for (std::size_t d = 0; d < dims; ++d) {
      if (std::uint32_t(label[d]) + 1 < shape.mods[d]) {
        ++label[d];
        return true;
      }
      label[d] = 0;
    }
    return false;
  };

  double best = 0.0;
  const double tot = double(s.total());
  while (advance()) {  // skips the trivial character
    Kahan re, im;
    for (std::size_t i = 0; i < s.distinct(); ++i) {
      const std::uint8_t* xd = digits.data() + i * dims;
      std::uint64_t e = 0;
      for (std::size_t d = 0; d < dims; ++d)
        e += std::uint64_t(shape.weights[d]) * label[d] % shape.L * xd[d];
      const auto z = roots[e % shape.L];
      const double m = double(s.multiplicity(i));
      re.add(m * z.real());
      im.add(m * z.imag());
    }
    best = std::max(best, std::hypot(re.s, im.s) / tot);
  }
  return best;
}

namespace {

// in-place transform along one mixed-radix axis
void axis_dft(std::complex<double>* a, std::uint64_t nbins, std::uint64_t stride,
              std::uint32_t d, const std::vector<std::complex<double>>& w) {
  const std::uint64_t span = stride * d;
  if (d == 2) {
    for (std::uint64_t hi = 0; hi < nbins; hi += span)
      for (std::uint64_t lo = 0; lo < stride; ++lo) {
        auto& x = a[hi + lo];
        auto& y = a[hi + lo + stride];
        const auto t = x;
        x = t + y;
        y = t - y;
      }
    return;
  }
  if (d == 4) {
    for (std::uint64_t hi = 0; hi < nbins; hi += span)
      for (std::uint64_t lo = 0; lo < stride; ++lo) {
        auto* p = a + hi + lo;
        const auto v0 = p[0], v1 = p[stride], v2 = p[2 * stride], v3 = p[3 * stride];
        const auto s02 = v0 + v2, d02 = v0 - v2;
        const auto s13 = v1 + v3, d13 = v1 - v3;
        const std::complex<double> jd13(-d13.imag(), d13.real());  // i*(v1-v3)
        p[0] = s02 + s13;
        p[stride] = d02 + jd13;
        p[2 * stride] = s02 - s13;
        p[3 * stride] = d02 - jd13;
      }
    return;
  }
  std::vector<std::complex<double>> buf(d);
  for (std::uint64_t hi = 0; hi < nbins; hi += span)
    for (std::uint64_t lo = 0; lo < stride; ++lo) {
      auto* p = a + hi + lo;
      for (std::uint32_t t = 0; t < d; ++t) buf[t] = p[t * stride];
      for (std::uint32_t t2 = 0; t2 < d; ++t2) {
        std::complex<double> acc{0, 0};
        for (std::uint32_t t = 0; t < d; ++t) acc += buf[t] * w[(std::uint64_t(t) * t2) % d];
        p[t2 * stride] = acc;
      }
    }
}

}  // namespace

double measure_bias_dft(const TupleMultiset& s) {
  const std::uint64_t nbins = bin_count_checked(s.group(), s.width());
  const auto& g = s.group();
  const std::size_t n = s.width();
  const auto& factors = g.invariant_factors();
  const std::size_t k = factors.size();

  std::vector<std::complex<double>> a(nbins, {0.0, 0.0});
  // big-endian coordinate index so that bin order == lex row order
  for (std::size_t i = 0; i < s.distinct(); ++i) {
    const auto r = s.row(i);
    std::uint64_t idx = 0;
    for (std::size_t c = 0; c < n; ++c) idx = idx * g.order() + r[c];
    a[idx] += double(s.multiplicity(i));
  }

  // digit places inside one coordinate (little-endian over factors)
  std::vector<std::uint64_t> place(k);
  std::uint64_t pl = 1;
  for (std::size_t j = 0; j < k; ++j) {
    place[j] = pl;
    pl *= factors[j];
  }
  std::uint64_t coord_stride = 1;
  for (std::size_t ci = n; ci-- > 0;) {
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint32_t d = factors[j];
      if (d == 1) continue;
      const auto w = unit_roots(d);
      axis_dft(a.data(), nbins, coord_stride * place[j], d, w);
    }
    coord_stride *= g.order();
  }

  double best = 0.0;
  for (std::uint64_t i = 1; i < nbins; ++i) best = std::max(best, std::abs(a[i]));
  return best / double(s.total());
}

double measure_bias(const TupleMultiset& s) {
  const std::uint64_t nbins = bin_count_checked(s.group(), s.width());
  return nbins <= 4096 ? measure_bias_sweep(s) : measure_bias_dft(s);
}

double measure_bias_linf(const TupleMultiset& s) {
  bin_count_checked(s.group(), s.width());
  const auto shape = DigitShape::of(s.group(), s.width());
  const std::size_t dims = shape.dims();
  std::vector<std::uint8_t> digits(s.distinct() * dims);
  for (std::size_t i = 0; i < s.distinct(); ++i)
    shape.row_digits(s.group(), s.row(i).data(), digits.data() + i * dims);
  std::vector<std::uint8_t> label(dims, 0);
  auto advance = [&]() {
    for (std::size_t d = 0; d < dims; ++d) {
      if (std::uint32_t(label[d]) + 1 < shape.mods[d]) {
        ++label[d];
        return true;
      }
      label[d] = 0;
    }
    return false;
  };
  double best = 0.0;
  std::vector<double> hist(shape.L);
  while (advance()) {
    std::fill(hist.begin(), hist.end(), 0.0);
    for (std::size_t i = 0; i < s.distinct(); ++i) {
      const std::uint8_t* xd = digits.data() + i * dims;
      std::uint64_t e = 0;
      for (std::size_t d = 0; d < dims; ++d)
        e += std::uint64_t(shape.weights[d]) * label[d] % shape.L * xd[d];
      hist[e % shape.L] += double(s.multiplicity(i));
    }
    for (auto h : hist)
      best = std::max(best, std::abs(h / double(s.total()) - 1.0 / shape.L));
  }
  return best;
}

// ----------------------------------------------------------- constructions

bool is_prime_u64(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t p = 2; p * p <= v; ++p)
    if (v % p == 0) return false;
  return true;
}

std::uint64_t next_prime_geq(std::uint64_t v) {
  if (v <= 2) return 2;
  while (!is_prime_u64(v)) ++v;
  return v;
}

namespace {

BigInt rat_ceil(const BigRat& r) {
  const BigInt num = numerator(r), den = denominator(r);
  if (num <= 0) return 0;
  return (num + den - 1) / den;
}

GroupPtr cyclic_group(std::uint32_t m) { return GroupSpec::abelian({m}); }

}  // namespace

BiasedSpace construct_prime_field(std::uint32_t q, std::size_t n) {
  if (!is_prime_u64(q)) throw InvalidArgument("q must be prime");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (std::uint64_t(q) * q > (1u << 22))
    throw TooLarge("prime-field space would exceed 2^22 elements");
  auto g = cyclic_group(q);
  TupleMultiset s(g, n);
  std::vector<std::uint8_t> row(n);
  for (std::uint32_t x = 0; x < q; ++x) {
    for (std::uint32_t y = 0; y < q; ++y) {
      std::uint64_t p = 1;
      for (std::size_t i = 0; i < n; ++i) {
        row[i] = std::uint8_t(y * p % q);
        p = p * x % q;
      }
      s.add_row(row);
    }
  }
  s.finalize();
  BiasedSpace out{std::move(s), BigRat(std::int64_t(n) - 1, q), Construction::prime_field,
                  false, std::nullopt, false, nlohmann::json::object()};
  out.meta["q"] = q;
  if (big_pow(BigInt(q), n) <= BigInt(kSweepCapBins)) {
    out.measured_bias = measure_bias(out.space);
    out.verified = true;
  }
  out.symmetric = out.space.is_symmetric();
  return out;
}

BiasedSpace construct_rounding(std::uint32_t m, std::size_t n, const BigRat& eps,
                               bool verify) {
  if (m < 2) throw InvalidArgument("m must be >= 2");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (eps <= 0) throw InvalidArgument("epsilon must be positive");
  const BigInt qlow = rat_ceil(BigRat(4) * BigInt(n) * BigInt(m) * BigInt(m) / eps);
  if (qlow > BigInt(1) << 13) throw TooLarge("rounding prime exceeds 2^13");
  const auto q = std::uint32_t(next_prime_geq(qlow.convert_to<std::uint64_t>()));

  auto g = cyclic_group(m);
  TupleMultiset s(g, n);
  const BigInt bins_big = big_pow(BigInt(m), n);
  const bool sweepable = bins_big <= BigInt(kSweepCapBins);

  if (sweepable) {
    const auto nbins = bins_big.convert_to<std::uint64_t>();
    // big-endian places: histogram bins come out in lex row order
    std::vector<std::uint32_t> places(n);
    std::uint32_t pl = 1;
    for (std::size_t i = n; i-- > 0;) {
      places[i] = pl;
      pl *= m;
    }
    std::vector<std::uint32_t> hist(nbins, 0);
    std::vector<std::uint32_t> powers(n), idx(q);
    for (std::uint32_t x = 0; x < q; ++x) {
      std::uint64_t p = 1;
      for (std::size_t i = 0; i < n; ++i) {
        powers[i] = std::uint32_t(p);
        p = p * x % q;
      }
      kernels::amn_round_index(idx.data(), q, m, powers.data(), n, places.data());
      for (std::uint32_t y = 0; y < q; ++y) ++hist[idx[y]];
    }
    std::vector<std::uint8_t> row(n);
    for (std::uint64_t b = 0; b < nbins; ++b) {
      if (!hist[b]) continue;
      std::uint64_t v = b;
      for (std::size_t i = n; i-- > 0;) {  // decode big-endian
        row[i] = std::uint8_t(v % m);
        v /= m;
      }
      s.add_row(row, hist[b]);
    }
  } else {
    // too many bins to histogram or sweep: build the rows explicitly and
    // return the space unverified
    if (std::uint64_t(q) * q * n > (std::uint64_t(1) << 28))
      throw TooLarge("explicit rounding space exceeds 2^28 bytes");
    std::vector<std::uint8_t> row(n);
    for (std::uint32_t x = 0; x < q; ++x) {
      for (std::uint32_t y = 0; y < q; ++y) {
        std::uint64_t p = 1;
        for (std::size_t i = 0; i < n; ++i) {
          const std::uint64_t t = y * p % q;
          row[i] = std::uint8_t(t * m / q);
          p = p * x % q;
        }
        s.add_row(row);
      }
    }
  }
  s.finalize();

  BiasedSpace out{std::move(s), eps, Construction::rounding, false,
                  std::nullopt, false, nlohmann::json::object()};
  out.meta["q"] = q;
  out.symmetric = out.space.is_symmetric();
  if (verify && sweepable) {
    out.measured_bias = measure_bias(out.space);
    out.verified = true;
    if (*out.measured_bias > rat_to_double(eps) + 1e-9)
      throw BiasTooHigh("rounding space measured bias " +
                        std::to_string(*out.measured_bias) + " exceeds target");
  } else {
    out.meta["unverified"] = true;
  }
  return out;
}

namespace {

std::uint32_t primitive_root(std::uint32_t q) {
  // factor q-1, then test candidates
  std::vector<std::uint32_t> pf;
  std::uint32_t v = q - 1;
  for (std::uint32_t p = 2; p * p <= v; ++p)
    if (v % p == 0) {
      pf.push_back(p);
      while (v % p == 0) v /= p;
    }
  if (v > 1) pf.push_back(v);
  auto powmod = [q](std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    b %= q;
    while (e) {
      if (e & 1) r = r * b % q;
      b = b * b % q;
      e >>= 1;
    }
    return std::uint32_t(r);
  };
  for (std::uint32_t c = 2; c < q; ++c) {
    bool ok = true;
    for (auto p : pf)
      if (powmod(c, (q - 1) / p) == 1) {
        ok = false;
        break;
      }
    if (ok) return c;
  }
  throw InvalidArgument("no primitive root found (q not prime?)");
}

}  // namespace

BiasedSpace construct_power_residue(std::uint32_t m, std::size_t n, std::uint32_t q) {
  if (!is_prime_u64(q) || (q - 1) % m != 0)
    throw InvalidArgument("power-residue construction needs prime q = 1 (mod m)");
  const std::uint32_t g0 = primitive_root(q);
  std::vector<std::uint8_t> red(q, 0);
  {
    std::uint64_t acc = 1;
    for (std::uint32_t e = 0; e + 1 < q; ++e) {
      red[acc] = std::uint8_t(e % m);
      acc = acc * g0 % q;
    }
  }
  auto g = cyclic_group(m);
  TupleMultiset s(g, n);
  std::vector<std::uint8_t> row(n);
  for (std::uint32_t x = 0; x < q; ++x) {
    for (std::size_t i = 0; i < n; ++i) row[i] = red[(x + i) % q];
    s.add_row(row);
  }
  s.finalize();
  BiasedSpace out{std::move(s), BigRat(1), Construction::prime_field, false,
                  std::nullopt, false, nlohmann::json::object()};
  out.meta["q"] = q;
  out.meta["variant"] = "power_residue";
  out.symmetric = out.space.is_symmetric();
  return out;
}

BiasedSpace quotient_lift(const BiasedSpace& s0, GroupPtr g) {
  if (!g->is_abelian_kind())
    throw InvalidArgument("quotient lift targets an abelian-kind group");
  const auto& d = g->invariant_factors();
  const std::size_t k = d.size();
  const std::uint32_t m = d.back();
  const auto& sg = s0.space.group();
  if (!sg.is_abelian_kind())
    throw InvalidArgument("source space must live over an abelian-kind group");

  bool flat;
  std::size_t n;
  if (sg.invariant_factors().size() == 1 && sg.order() == m &&
      s0.space.width() % k == 0) {
    flat = true;
    n = s0.space.width() / k;
  } else if (sg.invariant_factors() == std::vector<std::uint32_t>(k, m)) {
    flat = false;
    n = s0.space.width();
  } else {
    throw InvalidArgument("source space shape does not match Z_{d_k}^{nk}");
  }

  TupleMultiset lifted(g, n);
  std::vector<std::uint8_t> digits(k), out_row(n);
  auto lift_row = [&](std::span<const std::uint8_t> r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (flat) {
        for (std::size_t j = 0; j < k; ++j) digits[j] = r[c * k + j];
      } else {
        sg.decode_digits(r[c], digits.data());
      }
      for (std::size_t j = 0; j < k; ++j) digits[j] = std::uint8_t(digits[j] % d[j]);
      out_row[c] = std::uint8_t(g->encode_digits(digits.data()));
    }
  };
  const BigInt bins_big = big_pow(BigInt(g->order()), n);
  if (bins_big <= BigInt(kSweepCapBins) && s0.space.distinct() > 4096) {
    // dense accumulation keeps rows in lex order without a sort
    const auto nbins = bins_big.convert_to<std::uint64_t>();
    std::vector<std::uint64_t> hist(nbins, 0);
    for (std::size_t i = 0; i < s0.space.distinct(); ++i) {
      lift_row(s0.space.row(i));
      std::uint64_t idx = 0;
      for (std::size_t c = 0; c < n; ++c) idx = idx * g->order() + out_row[c];
      hist[idx] += s0.space.multiplicity(i);
    }
    for (std::uint64_t b = 0; b < nbins; ++b) {
      if (!hist[b]) continue;
      std::uint64_t v = b;
      for (std::size_t c = n; c-- > 0;) {
        out_row[c] = std::uint8_t(v % g->order());
        v /= g->order();
      }
      lifted.add_row(out_row, hist[b]);
    }
  } else {
    for (std::size_t i = 0; i < s0.space.distinct(); ++i) {
      lift_row(s0.space.row(i));
      lifted.add_row(out_row, s0.space.multiplicity(i));
    }
  }
  lifted.finalize();

  BiasedSpace out{std::move(lifted), s0.target_epsilon, Construction::quotient_lift,
                  s0.symmetric, std::nullopt, false, s0.meta};
  out.meta["lifted_from"] = construction_name(s0.construction);
  return out;
}

BiasedSpace symmetrize(const BiasedSpace& s) {
  TupleMultiset out(s.space.group_ptr(), s.space.width());
  const auto& g = s.space.group();
  std::vector<std::uint8_t> inv(s.space.width());
  for (std::size_t i = 0; i < s.space.distinct(); ++i) {
    const auto r = s.space.row(i);
    out.add_row(r, s.space.multiplicity(i));
    for (std::size_t c = 0; c < r.size(); ++c) inv[c] = std::uint8_t(g.inv(r[c]));
    out.add_row(inv, s.space.multiplicity(i));
  }
  out.finalize();
  BiasedSpace res{std::move(out), s.target_epsilon, s.construction,
                  true, std::nullopt, false, s.meta};
  res.meta["symmetrized"] = true;
  return res;
}

std::uint64_t effective_q_bound(const GroupSpec& g, std::size_t n, const BigRat& eps) {
  const std::size_t nk = n * g.invariant_factors().size();
  BigInt low = rat_ceil(BigRat(std::int64_t(nk) - 1) / eps);
  const BigInt m(g.exponent());
  if (low < m) low = m;
  if (low > BigInt(1) << 20) throw TooLarge("q bound exceeds 2^20");
  return next_prime_geq(low.convert_to<std::uint64_t>());
}

BiasedSpace construct_for_group(GroupPtr g, std::size_t n, const BigRat& eps,
                                const ConstructOptions& opts) {
  if (!g->is_abelian_kind())
    throw InvalidArgument("construct_for_group needs the abelian kind");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (eps <= 0) throw InvalidArgument("epsilon must be positive");

  if (eps >= 1) {
    // vacuous target: any nonempty symmetric multiset qualifies
    TupleMultiset s(g, n);
    const auto id = TupleElement::identity(g, n);
    s.add_row(id.coords());
    s.finalize();
    BiasedSpace out{std::move(s), eps, Construction::explicit_tag, true,
                    1.0, true, nlohmann::json::object()};
    out.meta["note"] = "epsilon >= 1 is vacuous; identity singleton returned";
    return out;
  }

  const auto& d = g->invariant_factors();
  const std::size_t k = d.size();
  const std::uint32_t m = d.back();
  const std::size_t nk = n * k;
  const std::uint64_t q_bound = effective_q_bound(*g, n, eps);
  const BigInt budget_sq = BigInt(q_bound) * BigInt(q_bound);

  BiasedSpace base{TupleMultiset(g, n), eps, Construction::explicit_tag,
                   false, std::nullopt, false, nlohmann::json::object()};
  std::string branch;
  if (big_pow(BigInt(m), nk) <= budget_sq &&
      big_pow(BigInt(m), nk) <= BigInt(1) << 22) {
    branch = "full_group";
    auto cg = cyclic_group(m);
    TupleMultiset s(cg, nk);
    std::vector<std::uint8_t> row(nk, 0);
    while (true) {
      s.add_row(row);
      std::size_t c = nk;
      while (c-- > 0) {
        if (std::uint32_t(row[c]) + 1 < m) {
          ++row[c];
          break;
        }
        row[c] = 0;
      }
      bool wrapped = true;
      for (auto v : row) wrapped &= v == 0;
      if (wrapped) break;
    }
    s.finalize();
    base = BiasedSpace{std::move(s), eps, Construction::explicit_tag, true,
                       std::nullopt, false, nlohmann::json::object()};
    base.meta["variant"] = "full_group";
  } else if (is_prime_u64(m) && BigRat(std::int64_t(nk) - 1) <= eps * BigRat(m)) {
    branch = "prime_field";
    base = construct_prime_field(m, nk);
  } else if (is_prime_u64(m)) {
    branch = "power_residue";
    // largest prime q = 1 (mod m) within the size budget
    if (budget_sq > BigInt(1) << 26)
      throw TooLarge("power-residue budget exceeds 2^26 rows");
    std::uint64_t q = q_bound * q_bound;
    while (q > m && !(is_prime_u64(q) && (q - 1) % m == 0)) --q;
    if (q <= m)
      throw RegimeViolation("no suitable power-residue prime within the size budget");
    base = construct_power_residue(m, nk, std::uint32_t(q));
  } else {
    branch = "rounding";
    base = construct_rounding(m, nk, eps, /*verify=*/false);
  }

  // lift Z_m^{nk} down to G^n unless that is already the same group
  BiasedSpace lifted = (k == 1 && m == g->order() && base.space.width() == n)
                           ? std::move(base)
                           : quotient_lift(base, g);
  BiasedSpace out = symmetrize(lifted);
  out.target_epsilon = eps;
  out.meta["branch"] = branch;
  out.meta["q_bound"] = q_bound;

  if (opts.verify &&
      big_pow(BigInt(g->order()), n) <= BigInt(opts.verify_cap_bins)) {
    out.measured_bias = measure_bias(out.space);
    out.verified = true;
    if (*out.measured_bias > rat_to_double(eps) + 1e-9)
      throw BiasTooHigh("constructed space measured bias " +
                        std::to_string(*out.measured_bias) + " exceeds target " +
                        rat_to_string(eps));
  } else if (opts.verify) {
    out.meta["unverified"] = true;
  }
  return out;
}

}  // namespace rpp

#include "cone/radius_dist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

namespace cone {

DistSyntaxError::DistSyntaxError(const std::string& what, std::size_t position)
    : std::invalid_argument(what + " (at offset " + std::to_string(position) +
                            ")"),
      position_(position) {}

namespace {

void require_probability(double p, const char* family) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(family) +
                                ": parameter p must lie in [0, 1]");
  }
}

std::vector<double> running_sum(const std::vector<double>& masses) {
  std::vector<double> c(masses.size());
  std::partial_sum(masses.begin(), masses.end(), c.begin());
  if (!c.empty()) c.back() = 1.0;
  return c;
}

}  // namespace

RadiusDistribution RadiusDistribution::bernoulli(double p) {
  require_probability(p, "bernoulli");
  RadiusDistribution d;
  d.family_ = Family::Bernoulli;
  d.p_ = p;
  d.masses_ = {1.0 - p, p};
  d.cumulative_ = running_sum(d.masses_);
  return d;
}

RadiusDistribution RadiusDistribution::geometric(double p) {
  // p = 1 would put all mass at infinity.
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument("geometric: parameter p must lie in [0, 1)");
  }
  RadiusDistribution d;
  d.family_ = Family::Geometric;
  d.p_ = p;
  return d;
}

RadiusDistribution RadiusDistribution::binomial(int n, double p) {
  require_probability(p, "binomial");
  if (n < 0) throw std::invalid_argument("binomial: n must be non-negative");
  RadiusDistribution d;
  d.family_ = Family::Binomial;
  d.p_ = p;
  d.n_ = n;
  d.masses_.resize(static_cast<std::size_t>(n) + 1);
  double coeff = 1.0;
  for (int k = 0; k <= n; ++k) {
    d.masses_[k] = coeff * std::pow(p, k) * std::pow(1.0 - p, n - k);
    coeff = coeff * (n - k) / (k + 1);
  }
  d.cumulative_ = running_sum(d.masses_);
  return d;
}

RadiusDistribution RadiusDistribution::explicit_pmf(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("pmf: empty weight list");
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("pmf: weights must be finite and non-negative");
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("pmf: weights sum to zero");
  if (std::fabs(total - 1.0) > 1e-9) {
    std::cerr << "warning: pmf weights sum to " << total
              << "; normalizing\n";
  }
  // Trailing zeros carry no information and would break the canonical form.
  while (weights.size() > 1 && weights.back() == 0.0) weights.pop_back();
  RadiusDistribution d;
  d.family_ = Family::Pmf;
  d.masses_ = std::move(weights);
  // Already-normalized input is kept bit-exact so the text form round-trips.
  if (std::fabs(total - 1.0) > 1e-14) {
    for (double& w : d.masses_) w /= total;
  }
  d.cumulative_ = running_sum(d.masses_);
  return d;
}

std::optional<long> RadiusDistribution::max_support() const {
  if (family_ == Family::Geometric) return std::nullopt;
  return static_cast<long>(masses_.size()) - 1;
}

double RadiusDistribution::pmf_at(long k) const {
  if (k < 0) return 0.0;
  if (family_ == Family::Geometric) return (1.0 - p_) * std::pow(p_, k);
  if (k >= static_cast<long>(masses_.size())) return 0.0;
  return masses_[k];
}

double RadiusDistribution::tail_above(long k) const {
  if (k < 0) return 1.0;
  if (family_ == Family::Geometric) return std::pow(p_, k + 1);
  if (k >= static_cast<long>(masses_.size()) - 1) return 0.0;
  // Summing the remaining masses is more accurate than 1 - cdf for small tails.
  double s = 0.0;
  for (std::size_t i = static_cast<std::size_t>(k) + 1; i < masses_.size(); ++i)
    s += masses_[i];
  return s;
}

double pmf(const RadiusDistribution& dist, long k) { return dist.pmf_at(k); }

double cdf(const RadiusDistribution& dist, long k) {
  if (k < 0) return 0.0;
  if (dist.family_ == RadiusDistribution::Family::Geometric) {
    return 1.0 - std::pow(dist.p_, k + 1);
  }
  if (k >= static_cast<long>(dist.cumulative_.size())) return 1.0;
  return dist.cumulative_[k];
}

long quantile(const RadiusDistribution& dist, double u) {
  if (dist.family() == RadiusDistribution::Family::Bernoulli) {
    return u < dist.p() ? 1 : 0;
  }
  if (dist.family() == RadiusDistribution::Family::Geometric) {
    // P[R >= k] = p^k, so R = floor(log(1 - u) / log p).
    if (dist.p() == 0.0) return 0;
    return static_cast<long>(std::floor(std::log1p(-u) / std::log(dist.p())));
  }
  const auto masses = dist.masses();
  long k = 0;
  double c = masses[0];
  const long last = static_cast<long>(masses.size()) - 1;
  while (k < last && u >= c) {
    ++k;
    c += masses[k];
  }
  return k;
}

long sample(const RadiusDistribution& dist, Rng& rng) {
  const double u = rng.uniform();
  if (dist.family_ == RadiusDistribution::Family::Bernoulli) {
    return u < dist.p_ ? 1 : 0;
  }
  if (dist.family_ == RadiusDistribution::Family::Geometric) {
    return quantile(dist, u);
  }
  const auto& c = dist.cumulative_;
  return static_cast<long>(std::upper_bound(c.begin(), c.end() - 1, u) -
                           c.begin());
}

ExtendedReal expected_d_power_r(const RadiusDistribution& dist, int d) {
  if (d < 2) throw std::invalid_argument("expected_d_power_r: d must be >= 2");
  const double p = dist.p();
  switch (dist.family()) {
    case RadiusDistribution::Family::Bernoulli:
      return ExtendedReal(1.0 - p + p * d);
    case RadiusDistribution::Family::Geometric:
      if (p * d >= 1.0) return ExtendedReal::infinity();
      return ExtendedReal((1.0 - p) / (1.0 - p * d));
    case RadiusDistribution::Family::Binomial:
      return ExtendedReal(std::pow(p * d + 1.0 - p, dist.trials()));
    case RadiusDistribution::Family::Pmf: {
      double s = 0.0;
      double power = 1.0;
      for (double w : dist.masses()) {
        s += w * power;
        power *= d;
      }
      return ExtendedReal(s);
    }
  }
  return ExtendedReal::infinity();
}

// ---------------------------------------------------------------------------
// Text form

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  RadiusDistribution parse() {
    const std::string family = identifier();
    expect(':');
    if (family == "pmf") {
      std::vector<double> w{number()};
      while (accept(',')) w.push_back(number());
      finish();
      return RadiusDistribution::explicit_pmf(std::move(w));
    }
    if (family != "bernoulli" && family != "geometric" && family != "binomial") {
      throw DistSyntaxError("unknown family '" + family + "'", 0);
    }
    std::optional<double> p;
    std::optional<double> n;
    std::size_t n_pos = 0;
    do {
      const std::size_t key_pos = pos_;
      const std::string key = identifier();
      expect('=');
      const std::size_t value_pos = pos_;
      const double value = number();
      if (key == "p" && !p) {
        p = value;
      } else if (key == "n" && family == "binomial" && !n) {
        n = value;
        n_pos = value_pos;
      } else {
        throw DistSyntaxError("unexpected key '" + key + "' for " + family,
                              key_pos);
      }
    } while (accept(','));
    finish();
    if (!p) throw DistSyntaxError("missing key 'p'", text_.size());
    if (family == "bernoulli") return RadiusDistribution::bernoulli(*p);
    if (family == "geometric") return RadiusDistribution::geometric(*p);
    if (!n) throw DistSyntaxError("missing key 'n'", text_.size());
    if (*n != std::floor(*n) || *n < 0 || *n > 1e6) {
      throw DistSyntaxError("binomial n must be a non-negative integer", n_pos);
    }
    return RadiusDistribution::binomial(static_cast<int>(*n), *p);
  }

 private:
  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) throw DistSyntaxError("expected identifier", start);
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    const std::size_t start = pos_;
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) {
      throw DistSyntaxError("expected number", start);
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw DistSyntaxError(std::string("expected '") + c + "'", pos_);
    }
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void finish() {
    if (pos_ != text_.size()) throw DistSyntaxError("trailing characters", pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

RadiusDistribution parse_dist(std::string_view spec) {
  return SpecParser(spec).parse();
}

std::string format_dist(const RadiusDistribution& dist) {
  switch (dist.family()) {
    case RadiusDistribution::Family::Bernoulli:
      return "bernoulli:p=" + shortest(dist.p());
    case RadiusDistribution::Family::Geometric:
      return "geometric:p=" + shortest(dist.p());
    case RadiusDistribution::Family::Binomial:
      return "binomial:n=" + std::to_string(dist.trials()) +
             ",p=" + shortest(dist.p());
    case RadiusDistribution::Family::Pmf: {
      std::string out = "pmf:";
      bool first = true;
      for (double w : dist.masses()) {
        if (!first) out += ',';
        out += shortest(w);
        first = false;
      }
      return out;
    }
  }
  return {};
}

std::string ExtendedReal::to_string() const {
  if (is_infinite()) return "inf";
  return shortest(value_);
}

}  // namespace cone

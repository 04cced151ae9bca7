#include "jtfu/number_mixtures.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace jtfu {

namespace {

constexpr double kTailTarget = 1e-13;
constexpr double kNormTolerance = 1e-12;
constexpr double kLinkSlack = 1e-12;

} // namespace

PhotonNumberDistribution::PhotonNumberDistribution(std::vector<double> probabilities)
    : p_(std::move(probabilities)) {
  if (p_.empty()) throw std::invalid_argument("distribution needs at least p0");
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw std::invalid_argument("probabilities must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormTolerance)
    throw std::invalid_argument("probabilities must sum to 1 within 1e-12");
  for (std::size_t n = 0; n < p_.size(); ++n) {
    mean_ += p_[n] * static_cast<double>(n);
    pair_mean_ += p_[n] * static_cast<double>(n) * (static_cast<double>(n) - 1.0);
  }
}

double PhotonNumberDistribution::p(int n) const {
  if (n < 0) throw std::invalid_argument("photon number must be >= 0");
  return n <= max_n() ? p_[n] : 0.0;
}

PhotonNumberDistribution PhotonNumberDistribution::poisson(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("Poisson mean must be positive");
  if (mean > 400.0) throw std::invalid_argument("Poisson mean too large for direct terms");
  std::vector<double> p;
  double term = std::exp(-mean);
  double cumulative = 0.0;
  for (int n = 0; cumulative < 1.0 - kTailTarget; ++n) {
    p.push_back(term);
    cumulative += term;
    term *= mean / (n + 1);
    if (n > 100000) throw std::logic_error("Poisson truncation runaway");
  }
  return PhotonNumberDistribution(std::move(p));
}

PhotonNumberDistribution PhotonNumberDistribution::thermal(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("thermal mean must be positive");
  const double ratio = mean / (1.0 + mean);
  std::vector<double> p;
  double term = 1.0 / (1.0 + mean);
  double cumulative = 0.0;
  while (cumulative < 1.0 - kTailTarget) {
    p.push_back(term);
    cumulative += term;
    term *= ratio;
  }
  return PhotonNumberDistribution(std::move(p));
}

PhotonNumberDistribution PhotonNumberDistribution::squeezed_vacuum(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("squeezed-vacuum mean must be positive");
  // sinh^2 r = mean; p_{2j+2} / p_{2j} = tanh^2 r * (2j+1)/(2j+2)
  const double r = std::asinh(std::sqrt(mean));
  const double t2 = std::tanh(r) * std::tanh(r);
  std::vector<double> p;
  double term = 1.0 / std::cosh(r);
  double cumulative = 0.0;
  for (int j = 0; cumulative < 1.0 - kTailTarget; ++j) {
    p.push_back(term);  // p_{2j}
    p.push_back(0.0);   // odd numbers never occur
    cumulative += term;
    term *= t2 * (2.0 * j + 1.0) / (2.0 * j + 2.0);
  }
  p.pop_back();  // no trailing odd slot
  return PhotonNumberDistribution(std::move(p));
}

PhotonNumberDistribution PhotonNumberDistribution::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open distribution file: " + path);

  std::vector<double> p;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string trimmed;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    if (trimmed.empty()) continue;

    const std::size_t comma = trimmed.find(',');
    try {
      if (comma == std::string::npos) {
        p.push_back(std::stod(trimmed));
      } else {
        const int n = std::stoi(trimmed.substr(0, comma));
        const double value = std::stod(trimmed.substr(comma + 1));
        if (n < 0) throw std::invalid_argument("negative photon number");
        if (static_cast<std::size_t>(n) >= p.size()) p.resize(n + 1, 0.0);
        p[n] = value;
      }
    } catch (const std::exception&) {
      // header rows fall out here; only tolerate them as the first content line
      if (p.empty()) continue;
      throw std::runtime_error("unparsable distribution row at line " +
                               std::to_string(line_no) + " of " + path);
    }
  }
  if (p.empty()) throw std::runtime_error("distribution file has no rows: " + path);
  return PhotonNumberDistribution(std::move(p));
}

double pair_weighted_average(const PhotonNumberDistribution& dist,
                             std::span<const double> subspace_values) {
  const double pm = dist.pair_mean();
  if (!(pm > 0.0))
    throw std::invalid_argument("no photon pairs: all weight on n in {0, 1}");

  double acc = 0.0;
  for (int n = 2; n <= dist.max_n(); ++n) {
    const double weight = dist.p(n) * n * (n - 1.0);
    if (weight == 0.0) continue;
    if (static_cast<std::size_t>(n) >= subspace_values.size())
      throw std::invalid_argument("missing subspace value for a weighted photon number");
    acc += weight * subspace_values[n];
  }
  return acc / pm;
}

double simplified_bound(double mean_n) {
  if (!(mean_n >= 2.0))
    throw std::invalid_argument("simplified bound needs mean photon number >= 2");
  return std::sqrt(1.0 - 2.0 / mean_n);
}

double pair_bound_f(double x) {
  if (!(x >= 2.0)) throw std::invalid_argument("pair bound defined from x = 2 up");
  return (x - 1.0) * std::sqrt(1.0 - 2.0 / x);
}

namespace {

struct TailSums {
  double s0 = 0.0;  // sum_{n>=3} p_n
  double s1 = 0.0;  // sum_{n>=3} p_n n
  double s2 = 0.0;  // sum_{n>=3} p_n n^2
};

TailSums tail_sums(const PhotonNumberDistribution& dist) {
  TailSums t;
  for (int n = 3; n <= dist.max_n(); ++n) {
    t.s0 += dist.p(n);
    t.s1 += dist.p(n) * n;
    t.s2 += dist.p(n) * n * n;
  }
  return t;
}

} // namespace

GeneralBound general_bound(const PhotonNumberDistribution& dist) {
  const double pm = dist.pair_mean();
  if (!(pm > 0.0))
    throw std::invalid_argument("no photon pairs: all weight on n in {0, 1}");

  const TailSums tail = tail_sums(dist);
  GeneralBound out;
  double first = 1.0;  // no mass above two photons: the tail factor drops out
  if (tail.s0 > 0.0) {
    const double radicand = 1.0 - 2.0 * tail.s0 / tail.s1;
    if (radicand < 0.0) {
      out.degenerate = true;
      first = 0.0;
    } else {
      first = std::sqrt(radicand);
    }
  }
  out.value = first * (1.0 - 2.0 * dist.p(2) / pm);
  return out;
}

ChainReport verify_chain(const PhotonNumberDistribution& dist,
                         std::span<const double> subspace_tau,
                         std::span<const double> subspace_omega) {
  const double pm = dist.pair_mean();
  if (!(pm > 0.0))
    throw std::invalid_argument("no photon pairs: all weight on n in {0, 1}");

  // garbage-in guard: inputs must respect their own subspace bounds
  for (int n = 2; n <= dist.max_n(); ++n) {
    const double weight = dist.p(n) * n * (n - 1.0);
    if (weight == 0.0) continue;
    if (static_cast<std::size_t>(n) >= subspace_tau.size() ||
        static_cast<std::size_t>(n) >= subspace_omega.size())
      throw std::invalid_argument("missing subspace widths for a weighted photon number");
    const double floor = std::sqrt(1.0 - 2.0 / n);
    if (subspace_tau[n] * subspace_omega[n] < floor - kLinkSlack)
      throw std::invalid_argument("subspace widths violate their own lower bound");
  }

  double avg_tau2 = 0.0;
  double avg_omega2 = 0.0;
  double avg_cross = 0.0;
  double avg_floor = 0.0;
  for (int n = 2; n <= dist.max_n(); ++n) {
    const double w = dist.p(n) * n * (n - 1.0) / pm;
    if (w == 0.0) continue;
    avg_tau2 += w * subspace_tau[n] * subspace_tau[n];
    avg_omega2 += w * subspace_omega[n] * subspace_omega[n];
    avg_cross += w * subspace_tau[n] * subspace_omega[n];
    avg_floor += w * std::sqrt(1.0 - 2.0 / n);
  }

  ChainReport report;
  report.full_product = std::sqrt(avg_tau2 * avg_omega2);
  report.cauchy_schwarz = avg_cross;
  report.per_subspace = avg_floor;

  const TailSums tail = tail_sums(dist);
  if (tail.s1 > 0.0) {
    report.jensen = (tail.s2 - tail.s1) / pm * std::sqrt(1.0 - 2.0 * tail.s1 / tail.s2);
    report.aux_ratio = tail.s1 / tail.s0;
  } else {
    report.jensen = 0.0;
    report.aux_ratio = std::numeric_limits<double>::infinity();
  }
  report.closed = general_bound(dist).value;

  report.simplified_applicable = dist.mean() >= 2.0;
  if (report.simplified_applicable)
    report.simplified = simplified_bound(dist.mean()) * (1.0 - 2.0 * dist.p(2) / pm);

  const auto holds = [](double lhs, double rhs) {
    return lhs >= rhs - kLinkSlack * std::max(1.0, std::abs(lhs));
  };
  report.link_full_cs = holds(report.full_product, report.cauchy_schwarz);
  report.link_cs_subspace = holds(report.cauchy_schwarz, report.per_subspace);
  report.link_subspace_jensen = holds(report.per_subspace, report.jensen);
  report.link_jensen_closed = holds(report.jensen, report.closed);
  report.link_closed_simplified =
      !report.simplified_applicable || holds(report.closed, report.simplified);
  report.all_hold = report.link_full_cs && report.link_cs_subspace &&
                    report.link_subspace_jensen && report.link_jensen_closed &&
                    report.link_closed_simplified;
  return report;
}

} // namespace jtfu

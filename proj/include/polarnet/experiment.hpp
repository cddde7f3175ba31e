#ifndef POLARNET_EXPERIMENT_HPP
#define POLARNET_EXPERIMENT_HPP

/** @file
 * Vaccine allocation scenarios and Monte Carlo ensembles comparing a
 * polarized allocation (exactly the pro nodes are vaccinated) against a
 * homogeneous one (the same number of doses spread uniformly at random).
 */

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <vector>

#include "polarnet/epidemic.hpp"
#include "polarnet/graph.hpp"
#include "polarnet/rng.hpp"

namespace polarnet {

enum class AllocationStrategy : std::uint8_t { Polarized, Homogeneous };

inline std::string_view to_string(AllocationStrategy s) noexcept {
  return s == AllocationStrategy::Polarized ? "polarized" : "homogeneous";
}

enum class Subpop : std::uint8_t { Unvaccinated = 0, Vaccinated = 1, All = 2 };
inline constexpr std::array<Subpop, 3> all_subpops{Subpop::Unvaccinated, Subpop::Vaccinated, Subpop::All};

inline std::string_view to_string(Subpop s) noexcept {
  switch (s) {
    case Subpop::Unvaccinated: return "unvaccinated";
    case Subpop::Vaccinated: return "vaccinated";
    default: return "all";
  }
}

/// Per-node vaccination flags (1 = vaccinated).
inline std::vector<std::uint8_t> allocate_vaccines(const AnnotatedGraph& g, AllocationStrategy strategy,
                                                   std::uint64_t seed) {
  const std::size_t n = g.node_count();
  std::vector<std::uint8_t> vaccinated(n, 0);
  if (strategy == AllocationStrategy::Polarized) {
    for (NodeId i = 0; i < n; ++i) vaccinated[i] = g.opinion(i) == Opinion::Pro;
    return vaccinated;
  }
  const std::size_t doses = g.count(Opinion::Pro);
  std::vector<NodeId> order(n);
  for (NodeId i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t k = 0; k < doses; ++k) {
    std::size_t pick = k + rng.below(n - k);
    std::swap(order[k], order[pick]);
    vaccinated[order[k]] = 1;
  }
  return vaccinated;
}

/**
 * Earliest day with the largest value. Throws std::domain_error when the
 * series has no positive entry.
 */
inline int time_to_peak(std::span<const double> series) {
  auto it = std::max_element(series.begin(), series.end());  // first maximum
  if (it == series.end() || !(*it > 0.0)) throw std::domain_error("time to peak of an all-zero series");
  return static_cast<int>(it - series.begin());
}

/**
 * Infection curves of one run, normalized per subpopulation. Every curve has
 * horizon + 1 entries (day 0 holds the index cases); days after the
 * epidemic died out are zero.
 */
struct RunSummary {
  std::array<std::vector<double>, 3> daily_frac;  // indexed by Subpop
  std::array<std::size_t, 3> size{};
  std::array<std::size_t, 3> infected{};
  std::array<double, 3> ar{};  // NaN for an empty subpopulation
  std::array<std::optional<int>, 3> t_peak;

  const std::vector<double>& curve(Subpop s) const { return daily_frac[static_cast<int>(s)]; }
  const std::vector<double>& daily_frac_unvacc() const { return curve(Subpop::Unvaccinated); }
  const std::vector<double>& daily_frac_vacc() const { return curve(Subpop::Vaccinated); }
  const std::vector<double>& daily_frac_all() const { return curve(Subpop::All); }
  double ar_unvacc() const { return ar[0]; }
  double ar_vacc() const { return ar[1]; }
  double ar_all() const { return ar[2]; }
  std::optional<int> t_peak_unvacc() const { return t_peak[0]; }

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

inline RunSummary summarize_run(const RunRecord& rec, std::span<const std::uint8_t> vaccinated, int horizon) {
  RunSummary s;
  const std::size_t days = static_cast<std::size_t>(horizon) + 1;
  s.size[1] = static_cast<std::size_t>(std::count_if(vaccinated.begin(), vaccinated.end(),
                                                     [](std::uint8_t v) { return v != 0; }));
  s.size[2] = vaccinated.size();
  s.size[0] = s.size[2] - s.size[1];
  std::array<std::vector<std::uint32_t>, 3> counts;
  for (auto& c : counts) c.assign(days, 0);
  for (std::size_t d = 0; d < rec.daily.size() && d < days; ++d) {
    counts[0][d] = rec.daily[d].unvaccinated;
    counts[1][d] = rec.daily[d].vaccinated;
    counts[2][d] = rec.daily[d].total();
  }
  for (int k = 0; k < 3; ++k) {
    auto& frac = s.daily_frac[k];
    frac.assign(days, 0.0);
    std::size_t total = 0;
    for (std::size_t d = 0; d < days; ++d) {
      total += counts[k][d];
      if (s.size[k] > 0) frac[d] = static_cast<double>(counts[k][d]) / static_cast<double>(s.size[k]);
    }
    s.infected[k] = total;
    s.ar[k] = s.size[k] > 0 ? static_cast<double>(total) / static_cast<double>(s.size[k])
                            : std::numeric_limits<double>::quiet_NaN();
    if (total > 0 && s.size[k] > 0) s.t_peak[k] = time_to_peak(frac);
  }
  return s;
}

/// Cumulative fraction of `subpop` infected by the end of the run.
inline double attack_rate(const RunSummary& run, Subpop subpop) {
  const int k = static_cast<int>(subpop);
  if (run.size[k] == 0) throw std::domain_error("attack rate of an empty subpopulation");
  return static_cast<double>(run.infected[k]) / static_cast<double>(run.size[k]);
}

inline int time_to_peak(const RunSummary& run, Subpop subpop) {
  return time_to_peak(run.curve(subpop));
}

struct CurveBand {
  std::vector<double> mean, q05, q50, q95;
  friend bool operator==(const CurveBand&, const CurveBand&) = default;
};

struct EnsembleSummary {
  AllocationStrategy strategy = AllocationStrategy::Polarized;
  std::vector<RunSummary> runs;
  std::array<CurveBand, 3> curves;  // indexed by Subpop
  std::array<double, 3> mean_ar{};
  std::array<double, 3> mean_t_peak{};  // over runs where the peak exists; NaN if none

  const CurveBand& curve(Subpop s) const { return curves[static_cast<int>(s)]; }
  double ar(Subpop s) const { return mean_ar[static_cast<int>(s)]; }
  double t_peak(Subpop s) const { return mean_t_peak[static_cast<int>(s)]; }

  friend bool operator==(const EnsembleSummary&, const EnsembleSummary&) = default;
};

namespace detail {

/// Linear-interpolation quantile of sorted values.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

/// Mean and pointwise 5/50/95% bands of every curve; means of AR and T_peak.
inline EnsembleSummary aggregate(AllocationStrategy strategy, std::vector<RunSummary> runs) {
  if (runs.empty()) throw std::invalid_argument("cannot aggregate an empty ensemble");
  EnsembleSummary e;
  e.strategy = strategy;
  e.runs = std::move(runs);
  const double n = static_cast<double>(e.runs.size());
  std::vector<double> column(e.runs.size());
  for (int k = 0; k < 3; ++k) {
    const std::size_t days = e.runs.front().daily_frac[k].size();
    CurveBand& band = e.curves[k];
    band.mean.assign(days, 0.0);
    band.q05 = band.q50 = band.q95 = band.mean;
    for (std::size_t d = 0; d < days; ++d) {
      for (std::size_t r = 0; r < e.runs.size(); ++r) column[r] = e.runs[r].daily_frac[k].at(d);
      std::sort(column.begin(), column.end());
      double sum = 0.0;
      for (double x : column) sum += x;
      band.mean[d] = sum / n;
      band.q05[d] = detail::quantile_sorted(column, 0.05);
      band.q50[d] = detail::quantile_sorted(column, 0.50);
      band.q95[d] = detail::quantile_sorted(column, 0.95);
    }
    // sort before summing so the mean does not depend on run order
    std::vector<double> ars, peaks;
    for (const auto& r : e.runs) {
      ars.push_back(r.ar[k]);
      if (r.t_peak[k]) peaks.push_back(*r.t_peak[k]);
    }
    std::sort(ars.begin(), ars.end());
    double ar_sum = 0.0;
    for (double x : ars) ar_sum += x;
    e.mean_ar[k] = ar_sum / n;
    double peak_sum = 0.0;
    for (double x : peaks) peak_sum += x;
    e.mean_t_peak[k] = peaks.empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : peak_sum / static_cast<double>(peaks.size());
  }
  return e;
}

struct EnsembleOptions {
  Seeding seeding;
  bool redraw_allocation = true;  // homogeneous only
  unsigned threads = 1;           // 0 = hardware concurrency
};

namespace detail {

/// Calls fn(i) for i in [0, n) on up to `threads` workers; rethrows the first error.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

enum : std::uint64_t { kAllocationStream = 10, kSeedingStream = 11, kDynamicsStream = 12 };

}  // namespace detail

/**
 * `n_runs` independent epidemics. Run i draws its allocation, index cases
 * and dynamics from separate streams derived from (master_seed, i), so both
 * strategies see the same index cases for the same i.
 */
inline EnsembleSummary run_ensemble(const AnnotatedGraph& g, const EpidemicParams& params,
                                    AllocationStrategy strategy, std::size_t n_runs, std::uint64_t master_seed,
                                    const EnsembleOptions& options = {}) {
  if (n_runs < 1) throw std::invalid_argument("n_runs must be at least 1");
  params.validate();
  std::vector<RunSummary> runs(n_runs);
  std::vector<std::uint8_t> fixed;
  const bool per_run = strategy == AllocationStrategy::Homogeneous && options.redraw_allocation;
  if (!per_run) fixed = allocate_vaccines(g, strategy, derive_seed(master_seed, 0, detail::kAllocationStream));
  detail::parallel_for(n_runs, options.threads, [&](std::size_t i) {
    std::vector<std::uint8_t> own;
    if (per_run) own = allocate_vaccines(g, strategy, derive_seed(master_seed, i, detail::kAllocationStream));
    const auto& vaccinated = per_run ? own : fixed;
    RunSeeds seeds{derive_seed(master_seed, i, detail::kSeedingStream),
                   derive_seed(master_seed, i, detail::kDynamicsStream)};
    auto rec = run_epidemic(g, vaccinated, params, options.seeding, seeds, [](const SimulationState&) {});
    runs[i] = summarize_run(rec, vaccinated, params.horizon);
  });
  return aggregate(strategy, std::move(runs));
}

struct Comparison {
  EnsembleSummary polarized;
  EnsembleSummary homogeneous;
  std::array<double, 3> ar_ratio{};      // polarized / homogeneous mean AR
  std::array<double, 3> t_peak_diff{};   // polarized - homogeneous mean T_peak

  double ratio(Subpop s) const { return ar_ratio[static_cast<int>(s)]; }
};

/// Both strategies on the same graph with the same per-run seeds.
inline Comparison compare_scenarios(const AnnotatedGraph& g, const EpidemicParams& params, std::size_t n_runs,
                                    std::uint64_t master_seed, const EnsembleOptions& options = {}) {
  Comparison c;
  c.polarized = run_ensemble(g, params, AllocationStrategy::Polarized, n_runs, master_seed, options);
  c.homogeneous = run_ensemble(g, params, AllocationStrategy::Homogeneous, n_runs, master_seed, options);
  for (int k = 0; k < 3; ++k) {
    c.ar_ratio[k] = c.polarized.mean_ar[k] / c.homogeneous.mean_ar[k];
    c.t_peak_diff[k] = c.polarized.mean_t_peak[k] - c.homogeneous.mean_t_peak[k];
  }
  return c;
}

}  // namespace polarnet

#endif  // POLARNET_EXPERIMENT_HPP

#include "rdclass/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rdclass/instance_io.hpp"

namespace rdclass {

namespace {

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > kMaxDecoderMaps / std::max<std::size_t>(base, 1) + 1) return kMaxDecoderMaps + 1;
    out *= base;
  }
  return out;
}

std::size_t checked_binomial(std::size_t n, std::size_t k) {
  double v = 1.0;
  for (std::size_t i = 1; i <= k; ++i) v = v * static_cast<double>(n - k + i) / static_cast<double>(i);
  return v > static_cast<double>(kMaxDecoderMaps) ? kMaxDecoderMaps + 1
                                                  : static_cast<std::size_t>(std::llround(v));
}

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

}  // namespace

std::vector<DecoderMap> enumerate_decoders(std::size_t labels, std::size_t letters,
                                           bool canonical) {
  if (labels == 0 || letters == 0) throw ValidationError("need at least one label and one letter");
  const std::size_t count = canonical ? checked_binomial(labels + letters - 1, letters)
                                      : checked_power(labels, letters);
  if (count > kMaxDecoderMaps) {
    throw EnumerationTooLarge(std::to_string(labels) + "^" + std::to_string(letters) +
                              " decoder maps exceed the limit of " +
                              std::to_string(kMaxDecoderMaps) +
                              (canonical ? "" : "; enable canonical pruning"));
  }
  std::vector<DecoderMap> maps;
  maps.reserve(count);
  std::vector<std::size_t> cur(letters, 0);
  while (true) {
    maps.push_back(DecoderMap{cur});
    // Lexicographic successor; canonical maps stay non-decreasing.
    std::size_t pos = letters;
    while (pos > 0 && cur[pos - 1] == labels - 1) --pos;
    if (pos == 0) break;
    ++cur[pos - 1];
    for (std::size_t k = pos; k < letters; ++k) cur[k] = canonical ? cur[pos - 1] : 0;
  }
  return maps;
}

GlobalResult global_solve(const ProblemInstance& instance, double budget,
                          const EnumerationOptions& options) {
  if (!(budget >= 0.0) || !std::isfinite(budget))
    throw ValidationError("budget must be a finite nonnegative number");
  const auto maps = enumerate_decoders(static_cast<std::size_t>(instance.label_count()),
                                       instance.compressed_size(), options.canonical);
  GlobalResult out;
  out.subproblems.resize(maps.size());
  parallel_for(maps.size(), options.threads, [&](std::size_t i) {
    SubproblemSpec spec{instance, maps[i], budget};
    out.subproblems[i] = {maps[i], solve_subproblem(spec, options.solver)};
  });

  // Deterministic reduction: smallest mi, then lexicographically smallest map.
  const SubproblemOutcome* best = nullptr;
  for (const auto& sub : out.subproblems) {
    ++out.subproblems_solved;
    switch (sub.result.status) {
      case SolveStatus::infeasible:
        ++out.subproblems_infeasible;
        break;
      case SolveStatus::numerical_failure:
        if (!out.failed_decoder) out.failed_decoder = sub.decoder;
        break;
      case SolveStatus::optimal:
        if (!best || sub.result.mi < best->result.mi ||
            (sub.result.mi == best->result.mi && sub.decoder < best->decoder))
          best = &sub;
        break;
    }
  }
  if (out.failed_decoder) {
    out.status = SolveStatus::numerical_failure;
  } else if (best) {
    out.status = SolveStatus::optimal;
  } else {
    out.status = SolveStatus::infeasible;
  }
  if (best) {
    out.best = best->result;
    out.decoder = best->decoder;
  } else {
    out.best.status = out.status;
  }
  return out;
}

TradeoffCurve sweep(const ProblemInstance& instance, const std::vector<double>& budgets,
                    const EnumerationOptions& options) {
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (!(budgets[i] >= 0.0)) throw ValidationError("budgets must be nonnegative");
    if (i > 0 && !(budgets[i] > budgets[i - 1]))
      throw ValidationError("budgets must be strictly increasing");
  }
  TradeoffCurve curve;
  curve.metadata = {instance_digest(instance), options.solver.gap_tolerance,
                    options.solver.feasibility_threshold, options.solver.relaxation,
                    options.canonical};
  for (double budget : budgets) {
    const GlobalResult g = global_solve(instance, budget, options);
    CurvePoint pt;
    pt.budget = budget;
    pt.status = g.status;
    if (g.status == SolveStatus::optimal) {
      pt.mi = g.best.mi;
      pt.achieved_budget = g.best.achieved_budget;
      pt.decoder = g.decoder;
    } else if (g.status == SolveStatus::numerical_failure) {
      pt.decoder = g.failed_decoder;
    }
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) throw ValidationError("grid count must be positive");
  if (!(hi >= lo)) throw ValidationError("grid max must not be below grid min");
  if (count == 1) return {lo};
  std::vector<double> grid;
  for (int i = 0; i < count; ++i)
    grid.push_back(i == count - 1 ? hi : lo + (hi - lo) * i / (count - 1));
  return grid;
}

}  // namespace rdclass

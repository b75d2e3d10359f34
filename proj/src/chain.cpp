#include "ifsp/chain.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ifsp/errors.hpp"
#include "ifsp/rng.hpp"

namespace ifsp {

namespace {

double clamp_to_support(const Ifsp& ifsp, double x, bool* clamped) {
  if (x < ifsp.support_lo) {
    *clamped = true;
    return ifsp.support_lo;
  }
  if (x > ifsp.support_hi) {
    *clamped = true;
    return ifsp.support_hi;
  }
  return x;
}

void check_index(const Ifsp& ifsp, int idx) {
  if (idx < 1 || idx > ifsp.n())
    throw DomainError("index " + std::to_string(idx) + " outside 1.." +
                      std::to_string(ifsp.n()));
}

}  // namespace

int draw_index(RngStream& rng, const std::vector<double>& probs) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i + 1);
  }
  // Only reachable when rounding in the cumulative sum leaves acc slightly
  // below u at the end; the draw belongs to the last positive cell.
  return static_cast<int>(probs.size());
}

Trajectory simulate_forward(const Ifsp& ifsp, double x0, std::uint64_t steps,
                            RngStream& rng) {
  Trajectory t;
  t.seed = rng.seed();
  t.stream_index = rng.stream_index();
  t.x0_requested = x0;
  if (std::isnan(x0)) throw DomainError("simulate_forward: x0 is NaN");
  double x = clamp_to_support(ifsp, x0, &t.x0_clamped);
  t.states.reserve(steps + 1);
  t.indices.reserve(steps);
  t.states.push_back(x);
  for (std::uint64_t k = 0; k < steps; ++k) {
    const int idx = draw_index(rng, ifsp.probs);
    bool clamped = false;
    x = ifsp.maps[static_cast<std::size_t>(idx - 1)].apply(x, &clamped);
    if (clamped) ++t.clamp_events;
    if (!std::isfinite(x))
      throw IntegrityError("simulate_forward: non-finite state at step " +
                           std::to_string(k + 1));
    t.indices.push_back(idx);
    t.states.push_back(x);
  }
  return t;
}

Trajectory simulate_forward_indices(const Ifsp& ifsp, double x0,
                                    const std::vector<int>& indices) {
  Trajectory t;
  t.x0_requested = x0;
  if (std::isnan(x0))
    throw DomainError("simulate_forward_indices: x0 is NaN");
  double x = clamp_to_support(ifsp, x0, &t.x0_clamped);
  t.states.reserve(indices.size() + 1);
  t.indices.reserve(indices.size());
  t.states.push_back(x);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    check_index(ifsp, indices[k]);
    bool clamped = false;
    x = ifsp.maps[static_cast<std::size_t>(indices[k] - 1)].apply(x, &clamped);
    if (clamped) ++t.clamp_events;
    if (!std::isfinite(x))
      throw IntegrityError(
          "simulate_forward_indices: non-finite state at step " +
          std::to_string(k + 1));
    t.indices.push_back(indices[k]);
    t.states.push_back(x);
  }
  return t;
}

double backward_iterate_indices(const Ifsp& ifsp, double x0,
                                const std::vector<int>& indices) {
  if (indices.empty())
    throw DomainError("backward_iterate: needs at least one index");
  if (std::isnan(x0)) throw DomainError("backward_iterate: x0 is NaN");
  bool clamped = false;
  double x = clamp_to_support(ifsp, x0, &clamped);
  for (std::size_t k = indices.size(); k-- > 0;) {
    check_index(ifsp, indices[k]);
    x = ifsp.maps[static_cast<std::size_t>(indices[k] - 1)].apply(x);
    if (!std::isfinite(x))
      throw IntegrityError(
          "backward_iterate: non-finite value applying draw " +
          std::to_string(k + 1) + " (of " + std::to_string(indices.size()) +
          ")");
  }
  return x;
}

double backward_iterate(const Ifsp& ifsp, double x0, int depth,
                        RngStream& rng, std::vector<int>* drawn) {
  if (depth < 1) throw DomainError("backward_iterate: depth must be >= 1");
  std::vector<int> indices;
  indices.reserve(static_cast<std::size_t>(depth));
  for (int k = 0; k < depth; ++k) indices.push_back(draw_index(rng, ifsp.probs));
  if (drawn != nullptr)
    drawn->insert(drawn->end(), indices.begin(), indices.end());
  return backward_iterate_indices(ifsp, x0, indices);
}

std::vector<double> backward_sample_batch(const Ifsp& ifsp, double x0,
                                          int depth, std::size_t count,
                                          std::uint64_t base_seed) {
  if (count < 1)
    throw DomainError("backward_sample_batch: count must be >= 1");
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    RngStream rng(base_seed, j);
    out.push_back(backward_iterate(ifsp, x0, depth, rng));
  }
  return out;
}

double digits_to_uniform(const std::vector<int>& indices, int n) {
  if (n < 2) throw DomainError("digits_to_uniform: n must be >= 2");
  if (indices.empty())
    throw DomainError("digits_to_uniform: needs at least one index");
  double acc = 0.0;
  for (std::size_t k = indices.size(); k-- > 0;) {
    if (indices[k] < 1 || indices[k] > n)
      throw DomainError("digits_to_uniform: index " +
                        std::to_string(indices[k]) + " outside 1.." +
                        std::to_string(n));
    acc = (acc + static_cast<double>(indices[k] - 1)) / static_cast<double>(n);
  }
  return acc;
}

double backward_gap(const Ifsp& ifsp, double xa, double xb, int depth,
                    RngStream& rng) {
  if (depth < 1) throw DomainError("backward_gap: depth must be >= 1");
  std::vector<int> indices;
  indices.reserve(static_cast<std::size_t>(depth));
  for (int k = 0; k < depth; ++k) indices.push_back(draw_index(rng, ifsp.probs));
  const double ya = backward_iterate_indices(ifsp, xa, indices);
  const double yb = backward_iterate_indices(ifsp, xb, indices);
  return std::abs(ya - yb);
}

int default_backward_depth(int n) {
  if (n < 2) throw DomainError("default_backward_depth: n must be >= 2");
  if (n == 2) return 64;
  unsigned __int128 p = static_cast<unsigned __int128>(n);
  int d = 1;
  while (p < (static_cast<unsigned __int128>(1) << 53)) {
    p *= static_cast<unsigned __int128>(n);
    ++d;
  }
  return d;
}

}  // namespace ifsp

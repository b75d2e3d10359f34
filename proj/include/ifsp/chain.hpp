#pragma once

#include <cstdint>
#include <vector>

#include "ifsp/ifs.hpp"
#include "ifsp/rng.hpp"

namespace ifsp {

class RngStream;

// One simulated forward run. states[t+1] is exactly
// maps[indices[t] - 1].apply(states[t]), so a trajectory replays bit-for-bit
// from (x0, indices) alone; the seed fields record how the indices were
// drawn.
struct Trajectory {
  std::vector<double> states;  // length steps + 1, states[0] = starting point
  std::vector<int> indices;    // length steps, values in 1..n
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  double x0_requested = 0.0;
  bool x0_clamped = false;
  // How many map applications clamped their input back into the support.
  // Nonzero values mean endpoint drift, worth a look but not fatal.
  std::uint64_t clamp_events = 0;
};

// Index draw by cumulative-sum inversion on one uniform in [0,1). probs is
// trusted (validated at Ifsp construction); returns a 1-based index.
int draw_index(RngStream& rng, const std::vector<double>& probs);

// X_{t+1} = f_{I_{t+1}}(X_t) for `steps` steps. x0 outside the support is
// clamped and flagged. A non-finite state aborts with IntegrityError naming
// the step.
Trajectory simulate_forward(const Ifsp& ifsp, double x0, std::uint64_t steps,
                            RngStream& rng);

// Same dynamics with a caller-chosen index sequence instead of draws.
Trajectory simulate_forward_indices(const Ifsp& ifsp, double x0,
                                    const std::vector<int>& indices);

// Reversed iterate f_{I_1} o f_{I_2} o ... o f_{I_depth}(x0): the FIRST
// drawn index is applied LAST. At fixed depth this has the same distribution
// as the forward endpoint, and as depth grows it converges a.s. to a draw
// from the stationary law, which is what makes it a sampler. The drawn
// indices are appended to *drawn when provided.
double backward_iterate(const Ifsp& ifsp, double x0, int depth,
                        RngStream& rng, std::vector<int>* drawn = nullptr);

// Forced-index variant: applies indices.back() first, indices.front() last.
double backward_iterate_indices(const Ifsp& ifsp, double x0,
                                const std::vector<int>& indices);

// count independent reversed iterates; sample j uses RngStream(base_seed, j)
// so the batch is reproducible sample-by-sample and order-independent.
std::vector<double> backward_sample_batch(const Ifsp& ifsp, double x0,
                                          int depth, std::size_t count,
                                          std::uint64_t base_seed);

// sum_k (indices[k] - 1) * n^-(k+1): the point in [0,1] whose base-n digits
// are the (shifted) indices. For the theorem system this is the quantile-
// space value of the reversed iterate.
double digits_to_uniform(const std::vector<int>& indices, int n);

// |backward(xa) - backward(xb)| under one shared index draw; measures how
// much of the starting point survives at this depth.
double backward_gap(const Ifsp& ifsp, double xa, double xb, int depth,
                    RngStream& rng);

// 64 for n = 2; otherwise the smallest d with n^-d <= 2^-53, i.e. the depth
// at which the quantile-space error drops below one double ulp of [0,1].
int default_backward_depth(int n);

}  // namespace ifsp

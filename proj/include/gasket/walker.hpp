#pragma once

// Simple random walk on the gasket and the two conditioned crossings of a
// 2^N-triangle: X_N (first hit of G_N \ {O} is a_N) and X'_N (hits b_N, then a_N).

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "gasket/lattice.hpp"

namespace gasket {

enum class Crossing { direct, via_corner };
enum class SampleMethod { rejection, hierarchical };

std::string_view to_string(Crossing c);
std::string_view to_string(SampleMethod m);
Crossing parse_crossing(std::string_view s);
SampleMethod parse_method(std::string_view s);

using Rng = std::mt19937_64;

/// Independent stream for replica `replica` of a run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t replica);

struct HittingTimes {
  int level = 0;
  /// T_0 < T_1 < ...: indices of successive G_level hits, repeats in a row counted once.
  std::vector<std::size_t> times;
};

HittingTimes hitting_times(const Path& w, int level);

/// Q_level: the subsequence of w at its G_level hitting times.
Path coarse_grain(const Path& w, int level);

/// w is in W_N (direct) or V_N (via_corner).
bool is_crossing(const Path& w, int level, Crossing variant);

struct WalkOptions {
  std::uint64_t step_budget = 1'000'000'000;
};

/// One unconditioned walk from O, stopped when the outcome of the conditioning
/// event is known. Returns the path only if the event holds. Each step consumes
/// one unit of `steps_left`; throws step_budget_exceeded when it runs out.
std::optional<Path> attempt_crossing(int level, Crossing variant, Rng& rng, std::uint64_t& steps_left);

/// A path distributed as X_N (direct) or X'_N (via_corner).
///
/// `rejection` repeats attempt_crossing until the event holds. `hierarchical`
/// draws the level-(N-1) coarse crossing by rejection at unit scale, then fills
/// every coarse step with an independent X_{N-1} mapped onto the 2^{N-1}-triangle
/// it crosses.
Path sample_crossing(int level, Crossing variant, SampleMethod method, Rng& rng,
                     const WalkOptions& options = {});

}  // namespace gasket

#include "gasket/walker.hpp"

#include <array>

#include "gasket/error.hpp"

namespace gasket {

std::string_view to_string(Crossing c) { return c == Crossing::direct ? "direct" : "via-corner"; }

std::string_view to_string(SampleMethod m) {
  return m == SampleMethod::rejection ? "rejection" : "hierarchical";
}

Crossing parse_crossing(std::string_view s) {
  if (s == "direct") return Crossing::direct;
  if (s == "via-corner") return Crossing::via_corner;
  throw error(errc::invalid_argument, "unknown crossing variant '" + std::string(s) + "'");
}

SampleMethod parse_method(std::string_view s) {
  if (s == "rejection") return SampleMethod::rejection;
  if (s == "hierarchical") return SampleMethod::hierarchical;
  throw error(errc::invalid_argument, "unknown sampling method '" + std::string(s) + "'");
}

Rng make_stream(std::uint64_t seed, std::uint64_t replica) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)};
  return Rng(seq);
}

HittingTimes hitting_times(const Path& w, int level) {
  HittingTimes out{level, {}};
  bool have_last = false;
  Coord last{};
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (!on_level_grid(w[t], level)) continue;
    if (have_last && w[t] == last) continue;
    out.times.push_back(t);
    last = w[t];
    have_last = true;
  }
  return out;
}

Path coarse_grain(const Path& w, int level) {
  if (w.empty() || !on_level_grid(w.front(), level) || !on_level_grid(w.back(), level)) {
    throw error(errc::invalid_argument, "coarse_grain: endpoints must lie in G_M");
  }
  Path out;
  for (const std::size_t t : hitting_times(w, level).times) out.push_back(w[t]);
  return out;
}

bool is_crossing(const Path& w, int level, Crossing variant) {
  if (w.empty() || w.front() != origin || w.back() != apex(level)) return false;
  const auto hits = hitting_times(w, level).times;
  if (variant == Crossing::direct) {
    return hits.size() == 2 && hits[1] == w.size() - 1;
  }
  return hits.size() == 3 && w[hits[1]] == base_corner(level) && hits[2] == w.size() - 1;
}

namespace {

Coord step(Coord v, Rng& rng, std::uint64_t& steps_left) {
  if (steps_left == 0) throw error(errc::step_budget_exceeded, "walk exceeded its step budget");
  --steps_left;
  return neighbors(v)[rng() >> 62];
}

// Walk until the first G_level vertex other than `from`; returns that vertex.
Coord walk_to_next_hit(Path& w, int level, Coord from, Rng& rng, std::uint64_t& steps_left) {
  for (;;) {
    const Coord v = step(w.back(), rng, steps_left);
    w.push_back(v);
    if (v != from && on_level_grid(v, level)) return v;
  }
}

Path sample_rejection(int level, Crossing variant, Rng& rng, std::uint64_t& steps_left) {
  for (;;) {
    if (auto w = attempt_crossing(level, variant, rng, steps_left)) return std::move(*w);
  }
}

Path sample_hierarchical(int level, Crossing variant, Rng& rng, std::uint64_t& steps_left) {
  if (level <= 1) return sample_rejection(level, variant, rng, steps_left);
  const int sub = level - 1;
  const Path coarse = scaled(sample_rejection(1, variant, rng, steps_left), side_of(sub));
  Path out{origin};
  for (std::size_t k = 0; k + 1 < coarse.size(); ++k) {
    const Coord entry = coarse[k];
    const Coord exit = coarse[k + 1];
    const Triangle cell = cell_of_step(entry, exit, sub);
    const Path segment = sample_hierarchical(sub, Crossing::direct, rng, steps_left);
    const Path mapped = map_crossing(segment, sub, cell, entry, exit);
    out.insert(out.end(), mapped.begin() + 1, mapped.end());
  }
  return out;
}

}  // namespace

std::optional<Path> attempt_crossing(int level, Crossing variant, Rng& rng, std::uint64_t& steps_left) {
  if (level < 0) throw error(errc::invalid_argument, "level must be non-negative");
  Path w{origin};
  const Coord first = walk_to_next_hit(w, level, origin, rng, steps_left);
  if (variant == Crossing::direct) {
    if (first == apex(level)) return w;
    return std::nullopt;
  }
  if (first != base_corner(level)) return std::nullopt;
  const Coord second = walk_to_next_hit(w, level, first, rng, steps_left);
  if (second == apex(level)) return w;
  return std::nullopt;
}

Path sample_crossing(int level, Crossing variant, SampleMethod method, Rng& rng,
                     const WalkOptions& options) {
  if (level < 1) throw error(errc::invalid_argument, "sample_crossing requires N >= 1");
  std::uint64_t steps_left = options.step_budget;
  if (method == SampleMethod::rejection) return sample_rejection(level, variant, rng, steps_left);
  return sample_hierarchical(level, variant, rng, steps_left);
}

}  // namespace gasket

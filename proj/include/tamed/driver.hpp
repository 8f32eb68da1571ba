#pragma once

#include "tamed/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace tamed {

/// Independent random streams per (base seed, path index, purpose), so path
/// j sees the same noise regardless of which thread simulates it.
enum class StreamTag : std::uint32_t { Brownian = 1, Jumps = 2, Audit = 3 };

std::uint64_t path_seed(std::uint64_t base_seed, std::uint64_t path_index, StreamTag tag);
std::mt19937_64 make_engine(std::uint64_t seed);

/// Brownian increments dB_n = B((n+1)h) - B(nh), n = 0..M-1, each a vector
/// of dimension m stored row-major.
class BrownianPathIncrements {
public:
    BrownianPathIncrements(GridSpec grid, std::size_t dim, std::vector<double> increments);

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t dim() const noexcept { return dim_; }
    std::int64_t steps() const noexcept { return grid_.steps(); }

    ConstVec at(std::int64_t n) const;
    ConstVec data() const noexcept { return increments_; }

    /// B(nh) for n = 0..M, summed left to right from B(0) = 0.
    std::vector<double> partial_sums() const;

    friend bool operator==(const BrownianPathIncrements&, const BrownianPathIncrements&) = default;

private:
    GridSpec grid_;
    std::size_t dim_;
    std::vector<double> increments_;
};

/// i.i.d. N(0, h I_m) increments, deterministic in (grid, m, seed).
BrownianPathIncrements gen_brownian(const GridSpec& grid, std::size_t dim_noise, std::uint64_t seed);

/// Block sums of `factor` consecutive increments: the exact increments of the
/// same Brownian path on the grid with step factor*h. Throws NotDivisible.
BrownianPathIncrements coarsen(const BrownianPathIncrements& fine, std::int64_t factor);

struct JumpEvent {
    double time;
    std::vector<double> mark;

    friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

/// Marked Poisson events on (0, T]. Independent of any step size, so one
/// realization drives every resolution of a convergence study.
class JumpRealization {
public:
    JumpRealization(Rational horizon, std::size_t mark_dim, std::vector<JumpEvent> events);

    const Rational& horizon() const noexcept { return horizon_; }
    std::size_t mark_dim() const noexcept { return mark_dim_; }
    std::span<const JumpEvent> events() const noexcept { return events_; }

    friend bool operator==(const JumpRealization&, const JumpRealization&) = default;

private:
    Rational horizon_;
    std::size_t mark_dim_;
    std::vector<JumpEvent> events_;
};

/// Poisson(lambda*T) event count, times uniform on (0,T] then sorted, marks
/// drawn from `mark_sampler`. Deterministic in the seed.
JumpRealization gen_jumps(const GridSpec& grid, double total_intensity, std::size_t mark_dim,
                          const MarkSampler& mark_sampler, std::uint64_t seed);

/// Events with time in (n*H, (n+1)*H]. A jump exactly at a grid time belongs
/// to the step that ends there.
std::span<const JumpEvent> events_in_step(const JumpRealization& jr, std::int64_t n,
                                          const Rational& H);

// Binary replay dumps. Little-endian IEEE-754 bit patterns, so a read-back is
// bit-exact. Throws IoError on malformed input.
void write_binary(std::ostream& os, const BrownianPathIncrements& inc);
void write_binary(std::ostream& os, const JumpRealization& jr);
BrownianPathIncrements read_brownian(std::istream& is);
JumpRealization read_jumps(std::istream& is);

}  // namespace tamed

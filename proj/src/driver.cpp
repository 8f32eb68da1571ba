#include "tamed/driver.hpp"

#include "tamed/error.hpp"
#include "tamed/kernels.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace tamed {

std::uint64_t path_seed(std::uint64_t base_seed, std::uint64_t path_index, StreamTag tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(path_index),
                      static_cast<std::uint32_t>(path_index >> 32), static_cast<std::uint32_t>(tag)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

std::mt19937_64 make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return std::mt19937_64(seq);
}

BrownianPathIncrements::BrownianPathIncrements(GridSpec grid, std::size_t dim,
                                               std::vector<double> increments)
    : grid_(std::move(grid)), dim_(dim), increments_(std::move(increments)) {
    if (dim_ == 0 || increments_.size() != static_cast<std::size_t>(grid_.steps()) * dim_) {
        throw Error(ErrorKind::GridMismatch, "Brownian increments need M*m = " +
                                                 std::to_string(grid_.steps()) + "*" +
                                                 std::to_string(dim_) + " entries");
    }
}

ConstVec BrownianPathIncrements::at(std::int64_t n) const {
    if (n < 0 || n >= grid_.steps()) {
        throw Error(ErrorKind::InvalidRange, "increment index " + std::to_string(n) + " out of range");
    }
    return ConstVec(increments_).subspan(static_cast<std::size_t>(n) * dim_, dim_);
}

std::vector<double> BrownianPathIncrements::partial_sums() const {
    const auto M = static_cast<std::size_t>(grid_.steps());
    std::vector<double> sums((M + 1) * dim_, 0.0);
    for (std::size_t n = 0; n < M; ++n) {
        for (std::size_t c = 0; c < dim_; ++c) {
            sums[(n + 1) * dim_ + c] = sums[n * dim_ + c] + increments_[n * dim_ + c];
        }
    }
    return sums;
}

BrownianPathIncrements gen_brownian(const GridSpec& grid, std::size_t dim_noise, std::uint64_t seed) {
    auto engine = make_engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(grid.step_value());
    std::vector<double> inc(static_cast<std::size_t>(grid.steps()) * dim_noise);
    for (double& v : inc) v = sd * normal(engine);
    return BrownianPathIncrements(grid, dim_noise, std::move(inc));
}

BrownianPathIncrements coarsen(const BrownianPathIncrements& fine, std::int64_t factor) {
    GridSpec coarse_grid = coarsen_grid(fine.grid(), factor);
    std::vector<double> out(static_cast<std::size_t>(coarse_grid.steps()) * fine.dim());
    kernels::block_sum(fine.data(), out, static_cast<std::size_t>(factor), fine.dim());
    return BrownianPathIncrements(std::move(coarse_grid), fine.dim(), std::move(out));
}

JumpRealization::JumpRealization(Rational horizon, std::size_t mark_dim, std::vector<JumpEvent> events)
    : horizon_(horizon), mark_dim_(mark_dim), events_(std::move(events)) {
    const double T = horizon_.to_double();
    double previous = 0.0;
    for (const auto& e : events_) {
        if (!(e.time > previous) || e.time > T) {
            throw Error(ErrorKind::InvalidRange,
                        "jump times must be strictly increasing inside (0, T]");
        }
        if (e.mark.size() != mark_dim_) {
            throw Error(ErrorKind::GridMismatch, "jump mark has the wrong dimension");
        }
        previous = e.time;
    }
}

JumpRealization gen_jumps(const GridSpec& grid, double total_intensity, std::size_t mark_dim,
                          const MarkSampler& mark_sampler, std::uint64_t seed) {
    if (!(total_intensity >= 0.0)) {
        throw Error(ErrorKind::InvalidRange, "total intensity must be nonnegative");
    }
    auto engine = make_engine(seed);
    const double T = grid.horizon().to_double();
    std::vector<JumpEvent> events;
    if (total_intensity > 0.0) {
        std::poisson_distribution<std::int64_t> count_dist(total_intensity * T);
        const std::int64_t count = count_dist(engine);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        events.resize(static_cast<std::size_t>(count));
        // 1 - U with U in [0,1) lands in (0,1], so times are in (0,T].
        for (auto& e : events) e.time = T * (1.0 - unit(engine));
        for (auto& e : events) {
            e.mark.assign(mark_dim, 0.0);
            mark_sampler(engine, e.mark);
        }
        std::stable_sort(events.begin(), events.end(),
                         [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
    }
    return JumpRealization(grid.horizon(), mark_dim, std::move(events));
}

std::span<const JumpEvent> events_in_step(const JumpRealization& jr, std::int64_t n,
                                          const Rational& H) {
    const double lo = (Rational(n) * H).to_double();
    const double hi = (Rational(n + 1) * H).to_double();
    auto events = jr.events();
    auto by_time = [](double t, const JumpEvent& e) { return t < e.time; };
    auto first = std::upper_bound(events.begin(), events.end(), lo, by_time);
    auto last = std::upper_bound(first, events.end(), hi, by_time);
    return {first, last};
}

namespace {

constexpr std::array<char, 8> kBrownianMagic{'T', 'N', 'S', 'B', 'R', 'W', '0', '1'};
constexpr std::array<char, 8> kJumpMagic{'T', 'N', 'S', 'J', 'M', 'P', '0', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& is) {
    std::array<unsigned char, 8> bytes{};
    if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw Error(ErrorKind::IoError, "truncated replay dump");
    }
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
    return v;
}

void put_i64(std::ostream& os, std::int64_t v) { put_u64(os, static_cast<std::uint64_t>(v)); }
std::int64_t get_i64(std::istream& is) { return static_cast<std::int64_t>(get_u64(is)); }
void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

void put_rational(std::ostream& os, const Rational& r) {
    put_i64(os, r.num());
    put_i64(os, r.den());
}

Rational get_rational(std::istream& is) {
    const std::int64_t num = get_i64(is);
    const std::int64_t den = get_i64(is);
    return Rational(num, den);
}

void expect_magic(std::istream& is, const std::array<char, 8>& magic) {
    std::array<char, 8> got{};
    if (!is.read(got.data(), got.size()) || got != magic) {
        throw Error(ErrorKind::IoError, "replay dump has an unexpected header");
    }
}

std::uint64_t get_count(std::istream& is, std::uint64_t limit) {
    const std::uint64_t n = get_u64(is);
    if (n > limit) throw Error(ErrorKind::IoError, "replay dump declares an implausible size");
    return n;
}

constexpr std::uint64_t kMaxEntries = 1ull << 32;

}  // namespace

void write_binary(std::ostream& os, const BrownianPathIncrements& inc) {
    os.write(kBrownianMagic.data(), kBrownianMagic.size());
    put_rational(os, inc.grid().horizon());
    put_rational(os, inc.grid().delay());
    put_rational(os, inc.grid().step());
    put_u64(os, inc.dim());
    for (double v : inc.data()) put_f64(os, v);
    if (!os) throw Error(ErrorKind::IoError, "failed to write Brownian replay dump");
}

void write_binary(std::ostream& os, const JumpRealization& jr) {
    os.write(kJumpMagic.data(), kJumpMagic.size());
    put_rational(os, jr.horizon());
    put_u64(os, jr.mark_dim());
    put_u64(os, jr.events().size());
    for (const auto& e : jr.events()) {
        put_f64(os, e.time);
        for (double u : e.mark) put_f64(os, u);
    }
    if (!os) throw Error(ErrorKind::IoError, "failed to write jump replay dump");
}

BrownianPathIncrements read_brownian(std::istream& is) {
    expect_magic(is, kBrownianMagic);
    const Rational T = get_rational(is);
    const Rational tau = get_rational(is);
    const Rational h = get_rational(is);
    GridSpec grid = build_grid(T, tau, h);
    const auto dim = static_cast<std::size_t>(get_count(is, kMaxEntries));
    std::vector<double> inc(static_cast<std::size_t>(grid.steps()) * dim);
    for (double& v : inc) v = get_f64(is);
    return BrownianPathIncrements(std::move(grid), dim, std::move(inc));
}

JumpRealization read_jumps(std::istream& is) {
    expect_magic(is, kJumpMagic);
    const Rational T = get_rational(is);
    const auto mark_dim = static_cast<std::size_t>(get_count(is, kMaxEntries));
    const auto count = static_cast<std::size_t>(get_count(is, kMaxEntries));
    std::vector<JumpEvent> events(count);
    for (auto& e : events) {
        e.time = get_f64(is);
        e.mark.resize(mark_dim);
        for (double& u : e.mark) u = get_f64(is);
    }
    return JumpRealization(T, mark_dim, std::move(events));
}

}  // namespace tamed

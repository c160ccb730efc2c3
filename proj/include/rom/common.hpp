#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Deterministic random numbers.
//
// std::uniform_real_distribution and friends are implementation defined, so
// every draw here goes through our own bit-to-double conversion.  Streams are
// derived from a (seed, stream) pair by splitmix64, which makes per-trajectory
// generators independent of scheduling.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed;
        // decorrelate the stream index from the seed
        std::uint64_t t = stream + 0x632be59bd9b4e019ull;
        s ^= splitmix64(t);
        state_[0] = splitmix64(s);
        state_[1] = splitmix64(s);
        state_[2] = splitmix64(s);
        state_[3] = splitmix64(s);
    }

    std::uint64_t next_u64() {  // xoshiro256**
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double normal() {
        // Box-Muller, one value per call; cache the companion draw.
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    Matrix normal_matrix(int rows, int cols) {
        Matrix m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = normal();
        return m;
    }

  private:
    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

// ---------------------------------------------------------------------------
// Data-parallel partial sums.
//
// The sample range is cut into fixed-size chunks whose boundaries depend only
// on the range, never on the thread count, and the per-chunk results are
// combined by a pairwise tree in chunk order.  Results are therefore bitwise
// identical for any thread count.
// ---------------------------------------------------------------------------

inline constexpr int kReduceChunk = 2048;

int effective_threads(int requested);

// fn(chunk_index, begin, end) fills out[chunk_index]
void run_chunked(long n, int nthreads, const std::function<void(int, long, long)>& fn);

inline int num_chunks(long n) { return static_cast<int>((n + kReduceChunk - 1) / kReduceChunk); }

template <typename T, typename Plus>
T pairwise_combine(std::vector<T> parts, Plus plus) {
    if (parts.empty()) throw std::invalid_argument("pairwise_combine: empty");
    std::size_t m = parts.size();
    while (m > 1) {
        std::size_t half = m / 2;
        for (std::size_t i = 0; i < half; ++i) parts[i] = plus(parts[2 * i], parts[2 * i + 1]);
        if (m % 2 == 1) parts[half] = parts[m - 1];
        m = half + m % 2;
    }
    return parts[0];
}

// Chunked weighted reductions used by the fitting objectives.  `fn` maps a
// column block [begin,end) to a partial value of type T.
template <typename T, typename Plus>
T chunked_reduce(long n, int nthreads, const std::function<T(long, long)>& fn, Plus plus) {
    int nc = num_chunks(n);
    std::vector<T> parts(static_cast<std::size_t>(nc));
    run_chunked(n, nthreads, [&](int c, long b, long e) { parts[static_cast<std::size_t>(c)] = fn(b, e); });
    return pairwise_combine(std::move(parts), plus);
}

// ---------------------------------------------------------------------------
// Monotone cubic interpolation (Fritsch-Carlson) for invertible tabulations.
// ---------------------------------------------------------------------------

class MonotoneCubic {
  public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }

  private:
    std::vector<double> x_, y_, d_;  // nodes, values, node slopes
};

// Composite trapezoid over a uniform periodic grid; exact for trigonometric
// polynomials of bandwidth below the node count.
double periodic_trapezoid_mean(const Vector& values);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace rom

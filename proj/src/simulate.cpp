#include "hmmlyap/simulate.hpp"

#include <string>

namespace hmmlyap {

SamplePath sample_path(const HmmModel& model, long long T, std::uint64_t seed) {
    if (T < 1) fail("WindowTooLong", "path length must be >= 1");

    // Row-major copies so categorical() can scan rows in place.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> p = model.p;
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> q = model.q;
    const Eigen::VectorXd pi = model.pi;

    rng::Xoshiro256pp gen(seed);
    SamplePath path;
    path.seed = seed;
    path.x.resize(static_cast<std::size_t>(T));
    path.z.resize(static_cast<std::size_t>(T));

    // Draw order is part of the contract: x0 from pi, then per step the
    // emission before the next transition.
    int x = gen.categorical(pi.data(), model.k);
    for (long long t = 0; t < T; ++t) {
        path.x[static_cast<std::size_t>(t)] = x + 1;
        path.z[static_cast<std::size_t>(t)] = gen.categorical(&q(x, 0), model.l) + 1;
        if (t + 1 < T) x = gen.categorical(&p(x, 0), model.k);
    }
    return path;
}

ObservationWindow past_window(const SamplePath& path, long long n) {
    const long long T = static_cast<long long>(path.z.size());
    if (n < 1 || n > T) {
        fail("WindowTooLong", "past window of length " + std::to_string(n) +
                                  " from a path of length " + std::to_string(T));
    }
    ObservationWindow w;
    w.origin = -n;
    w.symbols.assign(path.z.end() - static_cast<std::ptrdiff_t>(n), path.z.end());
    return w;
}

ObservationWindow future_window(const SamplePath& path, long long n) {
    const long long T = static_cast<long long>(path.z.size());
    if (n < 1 || n > T) {
        fail("WindowTooLong", "future window of length " + std::to_string(n) +
                                  " from a path of length " + std::to_string(T));
    }
    ObservationWindow w;
    w.origin = 1;
    w.symbols.assign(path.z.begin(), path.z.begin() + static_cast<std::ptrdiff_t>(n));
    return w;
}

} // namespace hmmlyap

#include <doctest.h>

#include <vector>

#include "hmmlyap/model.hpp"
#include "hmmlyap/rng.hpp"
#include "hmmlyap/simulate.hpp"

using namespace hmmlyap;

namespace {

HmmModel reference_model() {
    Eigen::MatrixXd p(2, 2), q(2, 2);
    p << 0.9, 0.1, 0.2, 0.8;
    q << 0.9, 0.1, 0.1, 0.9;
    return build_model(p, q);
}

} // namespace

TEST_CASE("sample_path frozen reference trajectory") {
    const HmmModel m = reference_model();
    const SamplePath path = sample_path(m, 12, rng::substream(14728, 0));
    const std::vector<int> x_ref = {2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 2};
    const std::vector<int> z_ref = {2, 2, 2, 2, 1, 1, 1, 1, 1, 2, 1, 1};
    CHECK(path.x == x_ref);
    CHECK(path.z == z_ref);
    CHECK(path.seed == rng::substream(14728, 0));
}

TEST_CASE("sample_path is deterministic in the seed") {
    const HmmModel m = reference_model();
    const SamplePath a = sample_path(m, 500, 77);
    const SamplePath b = sample_path(m, 500, 77);
    const SamplePath c = sample_path(m, 500, 78);
    CHECK(a.x == b.x);
    CHECK(a.z == b.z);
    CHECK(a.z != c.z);
    for (int v : a.x) CHECK((v == 1 || v == 2));
    for (int v : a.z) CHECK((v == 1 || v == 2));
}

TEST_CASE("sample_path rejects non-positive length") {
    const HmmModel m = reference_model();
    CHECK_THROWS_AS(sample_path(m, 0, 1), Error);
}

TEST_CASE("past_window takes the most recent symbols") {
    const HmmModel m = reference_model();
    const SamplePath path = sample_path(m, 12, rng::substream(14728, 0));
    const ObservationWindow w = past_window(path, 4);
    CHECK(w.origin == -4);
    const std::vector<int> tail = {1, 2, 1, 1};  // z[8..11] of the frozen path
    CHECK(w.symbols == tail);
    const ObservationWindow all = past_window(path, 12);
    CHECK(all.symbols == path.z);
}

TEST_CASE("future_window takes the leading symbols") {
    const HmmModel m = reference_model();
    const SamplePath path = sample_path(m, 12, rng::substream(14728, 0));
    const ObservationWindow w = future_window(path, 3);
    CHECK(w.origin == 1);
    const std::vector<int> head = {2, 2, 2};
    CHECK(w.symbols == head);
}

TEST_CASE("windows longer than the path are rejected") {
    const HmmModel m = reference_model();
    const SamplePath path = sample_path(m, 12, rng::substream(14728, 0));
    try {
        past_window(path, 13);
        FAIL("expected WindowTooLong");
    } catch (const Error& e) {
        CHECK(e.kind() == std::string("WindowTooLong"));
    }
    CHECK_THROWS_AS(future_window(path, 13), Error);
}

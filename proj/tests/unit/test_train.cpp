#include <doctest.h>

#include <cmath>

#include "turbodec/errors.hpp"
#include "turbodec/train.hpp"
#include "turbodec/turbo_code.hpp"

using namespace turbodec;

TEST_CASE("bce loss values") {
    SUBCASE("zero posterior costs ln 2 per bit") {
        const std::vector<double> post(6, 0.0);
        const std::vector<std::uint8_t> msg = {1, 0, 1, 0, 1, 0};
        CHECK(bce_loss(post, msg, 2, 3) == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
    }
    SUBCASE("saturated correct bit costs almost nothing") {
        const std::vector<double> post = {20.0};
        const std::vector<std::uint8_t> msg = {1};
        CHECK(bce_loss(post, msg, 1, 1) < 1e-8);
    }
    SUBCASE("frozen case computed with an independent script") {
        const std::vector<double> post = {0.7, -1.3, 2.2, -0.4, 0.05, -3.0};
        const std::vector<std::uint8_t> msg = {1, 0, 1, 0, 1, 0};
        CHECK(bce_loss(post, msg, 2, 3) == doctest::Approx(0.9896700372370635).epsilon(1e-12));
    }
    SUBCASE("shape mismatch") {
        const std::vector<double> post(5, 0.0);
        const std::vector<std::uint8_t> msg(6, 0);
        CHECK_THROWS_AS(bce_loss(post, msg, 2, 3), ContractError);
    }
}

TEST_CASE("mse-to-teacher loss values") {
    const std::vector<double> s = {1.0, 2.0, -1.0, 0.0};
    CHECK(mse_teacher_loss(s, s, 2, 2) == 0.0);
    std::vector<double> t = s;
    for (auto& x : t) x += 0.5;
    CHECK(mse_teacher_loss(s, t, 2, 2) == doctest::Approx(0.25).epsilon(1e-12));
    const std::vector<double> s2 = {1.0, -2.0}, t2 = {0.0, 1.5};
    CHECK(mse_teacher_loss(s2, t2, 1, 2) == doctest::Approx((1.0 + 12.25) / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(mse_teacher_loss(s, t2, 2, 2), ContractError);
}

namespace {

TrainConfig tiny_config() {
    TrainConfig cfg;
    cfg.batch_size = 16;
    cfg.steps = 5;
    cfg.train_snr_db = -1.0;
    cfg.seed = 99;
    cfg.validation_every = 2;
    cfg.validation_frames = 64;
    return cfg;
}

}  // namespace

TEST_CASE("learning rate zero leaves the weights at their initialization") {
    const TurboCode code = make_lte_code(40);
    TrainConfig cfg = tiny_config();
    cfg.learning_rate = 0.0;
    const TrainReport report = train(code, cfg);
    for (const auto& row : report.weights.shared)
        for (double v : row) CHECK(v == 1.0);
    CHECK(report.loss_curve.size() == cfg.steps);
}

TEST_CASE("fixed seed reproduces the report bit for bit") {
    const TurboCode code = make_lte_code(40);
    const TrainConfig cfg = tiny_config();
    const TrainReport a = train(code, cfg);
    const TrainReport b = train(code, cfg);
    CHECK(a.loss_curve == b.loss_curve);
    CHECK(a.ber_curve == b.ber_curve);
    CHECK(a.weights.shared == b.weights.shared);
}

TEST_CASE("positional and map-based configurations train") {
    const TurboCode code = make_lte_code(40);
    TrainConfig cfg = tiny_config();
    cfg.steps = 2;
    cfg.scheme = WeightScheme::positional;
    const TrainReport pos = train(code, cfg);
    CHECK(pos.weights.parameter_count() == 6 * 3 * 40);
    for (const auto& row : pos.weights.positional)
        for (const auto& slot : row)
            for (double v : slot) CHECK(std::isfinite(v));

    cfg.scheme = WeightScheme::shared;
    cfg.base_algorithm = SisoAlgorithm::map;
    const TrainReport mapped = train(code, cfg);
    for (const auto& row : mapped.weights.shared)
        for (double v : row) CHECK(std::isfinite(v));
}

TEST_CASE("training rejects degenerate configs") {
    const TurboCode code = make_lte_code(40);
    TrainConfig cfg = tiny_config();
    cfg.scheme = WeightScheme::classical;
    CHECK_THROWS_AS(train(code, cfg), ContractError);
    cfg = tiny_config();
    cfg.steps = 0;
    CHECK_THROWS_AS(train(code, cfg), ContractError);
}

#include <doctest.h>

#include "adaport/core.hpp"

using namespace adaport;

TEST_CASE("instance validation")
{
    CHECK_NOTHROW(BernoulliInstance({0.8, 0.75}, {0.9, 0.8}));
    CHECK_THROWS_AS(BernoulliInstance({0.8}, {0.9}), std::invalid_argument);
    CHECK_THROWS_AS(BernoulliInstance({0.8, 0.7}, {0.9}), std::invalid_argument);
    CHECK_THROWS_AS(BernoulliInstance({0.8, 1.2}, {0.9, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(BernoulliInstance({0.8, 0.5}, {-0.1, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(BernoulliInstance({0.0, 1.0}, {1.0, 0.0}));
}

TEST_CASE("reward_gap")
{
    const BernoulliInstance inst({0.8, 0.75}, {0.9, 0.8});
    CHECK(reward_gap(inst, 1) == doctest::Approx(0.72 - 0.60).epsilon(1e-15));
    CHECK(reward_gap(inst, 0) == 0.0);
    CHECK_THROWS_AS(reward_gap(inst, 2), std::out_of_range);

    const BernoulliInstance tie({0.5, 0.5}, {0.5, 0.5});
    CHECK_FALSE(tie.has_unique_optimum());
    CHECK_THROWS_AS(reward_gap(tie, 0), AmbiguousOptimum);
    CHECK_THROWS_AS(tie.optimal_arm(), AmbiguousOptimum);
}

TEST_CASE("optimum tie tolerance is 1e-12 on the product")
{
    CHECK_FALSE(BernoulliInstance({0.5, 0.5 + 1e-13}, {1.0, 1.0}).has_unique_optimum());
    CHECK(BernoulliInstance({0.5, 0.5 + 1e-10}, {1.0, 1.0}).optimal_arm() == 1);
}

TEST_CASE("gaps are positive off the optimum on random instances")
{
    Rng rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = 2 + rep % 5;
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
        }
        const BernoulliInstance inst(a, b);
        if (!inst.has_unique_optimum())
            continue;
        const Arm star = inst.optimal_arm();
        for (Arm i = 0; i < n; ++i) {
            CHECK(inst.product(i) >= 0.0);
            CHECK(inst.product(i) <= 1.0);
            if (i == star)
                CHECK(reward_gap(inst, i) == 0.0);
            else
                CHECK(reward_gap(inst, i) > 0.0);
        }
    }
}

TEST_CASE("instance JSON")
{
    const auto inst = parse_instance(R"({"alpha": [0.8, 0.9], "beta": [0.9, 0.7]})");
    CHECK(inst.arms() == 2);
    CHECK(inst.alpha()[1] == 0.9);
    CHECK_THROWS(parse_instance(R"({"alpha": [0.8, 0.9], "beta": [0.9]})"));
    CHECK_THROWS(parse_instance(R"({"alpha": [0.8, 1.5], "beta": [0.9, 0.1]})"));
    CHECK_THROWS(parse_instance(R"({"alpha": [0.8, 0.5]})"));
}

TEST_CASE("feedback model names")
{
    for (auto m : {FeedbackModel::OneB, FeedbackModel::TwoBB, FeedbackModel::TwoFB})
        CHECK(parse_feedback_model(to_string(m)) == m);
    CHECK_THROWS_AS(parse_feedback_model("3/X"), std::invalid_argument);
}

TEST_CASE("observation reward is the product of outcomes")
{
    ObservationRound r;
    r.x_all = {1, 0, 1};
    r.y_all = {1, 1, 0};
    CHECK(r.reward(0) == 1);
    CHECK(r.reward(1) == 0);
    CHECK(r.reward(2) == 0);
}

TEST_CASE("make_rng streams differ and are reproducible")
{
    Rng a = make_rng(5, 0), b = make_rng(5, 0), c = make_rng(5, 1);
    const auto va = a(), vb = b(), vc = c();
    CHECK(va == vb);
    CHECK(va != vc);
}

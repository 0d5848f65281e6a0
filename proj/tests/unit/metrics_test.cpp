#include <catch2/catch_amalgamated.hpp>

#include "qif/metrics.hpp"
#include "qif/parser.hpp"
#include "support/generators.hpp"

using namespace qif;
using qif_testing::abc_domain;
using qif_testing::belief_with_at_reality;
using Catch::Matchers::WithinAbs;

namespace {

Program pwc() {
    return parse_program("high p in {A, B, C}; low g in {A, B, C}; output a in {0, 1};"
                         "if p == g then a := 1 else a := 0 end");
}

Program ppwc() {
    return parse_program("high p in {A, B, C}; low g in {A, B, C}; output a in {0, 1};"
                         "if p == g then pchoice 0.99 { a := 1 } { a := 0 }"
                         "else pchoice 0.99 { a := 0 } { a := 1 } end");
}

Belief skewed_pre() {
    return Belief::from_probs(abc_domain(), {Rat(98, 100), Rat(1, 100), Rat(1, 100)});
}
Belief ruled_out_post() {
    return Belief::from_probs(abc_domain(), {Rat(0), Rat(1, 2), Rat(1, 2)});
}

const Reality kRealityC{{"C"}};
const double kEta3 = std::log2(3.0);

Experiment worked_example() { return Experiment{pwc(), skewed_pre(), kRealityC, {{"g", "A"}}}; }

}  // namespace

TEST_CASE("running the worked experiment reproduces the posterior") {
    auto outcome = run_experiment(worked_example());
    CHECK(outcome.observation == std::map<std::string, std::string>{{"a", "0"}});
    CHECK(outcome.postbelief.probs() == std::vector<Rat>{0, Rat(1, 2), Rat(1, 2)});
}

TEST_CASE("a program with nothing observable leaves the belief unchanged") {
    Program p = parse_program("high p in {A, B, C}; skip");
    Belief pre = Belief::uniform(HighDomain::of(p));
    auto outcome = run_experiment(Experiment{p, pre, Reality{{"B"}}, {}});
    CHECK(outcome.postbelief == pre);
    CHECK(outcome.observation.empty());
}

TEST_CASE("explicit observations are honored") {
    auto outcome = run_experiment(Experiment{ppwc(), Belief::uniform(abc_domain()), kRealityC, {{"g", "A"}}},
                                  std::map<std::string, std::string>{{"a", "0"}});
    CHECK(outcome.postbelief.probs() == std::vector<Rat>{Rat(1, 199), Rat(99, 199), Rat(99, 199)});
}

TEST_CASE("default observation is the most probable one, ties in domain order") {
    Belief pre = Belief::uniform(HighDomain{{"p"}, {{"A"}}});
    Program coin = parse_program("high p in {A}; output a in {0, 1}; pchoice 1/2 { a := 1 } { a := 0 }");
    CHECK(run_experiment(Experiment{coin, pre, Reality{{"A"}}, {}}).observation.at("a") == "0");

    Program coin_rev = parse_program("high p in {A}; output a in {1, 0}; pchoice 1/2 { a := 1 } { a := 0 }");
    CHECK(run_experiment(Experiment{coin_rev, pre, Reality{{"A"}}, {}}).observation.at("a") == "1");

    Program skewed = parse_program("high p in {A}; output a in {0, 1}; pchoice 2/3 { a := 1 } { a := 0 }");
    CHECK(run_experiment(Experiment{skewed, pre, Reality{{"A"}}, {}}).observation.at("a") == "1");
}

TEST_CASE("uncertainty reduction R") {
    CHECK_THAT(metric_r(skewed_pre(), ruled_out_post()), WithinAbs(-0.8386, 5e-4));
    CHECK(metric_r(skewed_pre(), skewed_pre()) == 0.0);
    CHECK_THAT(metric_r(Belief::uniform(abc_domain()), point_mass(kRealityC, abc_domain())),
               WithinAbs(1.5849, 5e-4));

    qif_testing::Rng rng(21);
    for (int i = 0; i < 500; ++i) {
        double r = metric_r(qif_testing::random_belief(rng, abc_domain()),
                            qif_testing::random_belief(rng, abc_domain()));
        CHECK(r >= -kEta3 - 1e-12);
        CHECK(r <= kEta3 + 1e-12);
    }
}

TEST_CASE("accuracy flow Q") {
    CHECK_THAT(metric_q(skewed_pre(), ruled_out_post(), kRealityC).value(), WithinAbs(5.6438, 5e-4));
    CHECK(metric_q(skewed_pre(), skewed_pre(), kRealityC) == ExtendedReal::finite(0.0));
    CHECK(metric_q(Rat(1, 2), Rat(0)).is_neg_inf());
    CHECK(metric_q(Rat(0), Rat(1, 2)).is_pos_inf());
    CHECK_THROWS_AS(metric_q(Rat(0), Rat(0)), UndefinedMetricError);

    Belief other = Belief::uniform(HighDomain{{"q"}, {{"A", "B", "C"}}});
    CHECK_THROWS_AS(metric_q(skewed_pre(), other, kRealityC), DomainMismatchError);
}

TEST_CASE("normalized flow Q'") {
    CHECK_THAT(metric_q_prime(skewed_pre(), ruled_out_post(), kRealityC), WithinAbs(0.5706, 5e-4));
    CHECK(metric_q_prime(skewed_pre(), skewed_pre(), kRealityC) == 0.0);
    CHECK(metric_q_prime(Rat(0), Rat(1)) == 1.0);
    CHECK(metric_q_prime(Rat(1), Rat(0)) == -1.0);

    qif_testing::Rng rng(22);
    for (int i = 0; i < 1000; ++i) {
        double v = metric_q_prime(Rat(rng.below(1001), 1000), Rat(rng.below(1001), 1000));
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("size-consistent flow Q''") {
    CHECK_THAT(metric_q_double(skewed_pre(), ruled_out_post(), kRealityC, kEta3), WithinAbs(0.9044, 5e-4));
    CHECK(metric_q_double(skewed_pre(), skewed_pre(), kRealityC, kEta3) == 0.0);
    CHECK_THAT(metric_q_double(Rat(0), Rat(1), kEta3), WithinAbs(kEta3, 1e-12));
    CHECK_THROWS_AS(metric_q_double(skewed_pre(), ruled_out_post(), kRealityC, 0.0), ValidationError);
    CHECK_THROWS_AS(metric_q_double(skewed_pre(), ruled_out_post(), kRealityC, -1.0), ValidationError);
}

TEST_CASE("range of Q") {
    FlowRange r = range_q(skewed_pre(), kRealityC);
    CHECK(r.lo.is_neg_inf());
    CHECK_THAT(r.hi.value(), WithinAbs(6.6438, 5e-4));

    CHECK(range_q(point_mass(kRealityC, abc_domain()), kRealityC).hi == 0.0);
    CHECK_THAT(range_q(Belief::uniform(abc_domain()), kRealityC).hi.value(), WithinAbs(1.5849, 5e-4));
    CHECK(range_q(ruled_out_post(), Reality{{"A"}}).hi.is_pos_inf());
}

TEST_CASE("range of Q''") {
    FlowRange r = range_q_double(skewed_pre(), kRealityC, kEta3);
    CHECK_THAT(r.hi.value(), WithinAbs(1.5621, 5e-4));
    CHECK_THAT(r.lo.value(), WithinAbs(-kEta3 * std::log2(1.01), 1e-12));

    FlowRange zero = range_q_double(ruled_out_post(), Reality{{"A"}}, kEta3);
    CHECK(zero.lo == 0.0);
    CHECK_THAT(zero.hi.value(), WithinAbs(kEta3, 1e-12));

    FlowRange one = range_q_double(point_mass(kRealityC, abc_domain()), kRealityC, kEta3);
    CHECK_THAT(one.lo.value(), WithinAbs(-kEta3, 1e-12));
    CHECK(one.hi == 0.0);
}

TEST_CASE("size consistency verdicts") {
    CHECK(size_consistent(range_q_double(skewed_pre(), kRealityC, kEta3), kEta3));
    CHECK_FALSE(size_consistent(range_q(skewed_pre(), kRealityC), kEta3));
    CHECK(size_consistent(FlowRange{ExtendedReal::finite(-kEta3), ExtendedReal::finite(kEta3)}, kEta3));

    qif_testing::Rng rng(23);
    for (int i = 0; i < 500; ++i) {
        Belief pre = qif_testing::random_belief(rng, abc_domain());
        CHECK(size_consistent(range_q_double(pre, kRealityC, kEta3), kEta3));
    }
}

TEST_CASE("flow inversion recovers the postbelief") {
    double k = metric_q_double(skewed_pre(), ruled_out_post(), kRealityC, kEta3);
    auto m = multiplier(k, kEta3, 0.01);
    CHECK_THAT(m.post_at_reality, WithinAbs(0.5, 1e-3));
    CHECK_THAT(m.fold_increase.value(), WithinAbs(50.0, 1e-2));

    auto none = multiplier(0.0, kEta3, 0.37);
    CHECK(none.post_at_reality == 0.37);
    CHECK(none.fold_increase == 1.0);

    auto full = multiplier(kEta3, kEta3, 0.0);
    CHECK(full.post_at_reality == 1.0);
    CHECK(full.fold_increase.is_pos_inf());

    auto wipe = multiplier(-kEta3, kEta3, 1.0);
    CHECK(wipe.post_at_reality == 0.0);

    CHECK_THROWS_AS(multiplier(kEta3, kEta3, 0.5), ValidationError);  // post would exceed 1
    CHECK_THROWS_AS(multiplier(1.0, -1.0, 0.5), ValidationError);
}

TEST_CASE("flow inversion round-trips against the metric") {
    qif_testing::Rng rng(24);
    for (int i = 0; i < 500; ++i) {
        Rat pre(rng.below(1001), 1000);
        Rat post(rng.below(1001), 1000);
        if (pre == 0 && post == 0) continue;
        double k = metric_q_double(pre, post, kEta3);
        auto m = multiplier(k, kEta3, to_double(pre));
        CHECK_THAT(m.post_at_reality, WithinAbs(to_double(post), 1e-9));
    }
}

TEST_CASE("search effort") {
    double k = metric_q_double(skewed_pre(), ruled_out_post(), kRealityC, kEta3);
    auto eff = search_effort(kEta3, k);
    REQUIRE(eff.has_value());
    CHECK_THAT(eff->residual_bits, WithinAbs(0.6805, 5e-4));
    CHECK_THAT(eff->space, WithinAbs(std::exp2(eff->residual_bits), 1e-12));

    auto all = search_effort(kEta3, 0.0);
    REQUIRE(all.has_value());
    CHECK(all->residual_bits == kEta3);
    CHECK_THAT(all->space, WithinAbs(3.0, 1e-9));

    CHECK_FALSE(search_effort(kEta3, 5.6438).has_value());
}

TEST_CASE("admissibility of a prebelief") {
    CHECK(admissible(skewed_pre(), Rat(3, 100)));       // boundary: 0.01 >= 0.03/3
    CHECK_FALSE(admissible(skewed_pre(), Rat(4, 100)));
    CHECK(admissible(Belief::uniform(abc_domain()), Rat(1)));

    for (const Rat& eps : {Rat(1, 1000000), Rat(1), Rat(100)}) CHECK_FALSE(admissible(ruled_out_post(), eps));

    CHECK_THROWS_AS(admissible(skewed_pre(), Rat(0)), ValidationError);
    CHECK_THROWS_AS(admissible(skewed_pre(), Rat(-1)), ValidationError);
}

TEST_CASE("the full report on the worked scenario") {
    FlowReport rep = analyze(worked_example());
    CHECK_THAT(rep.eta, WithinAbs(1.5849, 5e-4));
    CHECK_THAT(rep.uncertainty_pre, WithinAbs(0.1614, 5e-4));
    CHECK_THAT(rep.uncertainty_post, WithinAbs(1.0, 1e-12));
    CHECK_THAT(rep.r, WithinAbs(-0.8386, 5e-4));
    CHECK_THAT(rep.q.value(), WithinAbs(5.6438, 5e-4));
    CHECK_THAT(rep.q_prime, WithinAbs(0.5706, 5e-4));
    CHECK_THAT(rep.q_double_prime, WithinAbs(0.9044, 5e-4));
    CHECK_THAT(rep.pre_distance, WithinAbs(1.5621, 5e-4));
    CHECK_THAT(rep.post_distance, WithinAbs(0.6577, 5e-4));
    CHECK_THAT(rep.range_q.hi.value(), WithinAbs(6.6438, 5e-4));
    CHECK_THAT(rep.multiplier.value(), WithinAbs(50.0, 1e-9));
    CHECK_FALSE(rep.size_consistent_q);
    CHECK(rep.size_consistent_q_double);
    CHECK_FALSE(rep.search_q.has_value());
    CHECK_THAT(rep.search_q_double.residual_bits, WithinAbs(0.6805, 5e-4));

    // Internal consistency of the report.
    CHECK_THAT(rep.q_double_prime, WithinAbs(rep.eta * rep.q_prime, 1e-12));
    CHECK(rep.q_double_prime >= rep.range_q_double.lo.value() - 1e-12);
    CHECK(rep.q_double_prime <= rep.range_q_double.hi.value() + 1e-12);
}

TEST_CASE("a skip program reports zero flow") {
    Program p = parse_program("high p in {A, B, C}; skip");
    Belief pre = Belief::uniform(HighDomain::of(p));
    FlowReport rep = analyze(Experiment{p, pre, Reality{{"C"}}, {}});
    CHECK(rep.r == 0.0);
    CHECK(rep.q == ExtendedReal::finite(0.0));
    CHECK(rep.q_prime == 0.0);
    CHECK(rep.q_double_prime == 0.0);
    CHECK(rep.multiplier == 1.0);
}

TEST_CASE("the probabilistic posterior feeds the metrics") {
    FlowReport rep = analyze(Experiment{ppwc(), Belief::uniform(abc_domain()), kRealityC, {{"g", "A"}}},
                             std::map<std::string, std::string>{{"a", "0"}});
    CHECK_THAT(rep.q.value(), WithinAbs(std::log2((99.0 / 199.0) / (1.0 / 3.0)), 1e-9));
}

TEST_CASE("flow is nondecreasing in the postbelief") {
    qif_testing::Rng rng(25);
    for (int i = 0; i < 100; ++i) {
        Rat pre(rng.below(1001), 1000);
        double prev = -std::numeric_limits<double>::infinity();
        for (int g = 0; g <= 100; ++g) {
            double v = metric_q_double(pre, Rat(g, 100), kEta3);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("any flow inside the range maps to a proper postbelief") {
    qif_testing::Rng rng(29);
    HighDomain dom = abc_domain();
    for (int i = 0; i < 1000; ++i) {
        Rat pre(rng.below(1001), 1000);
        FlowRange range = range_q_double(belief_with_at_reality(dom, pre), kRealityC, kEta3);
        double k = range.lo.value() + rng.unit() * (range.hi.value() - range.lo.value());
        auto m = multiplier(k, kEta3, to_double(pre));
        CHECK(m.post_at_reality >= 0.0);
        CHECK(m.post_at_reality <= 1.0);
    }
}

TEST_CASE("flow always lies inside its stated range") {
    qif_testing::Rng rng(26);
    HighDomain dom = abc_domain();
    for (int i = 0; i < 2000; ++i) {
        Belief pre = qif_testing::random_belief(rng, dom);
        Rat post(rng.below(1001), 1000);
        double v = metric_q_double(pre.at(kRealityC.point), post, kEta3);
        FlowRange range = range_q_double(pre, kRealityC, kEta3);
        CHECK(v >= range.lo.value() - 1e-12);
        CHECK(v <= range.hi.value() + 1e-12);
        CHECK(std::abs(v) <= kEta3 + 1e-12);
    }
}

TEST_CASE("flow difference forms agree with the divergence differences") {
    qif_testing::Rng rng(27);
    HighDomain dom = abc_domain();
    for (int i = 0; i < 500; ++i) {
        Belief pre = qif_testing::random_belief(rng, dom, /*with_zeros=*/false);
        Belief post = qif_testing::random_belief(rng, dom, /*with_zeros=*/false);
        Belief target = point_mass(kRealityC, dom);

        double q = metric_q(pre, post, kRealityC).value();
        double kl_diff = kl_divergence(pre, target).value() - kl_divergence(post, target).value();
        CHECK_THAT(q, WithinAbs(kl_diff, 1e-9));

        double qp = metric_q_prime(pre, post, kRealityC);
        double js_diff = js_asym_divergence(pre, target) - js_asym_divergence(post, target);
        CHECK_THAT(qp, WithinAbs(js_diff, 1e-9));
    }
}

TEST_CASE("deterministic runs never report negative flow") {
    qif_testing::Rng rng(28);
    Program prog = pwc();
    HighDomain dom = HighDomain::of(prog);
    for (const auto& guess : {"A", "B", "C"}) {
        for (const auto& reality : dom.states()) {
            for (int i = 0; i < 30; ++i) {
                Belief pre = qif_testing::random_belief(rng, dom, /*with_zeros=*/false);
                FlowReport rep = analyze(Experiment{prog, pre, Reality{reality}, {{"g", guess}}});
                CHECK(rep.q >= 0.0);
                CHECK(rep.q_double_prime >= 0.0);
            }
        }
    }
}

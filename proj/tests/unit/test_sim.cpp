#include <doctest.h>

#include <omp.h>

#include <sstream>

#include "turbodec/sim.hpp"

using namespace turbodec;

namespace {

DecodeConfig classical_maxlog(int iters) {
    return {iters, SisoAlgorithm::max_log_map, WeightSet::classical_set(iters)};
}

}  // namespace

TEST_CASE("noiseless channel yields zero errors") {
    const TurboCode code = make_lte_code(40);
    const ChannelSpec ch;
    const double grid[] = {40.0};
    StopRule stop{100, 1000};
    const SimResult r = simulate(code, classical_maxlog(3), ch, grid, stop, 1);
    CHECK(r.rows.size() == 1);
    CHECK(r.rows[0].frames == 1000);
    CHECK(r.rows[0].bit_errors == 0);
    CHECK(r.rows[0].ber == 0.0);
    CHECK(r.rows[0].bler == 0.0);
}

TEST_CASE("parallel and reference paths agree exactly") {
    const TurboCode code = make_lte_code(40);
    const ChannelSpec ch;
    const double grid[] = {0.0, 1.0};
    StopRule stop{50, 1500};

    const int saved = omp_get_max_threads();
    omp_set_num_threads(3);
    const SimResult par = simulate(code, classical_maxlog(3), ch, grid, stop, 42);
    omp_set_num_threads(saved);
    const SimResult ref = simulate_reference(code, classical_maxlog(3), ch, grid, stop, 42);

    REQUIRE(par.rows.size() == ref.rows.size());
    for (std::size_t i = 0; i < par.rows.size(); ++i) {
        CHECK(par.rows[i].frames == ref.rows[i].frames);
        CHECK(par.rows[i].bit_errors == ref.rows[i].bit_errors);
        CHECK(par.rows[i].block_errors == ref.rows[i].block_errors);
    }
}

TEST_CASE("tally arithmetic invariants hold") {
    const TurboCode code = make_lte_code(40);
    const ChannelSpec ch;
    const double grid[] = {-1.0};
    StopRule stop{100, 2000};
    const SimResult r = simulate(code, classical_maxlog(3), ch, grid, stop, 7);
    const SnrPoint& p = r.rows[0];
    CHECK(p.frames > 0);
    CHECK(p.ber == double(p.bit_errors) / (double(p.frames) * 40.0));
    CHECK(p.bler == double(p.block_errors) / double(p.frames));
    CHECK(p.block_errors <= p.frames);
    CHECK(p.bit_errors <= std::uint64_t(p.frames) * 40);
}

TEST_CASE("rerunning with the same seed reproduces the csv byte for byte") {
    const TurboCode code = make_lte_code(40);
    const ChannelSpec ch;
    const double grid[] = {0.5};
    StopRule stop{30, 600};
    std::ostringstream a, b;
    write_sim_csv(a, simulate(code, classical_maxlog(2), ch, grid, stop, 33));
    write_sim_csv(b, simulate(code, classical_maxlog(2), ch, grid, stop, 33));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("# {", 0) == 0);  // metadata header line
}

TEST_CASE("comparing a config with itself gives identical columns") {
    const TurboCode code = make_lte_code(40);
    const ChannelSpec ch;
    const double grid[] = {0.0};
    const DecodeConfig cfg = classical_maxlog(3);
    const DecodeConfig cfgs[] = {cfg, cfg};
    const std::string labels[] = {"a", "b"};
    const CompareResult r = compare(code, cfgs, labels, ch, grid, 700, 11);
    CHECK(r.rows[0][0].bit_errors == r.rows[1][0].bit_errors);
    CHECK(r.rows[0][0].block_errors == r.rows[1][0].block_errors);
    CHECK(r.wins[0][0][1] == 0);  // never strictly better than itself
    CHECK(r.wins[0][1][0] == 0);
    std::ostringstream os;
    write_compare_csv(os, r);
    CHECK(os.str().find("config_a") != std::string::npos);
}

TEST_CASE("sign test statistic") {
    CHECK(sign_test_z(0, 0) == 0.0);
    CHECK(sign_test_z(100, 0) == doctest::Approx(10.0));
    CHECK(sign_test_z(0, 100) == doctest::Approx(-10.0));
    CHECK(sign_test_z(60, 40) == doctest::Approx(2.0));
}

TEST_CASE("llr statistics of the noiseless all-zero codeword") {
    const TurboCode code = make_lte_code(40);
    ChannelSpec ch;
    ch.snr_db = 400.0;  // noise below one ulp of the symbols
    const DecodeConfig cfgs[] = {classical_maxlog(3)};
    const auto stats = analyze_llr(code, cfgs, ch, 64, 5);
    REQUIRE(stats.size() == 1);
    REQUIRE(stats[0].mean.size() == 40);
    for (std::size_t k = 0; k < 40; ++k) {
        CHECK(stats[0].mean[k] < 0.0);  // all-zero message, bit-1-positive LLRs
        CHECK(stats[0].stddev[k] == doctest::Approx(0.0).epsilon(1e-9));
    }
}

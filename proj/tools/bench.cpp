// Throughput benchmark: the OpenMP frame-parallel Monte-Carlo path
// against the serial reference, plus raw per-decode timings.
#include <omp.h>

#include <chrono>
#include <cstdio>

#include "turbodec/rng.hpp"
#include "turbodec/sim.hpp"

using namespace turbodec;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void bench_simulate(const char* name, const DecodeConfig& cfg, std::size_t frames) {
    const TurboCode code = make_lte_code(40);
    const double grid[] = {1.0};
    const StopRule stop{frames + 1, frames};  // frame-bound only

    const double t0 = now();
    const SimResult serial = simulate_reference(code, cfg, ChannelSpec{}, grid, stop, 7);
    const double t1 = now();
    const SimResult parallel = simulate(code, cfg, ChannelSpec{}, grid, stop, 7);
    const double t2 = now();

    const bool same = serial.rows[0].bit_errors == parallel.rows[0].bit_errors &&
                      serial.rows[0].frames == parallel.rows[0].frames;
    std::printf("%-28s %8zu frames  serial %7.0f fps  openmp %7.0f fps  x%.2f  %s\n", name,
                frames, frames / (t1 - t0), frames / (t2 - t1), (t1 - t0) / (t2 - t1),
                same ? "tallies match" : "TALLY MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    bench_simulate("maxlog 3 iters (classical)",
                   {3, SisoAlgorithm::max_log_map, WeightSet::classical_set(3)}, 20000);
    bench_simulate("maxlog 3 iters (pretrained)",
                   {3, SisoAlgorithm::max_log_map, pretrained_weights()}, 20000);
    bench_simulate("map 3 iters", {3, SisoAlgorithm::map, WeightSet::classical_set(3)}, 8000);
    bench_simulate("map 6 iters", {6, SisoAlgorithm::map, WeightSet::classical_set(6)}, 4000);
    return 0;
}

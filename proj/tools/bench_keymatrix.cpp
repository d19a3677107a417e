// Times the parallel key-matrix builder against the serial reference on a
// random tree and checks they agree byte for byte.

#include <cstdio>
#include <cstdlib>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
static double omp_get_wtime() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}
static int omp_get_max_threads() { return 1; }
#endif

#include "kdpmac/keyderive.hpp"
#include "kdpmac/verifier.hpp"

using namespace kdpmac;

int main(int argc, char** argv) {
    int users = argc > 1 ? std::atoi(argv[1]) : 1024;
    int key_len = argc > 2 ? std::atoi(argv[2]) : 16;
    int reps = argc > 3 ? std::atoi(argv[3]) : 3;
    if (users < 1 || key_len < 1 || reps < 1) {
        std::fprintf(stderr, "usage: bench_keymatrix [users] [key-len] [reps]\n");
        return 2;
    }

    std::mt19937_64 rng(42);
    std::vector<std::pair<UserId, UserId>> edges;
    for (UserId u = 2; u <= users; ++u)
        edges.emplace_back(std::uniform_int_distribution<int>(1, u - 1)(rng), u);
    Hierarchy h = Hierarchy::from_edges(users, std::move(edges));
    BlockFamily family = build_block_family(users, std::vector<int>(users, 2));
    SSetTable ssets = build_ssets(h, family);
    KeyMaterial material = generate_key_material(ssets.ground_size, key_len, {0x42});

    std::printf("users=%d ground=%d key-len=%d threads=%d\n", users, ssets.ground_size, key_len,
                omp_get_max_threads());

    double best_serial = 1e300, best_parallel = 1e300;
    KeyMatrix serial, parallel;
    for (int rep = 0; rep < reps; ++rep) {
        double t0 = omp_get_wtime();
        serial = build_key_matrix_serial(material, ssets);
        double t1 = omp_get_wtime();
        parallel = build_key_matrix(material, ssets);
        double t2 = omp_get_wtime();
        best_serial = std::min(best_serial, t1 - t0);
        best_parallel = std::min(best_parallel, t2 - t1);
    }

    if (!(serial == parallel)) {
        std::fprintf(stderr, "FAIL: parallel result differs from serial reference\n");
        return 1;
    }
    std::printf("serial   %8.2f ms\n", best_serial * 1e3);
    std::printf("parallel %8.2f ms\n", best_parallel * 1e3);
    std::printf("speedup  %8.2fx (nonzero keys: %d)\n", best_serial / best_parallel, serial.nonzero_count());
    return 0;
}

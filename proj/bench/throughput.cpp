// Serial reference vs OpenMP pipeline throughput at several resolutions.
// Usage: crowdtex_bench [frames] [window]
#include <cstdio>
#include <cstdlib>
#include <omp.h>

#include "crowdtex/cli.hpp"

int main(int argc, char** argv) {
    const int frames = argc > 1 ? std::atoi(argv[1]) : 96;
    const int window = argc > 2 ? std::atoi(argv[2]) : 24;
    if (frames < 1 || window < 4) {
        std::fprintf(stderr, "usage: %s [frames>=1] [window>=4]\n", argv[0]);
        return 2;
    }
    crowdtex::RunConfig config;
    config.pipeline.window = window;

    std::printf("threads=%d frames=%d window=%d\n", omp_get_max_threads(), frames, window);
    std::printf("%-10s %-9s %10s %12s %12s\n", "size", "policy", "fps", "mean_s", "median_s");
    const int sizes[][2] = {{320, 240}, {640, 480}, {1280, 720}};
    for (const auto& wh : sizes) {
        double serial_fps = 0.0;
        for (const auto policy : {crowdtex::ExecutionPolicy::Serial, crowdtex::ExecutionPolicy::Parallel}) {
            const auto r = crowdtex::cli::run_bench(config, wh[0], wh[1], frames, 24.0, policy);
            if (policy == crowdtex::ExecutionPolicy::Serial) serial_fps = r.fps;
            char size[24];
            std::snprintf(size, sizeof size, "%dx%d", wh[0], wh[1]);
            std::printf("%-10s %-9s %10.2f %12.6f %12.6f", size, r.policy.c_str(), r.fps, r.mean_seconds_per_frame,
                        r.median_seconds_per_frame);
            if (policy == crowdtex::ExecutionPolicy::Parallel && serial_fps > 0)
                std::printf("  speedup %.2fx", r.fps / serial_fps);
            std::printf("\n");
        }
    }
    return 0;
}

// Compares the serial reference paths against the OpenMP kernels: the
// corner-point grid search and the projection-verification trial loop.
#include <chrono>
#include <cstdio>

#include "rbc/bounds.hpp"
#include "rbc/parallel.hpp"
#include "rbc/prefme.hpp"

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main() {
    std::printf("threads available: %d\n\n", rbc::max_threads());
    std::printf("%-34s %10s %10s %8s\n", "kernel", "serial[s]", "openmp[s]", "speedup");

    {
        auto p = rbc::GaussianRbcParams::from_distance(0.74, 5.0, 1.0);
        auto t0 = Clock::now();
        auto serial = rbc::scheme1_rate(p, false, rbc::Exec::Serial);
        double ts = seconds_since(t0);
        t0 = Clock::now();
        auto parallel = rbc::scheme1_rate(p, false, rbc::Exec::Parallel);
        double tp = seconds_since(t0);
        std::printf("%-34s %10.3f %10.3f %7.2fx\n", "scheme1 corner grid search", ts,
                    tp, ts / tp);
        if (serial.rate != parallel.rate || !(serial.argmax == parallel.argmax))
            std::printf("  MISMATCH: serial and parallel results differ\n");
    }
    {
        const int trials = 300;
        auto t0 = Clock::now();
        auto serial = rbc::verify_theorem(rbc::Scheme::Scheme2B, trials, 1, rbc::kInf,
                                          rbc::kInf, rbc::Exec::Serial);
        double ts = seconds_since(t0);
        t0 = Clock::now();
        auto parallel = rbc::verify_theorem(rbc::Scheme::Scheme2B, trials, 1, rbc::kInf,
                                            rbc::kInf, rbc::Exec::Parallel);
        double tp = seconds_since(t0);
        std::printf("%-34s %10.3f %10.3f %7.2fx\n", "scheme2b projection verification",
                    ts, tp, ts / tp);
        if (serial.verdicts != parallel.verdicts)
            std::printf("  MISMATCH: serial and parallel verdicts differ\n");
    }
    return 0;
}

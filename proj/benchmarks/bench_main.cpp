#include <benchmark/benchmark.h>

// libbenchmark_main.a from the distro carries LTO bytecode from another
// compiler version, so the main is spelled out here.
BENCHMARK_MAIN();

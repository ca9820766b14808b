#include <benchmark/benchmark.h>

#include "lozi/geom.hpp"

using namespace lozi;

namespace {

void BM_QuadraticMultiply(benchmark::State& state) {
    const auto f = make_field(Rational(2929, 625));
    const Scalar x = Scalar::quadratic(Rational(10, 11), Rational(-3, 7), f);
    Scalar y = Scalar::quadratic(Rational(1, 3), Rational(1, 5), f);
    for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_QuadraticMultiply);

// Sign of p + q sqrt(delta) when the double filter cannot decide.
void BM_QuadraticSignNearZero(benchmark::State& state) {
    const auto f = make_field(Rational(2));
    const Scalar s = Scalar::quadratic(Rational(-665857, 470832), Rational(1), f);
    for (auto _ : state) benchmark::DoNotOptimize(sign(s));
}
BENCHMARK(BM_QuadraticSignNearZero);

void BM_Orientation(benchmark::State& state) {
    const Point a(Scalar(Rational(1, 3)), Scalar(Rational(2, 7)));
    const Point b(Scalar(Rational(5, 3)), Scalar(Rational(-1, 9)));
    const Point c(Scalar(Rational(4, 11)), Scalar(Rational(13, 17)));
    for (auto _ : state) benchmark::DoNotOptimize(orientation(a, b, c));
}
BENCHMARK(BM_Orientation);

}  // namespace

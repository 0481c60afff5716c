#include <benchmark/benchmark.h>

#include "cofkit/cofkit.hpp"
#ifdef COFKIT_BENCH_REPORT
#include "report.hpp"
#endif

using namespace cofkit;

namespace {

const MonoclinicParams kZn{1.0015, 0.0073, 1.0591, 0.9363};

void bm_eig_sym3(benchmark::State& st) {
    const Mat3 u = kZn.u1();
    for (auto _ : st) benchmark::DoNotOptimize(eig_sym3(u));
}
BENCHMARK(bm_eig_sym3);

void bm_twofold_axes(benchmark::State& st) {
    const VariantSet vs = monoclinic_variants(kZn);
    AxisSearchOptions opt;
    opt.sphere_scan = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(twofold_axes(vs.at(1), vs.at(5), {}, opt));
}
BENCHMARK(bm_twofold_axes)->Arg(0)->Arg(1);

void bm_twin_solutions(benchmark::State& st) {
    const Mat3 u = kZn.u1();
    const Vec3 e = normalized(Vec3{0, -1, 1});
    for (auto _ : st) benchmark::DoNotOptimize(twin_solutions(u, e));
}
BENCHMARK(bm_twin_solutions);

void bm_check_cc(benchmark::State& st) {
    const Mat3 u = kZn.u1();
    const TwinPair tp = twin_solutions(u, normalized(Vec3{0, -1, 1}));
    for (auto _ : st) benchmark::DoNotOptimize(check_cc(u, tp.type_ii));
}
BENCHMARK(bm_check_cc);

void bm_star_classify(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(star_classify(kZn, 1, 5, TwinKind::TypeII, {}, true));
}
BENCHMARK(bm_star_classify);

void bm_project(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(project_to_manifold(kZn, ManifoldTarget::Star_TypeII));
}
BENCHMARK(bm_project)->Unit(benchmark::kMillisecond);

#ifdef COFKIT_BENCH_REPORT
void bm_analyze(benchmark::State& st) {
    const InputSpec in = preset_input(preset("ZnAuCu"));
    for (auto _ : st) benchmark::DoNotOptimize(report::analyze(in, "preset:ZnAuCu", Tolerances{}));
}
BENCHMARK(bm_analyze)->Unit(benchmark::kMillisecond);
#endif

}  // namespace

BENCHMARK_MAIN();

// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include <filesystem>

#include "opal/antichain.hpp"
#include "opal/congruence.hpp"
#include "opal/io.hpp"

using namespace opal;

namespace {

std::shared_ptr<Opa> load(const char* name) {
  return load_opa(std::filesystem::path(OPAL_DATA_DIR) / name).automaton;
}

// Cat^k of `a` with subsumption against `b`, the input to the step being measured.
CatVector prefix(const Opa& a, const WordOrder& order, int k, bool prune) {
  CatVector x = CatVector::base(a, order);
  for (int i = 0; i < k; ++i) x = cat_step(a, x, order, {prune}).next;
  return x;
}

template <bool Parallel>
void cat_step_arith(benchmark::State& state) {
  auto a = load("arith.opa");
  WordOrder order(OrderKind::Summary, a.get());
  auto x = prefix(*a, order, static_cast<int>(state.range(0)), true);
  for (auto _ : state) {
    auto r = Parallel ? cat_step(*a, x, order) : reference::cat_step_serial(*a, x, order);
    benchmark::DoNotOptimize(r.stats.inserted);
  }
  state.counters["words"] = static_cast<double>(x.total_words());
}

template <bool Parallel>
void cat_step_even_unpruned(benchmark::State& state) {
  auto b = load("even.opa");
  WordOrder order(OrderKind::Profile, b.get());
  auto x = prefix(*b, order, static_cast<int>(state.range(0)), false);
  for (auto _ : state) {
    auto r = Parallel ? cat_step(*b, x, order, {false}) : reference::cat_step_serial(*b, x, order, {false});
    benchmark::DoNotOptimize(r.stats.inserted);
  }
  state.counters["words"] = static_cast<double>(x.total_words());
}

void classes(benchmark::State& state, const char* name, bool parallel) {
  auto a = load(name);
  auto len = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto r = parallel ? enumerate_classes(*a, len) : reference::enumerate_classes_serial(*a, len);
    benchmark::DoNotOptimize(r.classes.size());
  }
}

}  // namespace

BENCHMARK(cat_step_arith<true>)->Name("cat_step/arith/parallel")->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(cat_step_arith<false>)->Name("cat_step/arith/serial")->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(cat_step_even_unpruned<true>)->Name("cat_step/even_unpruned/parallel")->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(cat_step_even_unpruned<false>)->Name("cat_step/even_unpruned/serial")->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(classes, matched, "matched.opa", true)->Name("classes/matched/parallel")->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(classes, matched, "matched.opa", false)->Name("classes/matched/serial")->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(classes, arith, "arith.opa", true)->Name("classes/arith/parallel")->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(classes, arith, "arith.opa", false)->Name("classes/arith/serial")->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

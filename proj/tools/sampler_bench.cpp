// Benchmark of the OpenMP sampling kernel against the serial reference on the
// urn model. Both kernels must agree bit-for-bit; the serial one is the
// baseline kept for testing.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "turtleglyph/textio.hpp"
#include "turtleglyph/verify.hpp"

namespace tg = turtleglyph;

namespace {

const char* kUrnSource =
    "model \"Urn: 2 green and 3 red\"\n"
    "G: 2/5\n"
    "  G: 1/4\n"
    "  R: 3/4\n"
    "    G: 1/3\n"
    "    R: 2/3\n"
    "      G: 1/2\n"
    "      R: 1/2\n"
    "        G: 1\n"
    "R: 3/5\n"
    "  G: 1/2\n"
    "    G: 1/3\n"
    "    R: 2/3\n"
    "      G: 1/2\n"
    "      R: 1/2\n"
    "        G: 1\n"
    "  R: 1/2\n"
    "    G: 2/3\n"
    "      G: 1/2\n"
    "      R: 1/2\n"
    "        G: 1\n"
    "    R: 1/3\n"
    "      G: 1\n"
    "        G: 1\n";

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t n = 5'000'000;
  std::uint64_t seed = 42;
  if (argc > 1) n = std::strtoull(argv[1], nullptr, 10);
  if (argc > 2) seed = std::strtoull(argv[2], nullptr, 10);

  tg::EventTree tree = tg::parse_model(kUrnSource);
  tg::Query query = tg::parse_query("P(*/*/G)");

#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: 1 (built without OpenMP)\n";
#endif
  std::cout << "samples: " << n << ", seed: " << seed << "\n";

  auto t0 = std::chrono::steady_clock::now();
  tg::SampleEstimate serial = tg::estimate_query_serial(tree, query, n, seed);
  double serial_s = seconds_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  tg::SampleEstimate parallel = tg::estimate_query(tree, query, n, seed);
  double parallel_s = seconds_since(t1);

  std::cout << "serial:   " << serial.hits << "/" << serial.n << " = " << serial.estimate
            << "  (" << serial_s << " s, " << static_cast<double>(n) / serial_s / 1e6
            << " Msamples/s)\n";
  std::cout << "parallel: " << parallel.hits << "/" << parallel.n << " = "
            << parallel.estimate << "  (" << parallel_s << " s, "
            << static_cast<double>(n) / parallel_s / 1e6 << " Msamples/s)\n";
  if (parallel_s > 0.0 && serial_s > 0.0)
    std::cout << "speedup: " << serial_s / parallel_s << "x\n";

  if (serial.hits != parallel.hits || serial.n != parallel.n) {
    std::cout << "MISMATCH between serial and parallel kernels\n";
    return 1;
  }
  std::cout << "kernels agree bit-for-bit\n";
  return 0;
}

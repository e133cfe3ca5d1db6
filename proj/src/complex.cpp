#include "qhh/complex.hpp"

#include <sstream>

namespace qhh {

namespace {
std::atomic<std::size_t> g_dd_checks{0};

int common_edge(const PoincareTable& a, const PoincareTable& b) {
  const int ea = a.complete_through.value_or(INT_MAX);
  const int eb = b.complete_through.value_or(INT_MAX);
  return std::min(ea, eb);
}
}  // namespace

std::string PoincareTable::format_text() const {
  std::ostringstream os;
  if (truncation) os << "truncation " << *truncation << ", complete through " << complete_through.value_or(*truncation - 1) << "\n";
  std::map<int, std::map<int, std::size_t>> by_n;
  for (const auto& [k, d] : dims) by_n[k.first][k.second] = d;
  if (by_n.empty()) os << "(zero)\n";
  for (const auto& [n, row] : by_n) {
    std::size_t sum = 0;
    for (const auto& [j, d] : row) sum += d;
    os << "n=" << n << "  total " << sum << " :";
    for (const auto& [j, d] : row) os << "  j=" << j << ":" << d;
    os << "\n";
  }
  return os.str();
}

bool agree_through_edge(const PoincareTable& a, const PoincareTable& b) {
  const int edge = common_edge(a, b);
  return a.through(edge).dims == b.through(edge).dims;
}

bool pointwise_le(const PoincareTable& a, const PoincareTable& b) {
  const int edge = common_edge(a, b);
  for (const auto& [k, d] : a.dims)
    if (k.first <= edge && d > b.at(k.first, k.second)) return false;
  return true;
}

std::size_t dd_checks_passed() { return g_dd_checks.load(); }
void note_dd_check() { ++g_dd_checks; }

unsigned worker_count() {
  if (const char* env = std::getenv("QHH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return unsigned(std::min<long>(v, 256));
  }
  return 1;
}

void run_parallel(const std::vector<std::function<void()>>& tasks) {
  const unsigned workers = std::min<std::size_t>(worker_count(), tasks.size());
  if (workers <= 1) {
    for (const auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        try {
          tasks[i]();
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qhh

#include "ymb/parallel.hpp"

namespace ymb {

namespace {
int g_workers = 1;
}

int worker_count() { return g_workers; }

void set_worker_count(int n) { g_workers = n < 1 ? 1 : n; }

} // namespace ymb

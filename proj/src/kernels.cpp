// Copyright 2026-present the drivestyle project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "drivestyle/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace drivestyle::kernels {

namespace generic {

double gaussian_kernel_sum(std::span<const double> points, double x0, double inv_bandwidth) {
  double acc = 0.0;
  for (const double p : points) {
    const double z = (p - x0) * inv_bandwidth;
    acc += std::exp(-0.5 * z * z);
  }
  return acc;
}

}  // namespace generic

namespace {

using KernelSumFn = double (*)(std::span<const double>, double, double);

struct Dispatch {
  std::atomic<KernelSumFn> fn{&generic::gaussian_kernel_sum};
  std::atomic<Backend> backend{Backend::Generic};
};

KernelSumFn backend_fn(Backend backend) {
#if defined(DRIVESTYLE_HAVE_AVX2)
  if (backend == Backend::Avx2) return &avx2::gaussian_kernel_sum;
#endif
  (void)backend;
  return &generic::gaussian_kernel_sum;
}

Dispatch& dispatch() {
  static Dispatch d;
  static const bool initialized = [] {
    Backend pick = Backend::Generic;
    if (backend_available(Backend::Avx2)) pick = Backend::Avx2;
    if (const char* env = std::getenv("DRIVESTYLE_SIMD")) {
      const std::string_view want(env);
      if (want == "generic") {
        pick = Backend::Generic;
      } else if (want == "avx2" && backend_available(Backend::Avx2)) {
        pick = Backend::Avx2;
      }
    }
    d.backend.store(pick);
    d.fn.store(backend_fn(pick));
    return true;
  }();
  (void)initialized;
  return d;
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Generic: return "generic";
    case Backend::Avx2: return "avx2";
  }
  return "generic";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::Generic:
      return true;
    case Backend::Avx2:
#if defined(DRIVESTYLE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return dispatch().backend.load(); }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw std::invalid_argument("kernel backend '" + std::string(backend_name(backend)) +
                                "' is not available on this machine");
  }
  dispatch().backend.store(backend);
  dispatch().fn.store(backend_fn(backend));
}

double gaussian_kernel_sum(std::span<const double> points, double x0, double inv_bandwidth) {
  return dispatch().fn.load(std::memory_order_relaxed)(points, x0, inv_bandwidth);
}

}  // namespace drivestyle::kernels

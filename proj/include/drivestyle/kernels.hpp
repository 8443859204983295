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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace drivestyle::kernels {

enum class Backend { Generic, Avx2 };

std::string_view backend_name(Backend backend);
bool backend_available(Backend backend);

// Active backend is picked at startup: the widest available instruction set,
// overridable with DRIVESTYLE_SIMD=generic|avx2 in the environment.
Backend active_backend();
void set_backend(Backend backend);  // throws std::invalid_argument if unavailable

/// Sum of exp(-0.5 * ((p - x0) * inv_bandwidth)^2) over all points, using the
/// active backend. All inputs must be finite.
double gaussian_kernel_sum(std::span<const double> points, double x0, double inv_bandwidth);

namespace generic {
double gaussian_kernel_sum(std::span<const double> points, double x0, double inv_bandwidth);
}

#if defined(DRIVESTYLE_HAVE_AVX2)
namespace avx2 {
double gaussian_kernel_sum(std::span<const double> points, double x0, double inv_bandwidth);
}
#endif

}  // namespace drivestyle::kernels

// Copyright 2026 The repscope Authors.
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

#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "repscope/common/error.hpp"
#include "repscope/simd/kernels.hpp"

namespace repscope::simd {

#if defined(REPSCOPE_HAVE_AVX2)
const KernelTable* avx2_table_impl() noexcept;
#endif

namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* resolve_from_env() {
  const char* env = std::getenv("REPSCOPE_SIMD");
  const std::string_view want = env ? env : "auto";
  if (want == "scalar") return &scalar_table();
  if (want == "avx2") {
    if (!available(Backend::avx2)) throw InvalidArgument("REPSCOPE_SIMD=avx2 but AVX2/FMA is unavailable");
    return avx2_table();
  }
  if (want != "auto" && !want.empty())
    throw InvalidArgument("REPSCOPE_SIMD must be scalar, avx2 or auto, got '" + std::string(want) + "'");
  return available(Backend::avx2) ? avx2_table() : &scalar_table();
}

}  // namespace

const char* to_string(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_table() noexcept {
#if defined(REPSCOPE_HAVE_AVX2)
  return avx2_table_impl();
#else
  return nullptr;
#endif
}

bool cpu_has_avx2_fma() noexcept {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool available(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2: return avx2_table() != nullptr && cpu_has_avx2_fma();
  }
  return false;
}

const KernelTable& table_for(Backend b) {
  if (!available(b)) throw InvalidArgument(std::string("SIMD backend unavailable: ") + to_string(b));
  return b == Backend::avx2 ? *avx2_table() : scalar_table();
}

const KernelTable& active() noexcept {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t) return *t;
  const KernelTable* resolved;
  try {
    resolved = resolve_from_env();
  } catch (const Error&) {
    resolved = &scalar_table();
  }
  const KernelTable* expected = nullptr;
  g_active.compare_exchange_strong(expected, resolved, std::memory_order_acq_rel);
  return *g_active.load(std::memory_order_acquire);
}

void select(Backend b) { g_active.store(&table_for(b), std::memory_order_release); }

}  // namespace repscope::simd

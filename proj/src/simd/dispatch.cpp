#include "sddf/simd/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace sddf::simd {

#if defined(SDDF_HAVE_AVX2_TU)
const KernelTable* avx2_table_impl(); // defined in kernels_avx2.cpp
#endif

namespace {

bool cpu_has_avx2() {
#if defined(SDDF_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct State {
    const KernelTable* table = nullptr;
    std::string name;
};

State make_default_state() {
    State s;
    const char* env = std::getenv("SDDF_SIMD");
    std::string want = env ? env : "auto";
    if (want == "scalar") {
        s.table = &scalar_table();
        s.name = "scalar";
        return s;
    }
    if ((want == "auto" || want == "avx2") && avx2_available()) {
        s.table = avx2_table();
        s.name = "avx2";
        return s;
    }
    s.table = &scalar_table();
    s.name = "scalar";
    return s;
}

State& state() {
    static State s = make_default_state();
    return s;
}

} // namespace

bool avx2_available() {
#if defined(SDDF_HAVE_AVX2_TU)
    static const bool ok = cpu_has_avx2();
    return ok;
#else
    return false;
#endif
}

const KernelTable* avx2_table() {
#if defined(SDDF_HAVE_AVX2_TU)
    return avx2_available() ? avx2_table_impl() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() { return *state().table; }

const std::string& active_name() { return state().name; }

void force_variant(const std::string& name) {
    if (name == "scalar") {
        state() = {&scalar_table(), "scalar"};
        return;
    }
    if (name == "avx2") {
        if (!avx2_available()) throw std::invalid_argument("avx2 kernels unavailable on this CPU");
        state() = {avx2_table(), "avx2"};
        return;
    }
    if (name == "auto") {
        state() = make_default_state();
        return;
    }
    throw std::invalid_argument("unknown kernel variant: " + name);
}

} // namespace sddf::simd

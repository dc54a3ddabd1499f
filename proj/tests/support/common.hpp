#pragma once

#include <cstdint>

#include "ajm/kernel_table.hpp"
#include "ajm/mc.hpp"
#include "ajm/vec3.hpp"

namespace ajm_test {

/// Shared kernel tables so the suite builds each configuration once.
inline const ajm::KernelTable2& table07() {
    static const ajm::KernelTable2 t =
        ajm::build_kernel_table2(ajm::DetectorConfig::auto_for(0.7, 0.7));
    return t;
}

inline const ajm::KernelTable2& table_asym() {
    static const ajm::KernelTable2 t =
        ajm::build_kernel_table2(ajm::DetectorConfig::auto_for(0.1, 3.0));
    return t;
}

/// Deterministic test RNG independent of library std::random engines:
/// a splitmix64 output chain mapped through the shared normal quantile.
struct TestRng {
    std::uint64_t state;

    explicit TestRng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        state = ajm::splitmix64(state);
        return state;
    }

    double uniform() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() { return ajm::normal_quantile(uniform()); }

    ajm::Vec3 normal_vec3() {
        double x = normal(), y = normal(), z = normal();
        return {x, y, z};
    }
};

}  // namespace ajm_test
